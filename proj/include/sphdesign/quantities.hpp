#pragma once

#include <cstddef>
#include <vector>

#include "sphdesign/geometry.hpp"

namespace sphdesign {

/// G_t = Y_t^T Y_t, assembled from the addition theorem:
/// G_ij = (1/omega_d) sum_{l<=t} M(d,l) P_l(x_i . x_j).
struct GramMatrix {
    SphereDim d{2};
    int t = 0;
    std::size_t n = 0;
    std::vector<double> entries;  // row-major n x n

    double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

GramMatrix gram(const PointSet& x, int t);

/// r(X)^T r(X), the squared norm of the Weyl sums of degrees 1..t.
double weyl_residual_sq(const PointSet& x, int t);

/// A_{N,t} = (omega_d / N^2) r^T r.
double a_quantity(const PointSet& x, int t);

/// C_t = E G_t e with E = [e, -I]: entry i is (G e)_0 - (G e)_{i+1}.
std::vector<double> c_vector(const PointSet& x, int t);

/// D_{N,t} = (omega_d^2 / N^2) C_t^T C_t.
double d_quantity(const PointSet& x, int t);

/// 4 (N - 1) M(d+1, t)^2, the a priori ceiling on D_{N,t}.
double d_upper_bound(std::size_t n, SphereDim d, int t);

struct DesignQuantities {
    double a_value = 0.0;
    double d_value = 0.0;
    double c_norm_inf = 0.0;
    double weyl_residual_sq = 0.0;
};

/// All of the above from one pass of pairwise kernel sums.
DesignQuantities design_quantities(const PointSet& x, int t);

}  // namespace sphdesign
