#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sphdesign/geometry.hpp"
#include "sphdesign/special_functions.hpp"

namespace sphdesign {

/// A zonal kernel K(x) = sum_l c_l P_l(x) over the normalized Gegenbauer
/// family of S^d. Value and derivative come out of a single recurrence pass.
class ZonalKernel {
public:
    ZonalKernel(SphereDim d, std::vector<double> coeffs);

    /// Addition-theorem kernel sum_{l=first..t} M(d,l) P_l(x). With first = 0
    /// this is omega_d times the reproducing kernel of P_t; with first = 1 the
    /// constant term is dropped.
    static ZonalKernel addition(SphereDim d, int t, int first_degree = 0);

    SphereDim dim() const noexcept { return d_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    /// Argument is clamped to [-1, 1] without complaint; callers feed dot
    /// products of stored unit vectors.
    double value(double x) const noexcept;
    std::pair<double, double> value_and_deriv(double x) const noexcept;

    /// value() carried out in long double. Row sums use this: near a design
    /// A_{N,t} is a sum of O(d_t) terms cancelling to ~0, and double rounding
    /// would otherwise put a floor of ~1e-15 under every computed A.
    long double value_extended(long double x) const noexcept;

private:
    SphereDim d_;
    std::vector<double> coeffs_;
    std::vector<double> b_;
    std::vector<long double> b_ext_;
};

// Pairwise kernel reductions. Every output row i is produced by the same
// fixed-order loop over j in both backends, so serial and OpenMP results are
// bit-identical regardless of thread count.

namespace serial {

/// out[i] = sum_j K(x_i . x_j), j ascending. Cosines are taken between the
/// renormalized vectors; dot products, kernel values and the compensated sum
/// are all in long double.
void row_sums(const PointSet& x, const ZonalKernel& k, std::span<double> out);
/// Dense row-major N x N matrix of K(x_i . x_j).
void kernel_matrix(const PointSet& x, const ZonalKernel& k, std::span<double> out);
/// Dense N x N matrices of K and K' at x_i . x_j.
void kernel_and_deriv_matrix(const PointSet& x, const ZonalKernel& k, std::span<double> value,
                             std::span<double> deriv);
/// Row i of `out` (d+1 wide) = sum_{j != i} K'(x_i . x_j) x_j.
void deriv_weighted_sums(const PointSet& x, const ZonalKernel& k, std::span<double> out);
/// out[c] = max_i candidate_c . x_i for row-major candidates.
void max_dot_scan(const PointSet& x, std::span<const double> candidates, std::span<double> out);

}  // namespace serial

namespace omp {

void row_sums(const PointSet& x, const ZonalKernel& k, std::span<double> out);
void kernel_matrix(const PointSet& x, const ZonalKernel& k, std::span<double> out);
void kernel_and_deriv_matrix(const PointSet& x, const ZonalKernel& k, std::span<double> value,
                             std::span<double> deriv);
void deriv_weighted_sums(const PointSet& x, const ZonalKernel& k, std::span<double> out);
void max_dot_scan(const PointSet& x, std::span<const double> candidates, std::span<double> out);

int max_threads();
/// n <= 0 restores the runtime default.
void set_threads(int n);

}  // namespace omp

/// Compensated total of row sums, accumulated in row order.
double ordered_total(std::span<const double> rows);

}  // namespace sphdesign
