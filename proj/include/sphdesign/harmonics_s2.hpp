#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sphdesign/geometry.hpp"

namespace sphdesign {

/// Explicit real orthonormal spherical harmonics on S^2, degrees 0..t.
///
/// Values are ordered by degree l, and within a degree as
///   m = 0, then cos(m phi) terms for m = 1..l, then sin(m phi) terms for m = 1..l,
/// for (t+1)^2 entries in total. Associated Legendre functions are fully
/// normalized and carry no Condon-Shortley phase. Orthonormality is with
/// respect to surface measure, so the degree-0 entry is 1/sqrt(4 pi).
///
/// This is an independent route to every quantity the kernel path computes;
/// it exists to cross-check that path on S^2.
class HarmonicBasisS2 {
public:
    explicit HarmonicBasisS2(int t);

    int degree() const noexcept { return t_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>((t_ + 1) * (t_ + 1)); }

    /// Index of Y_{l,m} within a degree-l block start: see class comment.
    static std::size_t block_start(int l) { return static_cast<std::size_t>(l * l); }

    /// Evaluates all harmonics at unit vector p into `out` (size() entries).
    void evaluate(std::span<const double> p, std::span<double> out) const;

private:
    int t_;
};

/// Y_t: (t+1)^2 x N, row 0 the constant 1/sqrt(4 pi), remaining rows Y_t^0.
Eigen::MatrixXd y_matrix(const PointSet& x, int t);

/// r(X) = Y_t^0 e, the d_t - 1 Weyl sums of degrees 1..t.
Eigen::VectorXd weyl_sums_explicit(const PointSet& x, int t);

}  // namespace sphdesign
