#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sphdesign {

/// Dimension parameter of the sphere S^d, embedded in R^{d+1}.
class SphereDim {
public:
    explicit SphereDim(int d);

    int value() const noexcept { return d_; }
    /// Ambient dimension d + 1.
    int ambient() const noexcept { return d_ + 1; }

    friend bool operator==(SphereDim, SphereDim) = default;

private:
    int d_;
};

/// Checked binomial coefficient; throws std::overflow_error past int64.
std::int64_t binomial(std::int64_t n, std::int64_t k);

/// Dimension M(d, l) of degree-l spherical harmonics on S^d.
std::int64_t harmonic_dim(SphereDim d, int degree);

/// Dimension of P_t(S^d), the polynomials of degree <= t restricted to S^d.
std::int64_t poly_space_dim(SphereDim d, int t);

/// Delsarte-Goethals-Seidel lower bound on the size of a t-design on S^d.
std::int64_t dgs_lower_bound(SphereDim d, int t);

/// Surface area of the unit sphere S^d.
double sphere_area(SphereDim d);

/// Clamp a dot product of unit vectors into [-1, 1]. Values further than
/// kClampSlack outside that interval are rejected.
double clamp_unit_dot(double x);

inline constexpr double kClampSlack = 4.0 * 2.220446049250313e-16;

/// Gegenbauer polynomials with parameter (d-1)/2, scaled so that P_l(1) = 1.
///
/// These are the zonal kernels of the addition theorem on S^d. The recurrence
/// is written directly for the normalized family,
///
///     P_{l+1}(x) = x P_l(x) + b_l (x P_l(x) - P_{l-1}(x)),  b_l = l / (l + d - 1),
///
/// so no unnormalized value is ever formed, and P_l(1) = 1, P_l(-1) = (-1)^l
/// hold exactly in floating point.
class GegenbauerEvaluator {
public:
    GegenbauerEvaluator(SphereDim d, int max_degree);

    SphereDim dim() const noexcept { return d_; }
    int max_degree() const noexcept { return max_degree_; }

    double eval(int degree, double x) const;
    double deriv(int degree, double x) const;

    /// Fills values[l] = P_l(x) and derivs[l] = P_l'(x) for l = 0..max_degree.
    /// Each output must have max_degree + 1 entries, or be empty to skip it.
    void eval_all(double x, std::span<double> values, std::span<double> derivs) const;

    /// Recurrence coefficients b_l, indexed by l.
    const std::vector<double>& b() const noexcept { return b_; }

private:
    void check_degree(int degree) const;

    SphereDim d_;
    int max_degree_;
    std::vector<double> b_;
};

}  // namespace sphdesign
