#include "sphdesign/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sphdesign {

SphereDim::SphereDim(int d) : d_(d) {
    if (d < 1) {
        throw std::invalid_argument("sphere dimension must be >= 1, got " + std::to_string(d));
    }
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("integer overflow in dimension computation");
    }
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("integer overflow in dimension computation");
    }
    return r;
}

void require_degree(int degree) {
    if (degree < 0) {
        throw std::invalid_argument("degree must be >= 0, got " + std::to_string(degree));
    }
}

}  // namespace

std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    // r * (n - k + i) / i is exact at every step; the 128-bit product keeps the
    // intermediate from overflowing before the division.
    unsigned __int128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
        if (r > static_cast<unsigned __int128>(INT64_MAX)) {
            throw std::overflow_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                      ") overflows int64");
        }
    }
    return static_cast<std::int64_t>(r);
}

std::int64_t harmonic_dim(SphereDim d, int degree) {
    require_degree(degree);
    // Homogeneous harmonics of degree l in d+1 variables:
    // binom(l+d, d) - binom(l+d-2, d).
    const std::int64_t dd = d.value();
    const std::int64_t l = degree;
    const std::int64_t hi = binomial(checked_add(l, dd), dd);
    const std::int64_t lo = l >= 2 ? binomial(l + dd - 2, dd) : 0;
    return hi - lo;
}

std::int64_t poly_space_dim(SphereDim d, int t) {
    require_degree(t);
    return harmonic_dim(SphereDim(d.value() + 1), t);
}

std::int64_t dgs_lower_bound(SphereDim d, int t) {
    if (t < 1) {
        throw std::invalid_argument("DGS bound needs t >= 1, got " + std::to_string(t));
    }
    const std::int64_t dd = d.value();
    const std::int64_t s = t / 2;
    if (t % 2 == 1) {
        return checked_mul(2, binomial(dd + s, dd));
    }
    return checked_add(binomial(dd + s, dd), binomial(dd + s - 1, dd));
}

double sphere_area(SphereDim d) {
    const double half = 0.5 * static_cast<double>(d.ambient());
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double clamp_unit_dot(double x) {
    if (!(std::abs(x) <= 1.0 + kClampSlack)) {
        throw std::domain_error("argument " + std::to_string(x) + " outside [-1, 1]");
    }
    return std::clamp(x, -1.0, 1.0);
}

GegenbauerEvaluator::GegenbauerEvaluator(SphereDim d, int max_degree)
    : d_(d), max_degree_(max_degree), b_(static_cast<std::size_t>(std::max(max_degree, 1)), 0.0) {
    require_degree(max_degree);
    for (int l = 1; l < max_degree; ++l) {
        b_[static_cast<std::size_t>(l)] =
            static_cast<double>(l) / static_cast<double>(l + d.value() - 1);
    }
}

void GegenbauerEvaluator::check_degree(int degree) const {
    if (degree < 0 || degree > max_degree_) {
        throw std::out_of_range("degree " + std::to_string(degree) + " outside [0, " +
                                std::to_string(max_degree_) + "]");
    }
}

double GegenbauerEvaluator::eval(int degree, double x) const {
    check_degree(degree);
    x = clamp_unit_dot(x);
    if (degree == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = x;
    for (int l = 1; l < degree; ++l) {
        const double xp = x * cur;
        const double next = xp + b_[static_cast<std::size_t>(l)] * (xp - prev);
        prev = cur;
        cur = next;
    }
    return cur;
}

double GegenbauerEvaluator::deriv(int degree, double x) const {
    check_degree(degree);
    x = clamp_unit_dot(x);
    if (degree == 0) {
        return 0.0;
    }
    double prev = 1.0, cur = x;
    double dprev = 0.0, dcur = 1.0;
    for (int l = 1; l < degree; ++l) {
        const double bl = b_[static_cast<std::size_t>(l)];
        const double xp = x * cur;
        const double dxp = cur + x * dcur;
        const double next = xp + bl * (xp - prev);
        const double dnext = dxp + bl * (dxp - dprev);
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    return dcur;
}

void GegenbauerEvaluator::eval_all(double x, std::span<double> values,
                                   std::span<double> derivs) const {
    x = clamp_unit_dot(x);
    const auto n = static_cast<std::size_t>(max_degree_) + 1;
    const bool want_v = !values.empty();
    const bool want_d = !derivs.empty();
    if ((want_v && values.size() != n) || (want_d && derivs.size() != n)) {
        throw std::invalid_argument("eval_all: output spans must hold max_degree + 1 values");
    }
    if (want_d) derivs[0] = 0.0;

    double prev = 1.0, cur = x;
    double dprev = 0.0, dcur = 1.0;
    if (want_v) values[0] = 1.0;
    if (n > 1) {
        if (want_v) values[1] = cur;
        if (want_d) derivs[1] = dcur;
    }
    for (std::size_t l = 1; l + 1 < n; ++l) {
        const double bl = b_[l];
        const double xp = x * cur;
        const double dxp = cur + x * dcur;
        const double next = xp + bl * (xp - prev);
        const double dnext = dxp + bl * (dxp - dprev);
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
        if (want_v) values[l + 1] = cur;
        if (want_d) derivs[l + 1] = dcur;
    }
}

}  // namespace sphdesign
