#include <stdexcept>

#include "kernels_row.hpp"
#include "sphdesign/kernels.hpp"

namespace sphdesign {

ZonalKernel::ZonalKernel(SphereDim d, std::vector<double> coeffs)
    : d_(d), coeffs_(std::move(coeffs)), b_(coeffs_.size(), 0.0), b_ext_(coeffs_.size(), 0.0L) {
    if (coeffs_.empty()) {
        throw std::invalid_argument("zonal kernel needs at least one coefficient");
    }
    for (std::size_t l = 1; l < b_.size(); ++l) {
        const std::size_t denom = l + static_cast<std::size_t>(d.value()) - 1;
        b_[l] = static_cast<double>(l) / static_cast<double>(denom);
        b_ext_[l] = static_cast<long double>(l) / static_cast<long double>(denom);
    }
}

ZonalKernel ZonalKernel::addition(SphereDim d, int t, int first_degree) {
    if (t < 0) {
        throw std::invalid_argument("kernel degree must be >= 0");
    }
    std::vector<double> c(static_cast<std::size_t>(t) + 1, 0.0);
    for (int l = std::max(first_degree, 0); l <= t; ++l) {
        c[static_cast<std::size_t>(l)] = static_cast<double>(harmonic_dim(d, l));
    }
    return ZonalKernel(d, std::move(c));
}

double ZonalKernel::value(double x) const noexcept {
    x = std::clamp(x, -1.0, 1.0);
    const std::size_t n = coeffs_.size();
    double sum = coeffs_[0];
    if (n == 1) return sum;
    double prev = 1.0, cur = x;
    sum += coeffs_[1] * cur;
    for (std::size_t l = 1; l + 1 < n; ++l) {
        const double xp = x * cur;
        const double next = xp + b_[l] * (xp - prev);
        prev = cur;
        cur = next;
        sum += coeffs_[l + 1] * cur;
    }
    return sum;
}

long double ZonalKernel::value_extended(long double x) const noexcept {
    x = std::clamp(x, -1.0L, 1.0L);
    const std::size_t n = coeffs_.size();
    long double sum = coeffs_[0];
    if (n == 1) return sum;
    long double prev = 1.0L, cur = x;
    sum += coeffs_[1] * cur;
    for (std::size_t l = 1; l + 1 < n; ++l) {
        const long double xp = x * cur;
        const long double next = xp + b_ext_[l] * (xp - prev);
        prev = cur;
        cur = next;
        sum += coeffs_[l + 1] * cur;
    }
    return sum;
}

std::pair<double, double> ZonalKernel::value_and_deriv(double x) const noexcept {
    x = std::clamp(x, -1.0, 1.0);
    const std::size_t n = coeffs_.size();
    double sum = coeffs_[0];
    double dsum = 0.0;
    if (n == 1) return {sum, dsum};
    double prev = 1.0, cur = x;
    double dprev = 0.0, dcur = 1.0;
    sum += coeffs_[1] * cur;
    dsum += coeffs_[1];
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
        sum += coeffs_[l + 1] * cur;
        dsum += coeffs_[l + 1] * dcur;
    }
    return {sum, dsum};
}

double ordered_total(std::span<const double> rows) {
    CompensatedSum acc;
    for (double r : rows) acc += r;
    return acc.value();
}

namespace {

void check_square(const PointSet& x, std::span<const double> out) {
    if (out.size() != x.size() * x.size()) {
        throw std::invalid_argument("output must hold N*N entries");
    }
}

}  // namespace

namespace serial {

void row_sums(const PointSet& x, const ZonalKernel& k, std::span<double> out) {
    if (out.size() != x.size()) throw std::invalid_argument("row_sums: output must hold N entries");
    const auto inv_norm = detail::inverse_norms_extended(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = detail::row_sum(x, k, inv_norm, i);
    }
}

void kernel_matrix(const PointSet& x, const ZonalKernel& k, std::span<double> out) {
    check_square(x, out);
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        detail::kernel_row(x, k, i, out.subspan(i * n, n));
    }
}

void kernel_and_deriv_matrix(const PointSet& x, const ZonalKernel& k, std::span<double> value,
                             std::span<double> deriv) {
    check_square(x, value);
    check_square(x, deriv);
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        detail::kernel_and_deriv_row(x, k, i, value.subspan(i * n, n), deriv.subspan(i * n, n));
    }
}

void deriv_weighted_sums(const PointSet& x, const ZonalKernel& k, std::span<double> out) {
    const std::size_t dim = x.stride();
    if (out.size() != x.size() * dim) throw std::invalid_argument("output must hold N*(d+1) entries");
    for (std::size_t i = 0; i < x.size(); ++i) {
        detail::deriv_weighted_row(x, k, i, out.subspan(i * dim, dim));
    }
}

void max_dot_scan(const PointSet& x, std::span<const double> candidates, std::span<double> out) {
    const std::size_t dim = x.stride();
    if (candidates.size() != out.size() * dim) throw std::invalid_argument("candidate shape mismatch");
    for (std::size_t c = 0; c < out.size(); ++c) {
        out[c] = detail::max_dot(x, candidates.subspan(c * dim, dim));
    }
}

}  // namespace serial
}  // namespace sphdesign
