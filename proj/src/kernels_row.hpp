#pragma once

// Per-row bodies shared by the serial and OpenMP backends.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sphdesign/compensated_sum.hpp"
#include "sphdesign/geometry.hpp"
#include "sphdesign/kernels.hpp"

namespace sphdesign::detail {

inline double pair_dot(const PointSet& x, std::size_t i, std::size_t j) {
    return i == j ? 1.0 : x.dot(i, j);
}

// Stored coordinates sit up to ~1e-16 off the unit sphere, and K' grows like
// t^2 d_t, so cosines are taken between the normalized vectors.
inline std::vector<long double> inverse_norms_extended(const PointSet& x) {
    std::vector<long double> inv(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        long double s = 0.0L;
        for (double c : x.point(i)) s += static_cast<long double>(c) * static_cast<long double>(c);
        inv[i] = 1.0L / std::sqrt(s);
    }
    return inv;
}

inline long double pair_cosine_extended(const PointSet& x, std::span<const long double> inv_norm,
                                        std::size_t i, std::size_t j) {
    if (i == j) return 1.0L;
    const auto pi = x.point(i);
    const auto pj = x.point(j);
    long double s = 0.0L;
    for (std::size_t c = 0; c < pi.size(); ++c) {
        s += static_cast<long double>(pi[c]) * static_cast<long double>(pj[c]);
    }
    return s * inv_norm[i] * inv_norm[j];
}

inline double row_sum(const PointSet& x, const ZonalKernel& k, std::span<const long double> inv_norm,
                      std::size_t i) {
    BasicCompensatedSum<long double> acc;
    for (std::size_t j = 0; j < x.size(); ++j) {
        acc += k.value_extended(pair_cosine_extended(x, inv_norm, i, j));
    }
    return static_cast<double>(acc.value());
}

inline void kernel_row(const PointSet& x, const ZonalKernel& k, std::size_t i,
                       std::span<double> row) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        row[j] = k.value(pair_dot(x, i, j));
    }
}

inline void kernel_and_deriv_row(const PointSet& x, const ZonalKernel& k, std::size_t i,
                                 std::span<double> value, std::span<double> deriv) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto [v, dv] = k.value_and_deriv(pair_dot(x, i, j));
        value[j] = v;
        deriv[j] = dv;
    }
}

inline void deriv_weighted_row(const PointSet& x, const ZonalKernel& k, std::size_t i,
                               std::span<double> out) {
    const std::size_t dim = x.stride();
    // d+1 <= a handful in practice; a small fixed buffer avoids allocation.
    constexpr std::size_t kMaxInline = 16;
    CompensatedSum inline_acc[kMaxInline];
    std::vector<CompensatedSum> heap_acc;
    CompensatedSum* acc = inline_acc;
    if (dim > kMaxInline) {
        heap_acc.resize(dim);
        acc = heap_acc.data();
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j == i) continue;
        const double w = k.value_and_deriv(x.dot(i, j)).second;
        const auto pj = x.point(j);
        for (std::size_t c = 0; c < dim; ++c) {
            acc[c] += w * pj[c];
        }
    }
    for (std::size_t c = 0; c < dim; ++c) {
        out[c] = acc[c].value();
    }
}

inline double max_dot(const PointSet& x, std::span<const double> candidate) {
    double best = -2.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        best = std::max(best, dot(candidate, x.point(i)));
    }
    return best;
}

}  // namespace sphdesign::detail
