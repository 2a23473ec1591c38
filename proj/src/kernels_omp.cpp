#include <omp.h>

#include <stdexcept>

#include "kernels_row.hpp"
#include "sphdesign/kernels.hpp"

namespace sphdesign::omp {

namespace {

// Loop index type for OpenMP; rows are independent, so a static schedule is
// enough and keeps the per-row arithmetic identical to the serial backend.
using Index = std::ptrdiff_t;

Index as_index(std::size_t n) { return static_cast<Index>(n); }

}  // namespace

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
    static const int default_threads = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : default_threads);
}

void row_sums(const PointSet& x, const ZonalKernel& k, std::span<double> out) {
    if (out.size() != x.size()) throw std::invalid_argument("row_sums: output must hold N entries");
    const Index n = as_index(x.size());
    const auto inv_norm = detail::inverse_norms_extended(x);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = detail::row_sum(x, k, inv_norm, static_cast<std::size_t>(i));
    }
}

void kernel_matrix(const PointSet& x, const ZonalKernel& k, std::span<double> out) {
    const std::size_t n = x.size();
    if (out.size() != n * n) throw std::invalid_argument("output must hold N*N entries");
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < as_index(n); ++i) {
        const auto row = static_cast<std::size_t>(i);
        detail::kernel_row(x, k, row, out.subspan(row * n, n));
    }
}

void kernel_and_deriv_matrix(const PointSet& x, const ZonalKernel& k, std::span<double> value,
                             std::span<double> deriv) {
    const std::size_t n = x.size();
    if (value.size() != n * n || deriv.size() != n * n) {
        throw std::invalid_argument("output must hold N*N entries");
    }
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < as_index(n); ++i) {
        const auto row = static_cast<std::size_t>(i);
        detail::kernel_and_deriv_row(x, k, row, value.subspan(row * n, n), deriv.subspan(row * n, n));
    }
}

void deriv_weighted_sums(const PointSet& x, const ZonalKernel& k, std::span<double> out) {
    const std::size_t dim = x.stride();
    if (out.size() != x.size() * dim) throw std::invalid_argument("output must hold N*(d+1) entries");
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < as_index(x.size()); ++i) {
        const auto row = static_cast<std::size_t>(i);
        detail::deriv_weighted_row(x, k, row, out.subspan(row * dim, dim));
    }
}

void max_dot_scan(const PointSet& x, std::span<const double> candidates, std::span<double> out) {
    const std::size_t dim = x.stride();
    if (candidates.size() != out.size() * dim) throw std::invalid_argument("candidate shape mismatch");
#pragma omp parallel for schedule(static)
    for (Index c = 0; c < as_index(out.size()); ++c) {
        const auto idx = static_cast<std::size_t>(c);
        out[idx] = detail::max_dot(x, candidates.subspan(idx * dim, dim));
    }
}

}  // namespace sphdesign::omp
