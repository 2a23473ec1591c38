#include "sphdesign/quantities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sphdesign/compensated_sum.hpp"
#include "sphdesign/kernels.hpp"

namespace sphdesign {

namespace {

void require_t(int t, int min_t) {
    if (t < min_t) {
        throw std::invalid_argument("degree t must be >= " + std::to_string(min_t) + ", got " +
                                    std::to_string(t));
    }
}

void require_pair(const PointSet& x) {
    if (x.size() < 2) throw std::invalid_argument("C_t and D_{N,t} need N >= 2");
}

// Row sums of the kernel without its constant term: s_i = sum_j sum_{l>=1}
// M(d,l) P_l(x_i . x_j). The constant part contributes N to every row and
// cancels from both r^T r and C_t, so it is never added in.
std::vector<double> nonconstant_row_sums(const PointSet& x, int t) {
    std::vector<double> rows(x.size());
    omp::row_sums(x, ZonalKernel::addition(x.dim(), t, 1), rows);
    return rows;
}

double c_sq_norm_from_rows(const std::vector<double>& rows, double& inf_norm, double omega) {
    CompensatedSum acc;
    inf_norm = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double diff = rows[0] - rows[i];
        acc += diff * diff;
        inf_norm = std::max(inf_norm, std::abs(diff) / omega);
    }
    return acc.value();
}

}  // namespace

GramMatrix gram(const PointSet& x, int t) {
    require_t(t, 0);
    GramMatrix g;
    g.d = x.dim();
    g.t = t;
    g.n = x.size();
    g.entries.resize(g.n * g.n);
    omp::kernel_matrix(x, ZonalKernel::addition(x.dim(), t, 0), g.entries);
    const double inv_omega = 1.0 / sphere_area(x.dim());
    for (double& e : g.entries) e *= inv_omega;
    return g;
}

double weyl_residual_sq(const PointSet& x, int t) {
    require_t(t, 1);
    return std::max(0.0, ordered_total(nonconstant_row_sums(x, t))) / sphere_area(x.dim());
}

double a_quantity(const PointSet& x, int t) {
    require_t(t, 1);
    const double n = static_cast<double>(x.size());
    return std::max(0.0, ordered_total(nonconstant_row_sums(x, t))) / (n * n);
}

std::vector<double> c_vector(const PointSet& x, int t) {
    require_t(t, 1);
    require_pair(x);
    const auto rows = nonconstant_row_sums(x, t);
    const double omega = sphere_area(x.dim());
    std::vector<double> c(x.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) c[i - 1] = (rows[0] - rows[i]) / omega;
    return c;
}

double d_quantity(const PointSet& x, int t) {
    require_t(t, 1);
    require_pair(x);
    double inf_norm = 0.0;
    const auto rows = nonconstant_row_sums(x, t);
    const double n = static_cast<double>(x.size());
    return c_sq_norm_from_rows(rows, inf_norm, sphere_area(x.dim())) / (n * n);
}

double d_upper_bound(std::size_t n, SphereDim d, int t) {
    if (n < 2) throw std::invalid_argument("D bound needs N >= 2");
    const std::int64_t m = poly_space_dim(d, t);
    std::int64_t m2 = 0, r = 0;
    if (__builtin_mul_overflow(m, m, &m2) ||
        __builtin_mul_overflow(static_cast<std::int64_t>(4 * (n - 1)), m2, &r)) {
        throw std::overflow_error("D upper bound overflows int64");
    }
    return static_cast<double>(r);
}

DesignQuantities design_quantities(const PointSet& x, int t) {
    require_t(t, 1);
    const auto rows = nonconstant_row_sums(x, t);
    const double n = static_cast<double>(x.size());
    const double omega = sphere_area(x.dim());
    // r^T r >= 0; a total a few ulps below zero is rounding at an exact design.
    const double total = std::max(0.0, ordered_total(rows));

    DesignQuantities q;
    q.weyl_residual_sq = total / omega;
    q.a_value = total / (n * n);
    if (x.size() >= 2) {
        q.d_value = c_sq_norm_from_rows(rows, q.c_norm_inf, omega) / (n * n);
    }
    return q;
}

}  // namespace sphdesign
