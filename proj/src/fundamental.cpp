#include "sphdesign/fundamental.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <stdexcept>

#include "sphdesign/quantities.hpp"

namespace sphdesign {

double default_rank_tolerance(std::size_t n) {
    return static_cast<double>(n) * std::numeric_limits<double>::epsilon() * 64.0;
}

RankReport is_fundamental_system(const PointSet& x, int t, std::optional<double> relative_tol) {
    if (t < 0) throw std::invalid_argument("degree t must be >= 0");

    RankReport report;
    report.tested_degree = t;
    report.required_rank = poly_space_dim(x.dim(), t);
    report.tolerance_used = relative_tol.value_or(default_rank_tolerance(x.size()));

    const GramMatrix g = gram(x, t);
    const auto n = static_cast<Eigen::Index>(g.n);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        gm(g.entries.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition of the Gram matrix failed");
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    report.spectral_values.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        report.spectral_values[static_cast<std::size_t>(i)] = std::max(0.0, ev(n - 1 - i));
    }

    const double lambda_max = report.spectral_values.front();
    const double cutoff = report.tolerance_used * lambda_max;
    report.numerical_rank = std::count_if(report.spectral_values.begin(), report.spectral_values.end(),
                                          [&](double v) { return v > cutoff; });

    if (static_cast<std::int64_t>(x.size()) < report.required_rank) {
        report.is_fundamental = false;
        report.reason = "N < dim";
        return report;
    }
    report.is_fundamental = report.numerical_rank == report.required_rank;
    report.reason = report.is_fundamental ? "full row rank" : "rank deficient";

    // The deciding eigenvalue is the d_t-th largest: it must clear the cutoff.
    const double deciding = report.spectral_values[static_cast<std::size_t>(report.required_rank - 1)];
    report.ill_conditioned = deciding > cutoff / 10.0 && deciding < cutoff * 10.0;
    return report;
}

MeshConditionReport mesh_norm_condition(const PointSet& x, int t, std::size_t resolution) {
    if (t < 1) throw std::invalid_argument("mesh norm condition needs t >= 1");
    MeshConditionReport r;
    r.threshold = 1.0 / static_cast<double>(t);
    r.mesh_norm_estimate = mesh_norm_estimate(x, resolution).lower_bound;
    r.margin = mesh_norm_margin(x.dim(), resolution);
    r.verdict = r.mesh_norm_estimate + r.margin < r.threshold ? MeshVerdict::verified
                                                              : MeshVerdict::inconclusive;
    return r;
}

const char* to_string(MeshVerdict v) {
    return v == MeshVerdict::verified ? "verified" : "inconclusive";
}

}  // namespace sphdesign
