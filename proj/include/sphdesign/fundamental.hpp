#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphdesign/geometry.hpp"

namespace sphdesign {

/// Numerical rank of Y_t, read off the eigenvalues of G_t = Y_t^T Y_t.
struct RankReport {
    int tested_degree = 0;
    std::int64_t required_rank = 0;  // d_t
    std::int64_t numerical_rank = 0;
    std::vector<double> spectral_values;  // eigenvalues of G_t, descending, clipped at 0
    double tolerance_used = 0.0;          // relative; cutoff = tolerance_used * largest eigenvalue
    bool is_fundamental = false;
    /// An eigenvalue sits within a factor 10 of the cutoff on the deciding side.
    bool ill_conditioned = false;
    std::string reason;
};

/// N * machine epsilon * 64.
double default_rank_tolerance(std::size_t n);

/// X is a fundamental system for P_t iff Y_t has full row rank d_t. The rank
/// is taken from the symmetric eigendecomposition of the kernel-built G_t.
/// `relative_tol` defaults to default_rank_tolerance(N).
RankReport is_fundamental_system(const PointSet& x, int t,
                                 std::optional<double> relative_tol = std::nullopt);

enum class MeshVerdict { verified, inconclusive };

struct MeshConditionReport {
    MeshVerdict verdict = MeshVerdict::inconclusive;
    double mesh_norm_estimate = 0.0;
    double margin = 0.0;
    double threshold = 0.0;  // 1 / t
};

/// Sufficient condition h_X < 1/t for X to be a fundamental system for P_t.
/// Verified only when estimate + margin clears the threshold; never refutes.
MeshConditionReport mesh_norm_condition(const PointSet& x, int t, std::size_t resolution);

const char* to_string(MeshVerdict v);

}  // namespace sphdesign
