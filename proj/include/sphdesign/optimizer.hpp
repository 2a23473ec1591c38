#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphdesign/fundamental.hpp"
#include "sphdesign/geometry.hpp"

namespace sphdesign {

/// One tangent vector per point, stored row-major like PointSet.
struct TangentField {
    SphereDim d{2};
    std::size_t n = 0;
    std::vector<double> vectors;

    std::span<const double> at(std::size_t i) const {
        const auto dim = static_cast<std::size_t>(d.ambient());
        return {vectors.data() + i * dim, dim};
    }
    /// Largest absolute component.
    double inf_norm() const;
    double squared_norm() const;
};

/// Riemannian gradient of A_{N,t}: the Euclidean gradient
/// (2/N^2) sum_j K'(x_i . x_j) x_j projected onto the tangent space at x_i.
TangentField gradient_a(const PointSet& x, int t);

/// x_i <- (x_i + step * v_i) / |x_i + step * v_i|.
PointSet retract(const PointSet& x, const TangentField& v, double step);

enum class StepRule {
    /// Barzilai-Borwein trial step, then Armijo backtracking.
    barzilai_borwein,
    /// Trial step grows by 2 after an accepted step, then Armijo backtracking.
    adaptive,
};

struct MinimizeOptions {
    int max_iter = 20000;
    double grad_tol = 1e-10;
    StepRule step_rule = StepRule::barzilai_borwein;
    double initial_step = 1.0;
    double armijo_c = 1e-4;
    int max_backtracks = 60;
    bool record_trace = true;
};

struct TraceEntry {
    double value = 0.0;
    double grad_norm = 0.0;
};

struct OptimizeResult {
    explicit OptimizeResult(PointSet start) : final_points(std::move(start)) {}

    PointSet final_points;
    double a_final = 0.0;
    double d_final = 0.0;
    /// Infinity norm of the Riemannian gradient of A at final_points.
    double grad_norm_final = 0.0;
    int iterations = 0;
    bool converged = false;
    /// minimize_a: (A, |grad A|_inf) per iterate. solve_c: (D, |J^T f|_inf).
    std::vector<TraceEntry> trace;
    std::string stop_reason;
};

/// Projected gradient descent on (S^d)^N with Armijo backtracking and
/// renormalization as the retraction. Coincident points are separated by a
/// 1e-7 tangent jitter. Throws std::runtime_error on non-finite values.
OptimizeResult minimize_a(const PointSet& x0, int t, const MinimizeOptions& opts = {});

struct SolveCOptions {
    int max_iter = 200;
    /// Stop once D_{N,t} falls below this.
    double d_tol = 1e-28;
    double step_tol = 1e-15;
    bool record_trace = true;
};

/// Levenberg-Marquardt on C_t(X) = 0 in tangent coordinates, with the
/// analytic Jacobian from kernel derivatives. The first point stays the pivot.
OptimizeResult solve_c(const PointSet& x0, int t, const SolveCOptions& opts = {});

enum class Verdict { certified_design, stationary_but_uncertified, not_design };
enum class Route { variational, nonlinear };

const char* to_string(Verdict v);
const char* to_string(Route r);

struct CertifyTolerances {
    double tol_stat = 1e-10;
    double tol_a = 1e-12;
    double tol_d = 1e-12;
    std::optional<double> rank_tol;
};

struct CertificationReport {
    Verdict verdict = Verdict::stationary_but_uncertified;
    Route route = Route::nonlinear;
    double a_value = 0.0;
    double d_value = 0.0;
    double grad_norm = 0.0;
    std::optional<RankReport> rank_t;
    std::optional<RankReport> rank_t_plus_1;
    CertifyTolerances tolerances;
    std::vector<std::string> notes;
};

/// N < dim P_t: neither certification route applies.
class InsufficientPointsError : public std::invalid_argument {
public:
    InsufficientPointsError(std::size_t n, std::int64_t required);
    std::size_t n;
    std::int64_t required;
};

/// Certifies a t-design along one of two routes.
///
///  * variational (N >= dim P_{t+1}): stationary for A, fundamental for
///    P_{t+1}, and A below tol_a.
///  * nonlinear (N >= dim P_t): fundamental for P_t and D below tol_d.
///
/// The variational route is tried first when it applies; the nonlinear route
/// is the fallback. A >= tol_a gives not_design on either route, since A
/// vanishes exactly on designs.
CertificationReport certify(const PointSet& x, int t, const CertifyTolerances& tol = {});

struct ConstructOptions {
    MinimizeOptions minimize;
    /// Extra attempts with seeds seed+1, seed+2, ... after an uncertified run.
    int restarts = 4;
    /// Finish each minimize run with a Levenberg-Marquardt pass on C_t = 0
    /// when A is already small, to push D to rounding level.
    bool polish = true;
    double polish_below = 1e-8;
    CertifyTolerances tolerances;
};

struct ConstructResult {
    OptimizeResult result;
    CertificationReport report;
    int attempts = 0;
    std::uint64_t seed_used = 0;
    bool below_dgs_bound = false;
};

/// random_uniform start -> minimize_a -> certify, with seeded restarts.
ConstructResult construct_design(SphereDim d, int t, std::size_t n, std::uint64_t seed,
                                 const ConstructOptions& opts = {});

}  // namespace sphdesign
