#include "sphdesign/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "sphdesign/compensated_sum.hpp"
#include "sphdesign/kernels.hpp"
#include "sphdesign/quantities.hpp"

namespace sphdesign {

double TangentField::inf_norm() const {
    double m = 0.0;
    for (double v : vectors) m = std::max(m, std::abs(v));
    return m;
}

double TangentField::squared_norm() const {
    double s = 0.0;
    for (double v : vectors) s += v * v;
    return s;
}

namespace {

void require_t(int t) {
    if (t < 1) throw std::invalid_argument("degree t must be >= 1, got " + std::to_string(t));
}

void project_to_tangent(std::span<double> v, std::span<const double> base) {
    const double p = dot(v, base);
    for (std::size_t c = 0; c < v.size(); ++c) v[c] -= p * base[c];
}

// Orthonormal tangent basis at unit vector x: the trailing columns of the
// Householder reflector that maps x onto a coordinate axis.
Eigen::MatrixXd tangent_basis(std::span<const double> x) {
    const auto dim = static_cast<Eigen::Index>(x.size());
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), dim);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
    Eigen::MatrixXd q = qr.householderQ();
    return q.rightCols(dim - 1);
}

// Coincident points make G_t rank deficient and stall everything downstream.
// Any later point within acos(1 - 1e-14) of an earlier one is nudged 1e-7
// along its first tangent direction.
bool separate_collisions(std::vector<double>& coords, SphereDim d) {
    const auto dim = static_cast<std::size_t>(d.ambient());
    const std::size_t n = coords.size() / dim;
    bool moved = false;
    for (std::size_t j = 1; j < n; ++j) {
        std::span<double> pj(coords.data() + j * dim, dim);
        for (std::size_t i = 0; i < j; ++i) {
            std::span<const double> pi(coords.data() + i * dim, dim);
            if (dot(pi, pj) > 1.0 - 1e-14) {
                const Eigen::MatrixXd basis = tangent_basis(pj);
                double sq = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    pj[c] += 1e-7 * basis(static_cast<Eigen::Index>(c), 0);
                    sq += pj[c] * pj[c];
                }
                const double norm = std::sqrt(sq);
                for (double& c : pj) c /= norm;
                moved = true;
            }
        }
    }
    return moved;
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::runtime_error(std::string("non-finite ") + what + " during optimization");
    }
}

double ambient_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TangentField gradient_a(const PointSet& x, int t) {
    require_t(t);
    const std::size_t dim = x.stride();
    TangentField g;
    g.d = x.dim();
    g.n = x.size();
    g.vectors.resize(x.size() * dim);
    omp::deriv_weighted_sums(x, ZonalKernel::addition(x.dim(), t, 1), g.vectors);
    const double n = static_cast<double>(x.size());
    const double scale = 2.0 / (n * n);
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::span<double> gi(g.vectors.data() + i * dim, dim);
        for (double& c : gi) c *= scale;
        project_to_tangent(gi, x.point(i));
        // A second pass removes what rounding left of the normal component.
        project_to_tangent(gi, x.point(i));
    }
    return g;
}

PointSet retract(const PointSet& x, const TangentField& v, double step) {
    const std::size_t dim = x.stride();
    std::vector<double> coords(x.coords().begin(), x.coords().end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double sq = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            double& xc = coords[i * dim + c];
            xc += step * v.vectors[i * dim + c];
            sq += xc * xc;
        }
        const double norm = std::sqrt(sq);
        for (std::size_t c = 0; c < dim; ++c) coords[i * dim + c] /= norm;
    }
    return PointSet(x.dim(), std::move(coords));
}

OptimizeResult minimize_a(const PointSet& x0, int t, const MinimizeOptions& opts) {
    require_t(t);
    OptimizeResult res(x0);
    PointSet& x = res.final_points;

    double a = a_quantity(x, t);
    check_finite(a, "A_{N,t}");
    TangentField g = gradient_a(x, t);
    check_finite(g.squared_norm(), "gradient");
    if (opts.record_trace) res.trace.push_back({a, g.inf_norm()});

    std::optional<PointSet> x_prev;
    TangentField g_prev;
    double alpha = opts.initial_step;

    for (;;) {
        const double gnorm = g.inf_norm();
        if (gnorm < opts.grad_tol) {
            res.converged = true;
            res.stop_reason = "gradient below tolerance";
            break;
        }
        if (res.iterations >= opts.max_iter) {
            res.stop_reason = "iteration limit";
            break;
        }

        if (x_prev) {
            if (opts.step_rule == StepRule::barzilai_borwein) {
                const auto xs = x.coords();
                const auto ps = x_prev->coords();
                double ss = 0.0, sy = 0.0;
                for (std::size_t k = 0; k < xs.size(); ++k) {
                    const double s = xs[k] - ps[k];
                    const double y = g.vectors[k] - g_prev.vectors[k];
                    ss += s * s;
                    sy += s * y;
                }
                alpha = sy > 0.0 ? ss / sy : 2.0 * alpha;
            } else {
                alpha *= 2.0;
            }
        }
        // No single point moves more than half a radian per step.
        double max_point = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            max_point = std::max(max_point, std::sqrt(ambient_dot(g.at(i), g.at(i))));
        }
        alpha = std::min(alpha, 0.5 / max_point);

        const double gsq = g.squared_norm();
        bool accepted = false;
        bool at_floor = false;
        std::optional<PointSet> trial;
        std::optional<TangentField> g_trial;
        double a_trial = 0.0;
        for (int k = 0; k < opts.max_backtracks; ++k) {
            trial = retract(x, g, -alpha);
            a_trial = a_quantity(*trial, t);
            check_finite(a_trial, "A_{N,t}");
            const double target = a - opts.armijo_c * alpha * gsq;
            if (target < a) {
                if (a_trial <= target) {
                    accepted = true;
                    break;
                }
            } else {
                // The required decrease is below the resolution of A. Accept
                // only steps that keep A and shrink the gradient.
                at_floor = true;
                g_trial = gradient_a(*trial, t);
                if (a_trial <= a && g_trial->inf_norm() < gnorm) {
                    accepted = true;
                    break;
                }
                g_trial.reset();
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            res.stop_reason = at_floor ? "A at rounding level; no further descent resolvable"
                                       : "line search found no sufficient decrease";
            break;
        }

        std::vector<double> coords(trial->coords().begin(), trial->coords().end());
        if (separate_collisions(coords, x.dim())) {
            trial.emplace(x.dim(), std::move(coords));
            a_trial = a_quantity(*trial, t);
            g_trial.reset();
        }

        x_prev = std::move(x);
        g_prev = std::move(g);
        x = std::move(*trial);
        a = a_trial;
        g = g_trial ? std::move(*g_trial) : gradient_a(x, t);
        check_finite(g.squared_norm(), "gradient");
        ++res.iterations;
        if (opts.record_trace) res.trace.push_back({a, g.inf_norm()});
    }

    res.a_final = a;
    res.grad_norm_final = g.inf_norm();
    res.d_final = x.size() >= 2 ? d_quantity(x, t) : 0.0;
    return res;
}

namespace {

struct CResidual {
    Eigen::VectorXd f;  // (R_0 - R_i) / N, i = 1..N-1, so that D = |f|^2
    double d_value = 0.0;
};

CResidual c_residual(const PointSet& x, const ZonalKernel& k) {
    std::vector<double> rows(x.size());
    omp::row_sums(x, k, rows);
    const double n = static_cast<double>(x.size());
    CResidual r;
    r.f.resize(static_cast<Eigen::Index>(x.size() - 1));
    CompensatedSum acc;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fi = (rows[0] - rows[i]) / n;
        r.f(static_cast<Eigen::Index>(i - 1)) = fi;
        acc += fi * fi;
    }
    r.d_value = acc.value();
    return r;
}

// Jacobian of f with respect to tangent coordinates u_k (x_k <- x_k + B_k u_k).
Eigen::MatrixXd c_jacobian(const PointSet& x, const ZonalKernel& k,
                           const std::vector<Eigen::MatrixXd>& bases) {
    const std::size_t n = x.size();
    const std::size_t dim = x.stride();
    const auto td = static_cast<Eigen::Index>(dim - 1);
    std::vector<double> kv(n * n), kd(n * n);
    omp::kernel_and_deriv_matrix(x, k, kv, kd);

    // S_i = sum_{j != i} K'(x_i . x_j) x_j: derivative of row sum i in x_i.
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto pj = x.point(j);
            for (std::size_t c = 0; c < dim; ++c) {
                s(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) += kd[i * n + j] * pj[c];
            }
        }
    }
    auto point_vec = [&](std::size_t i) {
        return Eigen::Map<const Eigen::VectorXd>(x.point(i).data(), static_cast<Eigen::Index>(dim));
    };

    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n) * td);
    Eigen::VectorXd grad_r0(static_cast<Eigen::Index>(dim)), grad_ri(static_cast<Eigen::Index>(dim));
    for (std::size_t kk = 0; kk < n; ++kk) {
        const auto col = static_cast<Eigen::Index>(kk) * td;
        grad_r0 = kk == 0 ? Eigen::VectorXd(s.col(0)) : Eigen::VectorXd(kd[kk] * point_vec(0));
        const Eigen::RowVectorXd r0_t = grad_r0.transpose() * bases[kk];
        for (std::size_t i = 1; i < n; ++i) {
            grad_ri = kk == i ? Eigen::VectorXd(s.col(static_cast<Eigen::Index>(i)))
                              : Eigen::VectorXd(kd[i * n + kk] * point_vec(i));
            jac.block(static_cast<Eigen::Index>(i - 1), col, 1, td) =
                (r0_t - grad_ri.transpose() * bases[kk]) * inv_n;
        }
    }
    return jac;
}

PointSet retract_tangent(const PointSet& x, const std::vector<Eigen::MatrixXd>& bases,
                         const Eigen::VectorXd& delta) {
    const std::size_t dim = x.stride();
    const auto td = static_cast<Eigen::Index>(dim - 1);
    std::vector<double> coords(x.coords().begin(), x.coords().end());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const Eigen::VectorXd step = bases[k] * delta.segment(static_cast<Eigen::Index>(k) * td, td);
        double sq = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            coords[k * dim + c] += step(static_cast<Eigen::Index>(c));
            sq += coords[k * dim + c] * coords[k * dim + c];
        }
        const double norm = std::sqrt(sq);
        for (std::size_t c = 0; c < dim; ++c) coords[k * dim + c] /= norm;
    }
    return PointSet(x.dim(), std::move(coords));
}

}  // namespace

OptimizeResult solve_c(const PointSet& x0, int t, const SolveCOptions& opts) {
    require_t(t);
    if (x0.size() < 2) throw std::invalid_argument("solve_c needs N >= 2");
    const ZonalKernel kernel = ZonalKernel::addition(x0.dim(), t, 1);

    OptimizeResult res(x0);
    PointSet& x = res.final_points;
    CResidual r = c_residual(x, kernel);
    check_finite(r.d_value, "D_{N,t}");
    double mu = -1.0;

    for (;;) {
        if (r.d_value < opts.d_tol) {
            res.converged = true;
            res.stop_reason = "D below tolerance";
            if (opts.record_trace) res.trace.push_back({r.d_value, 0.0});
            break;
        }
        std::vector<Eigen::MatrixXd> bases(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) bases[k] = tangent_basis(x.point(k));
        const Eigen::MatrixXd jac = c_jacobian(x, kernel, bases);
        const Eigen::VectorXd jtf = jac.transpose() * r.f;
        check_finite(jtf.squaredNorm(), "Jacobian");
        if (opts.record_trace) res.trace.push_back({r.d_value, jtf.cwiseAbs().maxCoeff()});
        if (res.iterations >= opts.max_iter) {
            res.stop_reason = "iteration limit";
            break;
        }

        // Underdetermined in general: the damped minimum-norm step
        // delta = -J^T (J J^T + mu I)^{-1} f.
        const Eigen::MatrixXd jjt = jac * jac.transpose();
        if (mu < 0.0) mu = 1e-8 * std::max(jjt.diagonal().maxCoeff(), 1e-300);

        bool accepted = false;
        double step_norm = 0.0;
        for (int attempt = 0; attempt < 40; ++attempt) {
            Eigen::MatrixXd damped = jjt;
            damped.diagonal().array() += mu;
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
            const Eigen::VectorXd delta = -(jac.transpose() * ldlt.solve(r.f));
            step_norm = delta.norm();
            PointSet trial = retract_tangent(x, bases, delta);
            CResidual rt = c_residual(trial, kernel);
            if (std::isfinite(rt.d_value) && rt.d_value < r.d_value) {
                x = std::move(trial);
                r = std::move(rt);
                mu = std::max(mu / 3.0, 1e-300);
                accepted = true;
                break;
            }
            mu *= 4.0;
            if (step_norm < opts.step_tol) break;
        }
        ++res.iterations;
        if (!accepted) {
            res.stop_reason = "no decrease in D";
            break;
        }
        if (step_norm < opts.step_tol) {
            res.stop_reason = "step below tolerance";
            break;
        }
    }

    res.d_final = r.d_value;
    res.a_final = a_quantity(x, t);
    res.grad_norm_final = gradient_a(x, t).inf_norm();
    return res;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::certified_design: return "certified_design";
        case Verdict::stationary_but_uncertified: return "stationary_but_uncertified";
        case Verdict::not_design: return "not_design";
    }
    return "unknown";
}

const char* to_string(Route r) {
    return r == Route::variational ? "variational" : "nonlinear";
}

InsufficientPointsError::InsufficientPointsError(std::size_t n_, std::int64_t required_)
    : std::invalid_argument("insufficient points for any certification route: N = " +
                            std::to_string(n_) + " < dim P_t = " + std::to_string(required_)),
      n(n_),
      required(required_) {}

CertificationReport certify(const PointSet& x, int t, const CertifyTolerances& tol) {
    require_t(t);
    const auto n = static_cast<std::int64_t>(x.size());
    const std::int64_t dim_t = poly_space_dim(x.dim(), t);
    const std::int64_t dim_t1 = poly_space_dim(x.dim(), t + 1);
    if (n < dim_t) throw InsufficientPointsError(x.size(), dim_t);

    CertificationReport rep;
    rep.tolerances = tol;
    const DesignQuantities q = design_quantities(x, t);
    rep.a_value = q.a_value;
    rep.d_value = q.d_value;
    rep.grad_norm = gradient_a(x, t).inf_norm();

    const bool stationary = rep.grad_norm < tol.tol_stat;
    const bool small_a = rep.a_value < tol.tol_a;
    bool certified = false;

    if (n >= dim_t1) {
        rep.route = Route::variational;
        rep.rank_t_plus_1 = is_fundamental_system(x, t + 1, tol.rank_tol);
        const bool fundamental = rep.rank_t_plus_1->is_fundamental;
        if (stationary && fundamental && small_a) {
            certified = true;
        } else if (stationary && fundamental) {
            rep.notes.push_back("stationary and fundamental for P_{t+1} but A >= tol_a: "
                                "stationarity is below the resolution of A");
        } else if (stationary) {
            rep.notes.push_back("stationary point not fundamental for P_{t+1}: "
                                "alternative branch possible (a nonzero p in P_{t+1} may vanish on X)");
        }
    }

    rep.rank_t = is_fundamental_system(x, t, tol.rank_tol);
    if (!certified) {
        if (n < dim_t1) rep.route = Route::nonlinear;
        if (rep.rank_t->is_fundamental && rep.d_value < tol.tol_d) {
            if (small_a) {
                certified = true;
                rep.route = Route::nonlinear;
            } else {
                rep.notes.push_back("D below tol_d but A >= tol_a; A decides");
            }
        }
    }
    if (!rep.rank_t->is_fundamental) {
        rep.notes.push_back("not a fundamental system for P_t");
    }
    if ((rep.rank_t && rep.rank_t->ill_conditioned) ||
        (rep.rank_t_plus_1 && rep.rank_t_plus_1->ill_conditioned)) {
        rep.notes.push_back("Gram spectrum has an eigenvalue near the rank cutoff");
    }

    if (certified) {
        rep.verdict = Verdict::certified_design;
    } else if (!small_a) {
        rep.verdict = Verdict::not_design;
    } else {
        rep.verdict = Verdict::stationary_but_uncertified;
    }
    return rep;
}

namespace {

CertificationReport uncertifiable_report(const PointSet& x, const OptimizeResult& res,
                                         const CertifyTolerances& tol, std::int64_t dim_t) {
    CertificationReport rep;
    rep.tolerances = tol;
    rep.route = Route::nonlinear;
    rep.a_value = res.a_final;
    rep.d_value = res.d_final;
    rep.grad_norm = res.grad_norm_final;
    rep.verdict = res.a_final < tol.tol_a ? Verdict::stationary_but_uncertified : Verdict::not_design;
    rep.notes.push_back("N = " + std::to_string(x.size()) + " < dim P_t = " + std::to_string(dim_t) +
                        ": no certification route applies");
    return rep;
}

}  // namespace

ConstructResult construct_design(SphereDim d, int t, std::size_t n, std::uint64_t seed,
                                 const ConstructOptions& opts) {
    require_t(t);
    if (n == 0) throw std::invalid_argument("need at least one point");
    const std::int64_t dim_t = poly_space_dim(d, t);
    const bool routes_apply = static_cast<std::int64_t>(n) >= dim_t;

    const bool below_dgs = static_cast<std::int64_t>(n) < dgs_lower_bound(d, t);
    std::optional<ConstructResult> best;

    for (int attempt = 0; attempt <= std::max(opts.restarts, 0); ++attempt) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
        OptimizeResult res = minimize_a(random_uniform(d, n, s), t, opts.minimize);

        if (opts.polish && routes_apply && n >= 2 && res.a_final < opts.polish_below) {
            SolveCOptions lm;
            lm.record_trace = false;
            OptimizeResult pol = solve_c(res.final_points, t, lm);
            if (pol.d_final <= res.d_final) {
                res.final_points = std::move(pol.final_points);
                res.a_final = pol.a_final;
                res.d_final = pol.d_final;
                res.grad_norm_final = pol.grad_norm_final;
                res.converged = res.grad_norm_final < opts.minimize.grad_tol;
                res.stop_reason += "; polished by Levenberg-Marquardt on C_t";
            }
        }

        CertificationReport rep = routes_apply
                                      ? certify(res.final_points, t, opts.tolerances)
                                      : uncertifiable_report(res.final_points, res, opts.tolerances, dim_t);
        const bool certified = rep.verdict == Verdict::certified_design;
        if (!best || certified || res.a_final < best->result.a_final) {
            best.emplace(ConstructResult{std::move(res), std::move(rep), 0, s, below_dgs});
        }
        best->attempts = attempt + 1;
        if (certified) break;
    }
    return std::move(*best);
}

}  // namespace sphdesign
