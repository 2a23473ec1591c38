#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "sphdesign/fundamental.hpp"
#include "sphdesign/harmonics_s2.hpp"
#include "sphdesign/optimizer.hpp"
#include "sphdesign/quantities.hpp"

using namespace sphdesign;

namespace {

TangentField random_tangent(const PointSet& x, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    TangentField v;
    v.d = x.dim();
    v.n = x.size();
    const auto m = x.stride();
    v.vectors.resize(x.size() * m);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        double pv = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            v.vectors[i * m + k] = g(rng);
            pv += v.vectors[i * m + k] * p[k];
        }
        for (std::size_t k = 0; k < m; ++k) v.vectors[i * m + k] -= pv * p[k];
    }
    return v;
}

double directional(const TangentField& g, const TangentField& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.vectors.size(); ++k) s += g.vectors[k] * v.vectors[k];
    return s;
}

}  // namespace

TEST_CASE("gradient_a is tangent") {
    for (int d : {2, 3, 4}) {
        const auto x = random_uniform(SphereDim(d), 30, static_cast<std::uint64_t>(d));
        const auto g = gradient_a(x, 4);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto gi = g.at(i);
            double gn = 0.0;
            for (double c : gi) gn += c * c;
            CHECK(std::abs(dot(gi, x.point(i))) <= 1e-12 * std::sqrt(gn) + 1e-300);
        }
    }
    CHECK_THROWS_AS(gradient_a(oracle::octahedron(), 0), std::invalid_argument);
}

TEST_CASE("gradient_a vanishes at designs") {
    CHECK(gradient_a(oracle::octahedron(), 3).inf_norm() < 1e-10);
    CHECK(gradient_a(PointSet(SphereDim(2), {0, 0, 1, 0, 0, -1}), 1).inf_norm() < 1e-15);
    CHECK(gradient_a(oracle::icosahedron(), 5).inf_norm() < 1e-10);
}

TEST_CASE("gradient_a matches central differences along random tangents") {
    std::mt19937_64 rng(31);
    const double eps = 1e-6;
    for (int d : {2, 3}) {
        for (int t = 1; t <= 5; ++t) {
            for (int s = 0; s < 10; ++s) {
                const auto x = random_uniform(SphereDim(d), 12, rng());
                const auto v = random_tangent(x, rng);
                const double fd = (a_quantity(retract(x, v, eps), t) - a_quantity(retract(x, v, -eps), t)) / (2 * eps);
                const double an = directional(gradient_a(x, t), v);
                CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
            }
        }
    }
}

TEST_CASE("retract keeps points on the sphere") {
    std::mt19937_64 rng(2);
    const auto x = random_uniform(SphereDim(3), 20, 1);
    const auto v = random_tangent(x, rng);
    const auto y = retract(x, v, 0.3);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(std::sqrt(y.dot(i, i)) - 1.0) <= 1e-15);
    const auto same = retract(x, v, 0.0);
    for (std::size_t k = 0; k < x.coords().size(); ++k) CHECK(std::abs(same.coords()[k] - x.coords()[k]) <= 1e-15);
}

TEST_CASE("minimize_a at a design stops at iteration 0") {
    const auto r = minimize_a(oracle::octahedron(), 3);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.final_points == oracle::octahedron());
    CHECK(r.trace.size() == 1);
}

TEST_CASE("minimize_a reaches a 3-design with 16 points") {
    const auto r = minimize_a(random_uniform(SphereDim(2), 16, 2), 3);
    CHECK(r.converged);
    CHECK(r.grad_norm_final < 1e-10);
    CHECK(r.a_final < 1e-12);
    CHECK(std::abs(r.a_final - a_quantity(r.final_points, 3)) <= 1e-12);
    CHECK(r.d_final == d_quantity(r.final_points, 3));
}

TEST_CASE("minimize_a trace is nonincreasing") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto r = minimize_a(random_uniform(SphereDim(2), 20, seed), 4);
        REQUIRE(!r.trace.empty());
        CHECK(r.trace.front().value == doctest::Approx(a_quantity(random_uniform(SphereDim(2), 20, seed), 4)));
        for (std::size_t k = 1; k < r.trace.size(); ++k) REQUIRE(r.trace[k].value <= r.trace[k - 1].value);
        CHECK(r.trace.back().value == r.a_final);
        CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations) + 1);
    }
}

TEST_CASE("minimize_a adaptive step rule also descends") {
    MinimizeOptions o;
    o.step_rule = StepRule::adaptive;
    o.max_iter = 3000;
    const auto r = minimize_a(random_uniform(SphereDim(2), 16, 5), 3, o);
    for (std::size_t k = 1; k < r.trace.size(); ++k) REQUIRE(r.trace[k].value <= r.trace[k - 1].value);
    CHECK(r.a_final < 1e-8);
}

TEST_CASE("minimize_a below the DGS bound stays away from zero") {
    // t = 2 on S^2 needs at least 4 points.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = minimize_a(random_uniform(SphereDim(2), 3, seed), 2);
        CHECK(r.a_final > 1e-6);
    }
}

TEST_CASE("minimize_a is rotation equivariant") {
    std::mt19937_64 rng(4);
    const auto x0 = random_uniform(SphereDim(2), 12, 9);
    MinimizeOptions o;
    o.max_iter = 30;
    const auto r = minimize_a(x0, 2, o);
    for (int s = 0; s < 3; ++s) {
        const auto q = oracle::random_rotation(3, rng);
        const auto rq = minimize_a(oracle::rotate(x0, q), 2, o);
        CHECK(std::abs(rq.a_final - r.a_final) <= 1e-10);
    }
}

TEST_CASE("minimize_a separates coincident points") {
    std::vector<double> c = {0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1, 0};
    const auto r = minimize_a(PointSet(SphereDim(2), c), 1);
    CHECK(separation_distance(r.final_points) > 0.0);
    CHECK(r.a_final < 1e-12);
}

TEST_CASE("minimize_a option bounds") {
    MinimizeOptions o;
    o.max_iter = 2;
    const auto r = minimize_a(random_uniform(SphereDim(2), 30, 1), 5, o);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
    CHECK(r.stop_reason == "iteration limit");
    o.record_trace = false;
    CHECK(minimize_a(random_uniform(SphereDim(2), 30, 1), 5, o).trace.empty());
    CHECK_THROWS_AS(minimize_a(oracle::octahedron(), 0), std::invalid_argument);
}

TEST_CASE("solve_c examples") {
    const auto tet = solve_c(oracle::tetrahedron(), 2);
    CHECK(tet.converged);
    CHECK(tet.iterations == 0);
    CHECK(tet.d_final < 1e-28);

    std::mt19937_64 rng(3);
    const auto p = solve_c(oracle::perturb(oracle::tetrahedron(), 0.05, rng), 2);
    CHECK(p.d_final < 1e-18);

    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto r = solve_c(random_uniform(SphereDim(2), 9, seed), 2);
        CHECK(r.d_final < 1e-16);
        const auto rep = certify(r.final_points, 2);
        const bool fundamental = is_fundamental_system(r.final_points, 2).is_fundamental;
        CHECK((rep.verdict == Verdict::certified_design) == fundamental);
    }
    CHECK_THROWS_AS(solve_c(PointSet(SphereDim(2), {0, 0, 1}), 1), std::invalid_argument);
}

TEST_CASE("solve_c trace is nonincreasing in D") {
    const auto r = solve_c(random_uniform(SphereDim(3), 20, 4), 2);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].value <= r.trace[k - 1].value);
    CHECK(r.d_final == doctest::Approx(d_quantity(r.final_points, 2)).epsilon(1e-6).scale(1e-25));
}

TEST_CASE("certify examples") {
    CHECK_THROWS_AS(certify(oracle::octahedron(), 3), InsufficientPointsError);
    try {
        certify(oracle::octahedron(), 3);
    } catch (const InsufficientPointsError& e) {
        CHECK(e.n == 6);
        CHECK(e.required == 16);
    }

    ConstructOptions o;
    const auto c = construct_design(SphereDim(2), 4, 25, 1, o);
    CHECK(c.report.verdict == Verdict::certified_design);
    CHECK(c.report.route == Route::nonlinear);
    CHECK(c.report.rank_t->is_fundamental);
    CHECK(c.report.d_value < 1e-20);
    CHECK_FALSE(c.report.rank_t_plus_1.has_value());

    const auto rnd = certify(random_uniform(SphereDim(2), 16, 3), 3);
    CHECK(rnd.verdict == Verdict::not_design);
    CHECK(rnd.a_value > 0.0);
}

TEST_CASE("certify along the variational route") {
    // 36 points >= d_5 = 36 on S^2: a 4-design found by minimization, tested via P_5.
    const auto c = construct_design(SphereDim(2), 4, 36, 3);
    const auto& rep = c.report;
    REQUIRE(rep.rank_t_plus_1.has_value());
    if (rep.grad_norm < rep.tolerances.tol_stat && rep.rank_t_plus_1->is_fundamental) {
        CHECK(rep.a_value < rep.tolerances.tol_a);
        CHECK(rep.verdict == Verdict::certified_design);
        CHECK(rep.route == Route::variational);
    }
    CHECK(rep.verdict == Verdict::certified_design);
}

TEST_CASE("certified_design implies the hypotheses of its route") {
    for (int t = 1; t <= 5; ++t) {
        const auto c = construct_design(SphereDim(2), t, static_cast<std::size_t>((t + 1) * (t + 1) + t), 11);
        const auto& rep = c.report;
        if (rep.verdict != Verdict::certified_design) continue;
        CHECK(rep.a_value < rep.tolerances.tol_a);
        if (rep.route == Route::variational) {
            CHECK(rep.grad_norm < rep.tolerances.tol_stat);
            CHECK(rep.rank_t_plus_1->is_fundamental);
        } else {
            CHECK(rep.rank_t->is_fundamental);
            CHECK(rep.d_value < rep.tolerances.tol_d);
        }
    }
}

TEST_CASE("stationary and fundamental for P_{t+1} forces A below tol_a") {
    // Checked on every converged run with N >= d_{t+1}.
    for (int t = 1; t <= 3; ++t) {
        const auto n = static_cast<std::size_t>((t + 2) * (t + 2) + 3);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto r = minimize_a(random_uniform(SphereDim(2), n, seed), t);
            if (!r.converged) continue;
            const auto rep = certify(r.final_points, t);
            if (rep.grad_norm < rep.tolerances.tol_stat && rep.rank_t_plus_1 && rep.rank_t_plus_1->is_fundamental)
                CHECK(rep.a_value < rep.tolerances.tol_a);
        }
    }
}

TEST_CASE("certified designs integrate polynomials exactly") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g;
    for (int t = 1; t <= 6; ++t) {
        const auto c = construct_design(SphereDim(2), t, static_cast<std::size_t>((t + 1) * (t + 1)), 1);
        REQUIRE(c.report.verdict == Verdict::certified_design);
        const auto y = y_matrix(c.result.final_points, t);
        for (int p = 0; p < 200; ++p) {
            Eigen::VectorXd coef(y.rows());
            for (Eigen::Index k = 0; k < coef.size(); ++k) coef(k) = g(rng);
            const double mean = (coef.transpose() * y).mean();
            // Only Y_00 = 1/sqrt(4 pi) has a nonzero sphere average.
            const double exact = coef(0) / std::sqrt(4.0 * std::numbers::pi);
            CHECK(std::abs(mean - exact) < 1e-10);
        }
    }
}

TEST_CASE("construct_design bookkeeping") {
    const auto c = construct_design(SphereDim(2), 2, 3, 5);
    CHECK(c.below_dgs_bound);
    CHECK(c.result.a_final > 0.0);
    CHECK(c.report.verdict != Verdict::certified_design);
    CHECK(c.attempts == 5);

    const auto ok = construct_design(SphereDim(3), 1, 8, 1);
    CHECK_FALSE(ok.below_dgs_bound);
    CHECK(ok.report.verdict == Verdict::certified_design);
    CHECK(ok.attempts == 1);
    CHECK(ok.seed_used == 1);

    CHECK_THROWS_AS(construct_design(SphereDim(2), 0, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(construct_design(SphereDim(2), 2, 0, 1), std::invalid_argument);
}

TEST_CASE("verdict and route names") {
    CHECK(std::string(to_string(Verdict::certified_design)) == "certified_design");
    CHECK(std::string(to_string(Verdict::stationary_but_uncertified)) == "stationary_but_uncertified");
    CHECK(std::string(to_string(Verdict::not_design)) == "not_design");
    CHECK(std::string(to_string(Route::variational)) == "variational");
    CHECK(std::string(to_string(Route::nonlinear)) == "nonlinear");
}
