#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/special_functions/spherical_harmonic.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "sphdesign/harmonics_s2.hpp"
#include "sphdesign/quantities.hpp"

using namespace sphdesign;

namespace {
const double kFourPi = 4.0 * std::numbers::pi;
}

TEST_CASE("HarmonicBasisS2 layout and argument checks") {
    HarmonicBasisS2 b(3);
    CHECK(b.size() == 16);
    CHECK(HarmonicBasisS2::block_start(2) == 4);
    std::vector<double> out(16), bad(15);
    const std::vector<double> p = {0, 0, 1};
    CHECK_THROWS_AS(b.evaluate(p, bad), std::invalid_argument);
    const std::vector<double> p4 = {0, 0, 1, 0};
    CHECK_THROWS_AS(b.evaluate(p4, out), std::invalid_argument);
    CHECK_THROWS_AS(HarmonicBasisS2(-1), std::invalid_argument);
}

TEST_CASE("harmonics match the Boost complex harmonics") {
    // Real basis: m = 0 -> Y_l^0; cos term -> sqrt2 (-1)^m Re Y_l^m; sin term -> sqrt2 (-1)^m Im Y_l^m.
    std::mt19937_64 rng(4);
    const auto x = random_uniform(SphereDim(2), 50, 6);
    HarmonicBasisS2 b(8);
    std::vector<double> out(b.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto p = x.point(j);
        b.evaluate(p, out);
        const double theta = std::acos(p[2]);
        const double phi = std::atan2(p[1], p[0]);
        for (int l = 0; l <= 8; ++l) {
            const auto base = HarmonicBasisS2::block_start(l);
            CHECK(out[base] == doctest::Approx(boost::math::spherical_harmonic_r(l, 0, theta, phi)).epsilon(1e-12).scale(1.0));
            for (int m = 1; m <= l; ++m) {
                const double sgn = (m % 2 == 0 ? 1.0 : -1.0) * std::numbers::sqrt2;
                CHECK(out[base + static_cast<std::size_t>(m)] ==
                      doctest::Approx(sgn * boost::math::spherical_harmonic_r(l, m, theta, phi)).epsilon(1e-12).scale(1.0));
                CHECK(out[base + static_cast<std::size_t>(l + m)] ==
                      doctest::Approx(sgn * boost::math::spherical_harmonic_i(l, m, theta, phi)).epsilon(1e-12).scale(1.0));
            }
        }
    }
}

TEST_CASE("addition theorem holds for the explicit basis") {
    std::mt19937_64 rng(1);
    const auto xs = random_uniform(SphereDim(2), 200, 10);
    const auto ys = random_uniform(SphereDim(2), 200, 11);
    HarmonicBasisS2 b(8);
    GegenbauerEvaluator ev(SphereDim(2), 8);
    std::vector<double> yx(b.size()), yy(b.size());
    double worst = 0.0;
    for (std::size_t s = 0; s < 200; ++s) {
        b.evaluate(xs.point(s), yx);
        b.evaluate(ys.point(s), yy);
        const double u = dot(xs.point(s), ys.point(s));
        for (int l = 0; l <= 8; ++l) {
            double sum = 0.0;
            for (std::size_t k = HarmonicBasisS2::block_start(l); k < HarmonicBasisS2::block_start(l + 1); ++k) sum += yx[k] * yy[k];
            worst = std::max(worst, std::abs(sum - (2.0 * l + 1.0) / kFourPi * ev.eval(l, u)));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("degree-0 entry is 1/sqrt(4 pi)") {
    const auto x = random_uniform(SphereDim(2), 20, 2);
    const auto y = y_matrix(x, 3);
    for (Eigen::Index j = 0; j < y.cols(); ++j) CHECK(y(0, j) == doctest::Approx(1.0 / std::sqrt(kFourPi)).epsilon(1e-15));
}

TEST_CASE("Monte-Carlo Gram of the basis is identity / omega_2") {
    const auto x = random_uniform(SphereDim(2), 100000, 12);
    const auto y = y_matrix(x, 4);
    const Eigen::MatrixXd m = (y * y.transpose()) / static_cast<double>(x.size());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m.rows(), m.cols()) / kFourPi;
    CHECK((m - id).cwiseAbs().maxCoeff() * kFourPi < 2e-2);
}

TEST_CASE("north pole: only zonal harmonics survive") {
    const auto y = y_matrix(PointSet(SphereDim(2), {0, 0, 1}), 3);
    for (int l = 0; l <= 3; ++l) {
        const auto base = static_cast<Eigen::Index>(HarmonicBasisS2::block_start(l));
        CHECK(y(base, 0) == doctest::Approx(std::sqrt((2.0 * l + 1.0) / kFourPi)));
        for (Eigen::Index k = base + 1; k < base + 2 * l + 1; ++k) CHECK(y(k, 0) == 0.0);
    }
}

TEST_CASE("Y^T Y equals the kernel Gram matrix") {
    for (int t = 0; t <= 8; ++t) {
        const auto x = random_uniform(SphereDim(2), 35, static_cast<std::uint64_t>(t));
        const auto y = y_matrix(x, t);
        const Eigen::MatrixXd yty = y.transpose() * y;
        const auto g = gram(x, t);
        double worst = 0.0;
        for (std::size_t i = 0; i < 35; ++i)
            for (std::size_t j = 0; j < 35; ++j)
                worst = std::max(worst, std::abs(yty(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - g(i, j)));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("Weyl sums examples") {
    const auto pair = weyl_sums_explicit(PointSet(SphereDim(2), {0.6, 0, 0.8, -0.6, 0, -0.8}), 1);
    CHECK(pair.size() == 3);
    CHECK(pair.cwiseAbs().maxCoeff() < 1e-15);

    const Eigen::VectorXd oct = y_matrix(oracle::octahedron(), 3).rowwise().sum();
    CHECK(oct.tail(15).cwiseAbs().maxCoeff() < 1e-12);

    CHECK(weyl_sums_explicit(oracle::tetrahedron(), 3).norm() > 1e-3);
    CHECK(weyl_sums_explicit(oracle::tetrahedron(), 2).norm() < 1e-12);

    CHECK_THROWS_AS(y_matrix(random_uniform(SphereDim(3), 4, 1), 2), std::invalid_argument);
    CHECK_THROWS_AS(weyl_sums_explicit(random_uniform(SphereDim(3), 4, 1), 2), std::invalid_argument);
    CHECK_THROWS_AS(weyl_sums_explicit(oracle::octahedron(), 0), std::invalid_argument);
}

TEST_CASE("explicit Weyl residual matches the kernel residual") {
    for (int t = 1; t <= 8; ++t) {
        const auto x = random_uniform(SphereDim(2), 40, static_cast<std::uint64_t>(100 + t));
        CHECK(weyl_sums_explicit(x, t).squaredNorm() == doctest::Approx(weyl_residual_sq(x, t)).epsilon(1e-10));
    }
}

TEST_CASE("Y_t has full row rank for random N >= d_t") {
    for (int t = 1; t <= 6; ++t) {
        const auto dt = static_cast<std::size_t>((t + 1) * (t + 1));
        for (std::size_t n : {dt, dt + 5}) {
            const auto y = y_matrix(random_uniform(SphereDim(2), n, n * 3 + static_cast<std::size_t>(t)), t);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(y);
            const auto sv = svd.singularValues();
            CHECK(sv(sv.size() - 1) > 1e-8 * sv(0));
        }
    }
}
