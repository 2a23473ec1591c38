#include "sphdesign/harmonics_s2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphdesign {

namespace {

void require_s2(const PointSet& x) {
    if (x.dim().value() != 2) {
        throw std::invalid_argument("explicit harmonics are only available on S^2");
    }
}

}  // namespace

HarmonicBasisS2::HarmonicBasisS2(int t) : t_(t) {
    if (t < 0) throw std::invalid_argument("harmonic degree must be >= 0");
}

void HarmonicBasisS2::evaluate(std::span<const double> p, std::span<double> out) const {
    if (p.size() != 3) throw std::invalid_argument("S^2 harmonics need 3-vectors");
    if (out.size() != size()) throw std::invalid_argument("output span has wrong size");

    const double z = std::clamp(p[2], -1.0, 1.0);
    const double s = std::hypot(p[0], p[1]);
    const double phi = std::atan2(p[1], p[0]);
    const int t = t_;

    // pbar[l][m]: fully normalized associated Legendre, sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) P_l^m.
    std::vector<std::vector<double>> pbar(static_cast<std::size_t>(t) + 1);
    for (int l = 0; l <= t; ++l) pbar[static_cast<std::size_t>(l)].assign(static_cast<std::size_t>(l) + 1, 0.0);
    auto at = [&](int l, int m) -> double& {
        return pbar[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)];
    };

    at(0, 0) = std::sqrt(0.25 / std::numbers::pi);
    for (int m = 1; m <= t; ++m) {
        at(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * at(m - 1, m - 1);
    }
    for (int m = 0; m < t; ++m) {
        at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * z * at(m, m);
    }
    for (int m = 0; m <= t; ++m) {
        for (int l = m + 2; l <= t; ++l) {
            const double ll = l, mm = m;
            const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
            const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) /
                                       (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
            at(l, m) = a * (z * at(l - 1, m) - b * at(l - 2, m));
        }
    }

    for (int l = 0; l <= t; ++l) {
        const std::size_t base = block_start(l);
        out[base] = at(l, 0);
        for (int m = 1; m <= l; ++m) {
            const double scale = std::numbers::sqrt2 * at(l, m);
            out[base + static_cast<std::size_t>(m)] = scale * std::cos(m * phi);
            out[base + static_cast<std::size_t>(l + m)] = scale * std::sin(m * phi);
        }
    }
}

Eigen::MatrixXd y_matrix(const PointSet& x, int t) {
    require_s2(x);
    const HarmonicBasisS2 basis(t);
    Eigen::MatrixXd y(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(x.size()));
    std::vector<double> col(basis.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        basis.evaluate(x.point(j), col);
        for (std::size_t r = 0; r < col.size(); ++r) {
            y(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = col[r];
        }
    }
    return y;
}

Eigen::VectorXd weyl_sums_explicit(const PointSet& x, int t) {
    if (t < 1) throw std::invalid_argument("Weyl sums need t >= 1");
    const Eigen::MatrixXd y = y_matrix(x, t);
    return y.bottomRows(y.rows() - 1).rowwise().sum();
}

}  // namespace sphdesign
