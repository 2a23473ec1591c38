#include "sphdesign/geometry.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "sphdesign/kernels.hpp"

namespace sphdesign {

PointSet::PointSet(SphereDim d, std::vector<double> coords)
    : d_(d), n_(0), coords_(std::move(coords)) {
    const std::size_t dim = stride();
    if (coords_.empty() || coords_.size() % dim != 0) {
        throw std::invalid_argument("point set needs N >= 1 rows of " + std::to_string(dim) +
                                    " coordinates");
    }
    n_ = coords_.size() / dim;
    for (std::size_t i = 0; i < n_; ++i) {
        double* p = coords_.data() + i * dim;
        double sq = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            if (!std::isfinite(p[c])) {
                throw std::invalid_argument("point " + std::to_string(i) + " has a non-finite coordinate");
            }
            sq += p[c] * p[c];
        }
        const double norm = std::sqrt(sq);
        const double dev = std::abs(norm - 1.0);
        if (dev <= kKeepTolerance) continue;
        if (dev > kNormalizeTolerance) {
            throw std::invalid_argument("point " + std::to_string(i) + " has norm " +
                                        std::to_string(norm) + ", not on the unit sphere");
        }
        for (std::size_t c = 0; c < dim; ++c) p[c] /= norm;
    }
}

double PointSet::dot(std::size_t i, std::size_t j) const {
    return sphdesign::dot(point(i), point(j));
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()));
    }
    double s = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) s += x[c] * y[c];
    return s;
}

double geodesic_distance(std::span<const double> x, std::span<const double> y) {
    return std::acos(std::clamp(dot(x, y), -1.0, 1.0));
}

double separation_distance(const PointSet& x) {
    if (x.size() < 2) {
        throw std::invalid_argument("separation distance needs at least two points");
    }
    double best = -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            best = std::max(best, x.dot(i, j));
        }
    }
    return std::acos(std::clamp(best, -1.0, 1.0));
}

namespace {

// Rakhmanov-Saff-Zhou generalized spiral on S^2.
std::vector<double> spiral_points(std::size_t m) {
    std::vector<double> out(3 * m);
    if (m == 1) {
        out = {0.0, 0.0, 1.0};
        return out;
    }
    double phi = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double h = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(m - 1);
        const double s = std::sqrt(std::max(0.0, 1.0 - h * h));
        if (k == 0 || k + 1 == m) {
            phi = 0.0;
        } else {
            phi = std::fmod(phi + 3.6 / std::sqrt(static_cast<double>(m) * (1.0 - h * h)),
                            2.0 * std::numbers::pi);
        }
        out[3 * k] = s * std::cos(phi);
        out[3 * k + 1] = s * std::sin(phi);
        out[3 * k + 2] = h;
    }
    return out;
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double result = 0.0;
    double f = 1.0 / static_cast<double>(base);
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= static_cast<double>(base);
    }
    return result;
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t c = 2; primes.size() < count; ++c) {
        bool prime = true;
        for (auto p : primes) {
            if (p * p > c) break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(c);
    }
    return primes;
}

// Halton points pushed through the Gaussian quantile and normalized: a
// low-discrepancy analogue of normalized Gaussian sampling.
std::vector<double> halton_sphere_points(std::size_t dim, std::size_t m) {
    const auto primes = first_primes(dim);
    std::vector<double> out(dim * m);
    for (std::size_t k = 0; k < m; ++k) {
        double* p = out.data() + k * dim;
        double sq = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double u = radical_inverse(k + 1, primes[c]);
            p[c] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
            sq += p[c] * p[c];
        }
        const double norm = std::sqrt(sq);
        for (std::size_t c = 0; c < dim; ++c) p[c] /= norm;
    }
    return out;
}

double max_dot_to_set(const PointSet& x, std::span<const double> y) {
    double best = -2.0;
    for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, dot(y, x.point(i)));
    return best;
}

void normalize(std::span<double> v) {
    double sq = 0.0;
    for (double c : v) sq += c * c;
    const double n = std::sqrt(sq);
    for (double& c : v) c /= n;
}

// Orthonormal basis of the tangent space at unit vector y, via Gram-Schmidt
// against the coordinate axes, skipping the axis most aligned with y.
std::vector<std::vector<double>> tangent_basis(std::span<const double> y) {
    const std::size_t dim = y.size();
    std::size_t skip = 0;
    for (std::size_t c = 1; c < dim; ++c) {
        if (std::abs(y[c]) > std::abs(y[skip])) skip = c;
    }
    std::vector<std::vector<double>> basis;
    for (std::size_t axis = 0; axis < dim; ++axis) {
        if (axis == skip) continue;
        std::vector<double> v(dim, 0.0);
        v[axis] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            const double py = dot(v, y);
            for (std::size_t c = 0; c < dim; ++c) v[c] -= py * y[c];
            for (const auto& b : basis) {
                const double pb = dot(v, b);
                for (std::size_t c = 0; c < dim; ++c) v[c] -= pb * b[c];
            }
        }
        normalize(v);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Min-norm point of the convex hull of `gens` (Gilbert's algorithm).
std::vector<double> min_norm_in_hull(const std::vector<std::vector<double>>& gens) {
    std::vector<double> w = gens.front();
    for (int it = 0; it < 200; ++it) {
        std::size_t best = 0;
        double best_dot = dot(gens[0], w);
        for (std::size_t g = 1; g < gens.size(); ++g) {
            const double v = dot(gens[g], w);
            if (v < best_dot) {
                best_dot = v;
                best = g;
            }
        }
        const double ww = dot(w, w);
        if (ww - best_dot <= 1e-15 * std::max(ww, 1e-300)) break;
        double diff_sq = 0.0;
        for (std::size_t c = 0; c < w.size(); ++c) {
            const double dc = gens[best][c] - w[c];
            diff_sq += dc * dc;
        }
        const double lambda = std::clamp((ww - best_dot) / diff_sq, 0.0, 1.0);
        for (std::size_t c = 0; c < w.size(); ++c) w[c] += lambda * (gens[best][c] - w[c]);
    }
    return w;
}

// Pattern search on y minimizing max_i y . x_i (equivalently maximizing the
// distance to the nearest point). Directions: +-tangent axes, +-pairwise
// diagonals, and the steepest descent direction of the active max.
double refine_candidate(const PointSet& x, std::vector<double>& y, double initial_step) {
    const std::size_t dim = y.size();
    double g = max_dot_to_set(x, y);
    std::vector<double> trial(dim);
    auto try_move = [&](std::span<const double> dir, double step) {
        for (std::size_t c = 0; c < dim; ++c) trial[c] = y[c] + step * dir[c];
        normalize(trial);
        const double gt = max_dot_to_set(x, trial);
        if (gt < g) {
            g = gt;
            y = trial;
            return true;
        }
        return false;
    };

    for (double step = initial_step; step > 1e-11; step *= 0.5) {
        for (int sweep = 0; sweep < 64; ++sweep) {
            const auto basis = tangent_basis(y);
            std::vector<std::vector<double>> dirs;
            for (const auto& b : basis) {
                dirs.push_back(b);
                std::vector<double> neg(b);
                for (double& c : neg) c = -c;
                dirs.push_back(std::move(neg));
            }
            for (std::size_t a = 0; a < basis.size(); ++a) {
                for (std::size_t b = a + 1; b < basis.size(); ++b) {
                    for (double sa : {1.0, -1.0}) {
                        for (double sb : {1.0, -1.0}) {
                            std::vector<double> v(dim);
                            for (std::size_t c = 0; c < dim; ++c) {
                                v[c] = (sa * basis[a][c] + sb * basis[b][c]) * std::numbers::sqrt2 / 2;
                            }
                            dirs.push_back(std::move(v));
                        }
                    }
                }
            }
            // Active set: points whose angle to y is within ~step of the nearest.
            std::vector<std::vector<double>> active;
            const double slack = std::sin(std::min(step, 1.0)) * 2.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const auto p = x.point(i);
                if (dot(y, p) >= g - slack) {
                    std::vector<double> tp(p.begin(), p.end());
                    const double py = dot(tp, y);
                    for (std::size_t c = 0; c < dim; ++c) tp[c] -= py * y[c];
                    active.push_back(std::move(tp));
                }
            }
            if (!active.empty()) {
                auto w = min_norm_in_hull(active);
                double wn = std::sqrt(dot(w, w));
                if (wn > 1e-14) {
                    for (double& c : w) c = -c / wn;
                    dirs.insert(dirs.begin(), std::move(w));
                }
            }
            bool moved = false;
            for (const auto& dir : dirs) {
                if (try_move(dir, step)) {
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
    }
    return g;
}

}  // namespace

std::vector<double> mesh_candidates(SphereDim d, std::size_t count) {
    if (count == 0) throw std::invalid_argument("candidate count must be >= 1");
    if (d.value() == 2) return spiral_points(count);
    return halton_sphere_points(static_cast<std::size_t>(d.ambient()), count);
}

double mesh_norm_margin(SphereDim d, std::size_t resolution) {
    return 2.0 * std::pow(sphere_area(d) / static_cast<double>(resolution), 1.0 / d.value());
}

MeshNormEstimate mesh_norm_estimate(const PointSet& x, std::size_t resolution, bool refine) {
    if (resolution == 0) throw std::invalid_argument("resolution must be >= 1");
    const std::size_t dim = x.stride();
    const auto candidates = mesh_candidates(x.dim(), resolution);
    std::vector<double> nearest(resolution);
    omp::max_dot_scan(x, candidates, nearest);

    // Candidates ordered by how far they are from the set, farthest first.
    std::vector<std::size_t> order(resolution);
    for (std::size_t c = 0; c < resolution; ++c) order[c] = c;
    const std::size_t keep = refine ? std::min<std::size_t>(8, resolution) : 1;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return nearest[a] < nearest[b] || (nearest[a] == nearest[b] && a < b);
                      });

    MeshNormEstimate est;
    est.candidate_count = resolution;
    const std::size_t best = order[0];
    est.grid_value = std::acos(std::clamp(nearest[best], -1.0, 1.0));
    est.lower_bound = est.grid_value;
    est.witness.assign(candidates.begin() + static_cast<std::ptrdiff_t>(best * dim),
                       candidates.begin() + static_cast<std::ptrdiff_t>((best + 1) * dim));
    est.method = MeshNormMethod::grid;
    if (!refine) return est;

    est.method = MeshNormMethod::refined;
    const double step = 0.5 * mesh_norm_margin(x.dim(), resolution);
    for (std::size_t r = 0; r < keep; ++r) {
        const std::size_t c = order[r];
        std::vector<double> y(candidates.begin() + static_cast<std::ptrdiff_t>(c * dim),
                              candidates.begin() + static_cast<std::ptrdiff_t>((c + 1) * dim));
        const double g = refine_candidate(x, y, step);
        const double h = std::acos(std::clamp(g, -1.0, 1.0));
        if (h > est.lower_bound) {
            est.lower_bound = h;
            est.witness = std::move(y);
        }
    }
    return est;
}

MeshRatio mesh_ratio(const PointSet& x, std::size_t resolution) {
    MeshRatio out;
    out.separation = separation_distance(x);
    if (out.separation == 0.0) {
        throw std::domain_error("mesh ratio undefined: point set has coincident points");
    }
    out.mesh_norm = mesh_norm_estimate(x, resolution).lower_bound;
    out.ratio = 2.0 * out.mesh_norm / out.separation;
    out.below_one = out.ratio < 1.0;
    return out;
}

bool well_separated(const PointSet& x, double c) {
    const double n = static_cast<double>(x.size());
    return separation_distance(x) >= c / std::pow(n, x.dim().value());
}

PointSet random_uniform(SphereDim d, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("need at least one point");
    const auto dim = static_cast<std::size_t>(d.ambient());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> coords(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        do {
            sq = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                coords[i * dim + c] = gauss(rng);
                sq += coords[i * dim + c] * coords[i * dim + c];
            }
        } while (sq < 1e-300);
        const double norm = std::sqrt(sq);
        for (std::size_t c = 0; c < dim; ++c) coords[i * dim + c] /= norm;
    }
    return PointSet(d, std::move(coords));
}

}  // namespace sphdesign
