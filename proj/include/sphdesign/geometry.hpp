#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sphdesign/special_functions.hpp"

namespace sphdesign {

/// An ordered configuration of N unit vectors in R^{d+1}.
///
/// Rows whose norm is within 1e-12 of one are stored untouched, rows within
/// 1e-8 are renormalized, anything further off is rejected. Order matters:
/// the nonlinear residual pivots on the first point.
class PointSet {
public:
    static constexpr double kKeepTolerance = 1e-12;
    static constexpr double kNormalizeTolerance = 1e-8;

    /// `coords` is row-major, N rows of d+1 values.
    PointSet(SphereDim d, std::vector<double> coords);

    SphereDim dim() const noexcept { return d_; }
    std::size_t size() const noexcept { return n_; }
    std::size_t stride() const noexcept { return static_cast<std::size_t>(d_.ambient()); }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * stride(), stride()};
    }
    std::span<const double> coords() const noexcept { return coords_; }

    double dot(std::size_t i, std::size_t j) const;

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    SphereDim d_;
    std::size_t n_;
    std::vector<double> coords_;
};

enum class MeshNormMethod { grid, refined };

struct MeshNormEstimate {
    /// A realized value of min_i dist(y, x_i), hence a lower bound on the mesh norm.
    double lower_bound = 0.0;
    /// Best value over the candidate set before local refinement.
    double grid_value = 0.0;
    std::size_t candidate_count = 0;
    MeshNormMethod method = MeshNormMethod::grid;
    /// The point y at which lower_bound is attained.
    std::vector<double> witness;
};

double dot(std::span<const double> x, std::span<const double> y);

/// arccos of the clamped dot product, in [0, pi].
double geodesic_distance(std::span<const double> x, std::span<const double> y);

double separation_distance(const PointSet& x);

/// Deterministic low-discrepancy candidates on S^d: a generalized spiral for
/// d = 2, Gaussian-mapped Halton points for d > 2 (and d = 1, equispaced).
/// For d != 2 the candidate set of size m is a prefix of the set of size m+1.
std::vector<double> mesh_candidates(SphereDim d, std::size_t count);

/// Scans `resolution` candidates for the point farthest from the set, then
/// refines the best few by pattern search on the sphere when `refine` is set.
MeshNormEstimate mesh_norm_estimate(const PointSet& x, std::size_t resolution, bool refine = true);

/// Heuristic slack for turning a mesh norm estimate into an upper bound:
/// twice the typical candidate spacing (omega_d / resolution)^{1/d}.
double mesh_norm_margin(SphereDim d, std::size_t resolution);

struct MeshRatio {
    double ratio = 0.0;
    double mesh_norm = 0.0;
    double separation = 0.0;
    /// Set when the ratio falls below one, which only the mesh norm being a
    /// lower bound can cause.
    bool below_one = false;
};

MeshRatio mesh_ratio(const PointSet& x, std::size_t resolution);

/// separation_distance(x) >= c / N^d.
bool well_separated(const PointSet& x, double c);

/// N independent uniform points: normalized standard Gaussian draws.
PointSet random_uniform(SphereDim d, std::size_t n, std::uint64_t seed);

}  // namespace sphdesign
