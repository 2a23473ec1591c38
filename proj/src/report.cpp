#include "sphdesign/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sphdesign/quantities.hpp"

namespace sphdesign {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_double(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    std::string_view s(buf, static_cast<std::size_t>(end - buf));
    out += s;
    // Keep the value a JSON float ("1.0", not "1") so it reads back as a double.
    if (s.find_first_of(".eEn") == std::string_view::npos) out += ".0";
}

void write_value(std::string& out, const json& j, int indent, int depth) {
    const auto newline = [&](int level) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * level), ' ');
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += json(key).dump();
                out += indent < 0 ? ":" : ": ";
                write_value(out, value, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                write_value(out, value, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            return;
        }
        case json::value_t::number_float:
            write_double(out, j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

json rank_summary(const PointSet& x, int t, const CertifyTolerances& tol) {
    json rank = json::object();
    rank["t"] = to_json(is_fundamental_system(x, t, tol.rank_tol));
    if (static_cast<std::int64_t>(x.size()) >= poly_space_dim(x.dim(), t + 1)) {
        rank["t_plus_1"] = to_json(is_fundamental_system(x, t + 1, tol.rank_tol));
    }
    return rank;
}

void geometry_fields(const PointSet& x, std::size_t resolution, json& out) {
    const MeshNormEstimate mesh = mesh_norm_estimate(x, resolution);
    out["mesh_norm_estimate"] = mesh.lower_bound;
    if (x.size() >= 2) {
        const double sep = separation_distance(x);
        out["separation"] = sep;
        out["mesh_ratio"] = sep > 0.0 ? finite_or_null(2.0 * mesh.lower_bound / sep) : json(nullptr);
    } else {
        out["separation"] = nullptr;
        out["mesh_ratio"] = nullptr;
    }
}

}  // namespace

json to_json(const RankReport& r) {
    return json{
        {"tested_degree", r.tested_degree},
        {"required_rank", r.required_rank},
        {"numerical_rank", r.numerical_rank},
        {"tolerance_used", r.tolerance_used},
        {"is_fundamental", r.is_fundamental},
        {"ill_conditioned", r.ill_conditioned},
        {"reason", r.reason},
        {"spectral_values", r.spectral_values},
    };
}

json to_json(const CertifyTolerances& t) {
    return json{
        {"tol_a", t.tol_a},
        {"tol_d", t.tol_d},
        {"tol_stat", t.tol_stat},
        {"rank_tol", t.rank_tol ? json(*t.rank_tol) : json("default: N*eps*64")},
    };
}

VerifyOutcome verify_points(const PointSet& x, int t, const VerifyOptions& opts) {
    if (t < 1) throw std::invalid_argument("verify needs t >= 1");
    const SphereDim d = x.dim();
    const DesignQuantities q = design_quantities(x, t);

    json r;
    r["tool_version"] = kToolVersion;
    r["d"] = d.value();
    r["t"] = t;
    r["n"] = x.size();
    r["a_value"] = q.a_value;
    r["d_value"] = x.size() >= 2 ? json(q.d_value) : json(nullptr);
    r["d_upper_bound"] = x.size() >= 2 ? json(d_upper_bound(x.size(), d, t)) : json(nullptr);
    r["weyl_residual_sq"] = q.weyl_residual_sq;
    r["c_norm_inf"] = q.c_norm_inf;
    r["dim_p_t"] = poly_space_dim(d, t);
    r["dim_p_t_plus_1"] = poly_space_dim(d, t + 1);
    r["dgs_lower_bound"] = dgs_lower_bound(d, t);
    r["rank"] = rank_summary(x, t, opts.tolerances);
    geometry_fields(x, opts.resolution, r);
    r["tolerances"] = to_json(opts.tolerances);

    VerifyOutcome out;
    try {
        const CertificationReport cert = certify(x, t, opts.tolerances);
        r["verdict"] = to_string(cert.verdict);
        r["route"] = to_string(cert.route);
        r["grad_norm"] = cert.grad_norm;
        r["notes"] = cert.notes;
        out.exit_code = cert.verdict == Verdict::certified_design ? ExitCode::certified
                                                                   : ExitCode::uncertified;
    } catch (const InsufficientPointsError& e) {
        r["verdict"] = nullptr;
        r["route"] = nullptr;
        r["grad_norm"] = gradient_a(x, t).inf_norm();
        r["notes"] = json::array();
        r["error"] = e.what();
        out.exit_code = ExitCode::precondition;
    }
    out.report = std::move(r);
    return out;
}

json diagnose_points(const PointSet& x, std::size_t resolution) {
    json r;
    r["tool_version"] = kToolVersion;
    r["d"] = x.dim().value();
    r["n"] = x.size();
    geometry_fields(x, resolution, r);

    if (x.size() >= 2) {
        // Angle from each point to its nearest neighbour.
        std::vector<double> nearest(x.size(), 0.0);
        std::size_t coincident = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double best = -2.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (j != i) best = std::max(best, x.dot(i, j));
            }
            nearest[i] = std::acos(std::clamp(best, -1.0, 1.0));
            if (nearest[i] == 0.0) ++coincident;
        }
        std::vector<double> sorted = nearest;
        std::sort(sorted.begin(), sorted.end());
        auto quantile = [&](double p) {
            const double pos = p * static_cast<double>(sorted.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const auto hi = std::min(lo + 1, sorted.size() - 1);
            return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
        };
        const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());

        constexpr int kBins = 10;
        const double lo = sorted.front(), hi = sorted.back();
        std::vector<std::size_t> counts(kBins, 0);
        for (double v : sorted) {
            int b = hi > lo ? static_cast<int>((v - lo) / (hi - lo) * kBins) : 0;
            counts[static_cast<std::size_t>(std::clamp(b, 0, kBins - 1))]++;
        }
        r["nearest_neighbor_angle"] = json{
            {"min", sorted.front()},  {"q25", quantile(0.25)}, {"median", quantile(0.5)},
            {"q75", quantile(0.75)},  {"max", sorted.back()},  {"mean", mean},
            {"histogram", json{{"lo", lo}, {"hi", hi}, {"counts", counts}}},
        };
        r["coincident_points"] = coincident;
        r["separation_zero"] = r["separation"].is_number() && r["separation"].get<double>() == 0.0;
    }
    return r;
}

json bounds_table(SphereDim d, int t) {
    return json{
        {"d", d.value()},
        {"t", t},
        {"dgs_lower_bound", dgs_lower_bound(d, t)},
        {"dim_p_t", poly_space_dim(d, t)},
        {"dim_p_t_plus_1", poly_space_dim(d, t + 1)},
    };
}

VerifyOutcome construct_report(const ConstructResult& c, int t, const VerifyOptions& opts) {
    VerifyOutcome out = verify_points(c.result.final_points, t, opts);
    out.report["construction"] = json{
        {"attempts", c.attempts},
        {"seed_used", c.seed_used},
        {"iterations", c.result.iterations},
        {"converged", c.result.converged},
        {"a_final", c.result.a_final},
        {"d_final", c.result.d_final},
        {"grad_norm_final", c.result.grad_norm_final},
        {"stop_reason", c.result.stop_reason},
        {"below_dgs_bound", c.below_dgs_bound},
    };
    out.exit_code = out.exit_code == ExitCode::certified ? ExitCode::certified : ExitCode::uncertified;
    return out;
}

std::string dump_json(const json& j, int indent) {
    std::string out;
    write_value(out, j, indent, 0);
    return out;
}

namespace {

void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (key == "spectral_values") continue;
            flatten(value, prefix.empty() ? key : prefix + "." + key, os);
        }
        return;
    }
    std::string text;
    write_value(text, j, -1, 0);
    os << prefix << ": " << text << '\n';
}

}  // namespace

std::string human_table(const json& j) {
    std::ostringstream os;
    flatten(j, "", os);
    return os.str();
}

}  // namespace sphdesign
