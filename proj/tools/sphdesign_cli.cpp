// Command-line front end: verify, construct, diagnose, bounds.
//
// Exit codes: 0 certified design, 1 not certified, 2 input error,
// 3 route precondition failed (N < dim P_t).

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "sphdesign/kernels.hpp"
#include "sphdesign/optimizer.hpp"
#include "sphdesign/point_io.hpp"
#include "sphdesign/report.hpp"

namespace {

using namespace sphdesign;

int code(ExitCode c) { return static_cast<int>(c); }

void emit(const nlohmann::json& report, bool as_json) {
    if (as_json) {
        std::cout << dump_json(report) << '\n';
    } else {
        std::cout << human_table(report);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical t-design verification and construction"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread count (default: runtime choice)");

    // verify
    auto* verify = app.add_subcommand("verify", "Evaluate A, D, rank and geometry; certify a design");
    std::string verify_file;
    int verify_t = 0;
    VerifyOptions verify_opts;
    double rank_tol = 0.0;
    bool verify_json = false;
    verify->add_option("points_file", verify_file, "Point file")->required();
    verify->add_option("-t,--degree", verify_t, "Design strength t")->required()->check(CLI::PositiveNumber);
    verify->add_option("--tol-a", verify_opts.tolerances.tol_a, "Threshold on A_{N,t}")->capture_default_str();
    verify->add_option("--tol-d", verify_opts.tolerances.tol_d, "Threshold on D_{N,t}")->capture_default_str();
    verify->add_option("--tol-stat", verify_opts.tolerances.tol_stat, "Threshold on the gradient inf-norm")
        ->capture_default_str();
    auto* rank_opt = verify->add_option("--rank-tol", rank_tol, "Relative eigenvalue cutoff (default N*eps*64)");
    verify->add_option("--resolution", verify_opts.resolution, "Mesh norm candidates")->capture_default_str();
    verify->add_flag("--json", verify_json, "Emit JSON");

    // construct
    auto* construct = app.add_subcommand("construct", "Search for a design by minimizing A_{N,t}");
    int c_d = 2, c_t = 1;
    std::size_t c_n = 0;
    std::uint64_t c_seed = 1;
    ConstructOptions c_opts;
    std::string c_out;
    bool c_json = false;
    construct->add_option("-d,--dim", c_d, "Sphere dimension d (S^d in R^{d+1})")->required();
    construct->add_option("-t,--degree", c_t, "Design strength t")->required();
    construct->add_option("-n,--points", c_n, "Number of points N")->required();
    construct->add_option("--seed", c_seed, "Seed of the random start")->capture_default_str();
    construct->add_option("--max-iter", c_opts.minimize.max_iter, "Iteration limit per attempt")
        ->capture_default_str();
    construct->add_option("--grad-tol", c_opts.minimize.grad_tol, "Gradient inf-norm tolerance")
        ->capture_default_str();
    construct->add_option("--restarts", c_opts.restarts, "Extra seeded attempts")->capture_default_str();
    construct->add_flag("--no-polish", [&](std::int64_t) { c_opts.polish = false; },
                        "Skip the Levenberg-Marquardt finish on C_t");
    construct->add_option("--out", c_out, "Write final points here");
    construct->add_flag("--json", c_json, "Emit JSON");

    // diagnose
    auto* diagnose = app.add_subcommand("diagnose", "Separation, mesh norm and mesh ratio");
    std::string diag_file;
    std::size_t diag_resolution = 100000;
    diagnose->add_option("points_file", diag_file, "Point file")->required();
    diagnose->add_option("--resolution", diag_resolution, "Mesh norm candidates")->capture_default_str();
    bool diag_json = false;
    diagnose->add_flag("--json", diag_json, "Emit JSON");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "DGS lower bound and route thresholds");
    int b_d = 2, b_t = 1;
    bool b_json = false;
    bounds->add_option("d", b_d, "Sphere dimension d")->required();
    bounds->add_option("t", b_t, "Design strength t")->required();
    bounds->add_flag("--json", b_json, "Emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : code(ExitCode::input_error);
    }
    omp::set_threads(threads);

    try {
        if (*verify) {
            if (*rank_opt) verify_opts.tolerances.rank_tol = rank_tol;
            const PointSet x = read_points_file(verify_file);
            const VerifyOutcome out = verify_points(x, verify_t, verify_opts);
            emit(out.report, verify_json);
            return code(out.exit_code);
        }
        if (*construct) {
            if (c_d < 1 || c_t < 1 || c_n < 1) {
                std::cerr << "error: need d >= 1, t >= 1, n >= 1\n";
                return code(ExitCode::input_error);
            }
            const SphereDim d(c_d);
            const auto bound = dgs_lower_bound(d, c_t);
            if (static_cast<std::int64_t>(c_n) < bound) {
                std::cerr << "warning: n = " << c_n << " is below the DGS lower bound " << bound
                          << "; no " << c_t << "-design with this many points exists\n";
            }
            const ConstructResult result = construct_design(d, c_t, c_n, c_seed, c_opts);
            if (!c_out.empty()) write_points_file(c_out, result.result.final_points);
            const VerifyOutcome out = construct_report(result, c_t);
            emit(out.report, c_json);
            return code(out.exit_code);
        }
        if (*diagnose) {
            const PointSet x = read_points_file(diag_file);
            emit(diagnose_points(x, diag_resolution), diag_json);
            return 0;
        }
        if (*bounds) {
            if (b_d < 1 || b_t < 1) {
                std::cerr << "error: need d >= 1 and t >= 1\n";
                return code(ExitCode::input_error);
            }
            emit(bounds_table(SphereDim(b_d), b_t), b_json);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::input_error);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::input_error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(ExitCode::input_error);
    }
    return 0;
}
