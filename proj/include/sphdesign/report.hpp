#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "sphdesign/fundamental.hpp"
#include "sphdesign/geometry.hpp"
#include "sphdesign/optimizer.hpp"

namespace sphdesign {

inline constexpr const char* kToolVersion = "0.1.0";

/// Process exit codes of the command-line tool.
enum class ExitCode : int {
    certified = 0,
    uncertified = 1,
    input_error = 2,
    precondition = 3,
};

struct VerifyOptions {
    CertifyTolerances tolerances;
    std::size_t resolution = 20000;
};

struct VerifyOutcome {
    nlohmann::json report;
    ExitCode exit_code = ExitCode::uncertified;
};

/// Full report for one (X, t): quantities, rank reports, geometry, DGS bound
/// and the certification verdict. N < dim P_t yields exit code precondition
/// with a null verdict, the quantities still filled in.
VerifyOutcome verify_points(const PointSet& x, int t, const VerifyOptions& opts = {});

/// Separation, mesh norm, mesh ratio and a nearest-neighbour angle summary.
nlohmann::json diagnose_points(const PointSet& x, std::size_t resolution);

/// DGS lower bound and the two route thresholds dim P_t, dim P_{t+1}.
nlohmann::json bounds_table(SphereDim d, int t);

/// verify_points on the constructed set plus a "construction" section.
VerifyOutcome construct_report(const ConstructResult& c, int t, const VerifyOptions& opts = {});

nlohmann::json to_json(const RankReport& r);
nlohmann::json to_json(const CertifyTolerances& t);

/// JSON text with every floating-point value printed to 17 significant
/// digits; non-finite values become null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Flat "key: value" listing for terminal output.
std::string human_table(const nlohmann::json& j);

}  // namespace sphdesign
