#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opcomm/verdict.hpp"

namespace opcomm {

inline constexpr int report_schema_version = 1;
inline constexpr const char* tool_version = "1.0.0";

/// One row of an eps sweep over the scaled pair.
struct SweepRow {
    double eps = 0.0;
    double norm_A = 0.0;       // compression norm of A~ (certified lower bound)
    double norm_B = 0.0;       // compression norm of B~
    double norm_N = 0.0;       // compression norm of N~
    double norm_N_upper = 0.0; // block-majorant upper bound on ||N~||
    double bound = 0.0;        // (1/2) ln(1 / norm_N_upper)
    double margin = 0.0;       // norm_A * norm_B - bound
    bool converged = true;
};

struct RunReport {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<Verdict> verdicts;
    std::vector<SweepRow> tables;
    nlohmann::json extras = nlohmann::json::object(); // slopes, notes, ...
    std::string timestamp;
    std::string version = tool_version;
};

nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const RunReport& r);

/// 0 when every verdict passed, 1 otherwise. Input errors (2) never reach a report.
int exit_code(const RunReport& r);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

/// Least-squares slope of ln(y) against ln(x); empty with fewer than two
/// distinct x or any nonpositive value.
std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace opcomm
