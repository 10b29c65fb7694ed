#include "opcomm/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

namespace opcomm {

nlohmann::json to_json(const SweepRow& row)
{
    return {{"eps", row.eps},       {"norm_A", row.norm_A}, {"norm_B", row.norm_B},
            {"norm_N", row.norm_N}, {"norm_N_upper", row.norm_N_upper}, {"bound", row.bound},
            {"margin", row.margin}, {"converged", row.converged}};
}

nlohmann::json to_json(const RunReport& r)
{
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["command"] = r.command;
    j["parameters"] = r.parameters;
    j["verdicts"] = nlohmann::json::array();
    for (const auto& v : r.verdicts)
        j["verdicts"].push_back(to_json(v));
    j["tables"] = nlohmann::json::array();
    for (const auto& row : r.tables)
        j["tables"].push_back(to_json(row));
    for (const auto& [k, v] : r.extras.items())
        j[k] = v;
    j["timestamp"] = r.timestamp;
    j["version"] = r.version;
    return j;
}

int exit_code(const RunReport& r)
{
    return all_passed(r.verdicts) ? 0 : 1;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        return std::nullopt;
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            return std::nullopt;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) <= 1e-12 * std::max(1.0, n * sxx))
        return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

} // namespace opcomm
