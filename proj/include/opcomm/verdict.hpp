#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace opcomm {

/// Outcome of one checked inequality. A failed verdict always has a witness.
struct Verdict {
    std::string claim;
    bool passed = false;
    /// The statement's hypothesis did not hold, so the check proves nothing.
    bool vacuous = false;
    std::optional<nlohmann::json> witness;
    std::optional<double> margin;
    nlohmann::json inputs = nlohmann::json::object();
};

inline Verdict make_verdict(std::string claim, bool passed)
{
    Verdict v;
    v.claim = std::move(claim);
    v.passed = passed;
    return v;
}

nlohmann::json to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

bool all_passed(const std::vector<Verdict>& verdicts);

} // namespace opcomm
