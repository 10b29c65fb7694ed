#include "opcomm/verdict.hpp"

#include <algorithm>

namespace opcomm {

nlohmann::json to_json(const Verdict& v)
{
    nlohmann::json j;
    j["claim"] = v.claim;
    j["passed"] = v.passed;
    j["vacuous"] = v.vacuous;
    j["witness"] = v.witness ? *v.witness : nlohmann::json(nullptr);
    j["margin"] = v.margin ? nlohmann::json(*v.margin) : nlohmann::json(nullptr);
    j["inputs"] = v.inputs;
    return j;
}

Verdict verdict_from_json(const nlohmann::json& j)
{
    Verdict v;
    v.claim = j.at("claim").get<std::string>();
    v.passed = j.at("passed").get<bool>();
    v.vacuous = j.value("vacuous", false);
    if (j.contains("witness") && !j["witness"].is_null())
        v.witness = j["witness"];
    if (j.contains("margin") && !j["margin"].is_null())
        v.margin = j["margin"].get<double>();
    if (j.contains("inputs"))
        v.inputs = j["inputs"];
    return v;
}

bool all_passed(const std::vector<Verdict>& verdicts)
{
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

} // namespace opcomm
