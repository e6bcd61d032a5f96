#include "ominv/checker/checker.hpp"

#include <sstream>

namespace ominv {

const char *check_verdict_name(CheckVerdict v) {
    switch (v) {
    case CheckVerdict::Pass:
        return "pass";
    case CheckVerdict::Fail:
        return "fail";
    default:
        return "unknown";
    }
}

void ValidationReport::add(std::string name, CheckVerdict v, std::string evidence) {
    checks.push_back({std::move(name), v, std::move(evidence)});
}

void ValidationReport::merge(const ValidationReport &o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
}

CheckVerdict ValidationReport::overall() const {
    bool unknown = false;
    for (auto &c : checks) {
        if (c.verdict == CheckVerdict::Fail)
            return CheckVerdict::Fail;
        unknown = unknown || c.verdict == CheckVerdict::Unknown;
    }
    return unknown ? CheckVerdict::Unknown : CheckVerdict::Pass;
}

std::string ValidationReport::text() const {
    std::ostringstream os;
    for (auto &c : checks)
        os << c.name << " " << check_verdict_name(c.verdict) << " " << c.evidence << "\n";
    os << "overall " << check_verdict_name(overall()) << "\n";
    return os.str();
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (auto &c : checks)
        j.push_back({{"name", c.name}, {"verdict", check_verdict_name(c.verdict)}, {"evidence", c.evidence}});
    return {{"checks", j}, {"overall", check_verdict_name(overall())}};
}

} // namespace ominv
