#include "canlab/report.hpp"

#include <nlohmann/json.hpp>

namespace canlab {

std::string to_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["bound"] = r.bound_name;
    j["lhs"] = to_string(r.lhs);
    j["rhs"] = to_string(r.rhs);
    j["holds"] = r.holds;
    j["slack"] = to_string(r.slack);
    return j.dump();
}

}  // namespace canlab
