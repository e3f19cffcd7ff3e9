#pragma once

#include <string>

#include "canlab/rational.hpp"

namespace canlab {

// Carrier for every inequality the library evaluates. holds <=> lhs <= rhs.
struct BoundReport {
    std::string bound_name;
    Rational lhs;
    Rational rhs;
    bool holds;
    Rational slack;  // rhs - lhs
};

inline BoundReport make_report(std::string name, Rational lhs, Rational rhs) {
    BoundReport r;
    r.bound_name = std::move(name);
    r.holds = lhs <= rhs;
    r.slack = rhs - lhs;
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    return r;
}

// {"bound":..., "lhs":"p/q", "rhs":"p/q", "holds":..., "slack":"p/q"}
std::string to_json(const BoundReport& r);

}  // namespace canlab
