#pragma once

#include <stdexcept>
#include <string>

namespace canlab {

// Precondition / malformed-input errors. The CLI maps these to exit code 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Exact-mode size guards and time limits. CLI exit code 3.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace canlab
