#ifndef TWOSPIN_ERRORS_HPP
#define TWOSPIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace twospin {

// Input that does not conform to a schema or grammar. CLI exit code 1.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A violated parameter-regime precondition (e.g. lambda >= lambda_c where
// lambda < lambda_c is required). CLI exit code 2; the message names the
// failed precondition.
struct regime_error : std::runtime_error {
    explicit regime_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Resource guards: oracle free-vertex limit, SAW node budgets.
struct budget_error : regime_error {
    explicit budget_error(const std::string& msg) : regime_error(msg) {}
};

}  // namespace twospin

#endif
