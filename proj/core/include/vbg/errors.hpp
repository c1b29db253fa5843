#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vbg {

struct Violation {
    std::string code;                  // e.g. "Fails4eq2", "NotAssociative"
    std::vector<std::string> witness;  // offending arrows, objects or tuples
    std::string detail;
};

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message, std::vector<Violation> violations = {})
        : std::runtime_error(code + ": " + message),
          code_(std::move(code)),
          violations_(std::move(violations)) {}

    const std::string& code() const { return code_; }
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::string code_;
    std::vector<Violation> violations_;
};

// Thrown by validators; carries every violated condition, not just the first.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::vector<Violation> violations)
        : Error(violations.empty() ? std::string("Invalid") : violations.front().code, what,
                std::move(violations)) {}
};

}  // namespace vbg
