#pragma once

#include <stdexcept>
#include <string>

namespace kit {

// Every recoverable failure carries a stable kind tag ("PatternMismatch",
// "NotATree", ...) so callers and the CLI can branch on it.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

}  // namespace kit
