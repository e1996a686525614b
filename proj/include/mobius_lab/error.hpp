#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mobius_lab {

enum class ErrorKind {
    Domain,        // argument outside the mathematical domain of an operation
    Precondition,  // caller broke a documented precondition
    Capacity,      // segment larger than the configured capacity
    Budget,        // work or time budget exceeded
    Accuracy,      // numerical tolerance could not be met
    Range,         // evaluation outside a precomputed table
    CacheInvalid,  // segment cache file unusable
    Config,        // malformed user configuration
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace mobius_lab
