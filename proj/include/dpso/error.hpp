#pragma once

#include <stdexcept>
#include <string>

namespace dpso {

/// Malformed arguments: dimension mismatch, out-of-range parameters, bad text.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A birth-death chain whose clamped success probability vanishes below the
/// top state never returns, so H_i does not exist.
class UndefinedReturnTime : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace dpso
