#pragma once

#include <stdexcept>
#include <string>

namespace smoothstop {

/// Two inputs that must share the dimension D do not.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A randomized construction was requested without a seed.
class MissingSeed : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed CSV or configuration input.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void check_dimension(std::size_t expected, std::size_t actual, const char* what);

}  // namespace smoothstop
