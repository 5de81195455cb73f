#pragma once

#include <stdexcept>
#include <string>

namespace loggap {

/// Malformed or inconsistent input data (bad file, unknown curve, ragged rows, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& message) : std::runtime_error(message) {}
};

/// Numerically degenerate situation (zero variance, equal percentiles, ...).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace loggap
