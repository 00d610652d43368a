#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

// Precondition and configuration failures. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Coherent-state truncation left more probability above nmax than allowed.
class TruncationError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ClosureError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Failures discovered while computing. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegeneracyError : public NumericalError {
public:
    DegeneracyError(const std::string& what, double time_ms, double gap)
        : NumericalError(what), time_ms_(time_ms), gap_(gap) {}

    double time_ms() const { return time_ms_; }
    double gap() const { return gap_; }

private:
    double time_ms_;
    double gap_;
};

} // namespace cqed
