#pragma once

#include <stdexcept>
#include <string>

namespace qlid {

// Invalid model input: out-of-range probabilities, malformed networks,
// unparseable experiment files. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when every outcome of a query scores zero, so no normalization
// factor exists. Maps to CLI exit code 3.
class DegenerateQueryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when no phase reaches the requested target probability. Carries the
// attainable envelope so callers can report how far off the target is.
// Maps to CLI exit code 4.
class NoSolutionError : public std::runtime_error {
public:
    NoSolutionError(double target, double attainable_min, double attainable_max);

    double target() const { return target_; }
    double attainable_min() const { return attainable_min_; }
    double attainable_max() const { return attainable_max_; }

private:
    double target_;
    double attainable_min_;
    double attainable_max_;
};

}  // namespace qlid
