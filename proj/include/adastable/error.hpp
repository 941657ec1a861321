#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adastable {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sample carries no spread (all residuals zero), so a scale cannot be formed.
class DegenerateSampleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadrature did not reach the requested tolerance within its subdivision budget.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Streaming update rejected an observation; `index` is its position in the input.
class StepError : public std::runtime_error {
public:
    StepError(const std::string& what, std::size_t index)
        : std::runtime_error(what + " at index " + std::to_string(index)), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// File or parse failure; `line` is 1-based, 0 when not tied to a line.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace adastable
