#pragma once

#include <stdexcept>
#include <string>

namespace riskiness {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The input fails one of the gamble preconditions (positive mean,
// positive loss probability, valid distribution data).
class NotAGamble : public Error {
public:
    explicit NotAGamble(const std::string& reason)
        : Error("not a gamble: " + reason), reason_(reason) {}
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
};

// A level-n dyadic approximation whose induced mean is still <= 0.
// Finer levels may succeed; the level is carried for reporting.
class NotYetAGamble : public Error {
public:
    explicit NotYetAGamble(int level, double mean)
        : Error("level " + std::to_string(level) +
                " approximation has nonpositive mean " + std::to_string(mean)),
          level_(level), mean_(mean) {}
    int level() const noexcept { return level_; }
    double mean() const noexcept { return mean_; }

private:
    int level_;
    double mean_;
};

// A tree node whose conditional distribution violates the gamble
// preconditions (e.g. all payoffs positive below that node).
class NotConditionalGamble : public Error {
public:
    explicit NotConditionalGamble(const std::string& node, const std::string& reason)
        : Error("node " + node + ": " + reason), node_(node) {}
    const std::string& node() const noexcept { return node_; }

private:
    std::string node_;
};

// An evaluation was requested outside the admissible parameter range
// (e.g. phi at lambda beyond 1/L, a quantile outside (0,1)).
class OutOfDomain : public Error {
public:
    using Error::Error;
};

// The sign of phi at the boundary lambda* could not be resolved: the
// quadrature error bound exceeds |phi(lambda*)| and the requested
// precision target was not reached.  Tighten tolerances and retry.
class BoundarySignAmbiguous : public Error {
public:
    BoundarySignAmbiguous(double value, double error_bound)
        : Error("sign of phi at the boundary is ambiguous: value " +
                std::to_string(value) + " within error bound " +
                std::to_string(error_bound)),
          value_(value), error_bound_(error_bound) {}
    double value() const noexcept { return value_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double value_;
    double error_bound_;
};

// Two trees do not share the same shape/filtration, so a
// time-consistency comparison is meaningless.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

// A simulation specification violates its structural constraints
// (nonpositive initial wealth, unbounded support, loss floor violated).
class SpecInvalid : public Error {
public:
    using Error::Error;
};

// Too few acceptance events to run the submartingale significance test.
class InsufficientEvents : public Error {
public:
    explicit InsufficientEvents(long long events, long long required)
        : Error("submartingale check needs " + std::to_string(required) +
                " acceptance events, got " + std::to_string(events)),
          events_(events) {}
    long long events() const noexcept { return events_; }

private:
    long long events_;
};

// Malformed input file: JSON syntax, schema violations, unknown fields.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace riskiness
