#pragma once

#include <stdexcept>
#include <string>

namespace symindex {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input fails a documented precondition (dimension, parameter range, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Integration drifted off the symplectic group beyond tolerance.
struct IntegrationError : Error {
    using Error::Error;
};

/// A crossing form stayed degenerate through the whole perturbation loop.
struct DegenerateCrossingError : Error {
    DegenerateCrossingError(const std::string& what, double t, int dim)
        : Error(what), t(t), dim(dim) {}
    double t;
    int dim;
};

/// A stabilization loop (epsilon halving, truncation sweep) ran out of budget.
struct NonConvergenceError : Error {
    using Error::Error;
};

/// Two routes that must agree exactly disagreed.
struct ConsistencyError : Error {
    using Error::Error;
};

}  // namespace symindex
