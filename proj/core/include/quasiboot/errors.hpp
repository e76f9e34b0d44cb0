#pragma once

#include <stdexcept>
#include <string>

namespace quasiboot {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid construction or text form of a distribution / weight-scheme spec.
struct SpecError : Error {
    using Error::Error;
};

// Requested raw moment does not exist (e.g. Pareto order k >= shape a).
struct MomentNotFinite : Error {
    using Error::Error;
};

// Bernoulli mixture parameter leaves no room for the Gaussian part (var_z < 0).
struct InfeasibleMixture : Error {
    using Error::Error;
};

// Moment sequence admits no representing measure (or no Gaussian split).
struct TargetNotSolvable : Error {
    using Error::Error;
};

// Requested skewness cannot be met by any admissible Pareto shape.
struct SkewnessInfeasible : Error {
    using Error::Error;
};

// Design matrix condition number exceeds the configured bound.
struct IllConditioned : Error {
    using Error::Error;
};

// Bad experiment configuration (unknown key, missing field, bad value).
struct ConfigError : Error {
    using Error::Error;
};

// Run refused: projected work exceeds the desk-scale ceiling (use --force).
struct BudgetExceeded : Error {
    using Error::Error;
};

// Exact enumeration would exceed the outcome-count budget.
struct EnumerationTooLarge : Error {
    using Error::Error;
};

// File could not be read or written.
struct IoError : Error {
    using Error::Error;
};

}  // namespace quasiboot
