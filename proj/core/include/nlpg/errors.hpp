#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlpg {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite data, malformed meshes, mismatched sizes.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A basis that is (numerically) linearly dependent.
class DegenerateSubspace : public Error {
public:
    using Error::Error;
};

/// A coefficient (typically the advection field) vanishes where it must not.
class SingularCoefficient : public Error {
public:
    using Error::Error;
};

/// Inconsistent problem setup, e.g. a test space that ignores the outflow condition.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Nonlinear iteration did not reach its tolerance.
///
/// Carries enough state for the caller to retry, typically with a longer
/// exponent continuation path.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, std::vector<double> last_iterate, double residual,
                  double delta, double p_stage)
        : Error(what),
          last_iterate_(std::move(last_iterate)),
          residual_(residual),
          delta_(delta),
          p_stage_(p_stage) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }
    double delta() const noexcept { return delta_; }
    double p_stage() const noexcept { return p_stage_; }

private:
    std::vector<double> last_iterate_;
    double residual_;
    double delta_;
    double p_stage_;
};

}  // namespace nlpg
