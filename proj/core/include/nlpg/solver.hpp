#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "nlpg/fe_space.hpp"
#include "nlpg/mixed_problem.hpp"

namespace nlpg {

struct LineSearch {
    double shrink = 0.5;
    double min_step = 1e-12;
    double sufficient_decrease = 1e-4;
};

struct SolverConfig {
    double newton_tol = 1e-9;      ///< relative to ||F||
    int max_iter = 100;            ///< Newton iterations per (p, delta) level
    LineSearch line_search;
    double delta_start = 1e-2;     ///< relative smoothing, first level
    double delta_end = 1e-10;      ///< relative smoothing, last level
    double delta_ratio = 0.1;      ///< geometric factor between levels
    std::vector<double> p_path;    ///< exponents (conjugate to the test exponent); empty = default path
    double p_ratio = 1.3;          ///< default path: max ratio of successive (p - 1)
    bool exact_polish = true;      ///< finish with unsmoothed Newton steps

    /// Throws InvalidInput when a field is out of range.
    void validate() const;
};

struct StageRecord {
    double p = 2.0;
    double delta = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

struct MixedSolution {
    Eigen::VectorXd r;                 ///< coefficients of r_m over V_m
    Eigen::VectorXd u;                 ///< coefficients of u_n over U_n
    std::optional<DiscreteFunction> r_m;
    std::optional<DiscreteFunction> u_n;
    int iterations = 0;
    double residual = 0.0;             ///< unsmoothed, relative to ||F||
    std::vector<StageRecord> stages;
};

/// Newton with Armijo backtracking, smoothing continuation in delta and
/// continuation of the exponent from 2 to the target. Throws SolverFailure on
/// stagnation or when the final unsmoothed residual exceeds the tolerance.
MixedSolution solve_mixed(const MixedProblem& prob, const SolverConfig& cfg = {});

/// Minimises 1/2 ||r||^2 - <F, r> over the null space of B^T by damped Newton,
/// then recovers u from B u = F - J(r) by least squares.
MixedSolution solve_constrained_descent(const MixedProblem& prob, const SolverConfig& cfg = {});

/// The exponent path a solve would use for this problem and config.
std::vector<double> solver_path(const MixedProblem& prob, const SolverConfig& cfg);

/// Least-squares slope of log(error) against log(h) and its r^2.
struct RateFit {
    double rate = 0.0;
    double r2 = 1.0;
};
RateFit estimate_rate(const std::vector<double>& h, const std::vector<double>& errors);

}  // namespace nlpg
