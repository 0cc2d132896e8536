#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "nlpg/mixed_problem.hpp"
#include "nlpg/solver.hpp"

namespace nlpg {

/// The representer r in V_m with J(r) = g, where g is given by its action on
/// the basis. By duality ||r|| equals the discrete dual norm of g.
Eigen::VectorXd dual_representer(const SampledNorm& vnorm, const Eigen::VectorXd& g, const SolverConfig& cfg = {});

/// sup_{v in V_m} <g, v> / ||v||_V.
double discrete_dual_norm(const SampledNorm& vnorm, const Eigen::VectorXd& g, const SolverConfig& cfg = {});
double discrete_dual_norm(const MixedProblem& prob, const Eigen::VectorXd& g, const SolverConfig& cfg = {});

/// (1/gamma_B) osc + (C_Pi/gamma_B) ||r_m||_V.
double aposteriori_bound(const MixedProblem& prob, const MixedSolution& sol, double gamma_B, double c_pi, double osc);

struct InfSupResult {
    double value = 0.0;          ///< smallest quotient found
    Eigen::VectorXd minimiser;   ///< trial coefficients attaining it (unit U-norm)
    int evaluations = 0;
};

/// inf over the unit sphere of U_n of ||B w||_{(V_m)*} / ||w||_U. Needs
/// prob.unorm. The inner sup is exact (a dual norm solve); the outer inf uses
/// `samples` random directions plus a compass search, so the value is an
/// upper bound of the true infimum (exact when dim U_n = 1).
InfSupResult discrete_infsup(const MixedProblem& prob, int samples = 100, std::uint64_t seed = 1,
                             const SolverConfig& cfg = {});

}  // namespace nlpg
