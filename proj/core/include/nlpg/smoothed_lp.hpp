#pragma once

#include <Eigen/Dense>

namespace nlpg {

/// Value and derivative data of the smoothed functional
///
///     Phi(z) = 1/2 * N(z)^2,   N(z) = ( sum_i w_i (z_i^2 + delta^2)^{rho/2} )^{1/rho}
///
/// for a weighted sample vector z. With delta = 0 this is half the squared
/// weighted L^rho norm, whose gradient is the normalised duality map.
///
/// All quantities are stored in normalised variables (z / N) so that large
/// exponents such as rho = 101 neither overflow nor underflow.
///
///   gradient   = N * g,         g_i = w_i s_i^{rho/2-1} zhat_i
///   Hessian    = diag(h) + (2 - rho) * g g^T
///                               h_i = w_i s_i^{rho/2-2} ((rho-1) zhat_i^2 + dhat^2)
///
/// where s_i = zhat_i^2 + dhat^2. When the chain rule goes through a sampling
/// matrix L (z = L c), the gradient is N L^T g and the Hessian is
/// L^T diag(h) L + (2 - rho) (L^T g)(L^T g)^T.
struct SmoothedLp {
    double norm = 0.0;           ///< N(z)
    Eigen::VectorXd grad;        ///< g (normalised gradient weights)
    Eigen::VectorXd hess;        ///< h (diagonal Hessian weights)
    double rank_one = 0.0;       ///< 2 - rho, or 0 when N = 0
};

/// Evaluates the smoothed functional data. `weights` must be positive.
///
/// For z = 0 and delta = 0 the Hessian is taken as its limit along delta -> 0,
/// which is the constant weight w_i * meas^{2/rho - 1}; the gradient is zero.
SmoothedLp eval_smoothed_lp(const Eigen::VectorXd& z, const Eigen::VectorXd& weights, double rho,
                            double delta);

/// Only N(z); cheaper than the full evaluation.
double smoothed_lp_norm(const Eigen::VectorXd& z, const Eigen::VectorXd& weights, double rho,
                        double delta);

}  // namespace nlpg
