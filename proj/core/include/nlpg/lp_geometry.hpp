#pragma once

#include <Eigen/Dense>
#include <vector>

namespace nlpg {

/// Conjugate exponent p / (p - 1). Returns +inf for p = 1.
double conjugate(double p);

/// A vector of R^n carrying the exponent of the l_p norm it is measured in.
struct LpVector {
    std::vector<double> entries;
    double p = 2.0;

    LpVector() = default;
    LpVector(std::vector<double> e, double exponent);

    double norm() const;
    std::size_t size() const { return entries.size(); }
};

/// Normalised duality map of l_p:  J(v)_i = ||v||_p^{2-p} |v_i|^{p-1} sign(v_i).
/// The result lives in l_q with q = p / (p - 1). J(0) = 0.
/// Throws InvalidInput on non-finite entries or p <= 1.
LpVector duality_map_lp(const LpVector& v);

/// Options shared by the l_p best-approximation solvers.
struct BestApproxOptions {
    double tol = 1e-9;             ///< relative optimality tolerance
    int max_newton = 200;          ///< Newton iterations per smoothing level
    double delta_start = 1e-2;     ///< first relative smoothing level
    double delta_end = 1e-10;      ///< last relative smoothing level
    double delta_ratio = 1e-2;     ///< geometric factor between levels
    bool p_continuation = true;    ///< walk the exponent from 2 to p
    double p_ratio = 1.3;          ///< max ratio between successive (p_k - 1)
};

/// Result of a weighted best approximation.
struct WeightedBestApprox {
    Eigen::VectorXd coeffs;
    double distance = 0.0;              ///< unsmoothed weighted ||y - A c||_p
    double optimality_residual = 0.0;   ///< max_j |<J(y - Ac), a_j>| / (||y - Ac|| ||a_j||)
    int iterations = 0;
};

/// Minimises (sum_i w_i |y_i - (A c)_i|^p)^{1/p} over c.
///
/// This is the workhorse behind both the l_p best approximation and the
/// ideal residual minimisers that reduce to an L^p best approximation on
/// sampled data (weights = quadrature weights).
/// Throws DegenerateSubspace if A has (numerically) dependent columns under
/// the weights, and SolverFailure if Newton stalls.
WeightedBestApprox weighted_lp_best_approx(const Eigen::VectorXd& y, const Eigen::MatrixXd& basis,
                                           const Eigen::VectorXd& weights, double p,
                                           const BestApproxOptions& opts = {});

/// Best approximation of y from span(basis) in l_p.
struct BestApprox {
    LpVector y0;
    std::vector<double> coeffs;
    double optimality_residual = 0.0;
};

BestApprox best_approx_lp(const LpVector& y, const std::vector<LpVector>& basis,
                          double tol = 1e-9);

/// Banach-Mazur closed form for l_p: 2^{|2/p - 1|}.
double c_bm(double p);

/// Asymmetric-orthogonality constant of l_p(R^2) via its one-dimensional
/// reduction: a uniform theta grid on [0, pi/2] followed by golden-section
/// polish of the best cell. C_AO(1) = 1, C_AO(2) = 0.
double compute_c_ao(double p, int grid = 10000);

/// Largest ||y0|| / ||y|| over unit y and one-dimensional subspaces of
/// l_p(R^2), where y0 is the best approximation of y. Grid search over the
/// subspace angle and the angle of y, then local refinement.
double compute_c_best(double p, int grid = 721);

struct GeometricConstants {
    double p = 2.0;
    double c_bm = 1.0;
    double c_ao = 0.0;
    double c_best = 1.0;
};

GeometricConstants geometric_constants(double p, int grid_ao = 10000, int grid_best = 721);

/// Ratio ||y0|| / ||y|| together with the two a-priori bounds it must obey.
struct AprioriCheck {
    double ratio = 0.0;
    double bound_bm = 1.0;   ///< C_BM
    double bound_ao = 1.0;   ///< 1 + C_AO
    bool holds(double slack = 1e-6) const;
};

/// `c_ao` may be passed in to avoid recomputing it in loops; a negative value
/// means "compute it".
AprioriCheck check_apriori_bounds(const LpVector& y, const LpVector& y0, double c_ao = -1.0);

}  // namespace nlpg
