#pragma once

#include <vector>

#include "nlpg/mixed_problem.hpp"
#include "nlpg/quadrature.hpp"
#include "nlpg/solver.hpp"

namespace nlpg {

/// One row of the graded-basis comparison for u = x^{1/4} - x and
/// U_eps = span{phi_eps}. Every norm column is ||(c phi_eps)'||_p for the
/// coefficient c the respective method picks.
struct GradedRow {
    double eps = 0.0;
    double galerkin = 0.0;       ///< H^1_0 projection
    double best_w1p = 0.0;       ///< argmin_c ||u' - c phi'||_p
    double ideal_rm = 0.0;       ///< exact residual minimiser: argmin_{c,k} ||u' - c phi' - k||_p
    double inexact_rm = 0.0;     ///< mixed method with V_m = span{phi_eps, x(1-x)}
    double c_galerkin = 0.0, c_best = 0.0, c_ideal = 0.0, kappa_ideal = 0.0, c_inexact = 0.0;
    double infsup_galerkin = 0.0;  ///< discrete inf-sup of (U_eps, U_eps)
    double infsup_enriched = 0.0;  ///< discrete inf-sup of (U_eps, V_eps)
};

/// Quadrature resolving x = 0 and the kink of phi_eps at eps.
QuadratureRule graded_rule(double eps);

/// The exact solution data of the graded scenario.
double graded_exact_u(double x);
double graded_exact_du(double x);

/// Mixed problem with U = span{phi_eps}; V = span{phi_eps} or
/// span{phi_eps, x(1-x)}. Trial norm ||w'||_p is attached.
MixedProblem graded_problem(double eps, double p, bool enriched);

GradedRow graded_instability_row(double eps, double p, const SolverConfig& cfg = {});
std::vector<GradedRow> graded_instability_study(const std::vector<double>& eps_list, double p,
                                                const SolverConfig& cfg = {});

/// eps_i = 0.5 * 10^{-i}, i = 0..count-1.
std::vector<double> default_graded_sweep(int count = 16);

}  // namespace nlpg
