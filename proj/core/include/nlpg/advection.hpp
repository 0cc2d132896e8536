#pragma once

#include <memory>
#include <vector>

#include "nlpg/diagnostics.hpp"
#include "nlpg/fe_space.hpp"
#include "nlpg/mixed_problem.hpp"
#include "nlpg/solver.hpp"

namespace nlpg {

struct DiracSource {
    double x = 0.0;
    double mass = 1.0;
};

/// beta u' + mu u = f on (a, b) with u = g on the inflow boundary.
struct AdvectionData {
    double a = 0.0;
    double b = 1.0;
    ScalarFunction beta;
    ScalarFunction dbeta;
    ScalarFunction mu;               ///< empty means 0
    ScalarFunction f_smooth;         ///< empty means 0
    std::vector<DiracSource> diracs;
    double g_left = 0.0;             ///< used when beta(a) > 0
    double g_right = 0.0;            ///< used when beta(b) < 0
    ScalarFunction exact;            ///< optional closed-form solution
    std::vector<double> exact_breaks;  ///< points where `exact` is discontinuous

    /// beta = 1/2, mu = 0, f = delta_0, g = -1 on (-1, 1): u = sign(x).
    static AdvectionData heaviside();
    /// beta = 1, mu = 0, f = 2 delta_s, g = -1 on (0, 1): u = sign(x - s).
    static AdvectionData shifted_sign(double s);
    /// beta = 1, mu = 1, f = 1, g = 0 on (0, 1): u = 1 - e^{-x}.
    static AdvectionData smooth_reaction();
};

/// b(w, v) = int w (mu v - (beta v)'), <f, v> = int f v + sum m_k v(x_k) + inflow terms.
/// The test space must vanish at the outflow boundary (ConfigError otherwise).
/// `test_norm` is Graph (default) or LpDerivative; the exponent is q = p/(p-1).
MixedProblem advection_weak_problem(const AdvectionData& data, std::shared_ptr<const FESpace> trial,
                                    std::shared_ptr<const FESpace> test, double p,
                                    NormKind test_norm = NormKind::Graph, const QuadratureRule& rule = {});

struct CellAverageResult {
    DiscreteFunction u_n;
    MixedSolution solution;
    double residual_norm = 0.0;          ///< ||r_m||_V
    double max_average_error = 0.0;      ///< vs analytic averages (if exact is known), else NaN
    double lp_error = 0.0;               ///< ||u - u_n||_p (if exact is known), else NaN
};

/// Solves with U_n = P0 and V_m = S(T_n). For more than 64 elements the
/// two-element local basis of S(T_n) is used.
CellAverageResult cell_average_solve(const AdvectionData& data, const Mesh1D& mesh, double p,
                                     const SolverConfig& cfg = {});

/// |T|^{-1} int_T sign(x - s) for every element.
std::vector<double> sign_cell_averages(const Mesh1D& mesh, double s);

/// Gibbs setting: heaviside() data, trial P1 on n_elem uniform elements of
/// (-1, 1), test P^k vanishing at x = 1 on the mesh refined `test_refine`
/// times, V-norm ||v'||_q.
MixedProblem gibbs_scenario(double p, std::size_t n_elem, int k_test, int test_refine = 1);

/// Limit V_m = V: the best L^p approximation of sign(x) from P1 on the same
/// mesh (the ideal residual minimiser).
DiscreteFunction gibbs_ideal(double p, std::size_t n_elem);

/// max over 1000 samples per element of u_n, minus 1.
double overshoot(const DiscreteFunction& u_n, int samples_per_element = 1000);

}  // namespace nlpg
