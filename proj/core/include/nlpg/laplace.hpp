#pragma once

#include <memory>
#include <vector>

#include "nlpg/fe_space.hpp"
#include "nlpg/mixed_problem.hpp"
#include "nlpg/solver.hpp"

namespace nlpg {

/// -u'' = f on (0, 1), u(0) = u(1) = 0, trial in W^{1,p}_0, test in W^{1,q}_0.
struct LaplaceData {
    enum class Mode { Smooth, Manufactured };

    double p = 1.5;
    Mode mode = Mode::Smooth;
    ScalarFunction f;          ///< smooth mode: <f, v> = int f v
    ScalarFunction exact_u;
    ScalarFunction exact_du;   ///< manufactured mode: <f, v> = int u' v'
    std::vector<double> singular_points;  ///< where u' may blow up

    /// f = e^x, u = 1 + (e - 1) x - e^x.
    static LaplaceData smooth_exp(double p);
    /// u = x^alpha - x with the weak right-hand side int u' v'.
    static LaplaceData rough(double p, double alpha);
};

/// b(w, v) = int w' v'; V-norm ||v'||_q; trial norm ||w'||_p (for inf-sup).
/// Throws ConfigError in manufactured mode without a derivative handle.
MixedProblem laplace_problem(const LaplaceData& data, std::shared_ptr<const FESpace> trial,
                             std::shared_ptr<const FESpace> test);

/// Quadrature rule that resolves the data's singular points.
QuadratureRule laplace_rule(const LaplaceData& data);

struct LaplaceRow {
    std::size_t n_elem = 0;
    double h = 0.0;
    double energy_error = 0.0;     ///< ||u' - u_n'||_p
    double residual_energy = 0.0;  ///< ||r_m'||_q
    double lp_error = 0.0;         ///< ||u - u_n||_p
    double residual_lq = 0.0;      ///< ||r_m||_q
    int iterations = 0;
};

struct LaplaceStudy {
    std::vector<LaplaceRow> rows;
    RateFit energy_rate;
    RateFit residual_rate;
    RateFit lp_rate;
};

/// Uniform meshes with the given element counts, trial P^k_trial and test
/// P^k_test, both vanishing at 0 and 1.
LaplaceRow laplace_solve_level(const LaplaceData& data, int k_trial, int k_test, std::size_t n_elem,
                               const SolverConfig& cfg = {});
LaplaceStudy laplace_convergence_study(const LaplaceData& data, int k_trial, int k_test,
                                       const std::vector<std::size_t>& mesh_list, const SolverConfig& cfg = {});

}  // namespace nlpg
