#pragma once

// Independent reference computations used to check the library.
//
// Nothing in here calls the library's solvers. The oracles are slow,
// derivative-free and specialised to small problems, which is what makes
// them useful as cross-checks.

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

namespace nlpg::verify {

using Fn1 = std::function<double(double)>;
using FnN = std::function<double(const std::vector<double>&)>;

/// Golden-section search for the minimiser of a unimodal f on [lo, hi].
double golden_section_min(const Fn1& f, double lo, double hi, double xtol = 1e-13);

/// Minimiser of a convex f on the real line: bracket by doubling steps away
/// from x0, then golden-section search.
double convex_min(const Fn1& f, double x0, double step, double xtol = 1e-13);

/// Dense scan of f over [lo, hi] with `samples` points, then golden-section
/// search in the cell around the best sample. Returns the minimiser.
double scan_golden_min(const Fn1& f, double lo, double hi, int samples);

struct Minimum {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

/// Nelder-Mead with restarts from the best vertex (the simplex is rebuilt
/// with a shrinking step), followed by coordinate-wise golden polishing.
Minimum nelder_mead(const FnN& f, std::vector<double> x0, double step, double xtol = 1e-11,
                    int max_eval = 40000);

/// max over theta in [0, pi) of |g(theta)| / n(theta), scanned on `samples`
/// angles and polished by golden-section search. For two-dimensional spaces
/// this is the dual norm of the functional g over span{e1, e2}.
double angle_scan_max(const Fn1& quotient, int samples = 720);

/// Best L^p approximation of sign(x) on (-1, 1) from continuous P1 on
/// n_elem uniform elements (n_elem even). Uses oddness of the minimiser and
/// integrates |linear|^p element by element in closed form. Returns the
/// nodal values on [0, 1] (value at 0 first).
std::vector<double> gibbs_oracle_nodes(double p, std::size_t n_elem);

/// max(w) - 1 for the oracle above.
double gibbs_oracle_overshoot(double p, std::size_t n_elem);

/// Reference values for one row of the graded study with u = x^{1/4} - x.
struct GradedOracle {
    double c_galerkin = 0.0;
    double galerkin = 0.0;     ///< |c_galerkin| ||phi'||_p with c from closed-form integrals
    double best_w1p = 0.0;     ///< min_c ||u' - c phi'||_p by golden section
    double ideal_rm = 0.0;     ///< |c| ||phi'||_p, c from min_c min_k ||u' - c phi' - k||_p
    double inexact_rm = 0.0;   ///< |c| ||phi'||_p, c from min_c of the angle-scan dual norm
    double c_best = 0.0, c_ideal = 0.0, c_inexact = 0.0;
};

/// Uses its own quadrature: x = eps s^16 on [0, eps] and x = e^t on [eps, 1],
/// both with composite Gauss-Legendre panels that are split wherever the
/// integrand's base function changes sign.
GradedOracle graded_oracle(double eps, double p);

/// min over u of ||M^{-T} (F - B u)||_{rho'}: the discrete dual residual norm
/// for a test norm ||M v||_rho with M square and invertible, minimised by
/// Nelder-Mead. Returns the minimising u.
Eigen::VectorXd direct_dual_residual_minimiser(const Eigen::MatrixXd& B, const Eigen::VectorXd& F,
                                               const Eigen::MatrixXd& M, double rho);

/// Plain l_p norm with scaling against overflow.
double lp(const Eigen::VectorXd& v, double p);

}  // namespace nlpg::verify
