#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <vector>

#include "nlpg/fe_space.hpp"
#include "nlpg/norms.hpp"

namespace nlpg {

/// b(w, v) = int c00 w v + c01 w v' + c10 w' v + c11 w' v'. Empty handles are zero.
struct BilinearForm {
    ScalarFunction c00, c01, c10, c11;
};

/// A point functional weight * v(x).
struct PointLoad {
    double x = 0.0;
    double weight = 1.0;
};

/// <f, v> = int f0 v + f1 v' + sum_k weight_k v(x_k).
struct LinearForm {
    ScalarFunction f0, f1;
    std::vector<PointLoad> points;
};

/// The algebraic form of the discrete mixed system
///
///     J_V(r) + B u = F   on V_m,      B^T r = 0   on U_n,
///
/// with B(i, j) = b(w_j, v_i) and F(i) = <f, v_i>. The trial and test spaces
/// are kept (when known) so that solutions can be evaluated as functions.
struct MixedProblem {
    Eigen::SparseMatrix<double> B;    ///< dim V x dim U
    Eigen::VectorXd F;                ///< dim V
    SampledNorm vnorm;
    std::optional<SampledNorm> unorm; ///< trial norm, for inf-sup diagnostics
    std::shared_ptr<const FESpace> trial;
    std::shared_ptr<const FESpace> test;
    std::optional<NormSpec> vspec;

    std::size_t dim_u() const { return static_cast<std::size_t>(B.cols()); }
    std::size_t dim_v() const { return static_cast<std::size_t>(B.rows()); }

    /// Checks sizes, finiteness and dim V >= dim U.
    void validate() const;
};

/// Builds a problem from raw algebraic data (used by randomised suites).
MixedProblem make_algebraic_problem(Eigen::SparseMatrix<double> B, Eigen::VectorXd F, SampledNorm vnorm);

/// Assembles B and F by quadrature over the merged breakpoints of both spaces.
/// Point loads use continuous evaluation of the test functions.
MixedProblem assemble_mixed_problem(std::shared_ptr<const FESpace> trial, std::shared_ptr<const FESpace> test,
                                    const BilinearForm& b, const LinearForm& f, const NormSpec& vspec,
                                    const QuadratureRule& rule = {},
                                    const std::vector<double>& extra_breaks = {});

/// Vector (<f, v_i>)_i for an arbitrary linear form over `test`.
Eigen::VectorXd assemble_load(const FESpace& test, const LinearForm& f, const QuadratureRule& rule = {},
                              const std::vector<double>& extra_breaks = {});

/// Block residual [J(r) + B u - F ; B^T r] (unsmoothed).
Eigen::VectorXd assemble_mixed_residual(const MixedProblem& prob, const Eigen::VectorXd& r,
                                        const Eigen::VectorXd& u);

/// Dense Jacobian of the delta-smoothed residual at (r, u). The smoothing
/// level is relative: each norm term uses delta * (RMS of its samples), with
/// an absolute floor of delta when the samples vanish.
Eigen::MatrixXd assemble_mixed_jacobian(const MixedProblem& prob, const Eigen::VectorXd& r,
                                        const Eigen::VectorXd& u, double delta);

/// Per-term absolute smoothing levels used by the solvers: delta times the
/// weighted RMS of each term's samples at r (delta itself if r gives zero).
std::vector<double> smoothing_levels(const SampledNorm& norm, const Eigen::VectorXd& r, double delta);

/// Residual and sparse Newton matrix of the smoothed system for given
/// per-term smoothing levels. The dense rank-one part of the Hessian is
/// bordered: one extra unknown per term with a nonzero rank-one coefficient.
struct SmoothedSystem {
    Eigen::VectorXd residual;                 ///< length dim V + dim U
    Eigen::SparseMatrix<double> matrix;       ///< square, bordered
    std::size_t n_border = 0;
};
SmoothedSystem smoothed_system(const MixedProblem& prob, const Eigen::VectorXd& r, const Eigen::VectorXd& u,
                               const std::vector<double>& deltas, bool with_matrix = true);

}  // namespace nlpg
