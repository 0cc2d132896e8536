#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "nlpg/fe_space.hpp"
#include "nlpg/quadrature.hpp"

namespace nlpg {

enum class NormKind {
    LpValues,       ///< ||v||_rho
    LpDerivative,   ///< ||v'||_rho
    Graph           ///< (||v||_rho^2 + ||(beta v)'||_rho^2)^{1/2}
};

/// Which Banach norm a space carries.
struct NormSpec {
    NormKind kind = NormKind::LpDerivative;
    double rho = 2.0;
    ScalarFunction beta;    ///< graph kind only
    ScalarFunction dbeta;   ///< graph kind only

    static NormSpec values(double rho);
    static NormSpec derivative(double rho);
    static NormSpec graph(double rho, ScalarFunction beta, ScalarFunction dbeta);

    /// Throws InvalidInput if rho <= 1 or a graph norm lacks its coefficient.
    void validate() const;
};

/// One term t of a sampled norm: z = L c are samples of a linear image of the
/// function with coefficients c, and w are the matching quadrature weights.
struct NormTerm {
    Eigen::SparseMatrix<double, Eigen::RowMajor> L;
    Eigen::VectorXd w;
};

/// The norm ||c|| = (sum_t ||L_t c||_{rho,w_t}^2)^{1/2} of a discrete space,
/// with rho stored separately so that exponent continuation only changes a
/// number.
///
/// `duality_map` returns the coefficient vector of J(c) tested against the
/// basis: entry i is <J(c), phi_i>.
struct SampledNorm {
    std::vector<NormTerm> terms;
    double rho = 2.0;

    std::size_t dim() const;
    double norm(const Eigen::VectorXd& c) const;
    Eigen::VectorXd duality_map(const Eigen::VectorXd& c) const;

    /// The same norm with the identity sampling (plain l_rho on coefficients).
    static SampledNorm coefficient_lp(std::size_t dim, double rho);
};

/// Samples `spec` over `space` with `rule` on the space's breakpoints merged
/// with `extra_breaks`.
SampledNorm sample_norm(const NormSpec& spec, const FESpace& space, const QuadratureRule& rule = {},
                        const std::vector<double>& extra_breaks = {});

/// ||v||_V evaluated pointwise from the NormSpec (no sampling matrices).
double spec_norm(const NormSpec& spec, const DiscreteFunction& v, const QuadratureRule& rule = {});

/// <J_V(r), v> evaluated pointwise from the NormSpec. r and v must live on the
/// same mesh interval. Returns 0 for r = 0.
double duality_pairing(const NormSpec& spec, const DiscreteFunction& r, const DiscreteFunction& v,
                       const QuadratureRule& rule = {});

}  // namespace nlpg
