#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "nlpg/mesh.hpp"
#include "nlpg/quadrature.hpp"

namespace nlpg {

enum class Family { ContinuousPk, DiscontinuousP0, Custom };

enum class BoundaryCondition { None, ZeroLeft, ZeroRight, ZeroBoth };

/// A basis function given in closed form.
struct CustomBasisFunction {
    ScalarFunction value;
    ScalarFunction derivative;
    double support_lo = 0.0;          ///< zero outside [support_lo, support_hi]
    double support_hi = 0.0;
    std::vector<double> breakpoints;  ///< interior points where the function is not smooth
    std::vector<double> jumps;        ///< points where the function itself is discontinuous
};

/// One nonzero basis function at a point.
struct BasisEntry {
    std::size_t dof;
    double value;
    double deriv;
};

/// A finite element space on a 1-D mesh.
///
/// Continuous P^k uses a hierarchical basis: vertex hats (numbered left to
/// right, constrained vertices skipped) followed by integrated-Legendre
/// bubbles, k - 1 per element, appended element by element.
class FESpace {
public:
    static FESpace continuous(Mesh1D mesh, int degree, BoundaryCondition bc = BoundaryCondition::None);
    static FESpace piecewise_constant(Mesh1D mesh);
    /// Throws DegenerateSubspace if the functions are numerically dependent
    /// (checked through the conditioning of their H^1 Gram matrix, for up to
    /// 400 functions).
    static FESpace custom(Mesh1D mesh, std::vector<CustomBasisFunction> basis);

    Family family() const noexcept { return family_; }
    int degree() const noexcept { return degree_; }
    BoundaryCondition bc() const noexcept { return bc_; }
    const Mesh1D& mesh() const noexcept { return mesh_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<CustomBasisFunction>& custom_basis() const noexcept { return custom_; }

    /// Writes the nonzero basis functions at x into `out` (cleared first).
    /// At a point where functions may jump, `side` selects the one-sided
    /// limit: +1 from the right, -1 from the left.
    void evaluate(double x, std::vector<BasisEntry>& out, int side = +1) const;

    /// Mesh nodes plus every point where some basis function is not smooth.
    std::vector<double> breakpoints() const;
    /// Points where basis functions may be discontinuous.
    std::vector<double> discontinuities() const;

    /// Whether every basis function vanishes at x (used to check boundary
    /// conditions of test spaces).
    bool vanishes_at(double x) const;

private:
    FESpace(Mesh1D mesh) : mesh_(std::move(mesh)) {}
    void build_custom_index();

    Mesh1D mesh_;
    Family family_ = Family::ContinuousPk;
    int degree_ = 1;
    BoundaryCondition bc_ = BoundaryCondition::None;
    std::size_t dim_ = 0;
    std::vector<long> node_dof_;     ///< vertex -> dof, -1 if constrained
    std::size_t n_vertex_dofs_ = 0;
    std::vector<CustomBasisFunction> custom_;
    std::vector<double> custom_cells_;                 ///< partition for the active lists
    std::vector<std::vector<std::size_t>> active_;     ///< functions touching each cell
};

/// Coefficients over an FESpace.
class DiscreteFunction {
public:
    DiscreteFunction(std::shared_ptr<const FESpace> space, Eigen::VectorXd coeffs);

    const FESpace& space() const noexcept { return *space_; }
    std::shared_ptr<const FESpace> space_ptr() const noexcept { return space_; }
    const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }

    double value(double x, int side = +1) const;
    double derivative(double x, int side = +1) const;
    /// `n` equally spaced samples of the value on element e, endpoints included.
    std::vector<double> element_samples(std::size_t e, int n) const;

private:
    std::shared_ptr<const FESpace> space_;
    Eigen::VectorXd coeffs_;
};

/// Interpolant of f. Continuous P^k: vertex values plus, on each element,
/// collocation at the k - 1 interior Gauss-Legendre points. P0: cell averages.
/// Custom spaces are not supported (InvalidInput).
DiscreteFunction interpolate(std::shared_ptr<const FESpace> space, const ScalarFunction& f);

/// The ideal test space S(T_n) of the 1-D advection operator with field beta:
/// one function per element solving -(beta v_j)' = chi_{T_j} with the
/// outflow condition. Supports one-signed beta and beta that decreases
/// through a single zero (two inflow boundaries).
///
/// `local` selects the equivalent basis v_1/h_1, v_j/h_j - v_{j-1}/h_{j-1}
/// whose members are supported on at most two elements (one-signed beta
/// only). Throws SingularCoefficient when beta vanishes without the
/// two-inflow structure.
FESpace build_ideal_advection_test_space(const Mesh1D& mesh, const ScalarFunction& beta,
                                         const ScalarFunction& dbeta, bool local = false);

/// span{phi_eps} on (0,1): phi = (eps^{-1/3} - 1) x on [0, eps], x^{2/3} - x beyond.
FESpace build_graded_basis(double eps);

/// span{phi_eps, x(1 - x)}.
FESpace build_graded_enriched_basis(double eps);

}  // namespace nlpg
