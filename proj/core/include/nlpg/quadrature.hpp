#pragma once

#include <functional>
#include <vector>

#include "nlpg/mesh.hpp"

namespace nlpg {

using ScalarFunction = std::function<double(double)>;

/// Gauss-Legendre nodes and weights on [-1, 1]. Cached per order.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussLegendre& gauss_legendre(int order);

/// A point toward which cells are graded.
struct SingularPoint {
    double x = 0.0;
    int levels = -1;   ///< dyadic levels; -1 uses QuadratureRule::levels
};

/// Composite quadrature description.
///
/// Every cell gets `order` Gauss-Legendre points. Cells that touch a singular
/// point are split dyadically toward it (`levels` times); the innermost piece
/// uses the substitution x = s + H t^m (m = `substitution_power`) so that
/// integrable power singularities |x - s|^{-a}, a < 1, are resolved.
struct QuadratureRule {
    int order = 10;
    int levels = 12;
    int substitution_power = 16;
    std::vector<SingularPoint> singular;

    QuadratureRule& with_singular(double x, int lv = -1) {
        singular.push_back({x, lv});
        return *this;
    }
};

/// Flattened list of points, weights and the cell each point came from.
struct QuadPoints {
    std::vector<double> x;
    std::vector<double> w;
    std::vector<std::size_t> cell;   ///< index into the merged breakpoint list
    std::size_t size() const { return x.size(); }
};

/// Sorted union of breakpoint lists and singular points inside [lo, hi],
/// with points that agree to a few ulps merged.
std::vector<double> merge_breakpoints(const std::vector<std::vector<double>>& lists,
                                      const QuadratureRule& rule);

/// Points of `rule` on the partition `breaks` (sorted, at least 2 entries).
QuadPoints quadrature_points(const std::vector<double>& breaks, const QuadratureRule& rule);

/// Integral of f over the partition.
double integrate(const ScalarFunction& f, const std::vector<double>& breaks,
                 const QuadratureRule& rule = {});

/// (int |f|^p)^{1/p} over the mesh; throws InvalidInput naming the element
/// if a sample is not finite.
double lp_norm(const ScalarFunction& f, const Mesh1D& mesh, double p,
               const QuadratureRule& rule = {});

}  // namespace nlpg
