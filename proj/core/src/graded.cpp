#include "nlpg/graded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "nlpg/diagnostics.hpp"
#include "nlpg/errors.hpp"
#include "nlpg/fe_space.hpp"
#include "nlpg/lp_geometry.hpp"

namespace nlpg {

double graded_exact_u(double x) { return std::pow(x, 0.25) - x; }
double graded_exact_du(double x) { return 0.25 * std::pow(x, -0.75) - 1.0; }

QuadratureRule graded_rule(double eps) {
    QuadratureRule rule;
    rule.with_singular(0.0);
    // Resolve the scale eps on both sides of the kink.
    const int levels = static_cast<int>(std::ceil(std::log2(1.0 / eps))) + 8;
    rule.with_singular(eps, levels);
    // phi' vanishes at (2/3)^3; |phi'|^p behaves like a power of the distance there.
    if (8.0 / 27.0 > eps) rule.with_singular(8.0 / 27.0);
    return rule;
}

MixedProblem graded_problem(double eps, double p, bool enriched) {
    auto trial = std::make_shared<const FESpace>(build_graded_basis(eps));
    auto test = std::make_shared<const FESpace>(enriched ? build_graded_enriched_basis(eps) : build_graded_basis(eps));
    const QuadratureRule rule = graded_rule(eps);
    BilinearForm b;
    b.c11 = [](double) { return 1.0; };
    LinearForm f;
    f.f1 = graded_exact_du;
    MixedProblem prob = assemble_mixed_problem(trial, test, b, f, NormSpec::derivative(conjugate(p)), rule);
    prob.unorm = sample_norm(NormSpec::derivative(p), *trial, rule);
    return prob;
}

namespace {

struct GradedSamples {
    std::vector<double> x;
    Eigen::VectorXd du, dphi, w;
};

GradedSamples sample_graded(const FESpace& phi_space, const QuadratureRule& rule) {
    const QuadPoints q = quadrature_points(merge_breakpoints({phi_space.breakpoints()}, rule), rule);
    const Eigen::Index n = static_cast<Eigen::Index>(q.size());
    GradedSamples s;
    s.x = q.x;
    s.du.resize(n);
    s.dphi.resize(n);
    s.w.resize(n);
    std::vector<BasisEntry> ev;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = q.x[static_cast<std::size_t>(i)];
        phi_space.evaluate(x, ev);
        s.dphi[i] = ev.front().deriv;
        s.du[i] = graded_exact_du(x);
        s.w[i] = q.w[static_cast<std::size_t>(i)];
    }
    return s;
}

// Zeros of g located between neighbouring sample points, refined by bisection.
std::vector<double> sign_changes(std::vector<double> x, const ScalarFunction& g) {
    std::sort(x.begin(), x.end());
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double lo = x[i], hi = x[i + 1], glo = g(lo);
        const double ghi = g(hi);
        if (!((glo < 0.0 && ghi > 0.0) || (glo > 0.0 && ghi < 0.0))) continue;
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
            const double mid = 0.5 * (lo + hi), gm = g(mid);
            if ((gm < 0.0) == (glo < 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

// Weighted L^p best approximation of u' from span{phi', extra columns},
// re-solved with the quadrature graded toward the zeros of the residual until
// the coefficients settle. Left unresolved, the kink of |residual|^p inside
// a cell costs about three digits.
WeightedBestApprox kink_resolved_fit(const FESpace& phi_space, const QuadratureRule& rule, double p, bool with_constant) {
    std::vector<double> crossings;
    WeightedBestApprox best;
    Eigen::VectorXd prev;
    std::vector<BasisEntry> ev;
    for (int pass = 0; pass < 8; ++pass) {
        QuadratureRule r = rule;
        for (double x : crossings) r.with_singular(x);
        const GradedSamples s = sample_graded(phi_space, r);
        Eigen::MatrixXd A(s.dphi.size(), with_constant ? 2 : 1);
        A.col(0) = s.dphi;
        if (with_constant) A.col(1).setOnes();
        best = weighted_lp_best_approx(s.du, A, s.w, p);
        if (prev.size() && (best.coeffs - prev).cwiseAbs().maxCoeff() <= 1e-13 * best.coeffs.cwiseAbs().maxCoeff()) break;
        prev = best.coeffs;
        const Eigen::VectorXd c = best.coeffs;
        crossings = sign_changes(s.x, [&](double x) {
            phi_space.evaluate(x, ev);
            return graded_exact_du(x) - c[0] * ev.front().deriv - (with_constant ? c[1] : 0.0);
        });
    }
    return best;
}

}  // namespace

GradedRow graded_instability_row(double eps, double p, const SolverConfig& cfg) {
    GradedRow row;
    row.eps = eps;
    const QuadratureRule rule = graded_rule(eps);
    const FESpace phi_space = build_graded_basis(eps);
    const GradedSamples s = sample_graded(phi_space, rule);
    const double phi_norm = std::pow((s.w.array() * s.dphi.array().abs().pow(p)).sum(), 1.0 / p);

    row.c_galerkin =
        (s.w.array() * s.du.array() * s.dphi.array()).sum() / (s.w.array() * s.dphi.array().square()).sum();
    row.galerkin = std::abs(row.c_galerkin) * phi_norm;

    row.c_best = kink_resolved_fit(phi_space, rule, p, false).coeffs[0];
    row.best_w1p = std::abs(row.c_best) * phi_norm;

    const WeightedBestApprox ideal = kink_resolved_fit(phi_space, rule, p, true);
    row.c_ideal = ideal.coeffs[0];
    row.kappa_ideal = ideal.coeffs[1];
    row.ideal_rm = std::abs(row.c_ideal) * phi_norm;

    const MixedProblem enriched = graded_problem(eps, p, true);
    const MixedSolution sol = solve_mixed(enriched, cfg);
    row.c_inexact = sol.u[0];
    row.inexact_rm = std::abs(row.c_inexact) * phi_norm;

    row.infsup_galerkin = discrete_infsup(graded_problem(eps, p, false), 1, 1, cfg).value;
    row.infsup_enriched = discrete_infsup(enriched, 1, 1, cfg).value;
    return row;
}

std::vector<GradedRow> graded_instability_study(const std::vector<double>& eps_list, double p, const SolverConfig& cfg) {
    if (eps_list.empty()) throw ConfigError("graded_instability_study: empty eps list");
    std::vector<GradedRow> rows;
    for (double e : eps_list) rows.push_back(graded_instability_row(e, p, cfg));
    return rows;
}

std::vector<double> default_graded_sweep(int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(0.5 * std::pow(10.0, -i));
    return out;
}

}  // namespace nlpg
