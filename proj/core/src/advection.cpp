#include "nlpg/advection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlpg/errors.hpp"
#include "nlpg/lp_geometry.hpp"

namespace nlpg {

AdvectionData AdvectionData::heaviside() {
    AdvectionData d;
    d.a = -1.0;
    d.b = 1.0;
    d.beta = [](double) { return 0.5; };
    d.dbeta = [](double) { return 0.0; };
    d.diracs = {{0.0, 1.0}};
    d.g_left = -1.0;
    d.exact = [](double x) { return x < 0.0 ? -1.0 : (x > 0.0 ? 1.0 : 0.0); };
    d.exact_breaks = {0.0};
    return d;
}

AdvectionData AdvectionData::shifted_sign(double s) {
    AdvectionData d;
    d.a = 0.0;
    d.b = 1.0;
    d.beta = [](double) { return 1.0; };
    d.dbeta = [](double) { return 0.0; };
    d.diracs = {{s, 2.0}};
    d.g_left = -1.0;
    d.exact = [s](double x) { return x < s ? -1.0 : (x > s ? 1.0 : 0.0); };
    d.exact_breaks = {s};
    return d;
}

AdvectionData AdvectionData::smooth_reaction() {
    AdvectionData d;
    d.a = 0.0;
    d.b = 1.0;
    d.beta = [](double) { return 1.0; };
    d.dbeta = [](double) { return 0.0; };
    d.mu = [](double) { return 1.0; };
    d.f_smooth = [](double) { return 1.0; };
    d.g_left = 0.0;
    d.exact = [](double x) { return 1.0 - std::exp(-x); };
    return d;
}

MixedProblem advection_weak_problem(const AdvectionData& data, std::shared_ptr<const FESpace> trial,
                                    std::shared_ptr<const FESpace> test, double p, NormKind test_norm,
                                    const QuadratureRule& rule) {
    if (!data.beta || !data.dbeta) throw InvalidInput("advection_weak_problem: beta and its derivative are required");
    if (!(p > 1.0)) throw InvalidInput("advection_weak_problem: need p > 1");
    const double ba = data.beta(data.a), bb = data.beta(data.b);
    if (bb > 0.0 && !test->vanishes_at(data.b))
        throw ConfigError("advection_weak_problem: test functions must vanish at the outflow boundary x = b");
    if (ba < 0.0 && !test->vanishes_at(data.a))
        throw ConfigError("advection_weak_problem: test functions must vanish at the outflow boundary x = a");

    BilinearForm b;
    const auto beta = data.beta, dbeta = data.dbeta, mu = data.mu;
    b.c00 = [mu, dbeta](double x) { return (mu ? mu(x) : 0.0) - dbeta(x); };
    b.c01 = [beta](double x) { return -beta(x); };

    LinearForm f;
    f.f0 = data.f_smooth;
    for (const auto& d : data.diracs) f.points.push_back({d.x, d.mass});
    if (ba > 0.0 && data.g_left != 0.0) f.points.push_back({data.a, data.g_left * std::abs(ba)});
    if (bb < 0.0 && data.g_right != 0.0) f.points.push_back({data.b, data.g_right * std::abs(bb)});

    const double q = conjugate(p);
    const NormSpec spec = test_norm == NormKind::Graph ? NormSpec::graph(q, data.beta, data.dbeta)
                          : test_norm == NormKind::LpDerivative ? NormSpec::derivative(q)
                                                                 : NormSpec::values(q);
    MixedProblem prob = assemble_mixed_problem(trial, test, b, f, spec, rule);
    prob.unorm = sample_norm(NormSpec::values(p), *trial, rule);
    return prob;
}

std::vector<double> sign_cell_averages(const Mesh1D& mesh, double s) {
    std::vector<double> out(mesh.n_elem());
    for (std::size_t e = 0; e < mesh.n_elem(); ++e) {
        const double lo = mesh.left(e), hi = mesh.right(e);
        const double pos = std::max(0.0, hi - std::max(lo, s));
        const double neg = std::max(0.0, std::min(hi, s) - lo);
        out[e] = (pos - neg) / (hi - lo);
    }
    return out;
}

CellAverageResult cell_average_solve(const AdvectionData& data, const Mesh1D& mesh, double p, const SolverConfig& cfg) {
    auto trial = std::make_shared<const FESpace>(FESpace::piecewise_constant(mesh));
    const bool local = mesh.n_elem() > 64;
    auto test = std::make_shared<const FESpace>(build_ideal_advection_test_space(mesh, data.beta, data.dbeta, local));
    const MixedProblem prob = advection_weak_problem(data, trial, test, p, NormKind::Graph);
    MixedSolution sol = solve_mixed(prob, cfg);
    CellAverageResult out{DiscreteFunction(trial, sol.u), sol, prob.vnorm.norm(sol.r),
                          std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    if (data.exact) {
        std::vector<double> nodes = mesh.nodes();
        nodes.insert(nodes.end(), data.exact_breaks.begin(), data.exact_breaks.end());
        QuadratureRule rule;
        const Mesh1D fine(merge_breakpoints({nodes}, rule));
        double worst = 0.0;
        for (std::size_t e = 0; e < mesh.n_elem(); ++e) {
            std::vector<double> cell{mesh.left(e), mesh.right(e)};
            for (double x : data.exact_breaks)
                if (x > cell[0] && x < cell[1]) cell.insert(cell.begin() + 1, x);
            const double avg = integrate(data.exact, cell, rule) / mesh.h(e);
            worst = std::max(worst, std::abs(avg - sol.u[static_cast<Eigen::Index>(e)]));
        }
        out.max_average_error = worst;
        const DiscreteFunction& un = out.u_n;
        const auto exact = data.exact;
        out.lp_error = lp_norm([&un, exact](double x) { return exact(x) - un.value(x); }, fine, p, rule);
    }
    return out;
}

MixedProblem gibbs_scenario(double p, std::size_t n_elem, int k_test, int test_refine) {
    if (k_test < 1) throw InvalidInput("gibbs_scenario: test degree must be >= 1");
    const AdvectionData data = AdvectionData::heaviside();
    const Mesh1D mesh = make_uniform_mesh(data.a, data.b, n_elem);
    auto trial = std::make_shared<const FESpace>(FESpace::continuous(mesh, 1));
    auto test = std::make_shared<const FESpace>(
        FESpace::continuous(mesh.refined(test_refine), k_test, BoundaryCondition::ZeroRight));
    return advection_weak_problem(data, trial, test, p, NormKind::LpDerivative);
}

DiscreteFunction gibbs_ideal(double p, std::size_t n_elem) {
    const Mesh1D mesh = make_uniform_mesh(-1.0, 1.0, n_elem);
    auto trial = std::make_shared<const FESpace>(FESpace::continuous(mesh, 1));
    const std::vector<double> nodes = mesh.nodes();
    std::vector<double> crossings;
    Eigen::VectorXd coeffs;
    // The residual sign(x) - w is linear on each element, so |.|^p is smooth
    // away from its zeros. Those zeros depend on the answer, hence the fixed
    // point: solve, grade the rule at the zeros, solve again.
    for (int pass = 0; pass < 8; ++pass) {
        QuadratureRule rule;
        rule.with_singular(0.0);
        for (double z : crossings) rule.with_singular(z);
        std::vector<double> breaks = nodes;
        breaks.push_back(0.0);
        const QuadPoints q = quadrature_points(merge_breakpoints({breaks}, rule), rule);
        const Eigen::Index n = static_cast<Eigen::Index>(q.size());
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(trial->dim()));
        Eigen::VectorXd y(n), w(n);
        std::vector<BasisEntry> ev;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = q.x[static_cast<std::size_t>(i)];
            trial->evaluate(x, ev);
            for (const auto& e : ev) A(i, static_cast<Eigen::Index>(e.dof)) = e.value;
            y[i] = x < 0.0 ? -1.0 : 1.0;
            w[i] = q.w[static_cast<std::size_t>(i)];
        }
        const Eigen::VectorXd next = weighted_lp_best_approx(y, A, w, p).coeffs;
        const bool settled = coeffs.size() == next.size() && (coeffs - next).cwiseAbs().maxCoeff() < 1e-13;
        coeffs = next;
        if (settled) break;

        crossings.clear();
        for (std::size_t e = 0; e < mesh.n_elem(); ++e) {
            const double lo = mesh.left(e), hi = mesh.right(e);
            const double s = 0.5 * (lo + hi) < 0.0 ? -1.0 : 1.0;
            // P1 with no boundary conditions: dof e sits at node e.
            const double ra = s - coeffs[static_cast<Eigen::Index>(e)];
            const double rb = s - coeffs[static_cast<Eigen::Index>(e + 1)];
            if (ra * rb < 0.0) crossings.push_back(lo + (hi - lo) * ra / (ra - rb));
        }
    }
    return DiscreteFunction(trial, coeffs);
}

double overshoot(const DiscreteFunction& u_n, int samples_per_element) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < u_n.space().mesh().n_elem(); ++e)
        for (double v : u_n.element_samples(e, samples_per_element)) mx = std::max(mx, v);
    return mx - 1.0;
}

}  // namespace nlpg
