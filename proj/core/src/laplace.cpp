#include "nlpg/laplace.hpp"

#include <cmath>
#include <numbers>

#include "nlpg/errors.hpp"
#include "nlpg/lp_geometry.hpp"

namespace nlpg {

LaplaceData LaplaceData::smooth_exp(double p) {
    LaplaceData d;
    d.p = p;
    d.mode = Mode::Smooth;
    const double e = std::numbers::e;
    d.f = [](double x) { return std::exp(x); };
    d.exact_u = [e](double x) { return 1.0 + (e - 1.0) * x - std::exp(x); };
    d.exact_du = [e](double x) { return (e - 1.0) - std::exp(x); };
    return d;
}

LaplaceData LaplaceData::rough(double p, double alpha) {
    if (!(alpha > 0.0)) throw InvalidInput("LaplaceData::rough: alpha must be positive");
    LaplaceData d;
    d.p = p;
    d.mode = Mode::Manufactured;
    d.exact_u = [alpha](double x) { return std::pow(x, alpha) - x; };
    d.exact_du = [alpha](double x) { return alpha * std::pow(x, alpha - 1.0) - 1.0; };
    d.singular_points = {0.0};
    return d;
}

QuadratureRule laplace_rule(const LaplaceData& data) {
    QuadratureRule rule;
    for (double s : data.singular_points) rule.with_singular(s);
    return rule;
}

MixedProblem laplace_problem(const LaplaceData& data, std::shared_ptr<const FESpace> trial,
                             std::shared_ptr<const FESpace> test) {
    if (!(data.p > 1.0)) throw InvalidInput("laplace_problem: need p > 1");
    LinearForm f;
    if (data.mode == LaplaceData::Mode::Smooth) {
        if (!data.f) throw ConfigError("laplace_problem: smooth mode needs a right-hand side");
        f.f0 = data.f;
    } else {
        if (!data.exact_du) throw ConfigError("laplace_problem: manufactured mode needs the derivative of u");
        f.f1 = data.exact_du;
    }
    BilinearForm b;
    b.c11 = [](double) { return 1.0; };
    const QuadratureRule rule = laplace_rule(data);
    MixedProblem prob =
        assemble_mixed_problem(trial, test, b, f, NormSpec::derivative(conjugate(data.p)), rule);
    prob.unorm = sample_norm(NormSpec::derivative(data.p), *trial, rule);
    return prob;
}

LaplaceRow laplace_solve_level(const LaplaceData& data, int k_trial, int k_test, std::size_t n_elem,
                               const SolverConfig& cfg) {
    const Mesh1D mesh = make_uniform_mesh(0.0, 1.0, n_elem);
    auto trial = std::make_shared<const FESpace>(FESpace::continuous(mesh, k_trial, BoundaryCondition::ZeroBoth));
    auto test = std::make_shared<const FESpace>(FESpace::continuous(mesh, k_test, BoundaryCondition::ZeroBoth));
    const MixedProblem prob = laplace_problem(data, trial, test);
    const MixedSolution sol = solve_mixed(prob, cfg);
    const QuadratureRule rule = laplace_rule(data);
    const double q = conjugate(data.p);
    const DiscreteFunction& un = *sol.u_n;
    const DiscreteFunction& rm = *sol.r_m;
    LaplaceRow row;
    row.n_elem = n_elem;
    row.h = 1.0 / static_cast<double>(n_elem);
    row.iterations = sol.iterations;
    if (data.exact_du)
        row.energy_error = lp_norm([&](double x) { return data.exact_du(x) - un.derivative(x); }, mesh, data.p, rule);
    if (data.exact_u)
        row.lp_error = lp_norm([&](double x) { return data.exact_u(x) - un.value(x); }, mesh, data.p, rule);
    row.residual_energy = lp_norm([&](double x) { return rm.derivative(x); }, mesh, q, rule);
    row.residual_lq = lp_norm([&](double x) { return rm.value(x); }, mesh, q, rule);
    return row;
}

LaplaceStudy laplace_convergence_study(const LaplaceData& data, int k_trial, int k_test,
                                       const std::vector<std::size_t>& mesh_list, const SolverConfig& cfg) {
    if (mesh_list.empty()) throw ConfigError("laplace_convergence_study: empty mesh list");
    LaplaceStudy st;
    for (std::size_t n : mesh_list) st.rows.push_back(laplace_solve_level(data, k_trial, k_test, n, cfg));
    if (st.rows.size() >= 3) {
        std::vector<double> h, ee, rr, le;
        for (const auto& r : st.rows) {
            h.push_back(r.h);
            ee.push_back(r.energy_error);
            rr.push_back(r.residual_energy);
            le.push_back(r.lp_error);
        }
        st.energy_rate = estimate_rate(h, ee);
        st.residual_rate = estimate_rate(h, rr);
        st.lp_rate = estimate_rate(h, le);
    }
    return st;
}

}  // namespace nlpg
