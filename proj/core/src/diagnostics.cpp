#include "nlpg/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "nlpg/errors.hpp"

namespace nlpg {

Eigen::VectorXd dual_representer(const SampledNorm& vnorm, const Eigen::VectorXd& g, const SolverConfig& cfg) {
    if (static_cast<std::size_t>(g.size()) != vnorm.dim()) throw InvalidInput("dual_representer: size mismatch");
    Eigen::SparseMatrix<double> B(g.size(), 0);
    const MixedProblem p = make_algebraic_problem(std::move(B), g, vnorm);
    return solve_mixed(p, cfg).r;
}

double discrete_dual_norm(const SampledNorm& vnorm, const Eigen::VectorXd& g, const SolverConfig& cfg) {
    if (g.norm() == 0.0) return 0.0;
    return vnorm.norm(dual_representer(vnorm, g, cfg));
}

double discrete_dual_norm(const MixedProblem& prob, const Eigen::VectorXd& g, const SolverConfig& cfg) {
    return discrete_dual_norm(prob.vnorm, g, cfg);
}

double aposteriori_bound(const MixedProblem& prob, const MixedSolution& sol, double gamma_B, double c_pi, double osc) {
    if (!(gamma_B > 0.0) || !(c_pi > 0.0) || !(osc >= 0.0))
        throw InvalidInput("aposteriori_bound: need gamma_B > 0, c_pi > 0, osc >= 0");
    return osc / gamma_B + (c_pi / gamma_B) * prob.vnorm.norm(sol.r);
}

InfSupResult discrete_infsup(const MixedProblem& prob, int samples, std::uint64_t seed, const SolverConfig& cfg) {
    if (!prob.unorm) throw InvalidInput("discrete_infsup: the problem has no trial norm");
    if (samples < 1) throw InvalidInput("discrete_infsup: need at least one sample");
    const Eigen::Index n = static_cast<Eigen::Index>(prob.dim_u());
    if (n == 0) throw InvalidInput("discrete_infsup: empty trial space");
    InfSupResult out;
    auto quotient = [&](const Eigen::VectorXd& w) {
        ++out.evaluations;
        const double wn = prob.unorm->norm(w);
        if (wn == 0.0) return std::numeric_limits<double>::infinity();
        return discrete_dual_norm(prob.vnorm, prob.B * w, cfg) / wn;
    };
    auto normalise = [&](Eigen::VectorXd w) { return Eigen::VectorXd(w / prob.unorm->norm(w)); };

    if (n == 1) {
        out.minimiser = normalise(Eigen::VectorXd::Ones(1));
        out.value = quotient(out.minimiser);
        return out;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXd best;
    double best_val = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) w[i] = nd(rng);
        if (w.norm() == 0.0) continue;
        w = normalise(w);
        const double v = quotient(w);
        if (v < best_val) {
            best_val = v;
            best = w;
        }
    }
    // Compass search on the sphere.
    double step = 0.25;
    while (step > 1e-5) {
        bool improved = false;
        for (Eigen::Index i = 0; i < n && !improved; ++i) {
            for (double sgn : {1.0, -1.0}) {
                Eigen::VectorXd w = best;
                w[i] += sgn * step * (best.cwiseAbs().maxCoeff());
                if (prob.unorm->norm(w) == 0.0) continue;
                w = normalise(w);
                const double v = quotient(w);
                if (v < best_val) {
                    best_val = v;
                    best = w;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    out.value = best_val;
    out.minimiser = best;
    return out;
}

}  // namespace nlpg
