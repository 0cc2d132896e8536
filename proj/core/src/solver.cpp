#include "nlpg/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

#include "nlpg/continuation.hpp"
#include "nlpg/errors.hpp"
#include "nlpg/lp_geometry.hpp"
#include "nlpg/smoothed_lp.hpp"

namespace nlpg {

void SolverConfig::validate() const {
    if (!(newton_tol > 0.0)) throw InvalidInput("SolverConfig: newton_tol must be > 0");
    if (max_iter < 1) throw InvalidInput("SolverConfig: max_iter must be >= 1");
    if (!(delta_start >= delta_end) || !(delta_end > 0.0))
        throw InvalidInput("SolverConfig: need delta_start >= delta_end > 0");
    if (!(delta_ratio > 0.0 && delta_ratio < 1.0)) throw InvalidInput("SolverConfig: delta_ratio in (0,1)");
    if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0)) throw InvalidInput("SolverConfig: shrink in (0,1)");
    if (!(line_search.min_step > 0.0)) throw InvalidInput("SolverConfig: min_step must be > 0");
    if (!(p_ratio > 1.0)) throw InvalidInput("SolverConfig: p_ratio must exceed 1");
    for (std::size_t i = 0; i < p_path.size(); ++i) {
        if (!(p_path[i] > 1.0) || !std::isfinite(p_path[i])) throw InvalidInput("SolverConfig: path exponents must be > 1");
        if (i > 0 && (p_path[i] - 2.0) * (p_path[i - 1] - 2.0) < 0.0)
            throw InvalidInput("SolverConfig: exponent path must stay on one side of 2");
        if (i > 0 && std::abs(p_path[i] - 2.0) < std::abs(p_path[i - 1] - 2.0))
            throw InvalidInput("SolverConfig: exponent path must move monotonically away from 2");
    }
}

std::vector<double> solver_path(const MixedProblem& prob, const SolverConfig& cfg) {
    const double rho = prob.vnorm.rho;
    const double p = rho == 2.0 ? 2.0 : conjugate(rho);
    if (cfg.p_path.empty()) return exponent_path(p, cfg.p_ratio);
    std::vector<double> path = cfg.p_path;
    if (std::abs(path.back() - p) > 1e-12 * p) path.push_back(p);
    else path.back() = p;
    return path;
}

namespace {

double exponent_to_rho(double p) { return p == 2.0 ? 2.0 : conjugate(p); }

struct LevelOutcome {
    int iterations = 0;
    bool stalled = false;
    double residual = 0.0;
};

// Newton with backtracking on ||F||^2 for fixed exponent and smoothing.
LevelOutcome newton_level(const MixedProblem& prob, Eigen::VectorXd& r, Eigen::VectorXd& u,
                          const std::vector<double>& deltas, double tol_abs, int max_iter, const LineSearch& ls,
                          double p_stage) {
    const Eigen::Index m = r.size(), n = u.size();
    LevelOutcome out;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    for (; out.iterations < max_iter; ++out.iterations) {
        const SmoothedSystem sys = smoothed_system(prob, r, u, deltas, true);
        const double res = sys.residual.norm();
        out.residual = res;
        if (res <= tol_abs) return out;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.matrix.rows());
        rhs.head(m + n) = -sys.residual;
        lu.compute(sys.matrix);
        if (lu.info() != Eigen::Success) {
            std::vector<double> it(r.data(), r.data() + m);
            it.insert(it.end(), u.data(), u.data() + n);
            throw SolverFailure("solve_mixed: singular Newton matrix (" + lu.lastErrorMessage() + ")", it, res,
                                deltas.empty() ? 0.0 : deltas.front(), p_stage);
        }
        const Eigen::VectorXd d = lu.solve(rhs);
        if (!d.allFinite()) {
            std::vector<double> it(r.data(), r.data() + m);
            it.insert(it.end(), u.data(), u.data() + n);
            throw SolverFailure("solve_mixed: non-finite Newton step", it, res, deltas.empty() ? 0.0 : deltas.front(),
                                p_stage);
        }
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= ls.min_step) {
            const Eigen::VectorXd rt = r + alpha * d.head(m);
            const Eigen::VectorXd ut = u + alpha * d.segment(m, n);
            const double rt_res = smoothed_system(prob, rt, ut, deltas, false).residual.norm();
            if (rt_res * rt_res <= (1.0 - 2.0 * ls.sufficient_decrease * alpha) * res * res) {
                r = rt;
                u = ut;
                accepted = true;
                break;
            }
            alpha *= ls.shrink;
        }
        if (!accepted) {
            out.stalled = true;
            return out;
        }
    }
    out.residual = smoothed_system(prob, r, u, deltas, false).residual.norm();
    out.stalled = out.residual > tol_abs;
    return out;
}

void attach_functions(const MixedProblem& prob, MixedSolution& sol) {
    if (prob.test) sol.r_m.emplace(prob.test, sol.r);
    if (prob.trial) sol.u_n.emplace(prob.trial, sol.u);
}

[[noreturn]] void fail(const std::string& what, const Eigen::VectorXd& r, const Eigen::VectorXd& u, double res,
                       double delta, double p) {
    std::vector<double> it(r.data(), r.data() + r.size());
    it.insert(it.end(), u.data(), u.data() + u.size());
    throw SolverFailure(what, it, res, delta, p);
}

}  // namespace

MixedSolution solve_mixed(const MixedProblem& prob, const SolverConfig& cfg) {
    cfg.validate();
    prob.validate();
    const Eigen::Index m = static_cast<Eigen::Index>(prob.dim_v()), n = static_cast<Eigen::Index>(prob.dim_u());
    MixedSolution sol;
    sol.r = Eigen::VectorXd::Zero(m);
    sol.u = Eigen::VectorXd::Zero(n);
    const double fnorm = prob.F.norm();
    if (fnorm == 0.0) {
        attach_functions(prob, sol);
        return sol;
    }
    const double tol_abs = cfg.newton_tol * fnorm;
    const std::vector<double> path = solver_path(prob, cfg);
    const std::vector<double> deltas = geometric_schedule(cfg.delta_start, cfg.delta_end, cfg.delta_ratio);
    MixedProblem work = prob;
    const std::vector<double> zeros(prob.vnorm.terms.size(), 0.0);

    for (std::size_t k = 0; k < path.size(); ++k) {
        const double p = path[k];
        const bool last = k + 1 == path.size();
        work.vnorm.rho = exponent_to_rho(p);
        if (work.vnorm.rho == 2.0) {
            // Smoothing does not change the quadratic functional.
            const LevelOutcome o = newton_level(work, sol.r, sol.u, zeros, tol_abs * 1e-3, cfg.max_iter,
                                                cfg.line_search, p);
            sol.iterations += o.iterations;
            sol.stages.push_back({p, 0.0, o.iterations, o.residual / fnorm});
            continue;
        }
        const std::vector<double> sigma = smoothing_levels(work.vnorm, sol.r, 1.0);
        auto scaled = [&](double d) {
            std::vector<double> s(sigma);
            for (double& v : s) v *= d;
            return s;
        };
        if (!last) {
            const LevelOutcome o = newton_level(work, sol.r, sol.u, scaled(cfg.delta_start),
                                                std::max(tol_abs, 1e-6 * fnorm), cfg.max_iter, cfg.line_search, p);
            sol.iterations += o.iterations;
            sol.stages.push_back({p, cfg.delta_start, o.iterations, o.residual / fnorm});
            continue;
        }
        for (std::size_t j = 0; j < deltas.size(); ++j) {
            const LevelOutcome o =
                newton_level(work, sol.r, sol.u, scaled(deltas[j]), tol_abs * 1e-2, cfg.max_iter, cfg.line_search, p);
            sol.iterations += o.iterations;
            sol.stages.push_back({p, deltas[j], o.iterations, o.residual / fnorm});
        }
        if (cfg.exact_polish) {
            const LevelOutcome o = newton_level(work, sol.r, sol.u, zeros, tol_abs * 1e-3, 8, cfg.line_search, p);
            sol.iterations += o.iterations;
            sol.stages.push_back({p, 0.0, o.iterations, o.residual / fnorm});
        }
    }
    sol.residual = assemble_mixed_residual(prob, sol.r, sol.u).norm() / fnorm;
    if (!(sol.residual <= cfg.newton_tol))
        fail("solve_mixed: residual " + std::to_string(sol.residual) + " above tolerance", sol.r, sol.u, sol.residual,
             cfg.delta_end, path.back());
    attach_functions(prob, sol);
    return sol;
}

MixedSolution solve_constrained_descent(const MixedProblem& prob, const SolverConfig& cfg) {
    cfg.validate();
    prob.validate();
    const Eigen::Index m = static_cast<Eigen::Index>(prob.dim_v()), n = static_cast<Eigen::Index>(prob.dim_u());
    MixedSolution sol;
    sol.r = Eigen::VectorXd::Zero(m);
    sol.u = Eigen::VectorXd::Zero(n);
    const double fnorm = prob.F.norm();
    if (fnorm == 0.0) {
        attach_functions(prob, sol);
        return sol;
    }
    // Orthonormal basis Z of ker(B^T) = (range B)^perp.
    const Eigen::MatrixXd Bd = Eigen::MatrixXd(prob.B);
    Eigen::MatrixXd Z;
    if (n == 0) {
        Z = Eigen::MatrixXd::Identity(m, m);
    } else {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Bd);
        qr.setThreshold(1e-12);
        if (qr.rank() < n) throw DegenerateSubspace("solve_constrained_descent: B is rank deficient");
        const Eigen::MatrixXd Q = qr.householderQ();
        Z = Q.rightCols(m - n);
    }
    const Eigen::Index k = Z.cols();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
    const double tol_abs = cfg.newton_tol * fnorm;
    const std::vector<double> path = solver_path(prob, cfg);
    const std::vector<double> deltas = geometric_schedule(cfg.delta_start, cfg.delta_end, cfg.delta_ratio);
    SampledNorm norm = prob.vnorm;
    const Eigen::VectorXd Fz = Z.transpose() * prob.F;

    auto psi = [&](const Eigen::VectorXd& yy, const std::vector<double>& dl) {
        const Eigen::VectorXd r = Z * yy;
        double acc = 0.0;
        for (std::size_t t = 0; t < norm.terms.size(); ++t) {
            const double nn = smoothed_lp_norm(norm.terms[t].L * r, norm.terms[t].w, norm.rho, dl[t]);
            acc += 0.5 * nn * nn;
        }
        return acc - Fz.dot(yy);
    };
    // Gradient and Hessian of psi at yy.
    auto derivatives = [&](const Eigen::VectorXd& yy, const std::vector<double>& dl, Eigen::VectorXd& grad,
                           Eigen::MatrixXd* H) {
        const Eigen::VectorXd r = Z * yy;
        grad = -Fz;
        if (H) *H = Eigen::MatrixXd::Zero(k, k);
        for (std::size_t t = 0; t < norm.terms.size(); ++t) {
            const auto& term = norm.terms[t];
            const SmoothedLp s = eval_smoothed_lp(term.L * r, term.w, norm.rho, dl[t]);
            const Eigen::MatrixXd LZ = term.L * Z;
            if (s.norm > 0.0) {
                const Eigen::VectorXd a = LZ.transpose() * s.grad;
                grad += s.norm * a;
                if (H) H->noalias() += s.rank_one * a * a.transpose();
            }
            if (H) H->noalias() += LZ.transpose() * s.hess.asDiagonal() * LZ;
        }
    };
    // Size of the terms whose difference is psi; decreases below a few ulps of
    // this cannot be seen in function values.
    auto psi_scale = [&](const Eigen::VectorXd& yy, const std::vector<double>& dl) {
        return std::abs(psi(yy, dl) + Fz.dot(yy)) + std::abs(Fz.dot(yy));
    };
    auto level = [&](const std::vector<double>& dl, double tol, int max_iter) {
        int it = 0;
        Eigen::VectorXd grad, grad_new;
        Eigen::MatrixXd H;
        for (; it < max_iter; ++it) {
            derivatives(y, dl, grad, &H);
            if (grad.norm() <= tol) break;
            Eigen::VectorXd d = H.ldlt().solve(-grad);
            if (!d.allFinite() || grad.dot(d) >= 0.0) d = H.fullPivLu().solve(-grad);
            if (!d.allFinite() || grad.dot(d) >= 0.0) d = -grad;
            const double f0 = psi(y, dl);
            const double noise = 64.0 * std::numeric_limits<double>::epsilon() * psi_scale(y, dl);
            double alpha = 1.0;
            while (alpha >= cfg.line_search.min_step) {
                const double f1 = psi(y + alpha * d, dl);
                if (f1 <= f0 + cfg.line_search.sufficient_decrease * alpha * grad.dot(d)) break;
                // Near the minimiser the predicted decrease drowns in round-off;
                // fall back to requiring a smaller gradient.
                if (std::abs(f1 - f0) <= noise) {
                    derivatives(y + alpha * d, dl, grad_new, nullptr);
                    if (grad_new.norm() < grad.norm()) break;
                }
                alpha *= cfg.line_search.shrink;
            }
            if (alpha < cfg.line_search.min_step) break;
            y += alpha * d;
        }
        return it;
    };

    const std::vector<double> zeros(norm.terms.size(), 0.0);
    for (std::size_t s = 0; s < path.size(); ++s) {
        const double p = path[s];
        norm.rho = exponent_to_rho(p);
        const bool last = s + 1 == path.size();
        if (norm.rho == 2.0) {
            sol.iterations += level(zeros, tol_abs * 1e-3, cfg.max_iter);
            continue;
        }
        const std::vector<double> sigma = smoothing_levels(norm, Z * y, 1.0);
        auto scaled = [&](double d) {
            std::vector<double> v(sigma);
            for (double& x : v) x *= d;
            return v;
        };
        if (!last) {
            sol.iterations += level(scaled(cfg.delta_start), std::max(tol_abs, 1e-6 * fnorm), cfg.max_iter);
            continue;
        }
        for (double d : deltas) sol.iterations += level(scaled(d), tol_abs * 1e-2, cfg.max_iter);
        if (cfg.exact_polish) sol.iterations += level(zeros, tol_abs * 1e-3, cfg.max_iter);
    }
    sol.r = Z * y;
    if (n > 0) {
        const Eigen::VectorXd rhs = prob.F - prob.vnorm.duality_map(sol.r);
        sol.u = Bd.colPivHouseholderQr().solve(rhs);
    }
    sol.residual = assemble_mixed_residual(prob, sol.r, sol.u).norm() / fnorm;
    if (!(sol.residual <= std::max(cfg.newton_tol, 1e-8)))
        fail("solve_constrained_descent: residual " + std::to_string(sol.residual) + " above tolerance", sol.r, sol.u,
             sol.residual, cfg.delta_end, path.back());
    attach_functions(prob, sol);
    return sol;
}

RateFit estimate_rate(const std::vector<double>& h, const std::vector<double>& errors) {
    if (h.size() != errors.size()) throw InvalidInput("estimate_rate: size mismatch");
    if (h.size() < 3) throw InvalidInput("estimate_rate: need at least three points");
    const std::size_t n = h.size();
    double sx = 0, sy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(h[i] > 0.0) || !(errors[i] > 0.0)) throw InvalidInput("estimate_rate: inputs must be positive");
        lx[i] = std::log(h[i]);
        ly[i] = std::log(errors[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw InvalidInput("estimate_rate: all h values are equal");
    RateFit fit;
    fit.rate = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ly[i] - (my + fit.rate * (lx[i] - mx));
        ssr += e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return fit;
}

}  // namespace nlpg
