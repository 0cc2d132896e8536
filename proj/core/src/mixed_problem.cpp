#include "nlpg/mixed_problem.hpp"

#include <cmath>

#include "nlpg/errors.hpp"
#include "nlpg/smoothed_lp.hpp"

namespace nlpg {

void MixedProblem::validate() const {
    if (static_cast<Eigen::Index>(F.size()) != B.rows()) throw InvalidInput("MixedProblem: F and B disagree in size");
    if (vnorm.dim() != dim_v()) throw InvalidInput("MixedProblem: test norm has the wrong dimension");
    if (dim_v() < dim_u()) throw InvalidInput("MixedProblem: need dim V >= dim U");
    if (!F.allFinite()) throw InvalidInput("MixedProblem: non-finite load");
    for (int k = 0; k < B.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(B, k); it; ++it)
            if (!std::isfinite(it.value())) throw InvalidInput("MixedProblem: non-finite bilinear form entry");
    if (!(vnorm.rho > 1.0)) throw InvalidInput("MixedProblem: test exponent must be > 1");
}

MixedProblem make_algebraic_problem(Eigen::SparseMatrix<double> B, Eigen::VectorXd F, SampledNorm vnorm) {
    MixedProblem p;
    p.B = std::move(B);
    p.F = std::move(F);
    p.vnorm = std::move(vnorm);
    p.validate();
    return p;
}

namespace {

std::vector<double> breaks_of(const FESpace& s) {
    std::vector<double> b = s.breakpoints();
    const auto d = s.discontinuities();
    b.insert(b.end(), d.begin(), d.end());
    return b;
}

double eval_or_zero(const ScalarFunction& f, double x) { return f ? f(x) : 0.0; }

}  // namespace

Eigen::VectorXd assemble_load(const FESpace& test, const LinearForm& f, const QuadratureRule& rule,
                              const std::vector<double>& extra_breaks) {
    Eigen::VectorXd F = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(test.dim()));
    std::vector<BasisEntry> ev;
    if (f.f0 || f.f1) {
        const QuadPoints q = quadrature_points(merge_breakpoints({breaks_of(test), extra_breaks}, rule), rule);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double x = q.x[i];
            const double a0 = eval_or_zero(f.f0, x), a1 = eval_or_zero(f.f1, x);
            if (!std::isfinite(a0) || !std::isfinite(a1))
                throw InvalidInput("assemble_load: non-finite load sample at x = " + std::to_string(x));
            test.evaluate(x, ev);
            for (const auto& e : ev) F[static_cast<Eigen::Index>(e.dof)] += q.w[i] * (a0 * e.value + a1 * e.deriv);
        }
    }
    for (const auto& pl : f.points) {
        // Average of the one-sided limits; equal to v(x) for continuous v.
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(F.size());
        for (int side : {-1, +1}) {
            test.evaluate(pl.x, ev, side);
            for (const auto& e : ev) acc[static_cast<Eigen::Index>(e.dof)] += 0.5 * e.value;
        }
        F += pl.weight * acc;
    }
    return F;
}

MixedProblem assemble_mixed_problem(std::shared_ptr<const FESpace> trial, std::shared_ptr<const FESpace> test,
                                    const BilinearForm& b, const LinearForm& f, const NormSpec& vspec,
                                    const QuadratureRule& rule, const std::vector<double>& extra_breaks) {
    if (!trial || !test) throw InvalidInput("assemble_mixed_problem: null space");
    for (const auto& pl : f.points) {
        for (double d : test->discontinuities())
            if (std::abs(d - pl.x) < 1e-14 * std::max(1.0, std::abs(d)))
                throw ConfigError("assemble_mixed_problem: point load at a discontinuity of the test space");
    }
    const std::vector<double> breaks = merge_breakpoints({breaks_of(*trial), breaks_of(*test), extra_breaks}, rule);
    const QuadPoints q = quadrature_points(breaks, rule);
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<BasisEntry> et, ew;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double x = q.x[i];
        const double c00 = eval_or_zero(b.c00, x), c01 = eval_or_zero(b.c01, x);
        const double c10 = eval_or_zero(b.c10, x), c11 = eval_or_zero(b.c11, x);
        trial->evaluate(x, ew);
        test->evaluate(x, et);
        for (const auto& v : et)
            for (const auto& w : ew) {
                const double val = c00 * w.value * v.value + c01 * w.value * v.deriv + c10 * w.deriv * v.value +
                                   c11 * w.deriv * v.deriv;
                if (val != 0.0) trips.emplace_back(static_cast<int>(v.dof), static_cast<int>(w.dof), q.w[i] * val);
            }
    }
    MixedProblem p;
    p.B.resize(static_cast<Eigen::Index>(test->dim()), static_cast<Eigen::Index>(trial->dim()));
    p.B.setFromTriplets(trips.begin(), trips.end());
    p.B.prune(0.0);
    p.F = assemble_load(*test, f, rule, breaks);
    p.vnorm = sample_norm(vspec, *test, rule, breaks);
    p.vspec = vspec;
    p.trial = std::move(trial);
    p.test = std::move(test);
    p.validate();
    return p;
}

Eigen::VectorXd assemble_mixed_residual(const MixedProblem& prob, const Eigen::VectorXd& r, const Eigen::VectorXd& u) {
    const Eigen::Index m = static_cast<Eigen::Index>(prob.dim_v()), n = static_cast<Eigen::Index>(prob.dim_u());
    if (r.size() != m || u.size() != n) throw InvalidInput("assemble_mixed_residual: size mismatch");
    Eigen::VectorXd out(m + n);
    out.head(m) = prob.vnorm.duality_map(r) + prob.B * u - prob.F;
    out.tail(n) = prob.B.transpose() * r;
    return out;
}

std::vector<double> smoothing_levels(const SampledNorm& norm, const Eigen::VectorXd& r, double delta) {
    std::vector<double> out;
    for (const auto& t : norm.terms) {
        const double meas = t.w.sum();
        const double n = smoothed_lp_norm(t.L * r, t.w, norm.rho, 0.0);
        const double rms = n / std::pow(meas, 1.0 / norm.rho);
        out.push_back(delta * (rms > 0.0 ? rms : 1.0));
    }
    return out;
}

SmoothedSystem smoothed_system(const MixedProblem& prob, const Eigen::VectorXd& r, const Eigen::VectorXd& u,
                               const std::vector<double>& deltas, bool with_matrix) {
    const Eigen::Index m = static_cast<Eigen::Index>(prob.dim_v()), n = static_cast<Eigen::Index>(prob.dim_u());
    const auto& terms = prob.vnorm.terms;
    if (deltas.size() != terms.size()) throw InvalidInput("smoothed_system: one smoothing level per norm term");
    SmoothedSystem sys;
    Eigen::VectorXd Jr = Eigen::VectorXd::Zero(m);
    Eigen::SparseMatrix<double> H(m, m);
    std::vector<Eigen::VectorXd> border_vec;
    std::vector<double> border_coef;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto& t = terms[k];
        const SmoothedLp s = eval_smoothed_lp(t.L * r, t.w, prob.vnorm.rho, deltas[k]);
        if (s.norm > 0.0) Jr.noalias() += s.norm * (t.L.transpose() * s.grad);
        if (with_matrix) {
            Eigen::SparseMatrix<double> Lc = t.L;  // column-major copy for the product
            H += Eigen::SparseMatrix<double>(Lc.transpose() * s.hess.asDiagonal() * Lc);
            if (s.rank_one != 0.0 && s.norm > 0.0) {
                border_vec.push_back(t.L.transpose() * s.grad);
                border_coef.push_back(s.rank_one);
            }
        }
    }
    sys.residual.resize(m + n);
    sys.residual.head(m) = Jr + prob.B * u - prob.F;
    sys.residual.tail(n) = prob.B.transpose() * r;
    if (!with_matrix) return sys;

    const Eigen::Index nb = static_cast<Eigen::Index>(border_vec.size());
    sys.n_border = static_cast<std::size_t>(nb);
    const Eigen::Index N = m + n + nb;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(H.nonZeros() + 2 * prob.B.nonZeros() + 3 * nb * m + nb));
    for (int k = 0; k < H.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < prob.B.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(prob.B, k); it; ++it) {
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(m + it.col()), it.value());
            trips.emplace_back(static_cast<int>(m + it.col()), static_cast<int>(it.row()), it.value());
        }
    for (Eigen::Index b = 0; b < nb; ++b) {
        const int col = static_cast<int>(m + n + b);
        const Eigen::VectorXd& a = border_vec[static_cast<std::size_t>(b)];
        for (Eigen::Index i = 0; i < m; ++i) {
            if (a[i] == 0.0) continue;
            trips.emplace_back(static_cast<int>(i), col, border_coef[static_cast<std::size_t>(b)] * a[i]);
            trips.emplace_back(col, static_cast<int>(i), a[i]);
        }
        trips.emplace_back(col, col, -1.0);
    }
    sys.matrix.resize(N, N);
    sys.matrix.setFromTriplets(trips.begin(), trips.end());
    return sys;
}

Eigen::MatrixXd assemble_mixed_jacobian(const MixedProblem& prob, const Eigen::VectorXd& r, const Eigen::VectorXd& u,
                                        double delta) {
    if (!(delta >= 0.0)) throw InvalidInput("assemble_mixed_jacobian: delta must be >= 0");
    const Eigen::Index m = static_cast<Eigen::Index>(prob.dim_v()), n = static_cast<Eigen::Index>(prob.dim_u());
    if (r.size() != m || u.size() != n) throw InvalidInput("assemble_mixed_jacobian: size mismatch");
    const std::vector<double> deltas = smoothing_levels(prob.vnorm, r, delta);
    Eigen::MatrixXd Jac = Eigen::MatrixXd::Zero(m + n, m + n);
    for (std::size_t k = 0; k < prob.vnorm.terms.size(); ++k) {
        const auto& t = prob.vnorm.terms[k];
        const SmoothedLp s = eval_smoothed_lp(t.L * r, t.w, prob.vnorm.rho, deltas[k]);
        const Eigen::MatrixXd Ld = Eigen::MatrixXd(t.L);
        Jac.topLeftCorner(m, m).noalias() += Ld.transpose() * s.hess.asDiagonal() * Ld;
        if (s.norm > 0.0) {
            const Eigen::VectorXd a = Ld.transpose() * s.grad;
            Jac.topLeftCorner(m, m).noalias() += s.rank_one * a * a.transpose();
        }
    }
    const Eigen::MatrixXd Bd = Eigen::MatrixXd(prob.B);
    Jac.topRightCorner(m, n) = Bd;
    Jac.bottomLeftCorner(n, m) = Bd.transpose();
    return Jac;
}

}  // namespace nlpg
