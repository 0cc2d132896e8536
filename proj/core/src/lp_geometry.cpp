#include "nlpg/lp_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlpg/continuation.hpp"
#include "nlpg/errors.hpp"
#include "nlpg/smoothed_lp.hpp"

namespace nlpg {

double conjugate(double p) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
}

LpVector::LpVector(std::vector<double> e, double exponent) : entries(std::move(e)), p(exponent) {}

namespace {

void validate(const LpVector& v, const char* where) {
    if (!(v.p > 1.0) || !std::isfinite(v.p))
        throw InvalidInput(std::string(where) + ": exponent must be finite and > 1");
    if (v.entries.empty()) throw InvalidInput(std::string(where) + ": empty vector");
    for (double x : v.entries)
        if (!std::isfinite(x)) throw InvalidInput(std::string(where) + ": non-finite entry");
}

double lp_norm_plain(const std::vector<double>& v, double p) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::abs(x) / m, p);
    return m * std::pow(acc, 1.0 / p);
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Minimises the smoothed objective at a fixed (p, delta) by damped Newton,
// starting from `c`. Returns whether the Newton decrement dropped below
// `rel_tol` times the objective; `iters` accumulates the iteration count.
bool newton_level(const Eigen::VectorXd& y, const Eigen::MatrixXd& A, const Eigen::VectorXd& w, double p,
                  double delta, double rel_tol, int max_iter, Eigen::VectorXd& c, int& iters) {
    auto objective = [&](const Eigen::VectorXd& cc) {
        const double n = smoothed_lp_norm(y - A * cc, w, p, delta);
        return 0.5 * n * n;
    };
    for (int it = 0; it < max_iter; ++it, ++iters) {
        const Eigen::VectorXd z = y - A * c;
        const SmoothedLp s = eval_smoothed_lp(z, w, p, delta);
        const Eigen::VectorXd atg = A.transpose() * s.grad;
        const Eigen::VectorXd grad = -s.norm * atg;
        Eigen::MatrixXd H = A.transpose() * s.hess.asDiagonal() * A;
        H.noalias() += s.rank_one * atg * atg.transpose();
        Eigen::VectorXd d = H.ldlt().solve(-grad);
        if (!d.allFinite()) d = H.fullPivLu().solve(-grad);
        const double decrement = -grad.dot(d);
        const double f0 = 0.5 * s.norm * s.norm;
        if (!(decrement >= 0.0)) return false;
        if (decrement <= rel_tol * f0) {
            // Converged; the last full step is cheap extra accuracy.
            if (objective(c + d) <= f0) c += d;
            return true;
        }
        double alpha = 1.0;
        while (alpha >= 1e-12) {
            if (objective(c + alpha * d) <= f0 - 1e-4 * alpha * decrement) break;
            alpha *= 0.5;
        }
        if (alpha < 1e-12) {
            // Round-off floor of the objective: accept if the decrement is tiny.
            return decrement <= 1e-10 * f0;
        }
        const Eigen::VectorXd trial = c + alpha * d;
        const double f1 = objective(trial);
        c = trial;
        // Stalled at round-off: the model decrease is tiny and f no longer moves.
        if (decrement <= 1e-10 * f0 && f0 - f1 <= 1e-14 * f0) return true;
    }
    return false;
}

}  // namespace

LpVector duality_map_lp(const LpVector& v) {
    validate(v, "duality_map_lp");
    const double p = v.p;
    LpVector out(std::vector<double>(v.size(), 0.0), conjugate(p));
    const double n = lp_norm_plain(v.entries, p);
    if (n == 0.0) return out;
    // ||v||^{2-p} |v_i|^{p-1} = ||v|| * (|v_i| / ||v||)^{p-1}
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = std::abs(v.entries[i]) / n;
        const double mag = n * std::pow(t, p - 1.0);
        out.entries[i] = v.entries[i] < 0.0 ? -mag : (v.entries[i] > 0.0 ? mag : 0.0);
    }
    return out;
}

double LpVector::norm() const { return lp_norm_plain(entries, p); }

WeightedBestApprox weighted_lp_best_approx(const Eigen::VectorXd& y, const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& w, double p,
                                           const BestApproxOptions& opts) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("best approximation: need 1 < p < inf");
    if (A.rows() != y.size() || w.size() != y.size())
        throw InvalidInput("best approximation: size mismatch");
    if (!y.allFinite() || !A.allFinite() || !w.allFinite())
        throw InvalidInput("best approximation: non-finite data");
    if ((w.array() <= 0.0).any()) throw InvalidInput("best approximation: weights must be positive");

    WeightedBestApprox out;
    const Eigen::Index m = A.cols();
    out.coeffs = Eigen::VectorXd::Zero(m);
    if (m == 0) {
        out.distance = smoothed_lp_norm(y, w, p, 0.0);
        return out;
    }

    // Rank check and weighted least-squares start (the p = 2 solution).
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXd As = sw.asDiagonal() * A;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(As);
    qr.setThreshold(1e-12);
    if (qr.rank() < m) throw DegenerateSubspace("best approximation: basis is rank deficient");
    Eigen::VectorXd c = qr.solve(sw.asDiagonal() * y);

    const double meas = w.sum();
    int iters = 0;
    bool converged = true;
    if (p != 2.0) {
        const std::vector<double> path =
            opts.p_continuation ? exponent_path(p, opts.p_ratio) : std::vector<double>{p};
        const std::vector<double> deltas =
            geometric_schedule(opts.delta_start, opts.delta_end, opts.delta_ratio);
        const double final_tol = std::max(opts.tol * opts.tol, 1e-14);
        for (std::size_t k = 0; k < path.size(); ++k) {
            const double pk = path[k];
            if (pk == 2.0) continue;
            const bool last = (k + 1 == path.size());
            // Scale of the residual samples, frozen for this stage.
            const double sigma = smoothed_lp_norm(y - A * c, w, pk, 0.0) / std::pow(meas, 1.0 / pk);
            if (sigma == 0.0) break;  // y lies in the span: exact
            if (last) {
                for (double d : deltas)
                    converged = newton_level(y, A, w, pk, d * sigma, final_tol, opts.max_newton, c, iters);
            } else {
                newton_level(y, A, w, pk, opts.delta_start * sigma, 1e-10, opts.max_newton, c, iters);
            }
        }
    }

    const Eigen::VectorXd z = y - A * c;
    const SmoothedLp s = eval_smoothed_lp(z, w, p, 0.0);
    out.coeffs = c;
    out.distance = s.norm;
    out.iterations = iters;
    if (s.norm > 0.0) {
        const Eigen::VectorXd atg = A.transpose() * s.grad;
        double worst = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            const double bn = smoothed_lp_norm(A.col(j), w, p, 0.0);
            worst = std::max(worst, std::abs(atg[j]) / bn);
        }
        out.optimality_residual = worst;
    }
    if (!converged || !c.allFinite()) {
        throw SolverFailure("best approximation: Newton did not converge at the final smoothing level",
                            std::vector<double>(c.data(), c.data() + c.size()),
                            out.optimality_residual, opts.delta_end, p);
    }
    return out;
}

BestApprox best_approx_lp(const LpVector& y, const std::vector<LpVector>& basis, double tol) {
    validate(y, "best_approx_lp");
    const Eigen::Index n = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXd A(n, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        validate(basis[j], "best_approx_lp");
        if (basis[j].size() != y.size()) throw InvalidInput("best_approx_lp: basis size mismatch");
        A.col(static_cast<Eigen::Index>(j)) = to_eigen(basis[j].entries);
    }
    BestApproxOptions opts;
    opts.tol = tol;
    const WeightedBestApprox wb =
        weighted_lp_best_approx(to_eigen(y.entries), A, Eigen::VectorXd::Ones(n), y.p, opts);
    BestApprox out;
    const Eigen::VectorXd y0 = A * wb.coeffs;
    out.y0 = LpVector(std::vector<double>(y0.data(), y0.data() + y0.size()), y.p);
    out.coeffs.assign(wb.coeffs.data(), wb.coeffs.data() + wb.coeffs.size());
    out.optimality_residual = wb.optimality_residual;
    return out;
}

double c_bm(double p) { return std::pow(2.0, std::abs(2.0 / p - 1.0)); }

namespace {

double cao_objective(double theta, double p, double q) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double a = p / q;
    const double b = q / p;
    const double num = std::abs(std::pow(c, a) * std::pow(s, b) - std::pow(s, a) * std::pow(c, b));
    const double np = std::pow(std::pow(c, p) + std::pow(s, p), 1.0 / p);
    const double nq = std::pow(std::pow(c, q) + std::pow(s, q), 1.0 / q);
    return num / (std::pow(np, a) * std::pow(nq, b));
}

// Golden-section maximisation of f on [lo, hi].
template <class F>
double golden_max(F f, double lo, double hi, double xtol, double* argmax = nullptr) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if (argmax) *argmax = f1 > f2 ? x1 : x2;
    return std::max(f1, f2);
}

}  // namespace

double compute_c_ao(double p, int grid) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("compute_c_ao: need p >= 1");
    if (grid < 100) throw InvalidInput("compute_c_ao: grid must be >= 100");
    if (p == 1.0) return 1.0;
    if (p == 2.0) return 0.0;
    const double q = conjugate(p);
    const double half_pi = std::numbers::pi / 2.0;
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= grid; ++i) {
        const double v = cao_objective(half_pi * i / grid, p, q);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double lo = half_pi * std::max(0, best_i - 1) / grid;
    const double hi = half_pi * std::min(grid, best_i + 1) / grid;
    const double polished = golden_max([&](double t) { return cao_objective(t, p, q); }, lo, hi, 1e-14);
    return std::max(best, polished);
}

namespace {

// ||t b||_p / ||y||_p for the best approximation t b of y from span{b} in
// l_p(R^2). The first-order condition is monotone in t, so a safeguarded
// regula falsi (Illinois variant) on the derivative is used.
double best_ratio_2d(double y1, double y2, double b1, double b2, double p) {
    auto dphi = [&](double t) {
        const double r1 = y1 - t * b1, r2 = y2 - t * b2;
        auto sp = [&](double r) { return std::copysign(std::pow(std::abs(r), p - 1.0), r); };
        return -(sp(r1) * b1 + sp(r2) * b2);  // derivative of (1/p)||y - t b||^p, increasing in t
    };
    const double yn = std::pow(std::pow(std::abs(y1), p) + std::pow(std::abs(y2), p), 1.0 / p);
    const double bn = std::pow(std::pow(std::abs(b1), p) + std::pow(std::abs(b2), p), 1.0 / p);
    double lo = -2.0 * yn / bn, hi = 2.0 * yn / bn;
    double flo = dphi(lo), fhi = dphi(hi);
    int side = 0;
    double t = 0.0;
    for (int it = 0; it < 200; ++it) {
        t = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
        const double ft = dphi(t);
        if (ft == 0.0 || hi - lo < 1e-15 * (1.0 + std::abs(t))) break;
        if ((ft < 0.0) == (flo < 0.0)) {
            lo = t;
            flo = ft;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = t;
            fhi = ft;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    return std::abs(t) * bn / yn;
}

double c_best_objective(double phi, double theta, double p) {
    return best_ratio_2d(std::cos(theta), std::sin(theta), std::cos(phi), std::sin(phi), p);
}

}  // namespace

double compute_c_best(double p, int grid) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("compute_c_best: need 1 < p < inf");
    if (grid < 3) throw InvalidInput("compute_c_best: grid too small");
    if (p == 2.0) return 1.0;
    const double pi = std::numbers::pi;
    double best = 1.0, best_phi = 0.0, best_theta = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double phi = 0.5 * pi * i / (grid - 1);
        for (int j = 0; j < grid; ++j) {
            const double theta = pi * j / (grid - 1);
            const double v = c_best_objective(phi, theta, p);
            if (v > best) {
                best = v;
                best_phi = phi;
                best_theta = theta;
            }
        }
    }
    // Alternating golden-section polish in each angle.
    const double dphi = 0.5 * pi / (grid - 1), dth = pi / (grid - 1);
    double phi = best_phi, theta = best_theta;
    double span_phi = dphi, span_th = dth;
    for (int pass = 0; pass < 6; ++pass) {
        double arg;
        golden_max([&](double a) { return c_best_objective(a, theta, p); },
                   std::max(0.0, phi - span_phi), std::min(0.5 * pi, phi + span_phi), 1e-12, &arg);
        phi = arg;
        golden_max([&](double a) { return c_best_objective(phi, a, p); }, theta - span_th,
                   theta + span_th, 1e-12, &arg);
        theta = arg;
        best = std::max(best, c_best_objective(phi, theta, p));
        span_phi *= 0.5;
        span_th *= 0.5;
    }
    return best;
}

GeometricConstants geometric_constants(double p, int grid_ao, int grid_best) {
    GeometricConstants g;
    g.p = p;
    g.c_bm = c_bm(p);
    g.c_ao = compute_c_ao(p, grid_ao);
    g.c_best = compute_c_best(p, grid_best);
    return g;
}

bool AprioriCheck::holds(double slack) const {
    return ratio <= std::min(bound_bm, bound_ao) + slack;
}

AprioriCheck check_apriori_bounds(const LpVector& y, const LpVector& y0, double c_ao) {
    validate(y, "check_apriori_bounds");
    validate(y0, "check_apriori_bounds");
    if (y.size() != y0.size() || y.p != y0.p)
        throw InvalidInput("check_apriori_bounds: vectors must match in size and exponent");
    const double ny = y.norm();
    if (ny == 0.0) throw InvalidInput("check_apriori_bounds: y must be nonzero");
    AprioriCheck out;
    out.ratio = y0.norm() / ny;
    out.bound_bm = c_bm(y.p);
    out.bound_ao = 1.0 + (c_ao >= 0.0 ? c_ao : compute_c_ao(y.p));
    return out;
}

}  // namespace nlpg
