#include "nlpg/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nlpg/quadrature.hpp"

namespace nlpg::verify {

namespace {

constexpr double kGolden = 0.6180339887498949;

}  // namespace

double golden_section_min(const Fn1& f, double lo, double hi, double xtol) {
    double a = lo, b = hi;
    double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 400 && (b - a) > xtol * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

double convex_min(const Fn1& f, double x0, double step, double xtol) {
    if (!(step > 0.0)) step = 1.0;
    const double f0 = f(x0);
    // Pick the downhill direction, then double until the function rises.
    double dir = 1.0;
    if (f(x0 + step) > f0) {
        if (f(x0 - step) > f0) return golden_section_min(f, x0 - step, x0 + step, xtol);
        dir = -1.0;
    }
    double prev = x0, cur = x0 + dir * step, fcur = f(cur);
    double h = step;
    for (int it = 0; it < 200; ++it) {
        h *= 2.0;
        const double next = cur + dir * h;
        const double fnext = f(next);
        if (fnext > fcur) {
            const double lo = std::min(prev, next), hi = std::max(prev, next);
            return golden_section_min(f, lo, hi, xtol);
        }
        prev = cur;
        cur = next;
        fcur = fnext;
    }
    throw std::runtime_error("convex_min: no bracket found");
}

double scan_golden_min(const Fn1& f, double lo, double hi, int samples) {
    samples = std::max(samples, 3);
    const double h = (hi - lo) / (samples - 1);
    int best = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double v = f(lo + h * i);
        if (v < fbest) {
            fbest = v;
            best = i;
        }
    }
    const double a = lo + h * std::max(best - 1, 0);
    const double b = lo + h * std::min(best + 1, samples - 1);
    return golden_section_min(f, a, b);
}

Minimum nelder_mead(const FnN& f, std::vector<double> x0, double step, double xtol, int max_eval) {
    const std::size_t n = x0.size();
    Minimum out;
    int evals = 0;
    auto F = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    std::vector<double> best = std::move(x0);
    double fbest = F(best);

    for (int restart = 0; restart < 8 && evals < max_eval; ++restart) {
        std::vector<std::vector<double>> s(n + 1, best);
        std::vector<double> fs(n + 1, fbest);
        for (std::size_t i = 0; i < n; ++i) {
            s[i + 1][i] += step * std::max(1.0, std::abs(best[i]));
            fs[i + 1] = F(s[i + 1]);
        }
        while (evals < max_eval) {
            std::vector<std::size_t> idx(n + 1);
            for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
            {
                auto s2 = s;
                auto f2 = fs;
                for (std::size_t i = 0; i <= n; ++i) {
                    s[i] = s2[idx[i]];
                    fs[i] = f2[idx[i]];
                }
            }
            double diam = 0.0;
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    diam = std::max(diam, std::abs(s[i][k] - s[0][k]) / std::max(1.0, std::abs(s[0][k])));
            if (diam < xtol) break;

            std::vector<double> c(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) c[k] += s[i][k] / static_cast<double>(n);
            auto along = [&](double t) {
                std::vector<double> x(n);
                for (std::size_t k = 0; k < n; ++k) x[k] = c[k] + t * (s[n][k] - c[k]);
                return x;
            };
            const auto xr = along(-1.0);
            const double fr = F(xr);
            if (fr < fs[0]) {
                const auto xe = along(-2.0);
                const double fe = F(xe);
                if (fe < fr) {
                    s[n] = xe;
                    fs[n] = fe;
                } else {
                    s[n] = xr;
                    fs[n] = fr;
                }
            } else if (fr < fs[n - 1]) {
                s[n] = xr;
                fs[n] = fr;
            } else {
                const bool outside = fr < fs[n];
                const auto xc = along(outside ? -0.5 : 0.5);
                const double fc = F(xc);
                if (fc < (outside ? fr : fs[n])) {
                    s[n] = xc;
                    fs[n] = fc;
                } else {
                    for (std::size_t i = 1; i <= n; ++i) {
                        for (std::size_t k = 0; k < n; ++k) s[i][k] = s[0][k] + 0.5 * (s[i][k] - s[0][k]);
                        fs[i] = F(s[i]);
                    }
                }
            }
        }
        std::size_t ib = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
        const bool improved = fs[ib] < fbest;
        if (fs[ib] <= fbest) {
            best = s[ib];
            fbest = fs[ib];
        }
        if (!improved && restart >= 2) break;
        step = std::max(step * 0.1, 100.0 * xtol);
    }

    // Coordinate-wise golden polish.
    for (int sweep = 0; sweep < 3; ++sweep) {
        for (std::size_t k = 0; k < n; ++k) {
            auto line = [&](double t) {
                auto x = best;
                x[k] = t;
                return F(x);
            };
            const double d = 1e-4 * std::max(1.0, std::abs(best[k]));
            const double t = golden_section_min(line, best[k] - d, best[k] + d, 1e-15);
            const double ft = line(t);
            if (ft < fbest) {
                best[k] = t;
                fbest = ft;
            }
        }
    }
    out.x = best;
    out.value = fbest;
    out.evaluations = evals;
    return out;
}

double angle_scan_max(const Fn1& quotient, int samples) {
    samples = std::max(samples, 8);
    const double h = std::numbers::pi / samples;
    int best = 0;
    double vbest = -1.0;
    for (int i = 0; i < samples; ++i) {
        const double v = quotient(h * i);
        if (v > vbest) {
            vbest = v;
            best = i;
        }
    }
    const double t = golden_section_min([&](double th) { return -quotient(th); }, h * (best - 1), h * (best + 1), 1e-14);
    return std::max(vbest, quotient(t));
}

double lp(const Eigen::VectorXd& v, double p) {
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    return m * std::pow((v.cwiseAbs() / m).array().pow(p).sum(), 1.0 / p);
}

// ---------------------------------------------------------------- Gibbs

namespace {

// Integral over an interval of length h of |l(t)|^p for l linear from l0 to l1.
double abs_linear_power(double l0, double l1, double h, double p) {
    if (l0 == 0.0 && l1 == 0.0) return 0.0;
    if ((l0 < 0.0) != (l1 < 0.0) && l0 != 0.0 && l1 != 0.0) {
        const double a = std::abs(l0), b = std::abs(l1);
        return h * (std::pow(a, p + 1.0) + std::pow(b, p + 1.0)) / ((p + 1.0) * (a + b));
    }
    double a = std::abs(l0), b = std::abs(l1);
    if (a < b) std::swap(a, b);
    if (b == 0.0) return h * std::pow(a, p) / (p + 1.0);
    // a^p (1 - r^{p+1}) / ((p+1)(1 - r)) with r = b/a in (0, 1], free of cancellation.
    const double r = b / a;
    if (r == 1.0) return h * std::pow(a, p);
    const double num = -std::expm1((p + 1.0) * std::log(r));
    return h * std::pow(a, p) * num / ((p + 1.0) * (1.0 - r));
}

}  // namespace

std::vector<double> gibbs_oracle_nodes(double p, std::size_t n_elem) {
    if (n_elem < 2 || n_elem % 2 != 0) throw std::invalid_argument("gibbs oracle: need an even element count");
    const std::size_t m = n_elem / 2;
    const double h = 2.0 / static_cast<double>(n_elem);
    auto objective = [&](const std::vector<double>& v) {
        double acc = 0.0;
        double prev = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            acc += abs_linear_power(1.0 - prev, 1.0 - v[i], h, p);
            prev = v[i];
        }
        return 2.0 * acc;
    };
    const Minimum best = nelder_mead(objective, std::vector<double>(m, 1.0), 0.1, 1e-12);
    std::vector<double> nodes{0.0};
    nodes.insert(nodes.end(), best.x.begin(), best.x.end());
    return nodes;
}

double gibbs_oracle_overshoot(double p, std::size_t n_elem) {
    const auto v = gibbs_oracle_nodes(p, n_elem);
    return *std::max_element(v.begin(), v.end()) - 1.0;
}

// ---------------------------------------------------------------- graded

namespace {

// Integrals over (0, 1) for the graded oracle, in two charts: x = eps s^16 on
// [0, eps] and x = e^t on [eps, 1]. Each chart is cut into panels, and every
// panel is split again at the sign changes of the integrand's base function,
// so |g|^e is integrated piecewise smoothly even where g crosses zero.
class GradedIntegrator {
public:
    explicit GradedIntegrator(double eps)
        : eps_(eps), t0_(std::log(eps)), right_(static_cast<int>(std::ceil(-t0_ / 0.5)) + 4) {}

    double abs_pow(const Fn1& g, double e) const {
        double acc = 0.0;
        for (int chart = 0; chart < 2; ++chart) {
            const int panels = chart == 0 ? kLeft : right_;
            const double lo = chart == 0 ? 0.0 : t0_, hi = chart == 0 ? 1.0 : 0.0;
            for (int k = 0; k < panels; ++k) {
                const double a = lo + (hi - lo) * k / panels, b = lo + (hi - lo) * (k + 1) / panels;
                acc += panel(chart, a, b, g, e);
            }
        }
        return acc;
    }

    /// Plain integral of a smooth-per-chart f (no splitting).
    double integral(const Fn1& f) const {
        double acc = 0.0;
        for (int chart = 0; chart < 2; ++chart) {
            const int panels = chart == 0 ? kLeft : right_;
            const double lo = chart == 0 ? 0.0 : t0_, hi = chart == 0 ? 1.0 : 0.0;
            for (int k = 0; k < panels; ++k)
                acc += gauss(chart, lo + (hi - lo) * k / panels, lo + (hi - lo) * (k + 1) / panels,
                             [&](double x) { return f(x); });
        }
        return acc;
    }

private:
    static constexpr int kLeft = 16;
    static constexpr int kSamples = 4;

    double x_of(int chart, double u) const { return chart == 0 ? eps_ * std::pow(u, 16) : std::exp(u); }
    double jac(int chart, double u) const { return chart == 0 ? 16.0 * eps_ * std::pow(u, 15) : std::exp(u); }

    template <class F>
    double gauss(int chart, double a, double b, F&& f) const {
        const GaussLegendre& gl = gauss_legendre(20);
        double acc = 0.0;
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            const double u = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[i];
            acc += 0.5 * (b - a) * gl.w[i] * jac(chart, u) * f(x_of(chart, u));
        }
        return acc;
    }

    double panel(int chart, double a, double b, const Fn1& g, double e) const {
        std::vector<double> cuts{a};
        double ua = a, ga = g(x_of(chart, a));
        for (int j = 1; j <= kSamples; ++j) {
            const double ub = a + (b - a) * j / kSamples, gb = g(x_of(chart, ub));
            if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
                double l = ua, r = ub, gl = ga;
                for (int it = 0; it < 200 && r - l > 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(l), std::abs(r)); ++it) {
                    const double m = 0.5 * (l + r), gm = g(x_of(chart, m));
                    if ((gm < 0.0) == (gl < 0.0)) {
                        l = m;
                        gl = gm;
                    } else {
                        r = m;
                    }
                }
                cuts.push_back(0.5 * (l + r));
            }
            ua = ub;
            ga = gb;
        }
        cuts.push_back(b);
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            acc += gauss(chart, cuts[k], cuts[k + 1], [&](double x) { return std::pow(std::abs(g(x)), e); });
        return acc;
    }

    double eps_, t0_;
    int right_;
};

}  // namespace

GradedOracle graded_oracle(double eps, double p) {
    const double q = p / (p - 1.0);
    const double slope = std::pow(eps, -1.0 / 3.0) - 1.0;
    const GradedIntegrator I(eps);
    auto du = [](double x) { return 0.25 * std::pow(x, -0.75) - 1.0; };
    auto dphi = [&](double x) { return x <= eps ? slope : (2.0 / 3.0) / std::cbrt(x) - 1.0; };
    auto dpsi = [](double x) { return 1.0 - 2.0 * x; };
    auto norm = [&](const Fn1& g, double e) { return std::pow(I.abs_pow(g, e), 1.0 / e); };
    const double phi_norm = norm(dphi, p);

    // Minimisers of flat convex functions are only determined to about the
    // square root of the function's accuracy; tighter brackets buy nothing.
    constexpr double kTol = 1e-11;
    GradedOracle out;
    // Closed-form integrals of phi'^2 and u' phi'.
    const double gram = slope * slope * eps + (4.0 / 3.0) * (1.0 - std::cbrt(eps)) -
                        2.0 * (1.0 - std::pow(eps, 2.0 / 3.0)) + (1.0 - eps);
    const double load = slope * (std::pow(eps, 0.25) - eps) + 2.0 * (std::pow(eps, -1.0 / 12.0) - 1.0) -
                        (1.0 - std::pow(eps, 0.25)) - (1.0 - std::pow(eps, 2.0 / 3.0)) + (1.0 - eps);
    out.c_galerkin = load / gram;
    out.galerkin = std::abs(out.c_galerkin) * phi_norm;
    const double step = std::max(1e-3, 0.1 * std::abs(out.c_galerkin));

    const double c_best =
        convex_min([&](double c) { return norm([&](double x) { return du(x) - c * dphi(x); }, p); }, out.c_galerkin, step, kTol);
    out.best_w1p = std::abs(c_best) * phi_norm;

    double k_last = 0.0;  // warm start for the inner search
    auto reduced = [&](double c) {
        auto inner = [&](double k) { return norm([&](double x) { return du(x) - c * dphi(x) - k; }, p); };
        k_last = convex_min(inner, k_last, 0.01, kTol);
        return inner(k_last);
    };
    const double c_ideal = convex_min(reduced, out.c_galerkin, step, kTol);
    out.ideal_rm = std::abs(c_ideal) * phi_norm;

    // V = span{phi, psi}: functional (a - c b) over the basis; dual norm by
    // scanning unit directions of the two-dimensional coefficient space.
    const double a1 = I.integral([&](double x) { return du(x) * dphi(x); });
    const double a2 = I.integral([&](double x) { return du(x) * dpsi(x); });
    const double b1 = I.integral([&](double x) { return dphi(x) * dphi(x); });
    const double b2 = I.integral([&](double x) { return dphi(x) * dpsi(x); });
    auto vnorm = [&](double th) {
        const double cs = std::cos(th), sn = std::sin(th);
        return norm([&](double x) { return cs * dphi(x) + sn * dpsi(x); }, q);
    };
    const int samples = 720;
    std::vector<double> scan_norm(samples);
    for (int k = 0; k < samples; ++k) scan_norm[static_cast<std::size_t>(k)] = vnorm(std::numbers::pi * k / samples);
    auto dual = [&](double c) {
        const double g1 = a1 - c * b1, g2 = a2 - c * b2;
        auto quotient = [&](double th) { return std::abs(g1 * std::cos(th) + g2 * std::sin(th)) / vnorm(th); };
        int best = 0;
        double vbest = -1.0;
        for (int k = 0; k < samples; ++k) {
            const double th = std::numbers::pi * k / samples;
            const double v = std::abs(g1 * std::cos(th) + g2 * std::sin(th)) / scan_norm[static_cast<std::size_t>(k)];
            if (v > vbest) {
                vbest = v;
                best = k;
            }
        }
        const double h = std::numbers::pi / samples;
        // The quotient is flat at its maximum, so a coarse angle suffices.
        const double t = golden_section_min([&](double th) { return -quotient(th); }, h * (best - 1), h * (best + 1), 1e-9);
        return std::max(vbest, quotient(t));
    };
    const double c_inexact = convex_min(dual, out.c_galerkin, step, kTol);
    out.inexact_rm = std::abs(c_inexact) * phi_norm;
    out.c_best = c_best;
    out.c_ideal = c_ideal;
    out.c_inexact = c_inexact;
    return out;
}

// ---------------------------------------------------------------- mixed

Eigen::VectorXd direct_dual_residual_minimiser(const Eigen::MatrixXd& B, const Eigen::VectorXd& F,
                                               const Eigen::MatrixXd& M, double rho) {
    const double rho_dual = rho / (rho - 1.0);
    const Eigen::PartialPivLU<Eigen::MatrixXd> luT(M.transpose());
    const Eigen::MatrixXd MB = luT.solve(B);
    const Eigen::VectorXd MF = luT.solve(F);
    auto objective = [&](const std::vector<double>& u) {
        const Eigen::VectorXd uu = Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
        return lp(MF - MB * uu, rho_dual);
    };
    const Eigen::VectorXd start = MB.colPivHouseholderQr().solve(MF);
    const Minimum m = nelder_mead(objective, std::vector<double>(start.data(), start.data() + start.size()), 0.1, 1e-12);
    return Eigen::Map<const Eigen::VectorXd>(m.x.data(), static_cast<Eigen::Index>(m.x.size()));
}

}  // namespace nlpg::verify
