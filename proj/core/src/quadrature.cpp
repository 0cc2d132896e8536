#include "nlpg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "nlpg/errors.hpp"

namespace nlpg {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre g;
    g.x.resize(static_cast<std::size_t>(n));
    g.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        g.x[static_cast<std::size_t>(n - 1 - i)] = x;
        g.w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

class Emitter {
public:
    Emitter(const GaussLegendre& g, QuadPoints& out) : g_(g), out_(out) {}
    std::size_t cell = 0;

    void gauss(double a, double b) {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < g_.x.size(); ++i) push(mid + half * g_.x[i], half * g_.w[i]);
    }

    // Points of int_s^{s+H} (or int_{s-H}^{s} for dir < 0) under x = s + dir*H*t^m.
    void substitution(double s, double H, int dir, int m) {
        for (std::size_t i = 0; i < g_.x.size(); ++i) {
            const double t = 0.5 * (g_.x[i] + 1.0);
            const double tm1 = std::pow(t, m - 1);
            push(s + dir * H * tm1 * t, 0.5 * g_.w[i] * H * m * tm1);
        }
    }

    // Cell [a, b], graded toward a (la >= 0) and/or toward b (lb >= 0).
    void graded(double a, double b, int la, int lb, int m) {
        if (la >= 0 && lb >= 0) {
            const double mid = 0.5 * (a + b);
            graded(a, mid, la, -1, m);
            graded(mid, b, -1, lb, m);
            return;
        }
        if (la < 0 && lb < 0) {
            gauss(a, b);
            return;
        }
        const double h = b - a;
        const double anchor = la >= 0 ? a : b;
        int L = la >= 0 ? la : lb;
        // Cells below the round-off scale of the anchor would collapse to zero width.
        const double floor_width = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(anchor);
        while (L > 0 && h / std::ldexp(1.0, L) < floor_width) --L;
        for (int k = 0; k < L; ++k) {
            const double outer = h / std::ldexp(1.0, k), inner = h / std::ldexp(1.0, k + 1);
            if (la >= 0) gauss(a + inner, a + outer);
            else gauss(b - outer, b - inner);
        }
        const double H = h / std::ldexp(1.0, L);
        if (la >= 0) substitution(a, H, +1, m);
        else substitution(b, H, -1, m);
    }

private:
    void push(double x, double w) {
        out_.x.push_back(x);
        out_.w.push_back(w);
        out_.cell.push_back(cell);
    }
    const GaussLegendre& g_;
    QuadPoints& out_;
};

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
    if (order < 1 || order > 200) throw InvalidInput("gauss_legendre: order out of range");
    static std::mutex mtx;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

namespace {
bool same_point(double a, double b) {
    return std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
}
}  // namespace

std::vector<double> merge_breakpoints(const std::vector<std::vector<double>>& lists,
                                      const QuadratureRule& rule) {
    std::vector<double> all;
    for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
    if (all.empty()) throw InvalidInput("merge_breakpoints: no breakpoints");
    const auto [mn, mx] = std::minmax_element(all.begin(), all.end());
    const double lo = *mn, hi = *mx;
    for (const auto& s : rule.singular)
        if (s.x > lo && s.x < hi) all.push_back(s.x);
    std::sort(all.begin(), all.end());
    // Only merge points that agree to a few ulps: breakpoints like eps = 1e-16
    // next to 0 are meaningful and must survive.
    std::vector<double> out;
    for (double x : all)
        if (out.empty() || !same_point(x, out.back())) out.push_back(x);
    if (out.size() < 2) throw InvalidInput("merge_breakpoints: degenerate interval");
    out.back() = hi;
    return out;
}

QuadPoints quadrature_points(const std::vector<double>& breaks, const QuadratureRule& rule) {
    if (breaks.size() < 2) throw InvalidInput("quadrature_points: need two breakpoints");
    const GaussLegendre& g = gauss_legendre(rule.order);
    QuadPoints out;
    Emitter em(g, out);
    auto singular_levels = [&](double x) {
        for (const auto& s : rule.singular)
            if (same_point(s.x, x)) return s.levels >= 0 ? s.levels : rule.levels;
        return -1;
    };
    for (std::size_t c = 0; c + 1 < breaks.size(); ++c) {
        em.cell = c;
        em.graded(breaks[c], breaks[c + 1], singular_levels(breaks[c]), singular_levels(breaks[c + 1]),
                  rule.substitution_power);
    }
    return out;
}

double integrate(const ScalarFunction& f, const std::vector<double>& breaks, const QuadratureRule& rule) {
    const QuadPoints q = quadrature_points(merge_breakpoints({breaks}, rule), rule);
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) acc += q.w[i] * f(q.x[i]);
    return acc;
}

double lp_norm(const ScalarFunction& f, const Mesh1D& mesh, double p, const QuadratureRule& rule) {
    if (!(p >= 1.0)) throw InvalidInput("lp_norm: need p >= 1");
    const QuadPoints q = quadrature_points(merge_breakpoints({mesh.nodes()}, rule), rule);
    std::vector<double> vals(q.size());
    double m = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        vals[i] = std::abs(f(q.x[i]));
        if (!std::isfinite(vals[i]))
            throw InvalidInput("lp_norm: non-finite integrand sample in element " +
                               std::to_string(mesh.locate(q.x[i])) + " at x = " + std::to_string(q.x[i]));
        m = std::max(m, vals[i]);
    }
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) acc += q.w[i] * std::pow(vals[i] / m, p);
    return m * std::pow(acc, 1.0 / p);
}

}  // namespace nlpg
