#include "nlpg/verify/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "nlpg/nlpg.hpp"
#include "nlpg/verify/oracles.hpp"

namespace nlpg::verify {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
    return s;
}

// Records the first failure only; later failures just flip the flag.
void fail(Check& c, const std::string& what) {
    if (c.pass) c.counterexample = what;
    c.pass = false;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

constexpr double kRhos[] = {1.1, 1.5, 2.0, 3.0, 5.0};

Mesh1D random_mesh(std::mt19937_64& rng, std::size_t n_elem) {
    std::uniform_real_distribution<double> gap(0.2, 1.0);
    std::vector<double> nodes{0.0};
    for (std::size_t i = 0; i < n_elem; ++i) nodes.push_back(nodes.back() + gap(rng));
    for (double& x : nodes) x /= nodes.back();
    nodes.back() = 1.0;
    return Mesh1D(nodes);
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

// A small random mixed problem whose test norm is ||M v||_rho with M square.
struct RandomProblem {
    Eigen::MatrixXd B, M;
    Eigen::VectorXd F;
    double rho = 2.0;
    MixedProblem prob;
    std::string describe() const {
        std::ostringstream os;
        os << "rho=" << rho << " B=[" << B.format(Eigen::IOFormat(17, Eigen::DontAlignCols, ",", ";")) << "] F=["
           << F.transpose().format(Eigen::IOFormat(17, Eigen::DontAlignCols, ",", ";")) << "] M=["
           << M.format(Eigen::IOFormat(17, Eigen::DontAlignCols, ",", ";")) << "]";
        return os.str();
    }
};

RandomProblem random_problem(std::mt19937_64& rng, double rho) {
    std::uniform_int_distribution<int> du(1, 3);
    const int n = du(rng);
    std::uniform_int_distribution<int> dv(n, 6);
    const int m = dv(rng);
    RandomProblem rp;
    rp.rho = rho;
    rp.B.resize(m, n);
    for (int j = 0; j < n; ++j) rp.B.col(j) = random_vector(rng, m);
    rp.F = random_vector(rng, m);
    rp.M = Eigen::MatrixXd::Identity(m, m);
    for (int j = 0; j < m; ++j) rp.M.col(j) += 0.3 * random_vector(rng, m);
    NormTerm term;
    term.L = rp.M.sparseView();
    term.w = Eigen::VectorXd::Ones(m);
    SampledNorm vnorm;
    vnorm.terms.push_back(term);
    vnorm.rho = rho;
    rp.prob = make_algebraic_problem(rp.B.sparseView(), rp.F, vnorm);
    return rp;
}

}  // namespace

std::vector<std::size_t> log_spaced_counts(std::size_t lo, std::size_t hi, int count) {
    std::vector<std::size_t> out;
    const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        const auto n = static_cast<std::size_t>(std::llround(std::exp(a + t * (b - a))));
        if (out.empty() || n != out.back()) out.push_back(n);
    }
    return out;
}

// ------------------------------------------------------------------ duality

Check duality_identities(int count, std::uint64_t seed) {
    Check c{"duality-identities", true, "", ""};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ne(1, 6), deg(1, 3);
    double worst = 0.0;
    const ScalarFunction beta = [](double x) { return 1.0 + 0.5 * x; };
    const ScalarFunction dbeta = [](double) { return 0.5; };
    for (int i = 0; i < count; ++i) {
        const int kind = i % 3;
        const double rho = kRhos[(i / 3) % 5];
        const Mesh1D mesh = random_mesh(rng, static_cast<std::size_t>(ne(rng)));
        auto space = std::make_shared<const FESpace>(FESpace::continuous(mesh, deg(rng)));
        const NormSpec spec = kind == 0   ? NormSpec::values(rho)
                              : kind == 1 ? NormSpec::derivative(rho)
                                          : NormSpec::graph(rho, beta, dbeta);
        const SampledNorm sn = sample_norm(spec, *space);
        const Eigen::VectorXd v = random_vector(rng, static_cast<Eigen::Index>(space->dim()));
        const double nv = sn.norm(v);
        const Eigen::VectorXd g = sn.duality_map(v);

        // Independent density per norm term and the Holder certificate of the dual norm.
        Eigen::VectorXd g_ref = Eigen::VectorXd::Zero(v.size());
        double dual_sq = 0.0, norm_sq = 0.0;
        for (const NormTerm& t : sn.terms) {
            const Eigen::VectorXd z = t.L * v;
            const double nt = std::pow((t.w.array() * z.array().abs().pow(rho)).sum(), 1.0 / rho);
            norm_sq += nt * nt;
            if (nt == 0.0) continue;
            const Eigen::VectorXd j =
                (std::pow(nt, 2.0 - rho) * z.array().abs().pow(rho - 1.0) * z.array().sign()).matrix();
            g_ref += t.L.transpose() * (t.w.array() * j.array()).matrix();
            const double rq = rho / (rho - 1.0);
            const double jn = std::pow((t.w.array() * j.array().abs().pow(rq)).sum(), 1.0 / rq);
            dual_sq += jn * jn;
        }
        const double e1 = rel_err(g.dot(v), nv * nv);
        const double e2 = (g - g_ref).cwiseAbs().maxCoeff() / std::max(g_ref.cwiseAbs().maxCoeff(), 1e-300);
        const double e3 = rel_err(std::sqrt(dual_sq), nv);
        const double e4 = rel_err(std::sqrt(norm_sq), nv);
        double e5 = 0.0;
        if (i % 10 == 0) {
            const DiscreteFunction r(space, v);
            const double pn = spec_norm(spec, r);
            e5 = std::max(rel_err(duality_pairing(spec, r, r), pn * pn), rel_err(pn, nv));
        }
        const double e = std::max({e1, e2, e3, e4, e5});
        worst = std::max(worst, e);
        if (!(e <= 1e-10))
            fail(c, "instance " + std::to_string(i) + " seed " + std::to_string(seed) + " kind " +
                        std::to_string(kind) + " rho " + fmt(rho) + " errors " + join({e1, e2, e3, e4, e5}));
    }
    c.detail = std::to_string(count) + " functions, worst relative error " + fmt(worst);
    return c;
}

Check duality_homogeneity(int count, std::uint64_t seed) {
    Check c{"duality-homogeneity", true, "", ""};
    std::mt19937_64 rng(seed + 11);
    std::uniform_real_distribution<double> lam(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const double p = kRhos[i % 5];
        const Eigen::VectorXd v = random_vector(rng, 5);
        const double l = lam(rng);
        const auto a = duality_map_lp(LpVector({v.data(), v.data() + v.size()}, p));
        const Eigen::VectorXd lv = l * v;
        const auto b = duality_map_lp(LpVector({lv.data(), lv.data() + lv.size()}, p));
        double e = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            e = std::max(e, std::abs(b.entries[k] - l * a.entries[k]));
            scale = std::max(scale, std::abs(l * a.entries[k]));
        }
        e /= std::max(scale, 1e-300);
        worst = std::max(worst, e);
        if (!(e <= 1e-12)) fail(c, "instance " + std::to_string(i) + " p " + fmt(p) + " lambda " + fmt(l));
    }
    c.detail = std::to_string(count) + " pairs, worst relative deviation " + fmt(worst);
    return c;
}

Check duality_monotonicity(int count, std::uint64_t seed) {
    Check c{"duality-monotonicity", true, "", ""};
    std::mt19937_64 rng(seed + 23);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        const double p = kRhos[i % 5];
        const Eigen::VectorXd v = random_vector(rng, 4), w = random_vector(rng, 4);
        const LpVector lv({v.data(), v.data() + 4}, p), lw({w.data(), w.data() + 4}, p);
        const auto jv = duality_map_lp(lv), jw = duality_map_lp(lw);
        double lhs = 0.0;
        for (int k = 0; k < 4; ++k) lhs += (jv.entries[k] - jw.entries[k]) * (v[k] - w[k]);
        const double rhs = std::pow(lv.norm() - lw.norm(), 2);
        worst = std::min(worst, lhs - rhs);
        if (!(lhs >= rhs - 1e-10)) fail(c, "instance " + std::to_string(i) + " p " + fmt(p));
    }
    c.detail = std::to_string(count) + " pairs, smallest margin " + fmt(worst);
    return c;
}

Check duality_subdifferential(int count, std::uint64_t seed) {
    Check c{"duality-subdifferential", true, "", ""};
    std::mt19937_64 rng(seed + 37);
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const double p = kRhos[i % 5];
        const Eigen::VectorXd v = random_vector(rng, 4);
        const LpVector lv({v.data(), v.data() + 4}, p);
        const auto j = duality_map_lp(lv);
        const double h = 1e-5 * lv.norm();
        double e = 0.0;
        for (int k = 0; k < 4; ++k) {
            LpVector a = lv, b = lv;
            a.entries[static_cast<std::size_t>(k)] += h;
            b.entries[static_cast<std::size_t>(k)] -= h;
            const double fd = (0.5 * a.norm() * a.norm() - 0.5 * b.norm() * b.norm()) / (2.0 * h);
            e = std::max(e, std::abs(fd - j.entries[static_cast<std::size_t>(k)]) / lv.norm());
        }
        worst = std::max(worst, e);
        if (!(e <= 1e-6)) fail(c, "instance " + std::to_string(i) + " p " + fmt(p) + " error " + fmt(e));
    }
    c.detail = std::to_string(count) + " vectors, worst central-difference gap " + fmt(worst);
    return c;
}

Check duality_examples() {
    Check c{"duality-examples", true, "", ""};
    auto close = [](const LpVector& a, std::vector<double> b) {
        for (std::size_t k = 0; k < b.size(); ++k)
            if (std::abs(a.entries[k] - b[k]) > 1e-14) return false;
        return true;
    };
    if (!close(duality_map_lp(LpVector({3.0, 4.0}, 2.0)), {3.0, 4.0})) fail(c, "p=2 v=(3,4)");
    for (double p : kRhos)
        if (!close(duality_map_lp(LpVector({1.0, 0.0}, p)), {1.0, 0.0})) fail(c, "v=(1,0) p=" + fmt(p));
    const double s = std::sqrt(0.5);
    if (!close(duality_map_lp(LpVector({1.0, 1.0}, 4.0)), {s, s})) fail(c, "p=4 v=(1,1)");

    auto space = std::make_shared<const FESpace>(FESpace::continuous(make_uniform_mesh(0.0, 1.0, 2), 2, BoundaryCondition::ZeroBoth));
    const DiscreteFunction r = interpolate(space, [](double x) { return x * (1.0 - x); });
    const double pairing = duality_pairing(NormSpec::derivative(3.0), r, r);
    const double expected = std::pow(0.25, 2.0 / 3.0);
    if (rel_err(pairing, expected) > 1e-12) fail(c, "x(1-x) rho=3 pairing " + fmt(pairing));
    c.detail = "closed-form duality map and pairing values, x(1-x) pairing " + fmt(pairing);
    return c;
}

// ----------------------------------------------------- best approximation

Check apriori_bounds(int per_p, std::uint64_t seed) {
    Check c{"apriori-bounds", true, "", ""};
    std::mt19937_64 rng(seed + 101);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    std::string summary;
    for (double p : {1.05, 1.5, 3.0, 20.0}) {
        const double cao = compute_c_ao(p);
        const double bound = std::min(c_bm(p), 1.0 + cao);
        double worst = 0.0;
        for (int i = 0; i < per_p; ++i) {
            const double a = ang(rng), b = ang(rng);
            const LpVector y({std::cos(a), std::sin(a)}, p);
            const LpVector z({std::cos(b), std::sin(b)}, p);
            const BestApprox ba = best_approx_lp(y, {z});
            const double ratio = ba.y0.norm() / y.norm();
            worst = std::max(worst, ratio);
            const AprioriCheck chk = check_apriori_bounds(y, ba.y0, cao);
            if (!(ratio <= bound + 1e-6) || !chk.holds())
                fail(c, "p " + fmt(p) + " y angle " + fmt(a) + " subspace angle " + fmt(b) + " ratio " + fmt(ratio));
        }
        summary += (summary.empty() ? "" : ", ") + std::string("p=") + fmt(p) + " max ratio " + fmt(worst) +
                   " bound " + fmt(bound);
    }
    c.detail = std::to_string(per_p) + " instances per p; " + summary;
    return c;
}

Check ao_constant_values() {
    Check c{"ao-constant-values", true, "", ""};
    const double c2 = compute_c_ao(2.0), c3 = compute_c_ao(3.0), c15 = compute_c_ao(1.5), c101 = compute_c_ao(1.01);
    const double c1 = compute_c_ao(1.0);
    if (c2 != 0.0) fail(c, "C_AO(2) = " + fmt(c2));
    if (!(std::abs(c3 - c15) <= 1e-6)) fail(c, "C_AO(3) - C_AO(1.5) = " + fmt(c3 - c15));
    if (!(c101 > 0.9)) fail(c, "C_AO(1.01) = " + fmt(c101));
    if (!(std::abs(c1 - 1.0) <= 1e-12)) fail(c, "C_AO(1) = " + fmt(c1));
    c.detail = "C_AO(2)=" + fmt(c2) + " C_AO(3)=" + fmt(c3) + " C_AO(1.5)=" + fmt(c15) + " C_AO(1.01)=" + fmt(c101);
    return c;
}

Check best_approx_optimality(int count, std::uint64_t seed) {
    Check c{"bestapprox-optimality", true, "", ""};
    std::mt19937_64 rng(seed + 131);
    const double ps[] = {1.2, 1.5, 3.0, 5.0};
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const double p = ps[i % 4];
        auto vec = [&]() {
            const Eigen::VectorXd v = random_vector(rng, 6);
            return LpVector({v.data(), v.data() + 6}, p);
        };
        const LpVector y = vec();
        const std::vector<LpVector> basis{vec(), vec()};
        const BestApprox ba = best_approx_lp(y, basis);
        LpVector res = y;
        for (std::size_t k = 0; k < 6; ++k) res.entries[k] -= ba.y0.entries[k];
        const LpVector j = duality_map_lp(res);
        double e = 0.0;
        for (const auto& b : basis) {
            double dot = 0.0;
            for (std::size_t k = 0; k < 6; ++k) dot += j.entries[k] * b.entries[k];
            e = std::max(e, std::abs(dot) / (res.norm() * b.norm()));
        }
        worst = std::max(worst, e);
        if (!(e <= 1e-8)) fail(c, "instance " + std::to_string(i) + " p " + fmt(p) + " residual " + fmt(e));
    }
    c.detail = std::to_string(count) + " instances in R^6, worst first-order residual " + fmt(worst);
    return c;
}

Check best_approx_scan_example() {
    Check c{"bestapprox-examples", true, "", ""};
    const double p = 1.5;
    const BestApprox ba = best_approx_lp(LpVector({1.0, 0.0}, p), {LpVector({1.0, 1.0}, p)});
    const double cs = scan_golden_min([&](double t) { return lp(Eigen::Vector2d(1.0 - t, -t), p); }, -2.0, 2.0, 4001);
    if (!(std::abs(ba.coeffs[0] - cs) <= 1e-6)) fail(c, "p=3/2 coefficient " + fmt(ba.coeffs[0]) + " scan " + fmt(cs));

    const double s = std::sqrt(0.5);
    const BestApprox h = best_approx_lp(LpVector({1.0, 0.0}, 2.0), {LpVector({s, s}, 2.0)});
    if (std::abs(h.y0.entries[0] - 0.5) > 1e-12 || std::abs(h.y0.entries[1] - 0.5) > 1e-12) fail(c, "p=2 projection");

    const BestApprox in = best_approx_lp(LpVector({2.0, 2.0, 1.0}, 3.0), {LpVector({1.0, 1.0, 0.0}, 3.0), LpVector({0.0, 0.0, 1.0}, 3.0)});
    if (std::abs(in.y0.entries[0] - 2.0) > 1e-12 || in.optimality_residual > 1e-12) fail(c, "y in span");
    c.detail = "p=3/2 coefficient " + fmt(ba.coeffs[0]) + " vs scan " + fmt(cs);
    return c;
}

Check constant_ordering() {
    Check c{"constant-ordering", true, "", ""};
    std::string d;
    for (double p : {1.05, 1.25, 1.5, 3.0, 8.0}) {
        const double cb = compute_c_best(p), bm = c_bm(p), ao = compute_c_ao(p);
        if (!(cb >= 1.0 - 1e-9 && cb <= bm + 1e-6 && bm <= 1.0 + ao + 1e-6))
            fail(c, "p " + fmt(p) + " C_best " + fmt(cb) + " C_BM " + fmt(bm) + " 1+C_AO " + fmt(1.0 + ao));
        if (p == 1.5 && !(cb > 1.0 && cb < bm)) fail(c, "C_best(3/2) not strictly between 1 and C_BM");
        d += (d.empty() ? "" : ", ") + std::string("p=") + fmt(p) + ": " + fmt(cb) + " <= " + fmt(bm) + " <= " + fmt(1.0 + ao);
    }
    c.detail = d;
    return c;
}

// ------------------------------------------------------------ mixed method

Check formulation_equivalence(int count, std::uint64_t seed) {
    Check c{"formulation-equivalence", true, "", ""};
    std::mt19937_64 rng(seed + 211);
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const double rho = i % 2 == 0 ? 1.5 : 3.0;
        const RandomProblem rp = random_problem(rng, rho);
        try {
            const MixedSolution sol = solve_mixed(rp.prob);
            const Eigen::VectorXd ref = direct_dual_residual_minimiser(rp.B, rp.F, rp.M, rho);
            const double e = (sol.u - ref).cwiseAbs().maxCoeff();
            worst = std::max(worst, e);
            if (!(e <= 1e-6)) fail(c, "problem " + std::to_string(i) + " gap " + fmt(e) + " " + rp.describe());
        } catch (const Error& ex) {
            fail(c, "problem " + std::to_string(i) + " threw: " + ex.what() + " " + rp.describe());
        }
    }
    c.detail = std::to_string(count) + " problems (dim U <= 3, dim V <= 6), worst coefficient gap " + fmt(worst);
    return c;
}

Check descent_cross_check(int count, std::uint64_t seed) {
    Check c{"descent-cross-check", true, "", ""};
    std::mt19937_64 rng(seed + 223);
    const double rhos[] = {1.2, 1.5, 3.0, 5.0};
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const RandomProblem rp = random_problem(rng, rhos[i % 4]);
        try {
            const MixedSolution a = solve_mixed(rp.prob);
            const MixedSolution b = solve_constrained_descent(rp.prob);
            const double e = (a.u - b.u).cwiseAbs().maxCoeff();
            worst = std::max(worst, e);
            if (!(e <= 1e-6)) fail(c, "problem " + std::to_string(i) + " gap " + fmt(e) + " " + rp.describe());
        } catch (const Error& ex) {
            fail(c, "problem " + std::to_string(i) + " threw: " + ex.what() + " " + rp.describe());
        }
    }
    c.detail = std::to_string(count) + " problems, worst gap between the two solvers " + fmt(worst);
    return c;
}

Check scaling_equivariance(int count, std::uint64_t seed) {
    Check c{"scaling-equivariance", true, "", ""};
    std::mt19937_64 rng(seed + 227);
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        RandomProblem rp = random_problem(rng, i % 2 == 0 ? 1.5 : 3.0);
        const MixedSolution a = solve_mixed(rp.prob);
        for (double lambda : {0.01, 7.0}) {
            MixedProblem scaled = rp.prob;
            scaled.F *= lambda;
            const MixedSolution b = solve_mixed(scaled);
            const double eu = (b.u - lambda * a.u).cwiseAbs().maxCoeff() / std::max(1.0, lambda * a.u.cwiseAbs().maxCoeff());
            const double er = (b.r - lambda * a.r).cwiseAbs().maxCoeff() / std::max(1.0, lambda * a.r.cwiseAbs().maxCoeff());
            worst = std::max({worst, eu, er});
            if (!(eu <= 1e-8 && er <= 1e-8)) fail(c, "problem " + std::to_string(i) + " lambda " + fmt(lambda));
        }
    }
    c.detail = std::to_string(count) + " problems scaled by 0.01 and 7, worst deviation " + fmt(worst);
    return c;
}

Check petrov_galerkin_collapse() {
    Check c{"petrov-galerkin-collapse", true, "", ""};
    struct Case {
        std::string name;
        MixedProblem prob;
    };
    std::vector<Case> cases;
    for (std::size_t n : {4u, 9u})
        for (double p : {1.5, 3.0}) {
            const AdvectionData data = AdvectionData::shifted_sign(std::sqrt(0.5));
            const Mesh1D mesh = make_uniform_mesh(0.0, 1.0, n);
            auto trial = std::make_shared<const FESpace>(FESpace::piecewise_constant(mesh));
            auto test = std::make_shared<const FESpace>(build_ideal_advection_test_space(mesh, data.beta, data.dbeta));
            cases.push_back({"advection P0xS n=" + std::to_string(n) + " p=" + fmt(p), advection_weak_problem(data, trial, test, p)});
        }
    for (int k : {1, 2})
        for (double p : {1.25, 1.5}) {
            const Mesh1D mesh = make_uniform_mesh(0.0, 1.0, 5);
            auto sp = std::make_shared<const FESpace>(FESpace::continuous(mesh, k, BoundaryCondition::ZeroBoth));
            cases.push_back({"laplace P" + std::to_string(k) + "xP" + std::to_string(k) + " p=" + fmt(p),
                             laplace_problem(LaplaceData::smooth_exp(p), sp, sp)});
        }
    for (double eps : {0.5, 5e-3}) cases.push_back({"graded eps=" + fmt(eps), graded_problem(eps, 1.25, false)});

    double worst_r = 0.0, worst_u = 0.0;
    for (const Case& cs : cases) {
        try {
            const MixedSolution sol = solve_mixed(cs.prob);
            const double rn = cs.prob.vnorm.norm(sol.r);
            const Eigen::MatrixXd B(cs.prob.B);
            const Eigen::VectorXd pg = B.partialPivLu().solve(cs.prob.F);
            const double du = (sol.u - pg).cwiseAbs().maxCoeff();
            worst_r = std::max(worst_r, rn);
            worst_u = std::max(worst_u, du);
            if (!(rn <= 1e-9 && du <= 1e-9)) fail(c, cs.name + ": ||r_m|| " + fmt(rn) + " |u - u_PG| " + fmt(du));
        } catch (const Error& ex) {
            fail(c, cs.name + " threw: " + ex.what());
        }
    }
    c.detail = std::to_string(cases.size()) + " square pairs, max ||r_m|| " + fmt(worst_r) + ", max |u - u_PG| " + fmt(worst_u);
    return c;
}

Check infsup_graded() {
    Check c{"infsup-graded", true, "", ""};
    std::vector<double> g, e;
    for (double eps : default_graded_sweep(16)) {
        g.push_back(discrete_infsup(graded_problem(eps, 1.25, false), 100).value);
        e.push_back(discrete_infsup(graded_problem(eps, 1.25, true), 100).value);
    }
    const double drop = g.front() / g.back();
    if (!(drop > 10.0)) fail(c, "Galerkin pair drops only by " + fmt(drop));
    for (double v : e)
        if (!(v >= 0.5 * e.front() && v <= 2.0 * e.front())) fail(c, "enriched pair value " + fmt(v) + " vs initial " + fmt(e.front()));
    c.detail = "(U,U): " + fmt(g.front()) + " -> " + fmt(g.back()) + " (factor " + fmt(drop) + "); (U,V): " +
               fmt(e.front()) + " -> " + fmt(e.back()) + ", range [" + fmt(*std::min_element(e.begin(), e.end())) +
               ", " + fmt(*std::max_element(e.begin(), e.end())) + "]";
    return c;
}

Check infsup_hilbert_identity() {
    Check c{"infsup-hilbert", true, "", ""};
    const Mesh1D mesh = make_uniform_mesh(0.0, 1.0, 4);
    auto sp = std::make_shared<const FESpace>(FESpace::continuous(mesh, 1, BoundaryCondition::ZeroBoth));
    MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(2.0), sp, sp);
    const double v = discrete_infsup(prob, 100).value;
    if (!(std::abs(v - 1.0) <= 1e-8)) fail(c, "value " + fmt(v));
    c.detail = "U = V with the V inner product: " + fmt(v);
    return c;
}

// ------------------------------------------------------------ applications

Check cell_average_study() {
    Check c{"cell-average-study", true, "", ""};
    const AdvectionData data = AdvectionData::shifted_sign(std::sqrt(0.5));
    const std::vector<std::size_t> counts = log_spaced_counts(2, 8192, 40);
    std::string d = std::to_string(counts.size()) + " meshes n=2..8192 (log-spaced)";
    double worst_avg = 0.0;
    for (double p : {1.0 + 1e-3, 1.5, 2.0}) {
        std::vector<double> h, err;
        for (std::size_t n : counts) {
            const Mesh1D mesh = make_uniform_mesh(0.0, 1.0, n);
            try {
                const CellAverageResult res = cell_average_solve(data, mesh, p);
                worst_avg = std::max(worst_avg, res.max_average_error);
                if (!(res.max_average_error <= 1e-9))
                    fail(c, "p " + fmt(p) + " n " + std::to_string(n) + " average error " + fmt(res.max_average_error));
                h.push_back(1.0 / static_cast<double>(n));
                err.push_back(res.lp_error);
            } catch (const Error& ex) {
                fail(c, "p " + fmt(p) + " n " + std::to_string(n) + " threw: " + ex.what());
            }
        }
        if (h.size() < 3) continue;
        const RateFit fit = estimate_rate(h, err);
        if (!(std::abs(fit.rate - 1.0 / p) <= 0.07)) fail(c, "p " + fmt(p) + " rate " + fmt(fit.rate) + " vs 1/p " + fmt(1.0 / p));
        d += "; p=" + fmt(p) + " rate " + fmt(fit.rate) + " (1/p=" + fmt(1.0 / p) + ")";
    }
    c.detail = d + "; max average error " + fmt(worst_avg);
    return c;
}

Check gibbs_suppression() {
    Check c{"gibbs-suppression", true, "", ""};
    const std::vector<double> ps{2.0, 1.5, 1.25, 1.125, 1.01};
    std::vector<double> ov, oracle;
    for (double p : ps) {
        try {
            ov.push_back(overshoot(gibbs_ideal(p, 6)));
        } catch (const Error& ex) {
            fail(c, "p " + fmt(p) + " threw: " + ex.what());
            ov.push_back(std::nan(""));
        }
        oracle.push_back(gibbs_oracle_overshoot(p, 6));
    }
    for (std::size_t i = 0; i + 1 < 4; ++i)
        if (!(ov[i + 1] < ov[i])) fail(c, "overshoot not decreasing at p=" + fmt(ps[i + 1]));
    if (!(ov[4] < 0.1 * ov[0])) fail(c, "overshoot(1.01) = " + fmt(ov[4]) + " not below 0.1 * overshoot(2)");
    double gap = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) gap = std::max(gap, std::abs(ov[i] - oracle[i]));
    if (!(gap <= 1e-6)) fail(c, "library vs direct-minimisation oracle gap " + fmt(gap));
    c.detail = "h=1/3 overshoot p={2,1.5,1.25,1.125,1.01}: " + join(ov) + "; oracle gap " + fmt(gap);
    return c;
}

Check laplace_smooth_rates() {
    Check c{"laplace-smooth-rates", true, "", ""};
    std::string d;
    for (int k : {1, 2, 3}) {
        try {
            const LaplaceStudy st = laplace_convergence_study(LaplaceData::smooth_exp(1.5), k, k + 1, {2, 4, 8, 16, 32, 64});
            if (!(std::abs(st.energy_rate.rate - k) <= 0.1)) fail(c, "k " + std::to_string(k) + " rate " + fmt(st.energy_rate.rate));
            double lo = 1e300, hi = 0.0;
            for (const auto& r : st.rows) {
                const double ratio = r.residual_energy / r.energy_error;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                if (!(ratio >= 1.0 / 3.0 && ratio <= 3.0))
                    fail(c, "k " + std::to_string(k) + " n " + std::to_string(r.n_elem) + " residual/error " + fmt(ratio));
            }
            d += (d.empty() ? "" : "; ") + std::string("k=") + std::to_string(k) + " rate " + fmt(st.energy_rate.rate) +
                 " residual/error in [" + fmt(lo) + ", " + fmt(hi) + "]";
        } catch (const Error& ex) {
            fail(c, "k " + std::to_string(k) + " threw: " + ex.what());
        }
    }
    c.detail = d;
    return c;
}

Check laplace_rough_rates() {
    Check c{"laplace-rough-rates", true, "", ""};
    const double p = 1.25;
    const std::vector<std::size_t> meshes{4, 8, 16, 32, 64, 128, 256, 512, 1024};
    std::string d;
    for (double alpha : {0.25, 0.375, 0.5}) {
        const LaplaceStudy st = laplace_convergence_study(LaplaceData::rough(p, alpha), 1, 2, meshes);
        const double target = 1.0 / p - 1.0 + alpha;
        if (!(std::abs(st.energy_rate.rate - target) <= 0.05))
            fail(c, "alpha " + fmt(alpha) + " energy rate " + fmt(st.energy_rate.rate) + " vs " + fmt(target));
        d += (d.empty() ? "" : "; ") + std::string("alpha=") + fmt(alpha) + " energy " + fmt(st.energy_rate.rate) + " (" + fmt(target) + ")";
    }
    const LaplaceStudy st = laplace_convergence_study(LaplaceData::rough(p, 0.4), 1, 2, meshes);
    if (!(std::abs(st.lp_rate.rate - 1.2) <= 0.15)) fail(c, "alpha 2/5 L^p rate " + fmt(st.lp_rate.rate));
    c.detail = d + "; alpha=0.4 L^p rate " + fmt(st.lp_rate.rate) + " (1.2), energy " + fmt(st.energy_rate.rate);
    return c;
}

Check graded_study() {
    Check c{"graded-study", true, "", ""};
    const double p = 1.25;
    const std::vector<GradedRow> rows = graded_instability_study(default_graded_sweep(16), p);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (!(rows[i + 1].galerkin > rows[i].galerkin)) fail(c, "Galerkin column not increasing at eps " + fmt(rows[i + 1].eps));
    const double growth = rows.back().galerkin / rows.front().galerkin;
    if (!(growth > 5.0)) fail(c, "Galerkin growth only " + fmt(growth));
    auto spread = [&](double GradedRow::*col) {
        double lo = 1e300, hi = 0.0;
        for (std::size_t i = rows.size() - 4; i < rows.size(); ++i) {
            lo = std::min(lo, rows[i].*col);
            hi = std::max(hi, rows[i].*col);
        }
        return hi / lo - 1.0;
    };
    const double s_ideal = spread(&GradedRow::ideal_rm), s_inexact = spread(&GradedRow::inexact_rm);
    if (!(s_ideal < 0.1)) fail(c, "ideal column varies by " + fmt(s_ideal));
    if (!(s_inexact < 0.1)) fail(c, "inexact column varies by " + fmt(s_inexact));
    double gap = 0.0;
    for (const GradedRow& r : rows) {
        const GradedOracle o = graded_oracle(r.eps, p);
        const double e = std::max({rel_err(r.galerkin, o.galerkin), rel_err(r.best_w1p, o.best_w1p),
                                   rel_err(r.ideal_rm, o.ideal_rm), rel_err(r.inexact_rm, o.inexact_rm)});
        gap = std::max(gap, e);
        if (!(e <= 0.01))
            fail(c, "eps " + fmt(r.eps) + " oracle mismatch: library " +
                        join({r.galerkin, r.best_w1p, r.ideal_rm, r.inexact_rm}) + " oracle " +
                        join({o.galerkin, o.best_w1p, o.ideal_rm, o.inexact_rm}));
    }
    c.detail = "Galerkin " + fmt(rows.front().galerkin) + " -> " + fmt(rows.back().galerkin) + " (x" + fmt(growth) +
               "); ideal -> " + fmt(rows.back().ideal_rm) + " (last-four spread " + fmt(s_ideal) + "); inexact -> " +
               fmt(rows.back().inexact_rm) + " (spread " + fmt(s_inexact) + "); max relative oracle gap " + fmt(gap);
    return c;
}

Check rates_smoke() {
    Check c{"rates-smoke", true, "", ""};
    const LaplaceStudy st = laplace_convergence_study(LaplaceData::smooth_exp(1.5), 1, 2, {4, 8, 16, 32});
    if (!(std::abs(st.energy_rate.rate - 1.0) <= 0.1)) fail(c, "Laplace P1 rate " + fmt(st.energy_rate.rate));

    const AdvectionData data = AdvectionData::shifted_sign(std::sqrt(0.5));
    std::vector<double> h, err;
    for (std::size_t n : log_spaced_counts(2, 1024, 16)) {
        const CellAverageResult res = cell_average_solve(data, make_uniform_mesh(0.0, 1.0, n), 2.0);
        h.push_back(1.0 / static_cast<double>(n));
        err.push_back(res.lp_error);
    }
    const RateFit fit = estimate_rate(h, err);
    if (!(std::abs(fit.rate - 0.5) <= 0.1)) fail(c, "cell-average p=2 rate " + fmt(fit.rate));

    const RateFit lin = estimate_rate({0.5, 0.25, 0.125}, {0.5, 0.25, 0.125});
    if (!(std::abs(lin.rate - 1.0) <= 1e-12 && std::abs(lin.r2 - 1.0) <= 1e-12)) fail(c, "synthetic rate fit");
    c.detail = "Laplace P1xP2 rate " + fmt(st.energy_rate.rate) + ", cell-average p=2 rate " + fmt(fit.rate);
    return c;
}

}  // namespace nlpg::verify
