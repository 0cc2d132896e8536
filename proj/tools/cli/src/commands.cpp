#include "nlpg/cli/commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "nlpg/cli/config.hpp"
#include "nlpg/cli/pool.hpp"
#include "nlpg/cli/report.hpp"
#include "nlpg/nlpg.hpp"
#include "nlpg/verify/acceptance.hpp"
#include "nlpg/verify/suites.hpp"

namespace nlpg::cli {

namespace {

struct Globals {
    std::string config;
    std::string output;
    std::string format = "csv";
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct SolverOpts {
    double tol = 1e-9;
    int max_iter = 100;
    double delta_end = 1e-10;
    double p_ratio = 1.3;

    SolverConfig make() const {
        SolverConfig c;
        c.newton_tol = tol;
        c.max_iter = max_iter;
        c.delta_end = delta_end;
        c.p_ratio = p_ratio;
        c.validate();
        return c;
    }

    void attach(CLI::App* sub) {
        sub->add_option("--solver-tol", tol, "Newton tolerance relative to ||F||");
        sub->add_option("--max-iter", max_iter, "Newton iterations per continuation level");
        sub->add_option("--delta-end", delta_end, "final relative smoothing parameter");
        sub->add_option("--p-ratio", p_ratio, "largest ratio of successive (p - 1) on the continuation path");
    }
};

struct Outcome {
    Report report;
    int code = kOk;
};

bool is_solver_failure(const std::exception& ex) { return dynamic_cast<const SolverFailure*>(&ex) != nullptr; }

// Runs a sweep on the worker pool and keeps failed points out of the table,
// recording them as notes and raising the exit code.
template <class T, class Fn>
std::vector<std::optional<T>> sweep(Outcome& out, std::size_t n, unsigned jobs, Fn fn,
                                    const std::function<std::string(std::size_t)>& label) {
    auto results = parallel_map<T>(n, jobs, fn, is_solver_failure);
    std::vector<std::optional<T>> values;
    for (std::size_t i = 0; i < n; ++i) {
        if (!results[i].value) {
            out.report.notes.push_back("failed " + label(i) + ": " + results[i].error);
            out.code = std::max(out.code, results[i].solver_failure ? int(kSolverFailure) : int(kConfigError));
        }
        values.push_back(std::move(results[i].value));
    }
    return values;
}

double local_rate(double h0, double e0, double h1, double e1) {
    if (!(h0 > 0 && h1 > 0 && e0 > 0 && e1 > 0) || h0 == h1) return std::nan("");
    return std::log(e0 / e1) / std::log(h0 / h1);
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void note_rate(Outcome& out, const std::string& what, const std::vector<double>& h, const std::vector<double>& e) {
    if (h.size() < 2) return;
    const RateFit f = estimate_rate(h, e);
    out.report.notes.push_back("fitted rate " + what + ": " + fmt_short(f.rate) + " (r2 " + fmt_short(f.r2) + ")");
}

// ----------------------------------------------------------------- commands

struct ConstantsCmd {
    double p_min = 1.02, p_max = 50.0;
    int p_steps = 60, grid_ao = 10000, grid_best = 721;

    void attach(CLI::App* s) {
        s->add_option("--p-min", p_min, "smallest exponent (> 1)");
        s->add_option("--p-max", p_max, "largest exponent");
        s->add_option("--p-steps", p_steps, "number of exponents, geometric in p - 1");
        s->add_option("--grid-ao", grid_ao, "angle grid for C_AO");
        s->add_option("--grid-best", grid_best, "angle grid for C_best");
    }

    Outcome run(const Globals& g) const {
        if (!(p_min > 1.0 && p_max >= p_min)) throw ConfigError("constants: need 1 < p-min <= p-max");
        if (p_steps < 1) throw ConfigError("constants: p-steps must be positive");
        std::vector<double> ps;
        for (int i = 0; i < p_steps; ++i) {
            const double t = p_steps == 1 ? 0.0 : double(i) / (p_steps - 1);
            ps.push_back(1.0 + (p_min - 1.0) * std::pow((p_max - 1.0) / (p_min - 1.0), t));
        }
        Outcome out;
        out.report.columns = {"p", "c_bm", "c_ao", "one_plus_c_ao", "c_best"};
        auto vals = sweep<GeometricConstants>(
            out, ps.size(), g.jobs, [&](std::size_t i) { return geometric_constants(ps[i], grid_ao, grid_best); },
            [&](std::size_t i) { return "p=" + fmt_short(ps[i]); });
        for (const auto& v : vals)
            if (v) out.report.add_row({v->p, v->c_bm, v->c_ao, 1.0 + v->c_ao, v->c_best});
        return out;
    }
};

std::vector<double> parse_vector(const std::string& s, const std::string& what) { return parse_double_list(s, what); }

struct BestApproxCmd {
    double p = 1.5;
    std::string y = "1,0", basis = "1,1";
    int random = 0;

    void attach(CLI::App* s) {
        s->add_option("--p", p, "exponent of l_p");
        s->add_option("--y", y, "target vector, comma separated");
        s->add_option("--basis", basis, "subspace basis, vectors separated by ';'");
        s->add_option("--random", random, "sample this many random (y, line) pairs in l_p(R^2) instead");
    }

    Outcome run(const Globals& g) const {
        if (!(p >= 1.0)) throw ConfigError("bestapprox: need p >= 1");
        struct Instance {
            LpVector y;
            std::vector<LpVector> basis;
        };
        std::vector<Instance> inst;
        if (random > 0) {
            std::mt19937_64 rng(g.seed);
            std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
            for (int i = 0; i < random; ++i) {
                const double a = ang(rng), b = ang(rng);
                inst.push_back({LpVector({std::cos(a), std::sin(a)}, p), {LpVector({std::cos(b), std::sin(b)}, p)}});
            }
        } else {
            Instance one{LpVector(parse_vector(y, "--y"), p), {}};
            std::istringstream is(basis);
            std::string item;
            while (std::getline(is, item, ';')) {
                LpVector b(parse_vector(item, "--basis"), p);
                if (b.size() != one.y.size()) throw ConfigError("bestapprox: basis vector length differs from y");
                one.basis.push_back(std::move(b));
            }
            if (one.basis.empty()) throw ConfigError("bestapprox: empty basis");
            inst.push_back(std::move(one));
        }
        const double cao = compute_c_ao(p);
        Outcome out;
        out.report.columns = {"instance", "p", "ratio", "bound_bm", "bound_ao", "optimality_residual", "coeffs", "y0"};
        auto vals = sweep<BestApprox>(
            out, inst.size(), g.jobs, [&](std::size_t i) { return best_approx_lp(inst[i].y, inst[i].basis); },
            [](std::size_t i) { return "instance " + std::to_string(i); });
        auto join = [](const std::vector<double>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
            return s;
        };
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!vals[i]) continue;
            const AprioriCheck chk = check_apriori_bounds(inst[i].y, vals[i]->y0, cao);
            out.report.add_row({std::int64_t(i), p, chk.ratio, chk.bound_bm, chk.bound_ao, vals[i]->optimality_residual,
                                join(vals[i]->coeffs), join(vals[i]->y0.entries)});
        }
        return out;
    }
};

struct AdvectCmd {
    std::string p_list = "1.001,1.5,2", mesh_list = "2,4,8,16,32,64,128,256,512,1024";
    double shift = std::sqrt(0.5);

    void attach(CLI::App* s) {
        s->add_option("--p-list", p_list, "trial exponents");
        s->add_option("--mesh-list", mesh_list, "element counts on (0, 1)");
        s->add_option("--shift", shift, "jump location s of u = sign(x - s)");
    }

    Outcome run(const Globals& g, const SolverConfig& cfg) const {
        const auto ps = parse_double_list(p_list, "--p-list");
        const auto ns = parse_size_list(mesh_list, "--mesh-list");
        const AdvectionData data = AdvectionData::shifted_sign(shift);
        Outcome out;
        out.report.columns = {"p", "n_elem", "h", "lp_error", "max_average_error", "residual_norm", "iterations", "local_rate"};
        auto vals = sweep<CellAverageResult>(
            out, ps.size() * ns.size(), g.jobs,
            [&](std::size_t i) {
                return cell_average_solve(data, make_uniform_mesh(0.0, 1.0, ns[i % ns.size()]), ps[i / ns.size()], cfg);
            },
            [&](std::size_t i) { return "p=" + fmt_short(ps[i / ns.size()]) + " n=" + std::to_string(ns[i % ns.size()]); });
        for (std::size_t a = 0; a < ps.size(); ++a) {
            std::vector<double> h, e;
            for (std::size_t b = 0; b < ns.size(); ++b) {
                const auto& v = vals[a * ns.size() + b];
                if (!v) continue;
                const double hb = 1.0 / double(ns[b]);
                const double rate = h.empty() ? std::nan("") : local_rate(h.back(), e.back(), hb, v->lp_error);
                out.report.add_row({ps[a], std::int64_t(ns[b]), hb, v->lp_error, v->max_average_error, v->residual_norm,
                                    std::int64_t(v->solution.iterations), rate});
                h.push_back(hb);
                e.push_back(v->lp_error);
            }
            note_rate(out, "p=" + fmt_short(ps[a]) + " lp_error", h, e);
        }
        return out;
    }
};

struct GibbsCmd {
    std::string p_list = "2,1.5,1.25,1.125,1.01", k_list = "0";
    std::size_t n_elem = 6;
    int test_refine = 1;

    void attach(CLI::App* s) {
        s->add_option("--p-list", p_list, "trial exponents");
        s->add_option("--k-list", k_list, "test degrees; 0 selects the ideal test space");
        s->add_option("--n-elem", n_elem, "trial elements on (-1, 1)");
        s->add_option("--test-refine", test_refine, "uniform refinements of the test mesh for k >= 1");
    }

    Outcome run(const Globals& g, const SolverConfig& cfg) const {
        const auto ps = parse_double_list(p_list, "--p-list");
        std::vector<int> ks;
        for (double k : parse_double_list(k_list, "--k-list")) {
            if (k < 0 || k != std::floor(k)) throw ConfigError("--k-list: degrees must be non-negative integers");
            ks.push_back(int(k));
        }
        if (n_elem < 2 || n_elem % 2) throw ConfigError("gibbs: n-elem must be even and at least 2");
        struct Row {
            double overshoot;
            int iterations;
        };
        Outcome out;
        out.report.columns = {"k_test", "p", "n_elem", "h", "overshoot", "iterations"};
        auto vals = sweep<Row>(
            out, ks.size() * ps.size(), g.jobs,
            [&](std::size_t i) -> Row {
                const int k = ks[i / ps.size()];
                const double p = ps[i % ps.size()];
                if (k == 0) return {overshoot(gibbs_ideal(p, n_elem)), 0};
                const MixedProblem prob = gibbs_scenario(p, n_elem, k, test_refine);
                const MixedSolution sol = solve_mixed(prob, cfg);
                return {overshoot(DiscreteFunction(prob.trial, sol.u)), sol.iterations};
            },
            [&](std::size_t i) { return "k=" + std::to_string(ks[i / ps.size()]) + " p=" + fmt_short(ps[i % ps.size()]); });
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (vals[i])
                out.report.add_row({std::int64_t(ks[i / ps.size()]), ps[i % ps.size()], std::int64_t(n_elem),
                                    2.0 / double(n_elem), vals[i]->overshoot, std::int64_t(vals[i]->iterations)});
        return out;
    }
};

struct LaplaceCmd {
    bool smooth = false, rough = false;
    double p = 1.5, alpha = 0.25;
    int k = 1, k_test = 0;
    std::string mesh_list = "2,4,8,16,32,64";

    void attach(CLI::App* s) {
        auto* a = s->add_flag("--smooth", smooth, "f = e^x (default)");
        auto* b = s->add_flag("--rough", rough, "u = x^alpha - x");
        a->excludes(b);
        s->add_option("--p", p, "trial exponent");
        s->add_option("--alpha", alpha, "exponent of the rough solution");
        s->add_option("--k", k, "trial degree");
        s->add_option("--k-test", k_test, "test degree (0 means k + 1)");
        s->add_option("--mesh-list", mesh_list, "element counts on (0, 1)");
    }

    Outcome run(const Globals& g, const SolverConfig& cfg) const {
        const auto ns = parse_size_list(mesh_list, "--mesh-list");
        const LaplaceData data = rough ? LaplaceData::rough(p, alpha) : LaplaceData::smooth_exp(p);
        const int kt = k_test > 0 ? k_test : k + 1;
        Outcome out;
        out.report.columns = {"n_elem", "h", "energy_error", "residual_energy", "lp_error", "residual_lq",
                              "iterations", "energy_rate", "residual_rate", "lp_rate"};
        auto vals = sweep<LaplaceRow>(
            out, ns.size(), g.jobs, [&](std::size_t i) { return laplace_solve_level(data, k, kt, ns[i], cfg); },
            [&](std::size_t i) { return "n=" + std::to_string(ns[i]); });
        std::vector<double> h, ee, re, le;
        for (const auto& v : vals) {
            if (!v) continue;
            const bool first = h.empty();
            const double nan = std::nan("");
            out.report.add_row({std::int64_t(v->n_elem), v->h, v->energy_error, v->residual_energy, v->lp_error,
                                v->residual_lq, std::int64_t(v->iterations),
                                first ? nan : local_rate(h.back(), ee.back(), v->h, v->energy_error),
                                first ? nan : local_rate(h.back(), re.back(), v->h, v->residual_energy),
                                first ? nan : local_rate(h.back(), le.back(), v->h, v->lp_error)});
            h.push_back(v->h);
            ee.push_back(v->energy_error);
            re.push_back(v->residual_energy);
            le.push_back(v->lp_error);
        }
        note_rate(out, "energy_error", h, ee);
        note_rate(out, "residual_energy", h, re);
        note_rate(out, "lp_error", h, le);
        return out;
    }
};

struct GradedCmd {
    double p = 1.25;
    int eps_count = 16;
    std::string eps_list;

    void attach(CLI::App* s) {
        s->add_option("--p", p, "trial exponent");
        s->add_option("--eps-count", eps_count, "sweep eps = 0.5 * 10^-i for i < eps-count");
        s->add_option("--eps-list", eps_list, "explicit eps values (overrides --eps-count)");
    }

    Outcome run(const Globals& g, const SolverConfig& cfg) const {
        if (eps_list.empty() && eps_count < 1) throw ConfigError("graded: eps-count must be positive");
        const auto eps = eps_list.empty() ? default_graded_sweep(eps_count) : parse_double_list(eps_list, "--eps-list");
        Outcome out;
        out.report.columns = {"eps", "galerkin", "best_w1p", "ideal_rm", "inexact_rm", "c_galerkin", "c_best",
                              "c_ideal", "kappa_ideal", "c_inexact", "infsup_galerkin", "infsup_enriched"};
        auto vals = sweep<GradedRow>(
            out, eps.size(), g.jobs, [&](std::size_t i) { return graded_instability_row(eps[i], p, cfg); },
            [&](std::size_t i) { return "eps=" + fmt_short(eps[i]); });
        for (const auto& v : vals)
            if (v)
                out.report.add_row({v->eps, v->galerkin, v->best_w1p, v->ideal_rm, v->inexact_rm, v->c_galerkin, v->c_best,
                                    v->c_ideal, v->kappa_ideal, v->c_inexact, v->infsup_galerkin, v->infsup_enriched});
        return out;
    }
};

struct RatesCmd {
    std::string input, x = "h", y = "energy_error", group, h_list, error_list;

    void attach(CLI::App* s) {
        s->add_option("--input", input, "CSV written by another subcommand");
        s->add_option("--x", x, "column with mesh sizes");
        s->add_option("--y", y, "column with errors");
        s->add_option("--group", group, "fit separately for each value of this column");
        s->add_option("--h-list", h_list, "mesh sizes (instead of --input)");
        s->add_option("--error-list", error_list, "errors matching --h-list");
    }

    Outcome run() const {
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
        std::vector<std::string> order;
        auto add = [&](const std::string& key, double hv, double ev) {
            if (!groups.count(key)) order.push_back(key);
            groups[key].first.push_back(hv);
            groups[key].second.push_back(ev);
        };
        if (!input.empty()) {
            std::ifstream f(input);
            if (!f) throw ConfigError("rates: cannot read " + input);
            std::string line;
            std::vector<std::string> header;
            auto split = [](const std::string& s) {
                std::vector<std::string> out;
                std::string item;
                std::istringstream is(s);
                while (std::getline(is, item, ',')) out.push_back(item);
                return out;
            };
            while (std::getline(f, line)) {
                if (line.empty() || line[0] == '#') continue;
                if (header.empty()) {
                    header = split(line);
                    continue;
                }
                const auto cells = split(line);
                auto col = [&](const std::string& name) -> std::string {
                    for (std::size_t i = 0; i < header.size(); ++i)
                        if (header[i] == name) return i < cells.size() ? cells[i] : "";
                    throw ConfigError("rates: column '" + name + "' not found in " + input);
                };
                add(group.empty() ? "all" : col(group), std::stod(col(x)), std::stod(col(y)));
            }
        } else {
            const auto hv = parse_double_list(h_list, "--h-list");
            const auto ev = parse_double_list(error_list, "--error-list");
            if (hv.size() != ev.size()) throw ConfigError("rates: --h-list and --error-list differ in length");
            for (std::size_t i = 0; i < hv.size(); ++i) add("all", hv[i], ev[i]);
        }
        if (order.empty()) throw ConfigError("rates: no data points");
        Outcome out;
        out.report.columns = {"group", "points", "rate", "r2"};
        for (const auto& key : order) {
            const auto& [hv, ev] = groups[key];
            const RateFit fit = estimate_rate(hv, ev);
            out.report.add_row({key, std::int64_t(hv.size()), fit.rate, fit.r2});
        }
        return out;
    }
};

struct VerifyCmd {
    std::string suite = "duality";
    int criterion = 0;

    void attach(CLI::App* s) {
        s->add_option("suite,--suite", suite, "duality, bestapprox, equivalence, infsup, rates-smoke or acceptance");
        s->add_option("--criterion", criterion, "acceptance criterion to run (0 runs all)");
    }

    Outcome run(const Globals& g, std::ostream& err) const {
        Outcome out;
        out.report.columns = {"suite", "property", "status", "detail", "counterexample"};
        bool ok = true;
        if (suite == "acceptance") {
            if (criterion < 0 || criterion > verify::kCriterionCount) throw ConfigError("--criterion out of range");
            for (int id = 1; id <= verify::kCriterionCount; ++id) {
                if (criterion != 0 && id != criterion) continue;
                const verify::CriterionResult r = verify::run_criterion(id, g.seed);
                err << verify::format_line(r) << '\n';
                out.report.add_row({suite, "criterion-" + std::to_string(id) + " " + r.title, r.pass ? "pass" : "fail",
                                    r.detail, ""});
                out.report.notes.push_back("criterion " + std::to_string(id) + " seconds=" + fmt_short(r.seconds));
                ok = ok && r.pass;
            }
        } else {
            const auto& names = verify::suite_names();
            if (std::find(names.begin(), names.end(), suite) == names.end())
                throw ConfigError("unknown suite '" + suite + "'");
            for (const verify::Check& c : verify::run_suite(suite, g.seed)) {
                err << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
                out.report.add_row({suite, c.name, c.pass ? "pass" : "fail", c.detail, c.counterexample});
                ok = ok && c.pass;
            }
        }
        out.code = ok ? kOk : kSolverFailure;
        return out;
    }
};

// ------------------------------------------------------------------ driver

struct Cli {
    CLI::App app{"Nonlinear Petrov-Galerkin experiments in one dimension", "nlpg"};
    Globals g;
    SolverOpts solver;
    ConstantsCmd constants;
    BestApproxCmd bestapprox;
    AdvectCmd advect;
    GibbsCmd gibbs;
    LaplaceCmd laplace;
    GradedCmd graded;
    RatesCmd rates;
    VerifyCmd verify;
    std::map<std::string, CLI::App*> subs;

    Cli() {
        app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app.require_subcommand(1);
        app.fallthrough();
        app.add_option("--config", g.config, "flat key=value file; command-line flags take precedence");
        app.add_option("--output", g.output, "output directory, or a file ending in .csv or .json");
        app.add_option("--seed", g.seed, "seed for randomised suites");
        app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::Range(1u, 1024u));
        app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

        auto add = [&](const char* name, const char* help) { return subs[name] = app.add_subcommand(name, help); };
        constants.attach(add("constants", "geometric constants C_BM, C_AO and C_best against p"));
        bestapprox.attach(add("bestapprox", "best l_p approximation from a subspace"));
        auto* a = add("advect", "cell-average study for u = sign(x - s)");
        advect.attach(a);
        solver.attach(a);
        auto* gb = add("gibbs", "overshoot of P1 approximations of sign(x)");
        gibbs.attach(gb);
        solver.attach(gb);
        auto* l = add("laplace", "convergence study for -u'' = f");
        laplace.attach(l);
        solver.attach(l);
        auto* gr = add("graded", "graded one-dimensional trial space study");
        graded.attach(gr);
        solver.attach(gr);
        rates.attach(add("rates", "least-squares convergence rates"));
        verify.attach(add("verify", "property suites and acceptance criteria"));
    }

    CLI::App* selected() const {
        for (const auto& [name, s] : subs)
            if (s->parsed()) return s;
        return nullptr;
    }
};

std::string option_label(const CLI::Option* o) {
    if (!o->get_lnames().empty()) return o->get_lnames().front();
    return o->get_name();
}

void collect_meta(const CLI::App* app, std::vector<std::pair<std::string, std::string>>& meta) {
    for (const CLI::Option* o : app->get_options()) {
        const std::string name = option_label(o);
        if (name == "help" || name.empty()) continue;
        std::string value;
        if (o->count() > 0) {
            for (const auto& r : o->reduced_results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = o->get_default_str();
        }
        meta.emplace_back(name, value);
    }
}

// Inserts config entries as --name=value tokens ahead of the command-line
// tokens they belong to, so the last occurrence (the command line) wins.
std::vector<std::string> inject_config(Cli& cli, std::vector<std::string> args, const ConfigFile& cfg) {
    std::size_t pos = args.size();
    for (std::size_t i = 0; i < args.size(); ++i)
        if (cli.subs.count(args[i])) {
            pos = i;
            break;
        }
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [k, v] : cfg.entries) {
        if (k == "scenario") scenario = v;
        else entries.emplace_back(option_for_key(k), v);
    }
    if (pos == args.size()) {
        if (scenario.empty()) return args;
        if (!cli.subs.count(scenario)) throw ConfigError(cfg.path + ": unknown scenario '" + scenario + "'");
        args.push_back(scenario);
    }
    CLI::App* sub = cli.subs.at(args[pos]);
    std::vector<std::string> global_tokens, sub_tokens;
    for (const auto& [name, value] : entries) {
        const std::string flag = "--" + name;
        if (name != "config" && cli.app.get_option_no_throw(flag)) global_tokens.push_back(flag + "=" + value);
        else if (sub->get_option_no_throw(flag)) sub_tokens.push_back(flag + "=" + value);
        else throw ConfigError(cfg.path + ": unknown key '" + name + "' for " + args[pos]);
    }
    std::vector<std::string> out(global_tokens);
    out.insert(out.end(), args.begin(), args.begin() + std::ptrdiff_t(pos) + 1);
    out.insert(out.end(), sub_tokens.begin(), sub_tokens.end());
    out.insert(out.end(), args.begin() + std::ptrdiff_t(pos) + 1, args.end());
    return out;
}

std::string find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return "";
}

}  // namespace

int run_cli(const std::vector<std::string>& raw, std::ostream& err) {
    Cli cli;
    std::vector<std::string> args = raw;
    try {
        const std::string path = find_config(raw);
        if (!path.empty()) args = inject_config(cli, args, load_config(path));
    } catch (const ConfigError& ex) {
        err << "config error: " << ex.what() << '\n';
        return kConfigError;
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        cli.app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return cli.app.exit(e, std::cout, err);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.app.exit(e, std::cout, err);
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    CLI::App* sub = cli.selected();
    const std::string name = sub->get_name();
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        const Format fmt = parse_format(cli.g.format);
        if (name == "constants") out = cli.constants.run(cli.g);
        else if (name == "bestapprox") out = cli.bestapprox.run(cli.g);
        else if (name == "advect") out = cli.advect.run(cli.g, cli.solver.make());
        else if (name == "gibbs") out = cli.gibbs.run(cli.g, cli.solver.make());
        else if (name == "laplace") out = cli.laplace.run(cli.g, cli.solver.make());
        else if (name == "graded") out = cli.graded.run(cli.g, cli.solver.make());
        else if (name == "rates") out = cli.rates.run();
        else out = cli.verify.run(cli.g, err);

        out.report.scenario = name;
        collect_meta(&cli.app, out.report.meta);
        collect_meta(sub, out.report.meta);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.report.notes.push_back("rows=" + std::to_string(out.report.rows.size()));
        out.report.notes.push_back("wall_time_s=" + fmt_short(wall));
        emit(out.report, cli.g.output, fmt);
        for (const auto& n : out.report.notes)
            if (n.rfind("failed", 0) == 0) err << n << '\n';
        return out.code;
    } catch (const SolverFailure& ex) {
        err << "solver failure: " << ex.what() << '\n';
        return kSolverFailure;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return kConfigError;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kConfigError;
    }
}

}  // namespace nlpg::cli
