#include "nlpg/verify/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "nlpg/verify/checks.hpp"

namespace nlpg::verify {

namespace {

struct Criterion {
    const char* title;
    double limit;
    std::function<std::vector<Check>(std::uint64_t)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {"duality-map identities", 10.0, [](std::uint64_t s) { return std::vector<Check>{duality_identities(1000, s)}; }},
        {"formulation equivalence", 60.0, [](std::uint64_t s) { return std::vector<Check>{formulation_equivalence(20, s)}; }},
        {"Petrov-Galerkin collapse", 0.0, [](std::uint64_t) { return std::vector<Check>{petrov_galerkin_collapse()}; }},
        {"cell averages and advection rates", 300.0, [](std::uint64_t) { return std::vector<Check>{cell_average_study()}; }},
        {"Gibbs suppression", 300.0, [](std::uint64_t) { return std::vector<Check>{gibbs_suppression()}; }},
        {"Laplace smooth rates", 600.0, [](std::uint64_t) { return std::vector<Check>{laplace_smooth_rates()}; }},
        {"Laplace rough rates", 600.0, [](std::uint64_t) { return std::vector<Check>{laplace_rough_rates()}; }},
        {"graded-mesh study", 120.0, [](std::uint64_t) { return std::vector<Check>{graded_study()}; }},
        {"best-approximation bounds", 60.0,
         [](std::uint64_t s) { return std::vector<Check>{apriori_bounds(1000, s), ao_constant_values()}; }},
        {"inf-sup diagnostic", 120.0, [](std::uint64_t) { return std::vector<Check>{infsup_graded()}; }},
    };
    return list;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
    if (id < 1 || id > kCriterionCount) throw std::out_of_range("acceptance criterion must be in 1.." + std::to_string(kCriterionCount));
    const Criterion& c = criteria()[static_cast<std::size_t>(id - 1)];
    CriterionResult r;
    r.id = id;
    r.title = c.title;
    r.limit = c.limit;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Check> checks;
    try {
        checks = c.run(seed);
    } catch (const std::exception& ex) {
        checks.push_back({"exception", false, "", ex.what()});
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = true;
    for (const Check& ch : checks) {
        r.pass = r.pass && ch.pass;
        if (!r.detail.empty()) r.detail += " | ";
        r.detail += ch.detail;
        if (!ch.pass) r.detail += " | FAILED " + ch.name + ": " + ch.counterexample;
    }
    if (r.limit > 0.0 && r.seconds > r.limit) {
        r.pass = false;
        r.detail += " | exceeded the time limit";
    }
    return r;
}

std::vector<CriterionResult> run_all_criteria(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
    return out;
}

std::string format_line(const CriterionResult& r) {
    char head[160];
    if (r.limit > 0.0)
        std::snprintf(head, sizeof head, "[%s] criterion %d %s (%.2f s, limit %.0f s): ", r.pass ? "PASS" : "FAIL", r.id,
                      r.title.c_str(), r.seconds, r.limit);
    else
        std::snprintf(head, sizeof head, "[%s] criterion %d %s (%.2f s): ", r.pass ? "PASS" : "FAIL", r.id,
                      r.title.c_str(), r.seconds);
    return head + r.detail;
}

}  // namespace nlpg::verify
