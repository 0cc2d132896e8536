#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "nlpg/advection.hpp"
#include "nlpg/continuation.hpp"
#include "nlpg/errors.hpp"
#include "nlpg/laplace.hpp"
#include "nlpg/solver.hpp"

using namespace nlpg;

namespace {

std::shared_ptr<const FESpace> pk_zero(std::size_t n, int k) {
    return std::make_shared<const FESpace>(FESpace::continuous(make_uniform_mesh(0, 1, n), k, BoundaryCondition::ZeroBoth));
}

MixedProblem random_algebraic(std::mt19937_64& rng, Eigen::Index nu, Eigen::Index nv, double rho) {
    std::normal_distribution<double> n01;
    Eigen::MatrixXd B(nv, nu), M = Eigen::MatrixXd::Identity(nv, nv);
    Eigen::VectorXd F(nv);
    for (Eigen::Index i = 0; i < nv; ++i) {
        F[i] = n01(rng);
        for (Eigen::Index j = 0; j < nu; ++j) B(i, j) = n01(rng);
        for (Eigen::Index j = 0; j < nv; ++j) M(i, j) += 0.3 * n01(rng);
    }
    SampledNorm vn;
    vn.rho = rho;
    NormTerm t;
    t.L = M.sparseView();
    t.w = Eigen::VectorXd::Ones(nv);
    vn.terms.push_back(t);
    return make_algebraic_problem(B.sparseView(), F, vn);
}

}  // namespace

TEST(Continuation, ExponentPath) {
    EXPECT_EQ(exponent_path(2.0), std::vector<double>{2.0});
    const auto path = exponent_path(1.25, 1.3);
    EXPECT_DOUBLE_EQ(path.front(), 2.0);
    EXPECT_DOUBLE_EQ(path.back(), 1.25);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) EXPECT_LE((path[i] - 1) / (path[i + 1] - 1), 1.3 + 1e-12);
    const auto up = exponent_path(4.0, 1.3);
    EXPECT_DOUBLE_EQ(up.back(), 4.0);
}

TEST(Continuation, GeometricSchedule) {
    const auto s = geometric_schedule(1e-2, 1e-10, 0.1);
    ASSERT_EQ(s.size(), 9u);
    EXPECT_DOUBLE_EQ(s.front(), 1e-2);
    EXPECT_DOUBLE_EQ(s.back(), 1e-10);
}

TEST(SolveMixed, HilbertCaseNeedsOneNewtonStep) {
    const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(2.0), pk_zero(8, 1), pk_zero(8, 2));
    SolverConfig cfg;
    cfg.exact_polish = false;
    const MixedSolution sol = solve_mixed(prob, cfg);
    ASSERT_FALSE(sol.stages.empty());
    EXPECT_EQ(sol.stages.front().iterations, 1);
    EXPECT_LE(sol.residual, 1e-12);
}

TEST(SolveMixed, ExponentPathIndependence) {
    const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(1.5), pk_zero(8, 1), pk_zero(8, 2));
    SolverConfig a, b;
    a.p_path = {2.0, 1.75, 1.5};
    b.p_path = {1.5};
    const MixedSolution sa = solve_mixed(prob, a), sb = solve_mixed(prob, b);
    EXPECT_LE((sa.u - sb.u).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE(sa.residual, a.newton_tol);
}

TEST(SolveMixed, NearOneGibbsWithExtendedPath) {
    const MixedProblem prob = gibbs_scenario(1.01, 6, 3);
    SolverConfig cfg;
    cfg.p_path = {2.0, 1.5, 1.25, 1.1, 1.05, 1.01};
    const MixedSolution sol = solve_mixed(prob, cfg);
    EXPECT_LE(sol.residual, cfg.newton_tol);
    ASSERT_TRUE(sol.u_n.has_value());
    // The discrete solution is odd-symmetric and bounded by the data.
    EXPECT_NEAR(sol.u_n->value(0.5), -sol.u_n->value(-0.5), 1e-6);
    EXPECT_LT(std::abs(sol.u_n->value(1.0)), 1.5);
}

TEST(SolveMixed, ZeroDataGivesZeroSolution) {
    LaplaceData d = LaplaceData::smooth_exp(1.5);
    d.f = [](double) { return 0.0; };
    const MixedSolution sol = solve_mixed(laplace_problem(d, pk_zero(4, 1), pk_zero(4, 2)));
    EXPECT_EQ(sol.u.norm(), 0.0);
    EXPECT_EQ(sol.r.norm(), 0.0);
}

TEST(SolveMixed, RejectsBadConfig) {
    SolverConfig cfg;
    cfg.delta_ratio = 1.5;
    EXPECT_THROW(cfg.validate(), InvalidInput);
    cfg = {};
    cfg.max_iter = 0;
    EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(SolveMixed, FailureCarriesState) {
    const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(1.1), pk_zero(16, 1), pk_zero(16, 2));
    SolverConfig cfg;
    cfg.max_iter = 1;
    cfg.p_path = {1.1};
    cfg.exact_polish = false;
    cfg.delta_start = cfg.delta_end = 1e-10;
    try {
        solve_mixed(prob, cfg);
        FAIL() << "expected SolverFailure";
    } catch (const SolverFailure& ex) {
        EXPECT_FALSE(ex.last_iterate().empty());
        EXPECT_GT(ex.residual(), 0.0);
        EXPECT_DOUBLE_EQ(ex.p_stage(), 1.1);
    }
}

TEST(SolveMixed, Deterministic) {
    const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(1.3), pk_zero(6, 1), pk_zero(6, 2));
    const MixedSolution a = solve_mixed(prob), b = solve_mixed(prob);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.r, b.r);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(ConstrainedDescent, HilbertCaseMatchesMixed) {
    const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(2.0), pk_zero(6, 1), pk_zero(6, 2));
    const MixedSolution a = solve_mixed(prob), b = solve_constrained_descent(prob);
    EXPECT_LE((a.u - b.u).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((a.r - b.r).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ConstrainedDescent, RandomFifthPowerProblem) {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 5; ++rep) {
        const MixedProblem prob = random_algebraic(rng, 2, 4, 5.0);
        const MixedSolution a = solve_mixed(prob), b = solve_constrained_descent(prob);
        EXPECT_LE((a.u - b.u).cwiseAbs().maxCoeff(), 1e-6) << "instance " << rep;
    }
}

TEST(ConstrainedDescent, ZeroData) {
    std::mt19937_64 rng(1);
    MixedProblem prob = random_algebraic(rng, 2, 4, 5.0);
    prob.F.setZero();
    const MixedSolution s = solve_constrained_descent(prob);
    EXPECT_EQ(s.u.norm(), 0.0);
    EXPECT_EQ(s.r.norm(), 0.0);
}

TEST(EstimateRate, ExactFirstOrder) {
    const RateFit f = estimate_rate({0.5, 0.25, 0.125, 0.0625}, {0.5, 0.25, 0.125, 0.0625});
    EXPECT_NEAR(f.rate, 1.0, 1e-14);
    EXPECT_NEAR(f.r2, 1.0, 1e-14);
}

TEST(EstimateRate, NoisySecondOrder) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<double> h, e;
    for (int i = 1; i <= 8; ++i) {
        h.push_back(std::pow(2.0, -i));
        e.push_back(h.back() * h.back() * (1.0 + noise(rng)));
    }
    EXPECT_NEAR(estimate_rate(h, e).rate, 2.0, 0.05);
}

TEST(EstimateRate, ConstantErrors) {
    EXPECT_NEAR(estimate_rate({0.5, 0.25, 0.125}, {3.0, 3.0, 3.0}).rate, 0.0, 1e-14);
}

TEST(EstimateRate, RejectsMismatchedInput) {
    EXPECT_THROW(estimate_rate({0.5}, {1.0}), InvalidInput);
    EXPECT_THROW(estimate_rate({0.5, 0.25}, {1.0}), InvalidInput);
}
