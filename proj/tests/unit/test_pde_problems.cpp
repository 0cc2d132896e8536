#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "nlpg/advection.hpp"
#include "nlpg/errors.hpp"
#include "nlpg/graded.hpp"
#include "nlpg/laplace.hpp"
#include "nlpg/lp_geometry.hpp"
#include "nlpg/verify/oracles.hpp"

using namespace nlpg;

TEST(Advection, HeavisideCellAverages) {
    const Mesh1D mesh = make_uniform_mesh(-1, 1, 7);
    for (double p : {1.5, 2.0}) {
        const CellAverageResult res = cell_average_solve(AdvectionData::heaviside(), mesh, p);
        // With the ideal test space the P0 solution reproduces cell averages.
        EXPECT_LE(res.max_average_error, 1e-8) << "p=" << p;
        EXPECT_NEAR(res.u_n.coeffs()[0], -1.0, 1e-8);
        EXPECT_NEAR(res.u_n.coeffs()[3], 0.0, 1e-8);   // the element around 0
    }
}

TEST(Advection, SmoothReactionAverages) {
    const Mesh1D mesh = make_uniform_mesh(0, 1, 4);
    const CellAverageResult res = cell_average_solve(AdvectionData::smooth_reaction(), mesh, 2.0);
    for (std::size_t e = 0; e < 4; ++e) {
        const double a = mesh.left(e), b = mesh.right(e);
        // Average of 1 - e^{-x} over [a, b].
        const double avg = 1.0 - (std::exp(-a) - std::exp(-b)) / (b - a);
        // mu != 0 means the averages are not exact, but close on a fine enough mesh.
        EXPECT_NEAR(res.u_n.coeffs()[static_cast<Eigen::Index>(e)], avg, 0.05);
    }
}

TEST(Advection, ZeroDataZeroSolution) {
    AdvectionData d;
    d.beta = [](double) { return 1.0; };
    d.dbeta = [](double) { return 0.0; };
    const CellAverageResult res = cell_average_solve(d, make_uniform_mesh(0, 1, 5), 1.5);
    EXPECT_EQ(res.u_n.coeffs().norm(), 0.0);
}

TEST(Advection, ConstantIsReproduced) {
    AdvectionData d;
    d.beta = [](double) { return 1.0; };
    d.dbeta = [](double) { return 0.0; };
    d.g_left = 2.5;
    const CellAverageResult res = cell_average_solve(d, make_uniform_mesh(0, 1, 6), 1.5);
    for (Eigen::Index i = 0; i < res.u_n.coeffs().size(); ++i) EXPECT_NEAR(res.u_n.coeffs()[i], 2.5, 1e-10);
    EXPECT_LE(res.residual_norm, 1e-10);
}

TEST(Advection, SignAveragesOnTwoElements) {
    const auto avg = sign_cell_averages(Mesh1D({0.0, 0.5, 1.0}), std::sqrt(2.0) / 2.0);
    ASSERT_EQ(avg.size(), 2u);
    EXPECT_DOUBLE_EQ(avg[0], -1.0);
    EXPECT_NEAR(avg[1], 3.0 - 2.0 * std::sqrt(2.0), 1e-15);
}

TEST(Advection, TestSpaceMustVanishAtOutflow) {
    const Mesh1D mesh = make_uniform_mesh(0, 1, 4);
    auto trial = std::make_shared<const FESpace>(FESpace::piecewise_constant(mesh));
    auto bad = std::make_shared<const FESpace>(FESpace::continuous(mesh, 1, BoundaryCondition::ZeroLeft));
    EXPECT_THROW(advection_weak_problem(AdvectionData::smooth_reaction(), trial, bad, 1.5), ConfigError);
}

TEST(Gibbs, HilbertOvershootMatchesProjection) {
    // The L^2 projection of sign(x) onto P1 with h = 1/3 overshoots by 7/26.
    EXPECT_NEAR(overshoot(gibbs_ideal(2.0, 6)), 7.0 / 26.0, 1e-8);
    EXPECT_NEAR(verify::gibbs_oracle_overshoot(2.0, 6), 7.0 / 26.0, 1e-8);
}

TEST(Gibbs, HilbertOvershootStableUnderTestRefinement) {
    SolverConfig cfg;
    const double o1 = overshoot(*solve_mixed(gibbs_scenario(2.0, 6, 2, 1), cfg).u_n);
    const double o2 = overshoot(*solve_mixed(gibbs_scenario(2.0, 6, 2, 4), cfg).u_n);
    EXPECT_GT(o1, 0.1);
    EXPECT_GT(o2, 0.1);
    EXPECT_NEAR(o1, o2, 0.05);
}

TEST(Gibbs, IdealLimitMatchesDirectMinimisation) {
    for (double p : {1.5, 1.125}) EXPECT_NEAR(overshoot(gibbs_ideal(p, 6)), verify::gibbs_oracle_overshoot(p, 6), 1e-6);
}

TEST(Laplace, SmoothExactSolution) {
    const LaplaceData d = LaplaceData::smooth_exp(1.5);
    for (double x : {0.0, 0.3, 1.0}) EXPECT_NEAR(d.exact_u(x), 1.0 + (std::exp(1.0) - 1.0) * x - std::exp(x), 1e-15);
    EXPECT_NEAR(d.exact_u(1.0), 0.0, 1e-15);
    // -u'' = e^x
    const double x = 0.4, h = 1e-4;
    EXPECT_NEAR(-(d.exact_u(x + h) - 2 * d.exact_u(x) + d.exact_u(x - h)) / (h * h), d.f(x), 1e-6);
}

TEST(Laplace, HilbertGalerkinIsNodallyExact) {
    // In 1-D the H^1_0 projection onto P1 interpolates the exact solution.
    const LaplaceData d = LaplaceData::smooth_exp(2.0);
    auto sp = std::make_shared<const FESpace>(FESpace::continuous(make_uniform_mesh(0, 1, 5), 1, BoundaryCondition::ZeroBoth));
    const MixedSolution sol = solve_mixed(laplace_problem(d, sp, sp));
    for (double x : {0.2, 0.4, 0.6, 0.8}) EXPECT_NEAR(sol.u_n->value(x), d.exact_u(x), 1e-12);
    EXPECT_LE(sol.r.norm(), 1e-12);
}

TEST(Laplace, RoughManufacturedData) {
    const LaplaceData d = LaplaceData::rough(1.25, 0.4);
    EXPECT_NEAR(d.exact_u(0.5), std::pow(0.5, 0.4) - 0.5, 1e-15);
    EXPECT_NEAR(d.exact_du(0.5), 0.4 * std::pow(0.5, -0.6) - 1.0, 1e-15);
    const LaplaceRow row = laplace_solve_level(d, 1, 2, 8);
    EXPECT_GT(row.energy_error, 0.0);
    EXPECT_TRUE(std::isfinite(row.lp_error));
}

TEST(Laplace, EmptyMeshListIsConfigError) {
    EXPECT_THROW(laplace_convergence_study(LaplaceData::smooth_exp(1.5), 1, 2, {}), ConfigError);
}

TEST(Graded, TrialFunctionIsReproduced) {
    // Replace u by phi_{1/2} itself: Galerkin and both residual minimisers return c = 1.
    const double eps = 0.5, p = 1.25;
    auto phi = std::make_shared<const FESpace>(build_graded_basis(eps));
    const DiscreteFunction ph(phi, Eigen::VectorXd::Ones(1));
    BilinearForm b;
    b.c11 = [](double) { return 1.0; };
    LinearForm f;
    f.f1 = [&](double x) { return ph.derivative(x); };
    for (bool enriched : {false, true}) {
        auto test = std::make_shared<const FESpace>(enriched ? build_graded_enriched_basis(eps) : build_graded_basis(eps));
        const MixedProblem prob = assemble_mixed_problem(phi, test, b, f, NormSpec::derivative(conjugate(p)), graded_rule(eps));
        EXPECT_NEAR(solve_mixed(prob).u[0], 1.0, 1e-10) << "enriched=" << enriched;
    }
}

TEST(Graded, FrozenOracleRows) {
    // Galerkin values cross-checked with 30-digit adaptive quadrature of the
    // closed-form integrands; the other columns come from the derivative-free
    // oracle with its own sign-aware quadrature.
    struct Ref {
        double eps, galerkin, best, ideal, inexact;
    };
    const Ref refs[] = {
        {0.5, 0.675810850038322, 0.549612973587587, 0.245332208409873, 0.747360055536353},
        {5e-3, 2.02815908027438, 0.861194910765723, 0.703314328416773, 0.68502397567792},
    };
    for (const Ref& r : refs) {
        const GradedRow row = graded_instability_row(r.eps, 1.25);
        EXPECT_NEAR(row.galerkin, r.galerkin, 1e-6 * r.galerkin) << "eps=" << r.eps;
        EXPECT_NEAR(row.best_w1p, r.best, 1e-6 * r.best) << "eps=" << r.eps;
        EXPECT_NEAR(row.ideal_rm, r.ideal, 1e-6 * r.ideal) << "eps=" << r.eps;
        EXPECT_NEAR(row.inexact_rm, r.inexact, 1e-6 * r.inexact) << "eps=" << r.eps;
    }
}

TEST(Graded, GalerkinGrowsAcrossSweep) {
    double prev = 0.0;
    for (double eps : {0.5, 0.05, 0.005, 0.0005}) {
        const GradedRow row = graded_instability_row(eps, 1.25);
        EXPECT_GT(row.galerkin, prev);
        prev = row.galerkin;
    }
}
