#include <gtest/gtest.h>

#include <cmath>

#include "nlpg/verify/checks.hpp"
#include "nlpg/verify/oracles.hpp"
#include "nlpg/verify/suites.hpp"

using namespace nlpg::verify;

TEST(Oracles, GoldenSection) {
    EXPECT_NEAR(golden_section_min([](double x) { return (x - 0.3) * (x - 0.3); }, -2, 5), 0.3, 1e-10);
    EXPECT_NEAR(convex_min([](double x) { return std::abs(x - 17.5); }, 0.0, 0.1), 17.5, 1e-10);
    // A quadratic minimum locates its argument only to about sqrt(machine eps).
    EXPECT_NEAR(scan_golden_min([](double x) { return std::cos(x); }, 0.0, 6.0, 50), M_PI, 5e-8);
}

TEST(Oracles, NelderMeadRosenbrock) {
    const Minimum m = nelder_mead(
        [](const std::vector<double>& x) {
            return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
        },
        {-1.2, 1.0}, 0.5);
    EXPECT_NEAR(m.x[0], 1.0, 1e-6);
    EXPECT_NEAR(m.x[1], 1.0, 1e-6);
}

TEST(Oracles, AngleScanDualNorm) {
    // Dual norm of g = (1, 2) over Euclidean R^2 is sqrt(5).
    const double v = angle_scan_max([](double t) { return (std::cos(t) + 2 * std::sin(t)); });
    EXPECT_NEAR(v, std::sqrt(5.0), 1e-10);
}

TEST(Oracles, ScaledLpNorm) {
    Eigen::VectorXd v(2);
    v << 3e200, 4e200;
    EXPECT_NEAR(lp(v, 2.0) / 5e200, 1.0, 1e-14);
}

TEST(Oracles, DirectMinimiserHilbertCase) {
    Eigen::MatrixXd B(3, 1), M = Eigen::MatrixXd::Identity(3, 3);
    B << 1, 2, 2;
    Eigen::VectorXd F(3);
    F << 1, 0, 1;
    const Eigen::VectorXd u = direct_dual_residual_minimiser(B, F, M, 2.0);
    EXPECT_NEAR(u[0], 3.0 / 9.0, 1e-8);
}

TEST(Oracles, GibbsOracleIsOdd) {
    const auto w = gibbs_oracle_nodes(1.5, 6);
    ASSERT_EQ(w.size(), 4u);
    EXPECT_NEAR(w[0], 0.0, 1e-12);
}

TEST(Oracles, GradedGalerkinClosedForm) {
    // Independent 30-digit quadrature of the Galerkin quotient at eps = 1/2.
    EXPECT_NEAR(graded_oracle(0.5, 1.25).galerkin, 0.675810848106428, 1e-8);
}

TEST(Verify, LogSpacedCounts) {
    const auto c = log_spaced_counts(2, 8192, 40);
    EXPECT_EQ(c.front(), 2u);
    EXPECT_EQ(c.back(), 8192u);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) EXPECT_LT(c[i], c[i + 1]);
}

TEST(Verify, DualitySuitePasses) {
    for (const Check& c : run_suite("duality", 1)) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail << " " << c.counterexample;
}

TEST(Verify, InfSupSuitePasses) {
    for (const Check& c : run_suite("infsup", 1)) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

TEST(Verify, UnknownSuite) { EXPECT_THROW(run_suite("nope", 1), std::invalid_argument); }
