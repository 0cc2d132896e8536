#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "nlpg/errors.hpp"
#include "nlpg/fe_space.hpp"
#include "nlpg/mesh.hpp"
#include "nlpg/quadrature.hpp"

using namespace nlpg;

TEST(Mesh, UniformMeshes) {
    EXPECT_EQ(make_uniform_mesh(0, 1, 2).nodes(), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(make_uniform_mesh(-1, 1, 4).nodes(), (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
    EXPECT_EQ(make_uniform_mesh(0, 1, 1).nodes(), (std::vector<double>{0.0, 1.0}));
}

TEST(Mesh, RejectsBadNodes) {
    EXPECT_THROW(Mesh1D({0.0}), InvalidInput);
    EXPECT_THROW(Mesh1D({0.0, 0.0, 1.0}), InvalidInput);
    EXPECT_THROW(Mesh1D({0.0, std::nan(""), 1.0}), InvalidInput);
    EXPECT_THROW(make_uniform_mesh(0, 1, 0), InvalidInput);
}

TEST(Mesh, LocateConvention) {
    const Mesh1D m = make_uniform_mesh(0, 1, 4);
    EXPECT_EQ(m.locate(0.0), 0u);
    EXPECT_EQ(m.locate(0.25), 1u);   // interior nodes go right
    EXPECT_EQ(m.locate(1.0), 3u);
    EXPECT_EQ(m.locate(-5.0), 0u);
    EXPECT_EQ(m.refined(3).n_elem(), 12u);
}

TEST(Quadrature, LpNormOfSimpleFunctions) {
    const Mesh1D m = make_uniform_mesh(0, 1, 3);
    for (double p : {1.0, 1.5, 4.0}) EXPECT_NEAR(lp_norm([](double) { return 1.0; }, m, p), 1.0, 1e-14);
    EXPECT_NEAR(lp_norm([](double x) { return x; }, m, 2.0), 1.0 / std::sqrt(3.0), 1e-14);
}

TEST(Quadrature, GradedSubdivisionResolvesInverseCubeRoot) {
    QuadratureRule rule;
    rule.with_singular(0.0, 8);
    const double v = lp_norm([](double x) { return std::pow(x, -1.0 / 3.0); }, make_uniform_mesh(0, 1, 1), 2.0, rule);
    EXPECT_NEAR(v, std::sqrt(3.0), 1e-4);
}

TEST(Quadrature, NonFiniteSampleNamesElement) {
    try {
        lp_norm([](double x) { return x > 0.6 ? std::nan("") : 1.0; }, make_uniform_mesh(0, 1, 4), 2.0);
        FAIL() << "expected InvalidInput";
    } catch (const InvalidInput& ex) {
        EXPECT_NE(std::string(ex.what()).find("element"), std::string::npos);
    }
}

TEST(Quadrature, GaussLegendreExactness) {
    const GaussLegendre& g = gauss_legendre(10);
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 18);
    EXPECT_NEAR(s, 2.0 / 19.0, 1e-15);
}

TEST(FESpace, DimensionsAndBoundaryConditions) {
    const Mesh1D m = make_uniform_mesh(0, 1, 4);
    EXPECT_EQ(FESpace::continuous(m, 1).dim(), 5u);
    EXPECT_EQ(FESpace::continuous(m, 1, BoundaryCondition::ZeroBoth).dim(), 3u);
    EXPECT_EQ(FESpace::continuous(m, 3, BoundaryCondition::ZeroRight).dim(), 4u + 8u);
    EXPECT_EQ(FESpace::piecewise_constant(m).dim(), 4u);
    EXPECT_TRUE(FESpace::continuous(m, 2, BoundaryCondition::ZeroBoth).vanishes_at(1.0));
    EXPECT_FALSE(FESpace::continuous(m, 2, BoundaryCondition::ZeroLeft).vanishes_at(1.0));
}

TEST(FESpace, InterpolationIsExactOnPolynomials) {
    auto sp = std::make_shared<const FESpace>(FESpace::continuous(make_uniform_mesh(0, 1, 3), 3));
    const auto f = [](double x) { return 1.0 - 2.0 * x + 3.0 * x * x * x; };
    const DiscreteFunction u = interpolate(sp, f);
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.99, 1.0}) {
        EXPECT_NEAR(u.value(x), f(x), 1e-13);
        EXPECT_NEAR(u.derivative(x), -2.0 + 9.0 * x * x, 1e-12);
    }
}

TEST(IdealTestSpace, InflowOutflowProfile) {
    // beta = 1.001 - x, five elements: left of its element, v_j = h_j / beta.
    const Mesh1D m = make_uniform_mesh(0, 1, 5);
    const auto beta = [](double x) { return 1.001 - x; };
    const FESpace s = build_ideal_advection_test_space(m, beta, [](double) { return -1.0; });
    ASSERT_EQ(s.dim(), 5u);
    std::vector<BasisEntry> ev;
    for (std::size_t j = 1; j < 5; ++j) {
        const double x = 0.5 * m.left(j);
        s.evaluate(x, ev);
        bool seen = false;
        for (const auto& e : ev)
            if (e.dof == j) {
                EXPECT_NEAR(e.value, 0.2 / beta(x), 1e-12);
                seen = true;
            }
        EXPECT_TRUE(seen) << "dof " << j;
    }
    // Every function vanishes at the outflow boundary and right of its element.
    EXPECT_TRUE(s.vanishes_at(1.0));
    s.evaluate(0.95, ev);
    for (const auto& e : ev)
        if (e.dof < 4) EXPECT_NEAR(e.value, 0.0, 1e-14);
}

TEST(IdealTestSpace, DiscontinuityAtStagnationNode) {
    const Mesh1D m = make_uniform_mesh(0, 1, 5);   // 0.4 is a node
    const FESpace s =
        build_ideal_advection_test_space(m, [](double x) { return 0.4 - x; }, [](double) { return -1.0; });
    const auto d = s.discontinuities();
    EXPECT_TRUE(std::any_of(d.begin(), d.end(), [](double x) { return std::abs(x - 0.4) < 1e-12; }));
}

TEST(IdealTestSpace, VanishingFieldWithoutTwoInflowIsRejected) {
    const Mesh1D m = make_uniform_mesh(0, 1, 4);
    EXPECT_THROW(build_ideal_advection_test_space(m, [](double x) { return x - 0.5; }, [](double) { return 1.0; }),
                 SingularCoefficient);
}

TEST(GradedBasis, FiveNormBlowsUpTwoNormStaysBounded) {
    double prev5 = 0.0, max2 = 0.0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        auto sp = std::make_shared<const FESpace>(build_graded_basis(eps));
        const DiscreteFunction phi(sp, Eigen::VectorXd::Ones(1));
        QuadratureRule rule;
        rule.with_singular(0.0).with_singular(eps, 40);
        const Mesh1D m({0.0, eps, 1.0});
        const auto dphi = [&](double x) { return phi.derivative(x); };
        const double n5 = lp_norm(dphi, m, 5.0, rule);
        EXPECT_GT(n5, 1.5 * prev5);
        prev5 = n5;
        max2 = std::max(max2, lp_norm(dphi, m, 2.0, rule));
    }
    // ||phi'||_2^2 = int (2/3 x^{-1/3} - 1)^2 stays below 4/3 - 2 + 1 + O(eps^{1/3}).
    EXPECT_LT(max2, 1.0);
}

TEST(GradedBasis, ValuesMatchClosedForm) {
    const double eps = 1e-3;
    auto sp = std::make_shared<const FESpace>(build_graded_basis(eps));
    const DiscreteFunction phi(sp, Eigen::VectorXd::Ones(1));
    EXPECT_NEAR(phi.value(0.5 * eps), (std::cbrt(1.0 / eps) - 1.0) * 0.5 * eps, 1e-14);
    EXPECT_NEAR(phi.value(0.3), std::pow(0.3, 2.0 / 3.0) - 0.3, 1e-14);
    EXPECT_NEAR(phi.value(1.0), 0.0, 1e-14);
}
