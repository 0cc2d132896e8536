#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "nlpg/diagnostics.hpp"
#include "nlpg/errors.hpp"
#include "nlpg/fe_space.hpp"
#include "nlpg/laplace.hpp"
#include "nlpg/mixed_problem.hpp"
#include "nlpg/norms.hpp"
#include "nlpg/smoothed_lp.hpp"

using namespace nlpg;

namespace {

std::shared_ptr<const FESpace> p1_zero(std::size_t n) {
    return std::make_shared<const FESpace>(FESpace::continuous(make_uniform_mesh(0, 1, n), 1, BoundaryCondition::ZeroBoth));
}

// (1/h) tridiag(-1, 2, -1): the derivative Gram matrix of interior hats.
Eigen::MatrixXd hat_gram(std::size_t n) {
    const Eigen::Index m = static_cast<Eigen::Index>(n) - 1;
    const double h = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        G(i, i) = 2.0 / h;
        if (i + 1 < m) G(i, i + 1) = G(i + 1, i) = -1.0 / h;
    }
    return G;
}

}  // namespace

TEST(DualityPairing, SelfPairingIsSquaredNorm) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    auto sp = std::make_shared<const FESpace>(FESpace::continuous(make_uniform_mesh(0, 1, 4), 2, BoundaryCondition::ZeroBoth));
    for (double rho : {1.2, 3.0, 5.0}) {
        for (NormSpec spec : {NormSpec::values(rho), NormSpec::derivative(rho),
                              NormSpec::graph(rho, [](double x) { return 1.0 + 0.5 * x; }, [](double) { return 0.5; })}) {
            Eigen::VectorXd c(static_cast<Eigen::Index>(sp->dim()));
            for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = n01(rng);
            const DiscreteFunction r(sp, c);
            const double n = spec_norm(spec, r);
            EXPECT_NEAR(duality_pairing(spec, r, r), n * n, 1e-10 * n * n) << "rho=" << rho;
        }
    }
}

TEST(DualityPairing, QuadraticBubbleInCubicNorm) {
    // Two elements so the kink of |1 - 2x|^3 sits on a node.
    auto sp = std::make_shared<const FESpace>(FESpace::continuous(make_uniform_mesh(0, 1, 2), 2, BoundaryCondition::ZeroBoth));
    const DiscreteFunction r = interpolate(sp, [](double x) { return x * (1.0 - x); });
    EXPECT_NEAR(duality_pairing(NormSpec::derivative(3.0), r, r), std::pow(0.25, 2.0 / 3.0), 1e-13);
}

TEST(DualityPairing, ZeroResidualPairsToZero) {
    auto sp = p1_zero(3);
    const DiscreteFunction zero(sp, Eigen::VectorXd::Zero(2));
    const DiscreteFunction v(sp, Eigen::VectorXd::Ones(2));
    EXPECT_EQ(duality_pairing(NormSpec::derivative(1.5), zero, v), 0.0);
}

TEST(SampledNorm, DualityMapMatchesPointwisePairing) {
    auto sp = p1_zero(5);
    const NormSpec spec = NormSpec::derivative(3.0);
    const SampledNorm sn = sample_norm(spec, *sp);
    Eigen::VectorXd c(4), d(4);
    c << 0.3, -1.0, 0.2, 0.7;
    d << 1.0, 0.5, -0.4, 0.1;
    const Eigen::VectorXd j = sn.duality_map(c);
    EXPECT_NEAR(j.dot(d), duality_pairing(spec, DiscreteFunction(sp, c), DiscreteFunction(sp, d)), 1e-12);
    EXPECT_NEAR(sn.norm(c), spec_norm(spec, DiscreteFunction(sp, c)), 1e-13);
}

TEST(NormSpec, Validation) {
    EXPECT_THROW(NormSpec::values(1.0).validate(), InvalidInput);
    NormSpec g;
    g.kind = NormKind::Graph;
    g.rho = 2.0;
    EXPECT_THROW(g.validate(), InvalidInput);
}

TEST(MixedResidual, ZeroDataZeroState) {
    LaplaceData d = LaplaceData::smooth_exp(1.5);
    d.f = [](double) { return 0.0; };
    const MixedProblem prob = laplace_problem(d, p1_zero(4), p1_zero(4));
    const Eigen::VectorXd res = assemble_mixed_residual(prob, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3));
    EXPECT_EQ(res.norm(), 0.0);
}

TEST(MixedResidual, HilbertLinearSolveIsExact) {
    const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(2.0), p1_zero(4), p1_zero(8));
    const Eigen::MatrixXd Jac = assemble_mixed_jacobian(prob, Eigen::VectorXd::Zero(7), Eigen::VectorXd::Zero(3), 0.0);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(10);
    rhs.head(7) = prob.F;
    const Eigen::VectorXd x = Jac.fullPivLu().solve(rhs);
    const Eigen::VectorXd res = assemble_mixed_residual(prob, x.head(7), x.tail(3));
    EXPECT_LE(res.norm(), 1e-12 * prob.F.norm());
}

TEST(MixedJacobian, HilbertBlockIsDerivativeGram) {
    const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(2.0), p1_zero(6), p1_zero(6));
    Eigen::VectorXd r(5);
    r << 0.1, -0.3, 0.8, 0.0, 0.2;
    const Eigen::MatrixXd Jac = assemble_mixed_jacobian(prob, r, Eigen::VectorXd::Zero(5), 1e-8);
    EXPECT_LE((Jac.topLeftCorner(5, 5) - hat_gram(6)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(MixedJacobian, SmoothingKeepsZeroResidualFinite) {
    for (double p : {1.25, 3.0}) {
        const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(p), p1_zero(4), p1_zero(4));
        const Eigen::MatrixXd Jac = assemble_mixed_jacobian(prob, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), 1e-3);
        EXPECT_TRUE(Jac.allFinite()) << "p=" << p;
        EXPECT_GT(Jac.topLeftCorner(3, 3).diagonal().minCoeff(), 0.0);
    }
}

TEST(SmoothedLp, ReducesToWeightedNorm) {
    Eigen::VectorXd z(3), w(3);
    z << 1.0, -2.0, 0.5;
    w << 0.2, 0.3, 0.5;
    const double rho = 3.0;
    const double exact = std::pow(0.2 * 1.0 + 0.3 * 8.0 + 0.5 * 0.125, 1.0 / 3.0);
    EXPECT_NEAR(smoothed_lp_norm(z, w, rho, 0.0), exact, 1e-14);
    const SmoothedLp s = eval_smoothed_lp(z, w, rho, 0.0);
    EXPECT_NEAR(s.norm, exact, 1e-14);
    EXPECT_NEAR(s.rank_one, -1.0, 0.0);
    // Large exponents stay finite.
    EXPECT_TRUE(std::isfinite(smoothed_lp_norm(1e3 * z, w, 101.0, 0.0)));
}

TEST(DualNorm, ZeroFunctional) {
    const SampledNorm sn = sample_norm(NormSpec::derivative(1.5), *p1_zero(5));
    EXPECT_EQ(discrete_dual_norm(sn, Eigen::VectorXd::Zero(4)), 0.0);
}

TEST(DualNorm, HilbertClosedForm) {
    const SampledNorm sn = sample_norm(NormSpec::derivative(2.0), *p1_zero(5));
    Eigen::VectorXd g(4);
    g << 1.0, -0.5, 0.25, 2.0;
    const double exact = std::sqrt(g.dot(hat_gram(5).ldlt().solve(g)));
    EXPECT_NEAR(discrete_dual_norm(sn, g), exact, 1e-10 * exact);
}

TEST(DualNorm, RepresenterAttainsDualNorm) {
    const SampledNorm sn = sample_norm(NormSpec::derivative(4.0), *p1_zero(5));
    Eigen::VectorXd g(4);
    g << 1.0, -0.5, 0.25, 2.0;
    const Eigen::VectorXd r = dual_representer(sn, g);
    EXPECT_LE((sn.duality_map(r) - g).norm(), 1e-8 * g.norm());
    EXPECT_NEAR(sn.norm(r), discrete_dual_norm(sn, g), 1e-8);
}

TEST(Aposteriori, ExactResolvedSolutionHasZeroBound) {
    LaplaceData d = LaplaceData::smooth_exp(1.5);
    d.f = [](double) { return 0.0; };
    const MixedProblem prob = laplace_problem(d, p1_zero(4), p1_zero(4));
    MixedSolution sol;
    sol.r = Eigen::VectorXd::Zero(3);
    sol.u = Eigen::VectorXd::Zero(3);
    EXPECT_EQ(aposteriori_bound(prob, sol, 0.5, 2.0, 0.0), 0.0);
}

TEST(InfSup, IdentityPairingInHilbertSpace) {
    // U = V, b(w, v) = int w' v' and both norms ||.'||_2.
    const MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(2.0), p1_zero(4), p1_zero(4));
    const InfSupResult res = discrete_infsup(prob, 40, 3);
    EXPECT_NEAR(res.value, 1.0, 1e-8);
}

TEST(InfSup, RequiresTrialNorm) {
    MixedProblem prob = laplace_problem(LaplaceData::smooth_exp(2.0), p1_zero(4), p1_zero(4));
    prob.unorm.reset();
    EXPECT_THROW(discrete_infsup(prob), Error);
}
