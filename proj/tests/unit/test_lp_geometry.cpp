#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "nlpg/errors.hpp"
#include "nlpg/lp_geometry.hpp"

using namespace nlpg;

namespace {

double lp_dist(double c, double p) {
    // || (1,0) - c (1,1) ||_p
    return std::pow(std::pow(std::abs(1.0 - c), p) + std::pow(std::abs(c), p), 1.0 / p);
}

}  // namespace

TEST(DualityMapLp, HilbertCaseIsIdentity) {
    const LpVector j = duality_map_lp(LpVector({3.0, 4.0}, 2.0));
    EXPECT_DOUBLE_EQ(j.entries[0], 3.0);
    EXPECT_DOUBLE_EQ(j.entries[1], 4.0);
}

TEST(DualityMapLp, UnitCoordinateVectorIsFixed) {
    for (double p : {1.1, 1.5, 3.0, 7.0}) {
        const LpVector j = duality_map_lp(LpVector({1.0, 0.0}, p));
        EXPECT_NEAR(j.entries[0], 1.0, 1e-15) << "p=" << p;
        EXPECT_EQ(j.entries[1], 0.0);
    }
}

TEST(DualityMapLp, FourNormOfOnes) {
    const LpVector j = duality_map_lp(LpVector({1.0, 1.0}, 4.0));
    EXPECT_NEAR(j.entries[0], std::pow(2.0, -0.5), 1e-15);
    EXPECT_NEAR(j.entries[1], std::pow(2.0, -0.5), 1e-15);
    EXPECT_DOUBLE_EQ(j.p, 4.0 / 3.0);
}

TEST(DualityMapLp, ZeroMapsToZero) {
    const LpVector j = duality_map_lp(LpVector({0.0, 0.0, 0.0}, 3.0));
    for (double e : j.entries) EXPECT_EQ(e, 0.0);
}

TEST(DualityMapLp, PairingAndDualNormIdentities) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01;
    for (double p : {1.2, 1.5, 3.0, 6.0}) {
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> v(5);
            for (double& x : v) x = n01(rng);
            const LpVector lv(v, p);
            const LpVector j = duality_map_lp(lv);
            double pair = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) pair += j.entries[i] * v[i];
            const double nv = lv.norm();
            EXPECT_NEAR(pair, nv * nv, 1e-12 * nv * nv);
            EXPECT_NEAR(j.norm(), nv, 1e-12 * nv);
        }
    }
}

TEST(DualityMapLp, RejectsNonFinite) {
    EXPECT_THROW(duality_map_lp(LpVector({1.0, std::nan("")}, 2.0)), InvalidInput);
    EXPECT_THROW(duality_map_lp(LpVector({1.0, std::numeric_limits<double>::infinity()}, 3.0)), InvalidInput);
}

TEST(BestApproxLp, VectorInSpanIsReproduced) {
    const BestApprox b = best_approx_lp(LpVector({2.0, 2.0, -1.0}, 1.5),
                                        {LpVector({1.0, 1.0, 0.0}, 1.5), LpVector({0.0, 0.0, 1.0}, 1.5)});
    EXPECT_NEAR(b.y0.entries[0], 2.0, 1e-9);
    EXPECT_NEAR(b.y0.entries[1], 2.0, 1e-9);
    EXPECT_NEAR(b.y0.entries[2], -1.0, 1e-9);
    EXPECT_LE(b.optimality_residual, 1e-9);
}

TEST(BestApproxLp, HilbertProjection) {
    const double s = 1.0 / std::sqrt(2.0);
    const BestApprox b = best_approx_lp(LpVector({1.0, 0.0}, 2.0), {LpVector({s, s}, 2.0)});
    EXPECT_NEAR(b.y0.entries[0], 0.5, 1e-12);
    EXPECT_NEAR(b.y0.entries[1], 0.5, 1e-12);
}

TEST(BestApproxLp, ThreeHalvesAgreesWithScan) {
    const double p = 1.5;
    const BestApprox b = best_approx_lp(LpVector({1.0, 0.0}, p), {LpVector({1.0, 1.0}, p)});
    // Dense scan of the one-dimensional distance, refined twice around the best point.
    double lo = -1.0, hi = 2.0, best = 0.0;
    for (int level = 0; level < 4; ++level) {
        const int n = 20001;
        double fbest = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double c = lo + (hi - lo) * i / (n - 1);
            const double f = lp_dist(c, p);
            if (f < fbest) fbest = f, best = c;
        }
        const double w = (hi - lo) / (n - 1);
        lo = best - 2 * w;
        hi = best + 2 * w;
    }
    EXPECT_NEAR(b.coeffs[0], best, 1e-6);
    // By symmetry of the two coordinates the minimiser is 1/2.
    EXPECT_NEAR(b.coeffs[0], 0.5, 1e-8);
}

TEST(BestApproxLp, DependentBasisIsDegenerate) {
    EXPECT_THROW(best_approx_lp(LpVector({1.0, 0.0}, 3.0), {LpVector({1.0, 1.0}, 3.0), LpVector({2.0, 2.0}, 3.0)}),
                 DegenerateSubspace);
}

TEST(AprioriBound, HilbertRatioAtMostOne) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (int rep = 0; rep < 30; ++rep) {
        const LpVector y({n01(rng), n01(rng), n01(rng)}, 2.0);
        const LpVector d({n01(rng), n01(rng), n01(rng)}, 2.0);
        const BestApprox b = best_approx_lp(y, {d});
        const AprioriCheck chk = check_apriori_bounds(y, b.y0);
        EXPECT_LE(chk.ratio, 1.0 + 1e-12);
        EXPECT_TRUE(chk.holds());
    }
}

TEST(AprioriBound, NearL1RatioApproachesTwo) {
    // y = (0,1) on span{(1,1)}: in l_1 the point (1,1) is a best approximation with norm 2.
    double prev = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const double p = 1.0 + eps;
        const LpVector y({0.0, 1.0}, p);
        const LpVector y0({1.0, 1.0}, p);
        const AprioriCheck chk = check_apriori_bounds(y, y0, compute_c_ao(p));
        EXPECT_GT(chk.ratio, prev);
        prev = chk.ratio;
    }
    EXPECT_NEAR(prev, 2.0, 2e-3);
}

TEST(AprioriBound, ThreeHalvesRandomInstances) {
    const double p = 1.5, cao = compute_c_ao(p);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01;
    for (int rep = 0; rep < 200; ++rep) {
        const LpVector y({n01(rng), n01(rng)}, p);
        const LpVector d({n01(rng), n01(rng)}, p);
        const BestApprox b = best_approx_lp(y, {d});
        const AprioriCheck chk = check_apriori_bounds(y, b.y0, cao);
        EXPECT_LE(chk.ratio, std::pow(2.0, 1.0 / 3.0) + 1e-9);
        EXPECT_TRUE(chk.holds());
    }
}

TEST(GeometricConstants, BanachMazurClosedForm) {
    EXPECT_DOUBLE_EQ(c_bm(2.0), 1.0);
    EXPECT_DOUBLE_EQ(c_bm(1.5), std::pow(2.0, 1.0 / 3.0));
    EXPECT_DOUBLE_EQ(c_bm(4.0), std::pow(2.0, 0.5));
}

TEST(GeometricConstants, AsymmetricOrthogonalityLimits) {
    EXPECT_NEAR(compute_c_ao(2.0), 0.0, 1e-12);
    EXPECT_NEAR(compute_c_ao(1.0), 1.0, 1e-12);
    EXPECT_NEAR(compute_c_ao(3.0), compute_c_ao(1.5), 1e-8);
}

TEST(GeometricConstants, AsymmetricOrthogonalityFrozenValues) {
    // Independent maximisation of the polar-angle reduction (bounded scalar
    // optimiser on a 2e5-point bracket).
    EXPECT_NEAR(compute_c_ao(3.0), 0.42916063195784054, 1e-9);
    EXPECT_NEAR(compute_c_ao(1.01), 0.9925738443405029, 1e-9);
}

TEST(GeometricConstants, BestProjectionConstant) {
    EXPECT_NEAR(compute_c_best(2.0), 1.0, 1e-9);
    const double c = compute_c_best(1.5);
    EXPECT_GT(c, 1.0 + 1e-3);
    EXPECT_LT(c, c_bm(1.5) - 1e-3);
    EXPECT_GT(compute_c_best(1.02), 1.8);
}

TEST(GeometricConstants, Ordering) {
    for (double p : {1.1, 1.5, 3.0, 10.0}) {
        const GeometricConstants g = geometric_constants(p, 4000, 361);
        EXPECT_LT(g.c_best, g.c_bm) << "p=" << p;
        EXPECT_LT(g.c_bm, 1.0 + g.c_ao) << "p=" << p;
    }
}

TEST(Conjugate, Values) {
    EXPECT_DOUBLE_EQ(conjugate(2.0), 2.0);
    EXPECT_DOUBLE_EQ(conjugate(1.25), 5.0);
    EXPECT_TRUE(std::isinf(conjugate(1.0)));
}
