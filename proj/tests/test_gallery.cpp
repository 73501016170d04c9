#include "dcx/dcx.hpp"

#include <gtest/gtest.h>

using namespace dcx;

namespace {

// Independent integrals of d and v from -1 to x, summing whole stages.
std::pair<double, double> integrate_d_v(double x) {
    double g = 0.0, c1 = 0.0;
    for (int k = 1; k < 60; ++k) {
        const double a = -std::ldexp(1.0, 1 - k), b = -std::ldexp(1.0, -k);
        if (x <= a)
            break;
        const double len = std::min(x, b) - a;
        g += (k % 2) * len;
        c1 += (k - 1) * len;
    }
    return {g, c1};
}

Vec v2(double a, double b) { return make_vec({a, b}); }

BumpSystem two_bumps() { return make_bump_system(2, {v2(1, -1), v2(0.5, 2)}); }

} // namespace

TEST(Chyba, IndicatorOnFirstStages) {
    EXPECT_EQ(chyba_d(-1.0), 1);
    EXPECT_EQ(chyba_d(-0.75), 1);
    EXPECT_EQ(chyba_d(-0.5), 0);
    EXPECT_EQ(chyba_d(-0.3), 0);
    EXPECT_EQ(chyba_d(-0.2), 1);
    EXPECT_EQ(chyba_d(0.0), 0);
}

TEST(Chyba, VariationCountsStages) {
    EXPECT_EQ(chyba_v(-0.75), 0);
    EXPECT_EQ(chyba_v(-0.3), 1);
    for (int n = 1; n <= 20; ++n)
        EXPECT_EQ(chyba_v(-std::ldexp(1.0, -n) * 1.5), n - 1);
}

TEST(Chyba, OutsideDomain) {
    EXPECT_THROW(chyba_v(0.0), DomainError);
    EXPECT_THROW(chyba_d(0.5), DomainError);
    EXPECT_THROW(chyba_d(-1.5), DomainError);
    EXPECT_THROW(chyba_composed(1.5), DomainError);
}

TEST(Chyba, ValuesAtZeroAreExact) {
    const auto r = chyba_exact(0.0);
    EXPECT_EQ(r.g, Rational(2, 3));
    EXPECT_EQ(r.c1, Rational(1));
    EXPECT_EQ(r.c2, Rational(1, 3));
}

TEST(Chyba, StartsAtZero) {
    const auto r = chyba_exact(-1.0);
    EXPECT_EQ(r.g, Rational(0));
    EXPECT_EQ(r.c1, Rational(0));
    EXPECT_EQ(r.c2, Rational(0));
}

TEST(Chyba, DifferenceIdentityIsExact) {
    for (int i = 0; i <= 4096; ++i) {
        const double x = -1.0 + i / 4096.0;
        const auto r = chyba_exact(x);
        EXPECT_EQ(r.g, r.c1 - r.c2) << x;
    }
}

TEST(Chyba, MatchesStagewiseIntegrals) {
    for (int i = 0; i < 1000; ++i) {
        const double x = -1.0 + i / 1000.0 + 1e-4;
        const auto [g, c1] = integrate_d_v(x);
        EXPECT_NEAR(chyba_g(x), g, 1e-14) << x;
        EXPECT_NEAR(chyba_c1_c2(x).first, c1, 1e-14) << x;
    }
}

TEST(Chyba, ControlsAreConvex) {
    const ConvexSet I = ConvexSet::interval(-1, 0, false);
    EXPECT_TRUE(check_segment_convex([](const Vec &x) { return chyba_c1_c2(x[0]).first; }, I, 20000, 5, 1e-12, 4).pass);
    EXPECT_TRUE(check_segment_convex([](const Vec &x) { return chyba_c1_c2(x[0]).second; }, I, 20000, 5, 1e-12, 5).pass);
}

TEST(Chyba, ComposedIsEven) {
    for (double x : {0.1, 0.37, 0.9})
        EXPECT_EQ(chyba_composed(x), chyba_composed(-x));
}

TEST(Chyba, VariationWitnessExceedsBound) {
    for (int L = 1; L <= 6; ++L) {
        const auto w = variation_witness(L);
        EXPECT_TRUE(w.exceeds) << L;
        EXPECT_GT(w.variation, 2.0 * L);
    }
    EXPECT_THROW(variation_witness(0), InputError);
}

TEST(Chyba, CsvShape) {
    const std::string csv = chyba_csv(16);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,d,g,v,c1,c2");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
}

TEST(Bumps, DefaultConstants) {
    const BumpSystem S = two_bumps();
    EXPECT_DOUBLE_EQ(S.kappa(), 9.0);
    EXPECT_DOUBLE_EQ(S.delta, 1.0 / 2592.0);
    EXPECT_EQ(S.s(), 2.0);
}

TEST(Bumps, HitsTargetsExactly) {
    const BumpSystem S = two_bumps();
    const BumpMapping B = build_bump_mapping(S);
    EXPECT_EQ(B.H.value_fn()(S.e(0)), v2(1, -1));
    EXPECT_EQ(B.H.value_fn()(S.e(1)), v2(0.5, 2));
    EXPECT_EQ(B.h.value_unchecked(Vec::Zero(2)), 0.0);
    EXPECT_TRUE(B.H.value_fn()(Vec::Zero(2)).isZero(0.0));
}

TEST(Bumps, ScaledVanishesOutsideUnitBall) {
    const DCMapping Phi = build_bump_scaled(two_bumps());
    for (const Vec &x : {v2(1.01, 0), v2(0, -1.2), v2(0.7, 1.0), v2(-3, 3)})
        EXPECT_TRUE(Phi.value_fn()(x).isZero(0.0)) << format_vec(x);
    EXPECT_EQ(Phi.value_fn()(v2(0.5, 0)), v2(1, -1));
}

TEST(Bumps, ScaledControlPasses) {
    ControlCheckOptions o;
    o.segments = 20000;
    o.window = Box{Vec::Constant(2, -1.5), Vec::Constant(2, 1.5)};
    EXPECT_TRUE(check_control(build_bump_scaled(two_bumps()), o).pass);
}

TEST(Bumps, RegionsStayNearBasis) { EXPECT_TRUE(check_bump_regions(two_bumps(), 20000, 3).pass); }

TEST(Bumps, BadParametersRejected) {
    EXPECT_THROW(make_bump_system(2, {v2(1, 0)}), InputError);
    EXPECT_THROW(make_bump_system(2, {v2(1, 0), v2(0, 1)}, 1.5), InputError);
    EXPECT_THROW(make_bump_system(2, {v2(1, 0), v2(0, 1)}, 0.5, 0.3), InputError);
}

TEST(BumpSum, SingleBump) {
    const ConvexSet A = ConvexSet::box(v2(-4, -4), v2(4, 4), true, Norm::linf);
    const ConvexSet W = ConvexSet::box(v2(-2, -2), v2(2, 2), false, Norm::linf);
    const DCMapping F = build_bump_sum(A, {{v2(0, 0), 1.0}}, two_bumps(), W);
    EXPECT_EQ(F.value_fn()(v2(0.5, 0)), v2(1, -1));
    EXPECT_TRUE(F.value_fn()(v2(1.5, 0)).isZero(0.0));
    ControlCheckOptions o;
    o.segments = 20000;
    EXPECT_TRUE(check_control(F, o).pass);
}

TEST(BumpSum, ThreeBumps) {
    const ConvexSet A = ConvexSet::box(v2(-4, -2), v2(4, 2), true, Norm::linf);
    const ConvexSet W = ConvexSet::box(v2(-3, -1), v2(3, 1), false, Norm::linf);
    const DCMapping F =
        build_bump_sum(A, {{v2(-2, 0), 0.9}, {v2(0, 0), 0.5}, {v2(2, 0), 0.9}}, two_bumps(), W);
    EXPECT_EQ(F.value_fn()(v2(0.25, 0)), v2(1, -1));
    EXPECT_EQ(F.value_fn()(v2(2, 0.45)), v2(0.5, 2));
    ControlCheckOptions o;
    o.segments = 20000;
    EXPECT_TRUE(check_control(F, o).pass);
}

TEST(BumpSum, OverlapRejected) {
    const ConvexSet A = ConvexSet::box(v2(-4, -4), v2(4, 4), true, Norm::linf);
    const ConvexSet W = ConvexSet::box(v2(-2, -2), v2(2, 2), false, Norm::linf);
    EXPECT_THROW(build_bump_sum(A, {{v2(0, 0), 1.0}, {v2(1.5, 0), 1.0}}, two_bumps(), W), InputError);
}

TEST(StrongExposure, L1AtBasisVector) {
    const auto r = strexp_check(norm_oracle(Norm::l1, 2), v2(1, 0), v2(1, 0), 2.0, 0.1, 200000, 7);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.counts.at("hypothesis_hits"), 0);
    EXPECT_GT(r.counts.at("conclusion_hits"), 0);
}

TEST(StrongExposure, HullBodyAtBasisVector) {
    const HullBody B(0.5, BaseBall::linf, {v2(1, 0), v2(0, 1)}, 2);
    for (double delta : {0.01, 0.1, 0.4})
        EXPECT_TRUE(strexp_check(norm_oracle(B), v2(1, 0), v2(1, 0), 4.0, delta, 100000, 8).pass) << delta;
}

TEST(StrongExposure, MaxNormFlatFaceFails) {
    EXPECT_FALSE(strexp_check(norm_oracle(Norm::linf, 2), v2(1, 0), v2(1, 0), 2.0, 0.1, 100000, 9).pass);
}

TEST(StrongExposure, InvalidPairRejected) {
    EXPECT_THROW(strexp_check(norm_oracle(Norm::l1, 2), v2(1, 0), v2(2, 0), 2.0, 0.1, 10), InputError);
    EXPECT_THROW(strexp_check(norm_oracle(Norm::l1, 2), v2(0.5, 0), v2(1, 0), 2.0, 0.1, 10), InputError);
}

namespace {

NonDCWitness boundary_witness(int K) {
    NonDCWitness w{ConvexSet::interval(-1, 1, true), 0.5, {}, {}};
    for (int n = 1; n <= K; ++n) {
        w.centers.push_back(scalar_vec(0.5 - std::ldexp(1.0, -n - 1)));
        w.radii.push_back(std::ldexp(1.0, -n - 3));
    }
    return w;
}

} // namespace

TEST(NonDcWitness, BlowUpPasses) {
    const NonDCWitness w = boundary_witness(8);
    const VecFn F = [](const Vec &x) { return scalar_vec(1.0 / (0.5 - x[0])); };
    const auto r = ndc_witness_check(w, sample_ball_sups(w, F, Norm::l2, 256));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.notes.front(), "hypothesis check, not proof");
}

TEST(NonDcWitness, BoundedFunctionFails) {
    const NonDCWitness w = boundary_witness(5);
    const VecFn F = [](const Vec &) { return scalar_vec(1.0); };
    EXPECT_FALSE(ndc_witness_check(w, sample_ball_sups(w, F, Norm::l2, 16)).pass);
}

TEST(NonDcWitness, CenterOutsideScaledSetRejected) {
    NonDCWitness w = boundary_witness(3);
    w.centers[1] = scalar_vec(0.6);
    EXPECT_THROW(validate_witness(w), InputError);
}

TEST(NonDcWitness, RadiiMustDecrease) {
    NonDCWitness w = boundary_witness(3);
    w.radii[2] = w.radii[0];
    EXPECT_THROW(validate_witness(w), InputError);
}
