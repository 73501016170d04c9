#include "dcx/dcx.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

using namespace dcx;

namespace {

ConvexFn square() { return quadratic_fn(Mat::Identity(1, 1)); }

} // namespace

TEST(ConvexFn, MaxAffineIsAbs) {
    Mat S(2, 1);
    S << 1, -1;
    EXPECT_EQ(max_affine(S, make_vec({0.0, 0.0}))(scalar_vec(-2.0)), 2.0);
}

TEST(ConvexFn, SumOfAbs) {
    const ConvexFn a = norm_fn(Norm::l2, scalar_vec(0.0));
    EXPECT_EQ(sum({a, a})(scalar_vec(3.0)), 6.0);
}

TEST(ConvexFn, AffinePrecompose) {
    EXPECT_EQ(affine_precompose(square(), Mat::Constant(1, 1, 2.0), scalar_vec(1.0))(scalar_vec(1.0)), 9.0);
}

TEST(ConvexFn, OutsideDomainThrows) {
    const ConvexFn f = square().restricted(ConvexSet::interval(-1, 1, true));
    EXPECT_THROW(f(scalar_vec(2.0)), DomainError);
}

TEST(ConvexFn, NegativeScaleRejected) { EXPECT_THROW(scale(square(), -1.0), InputError); }

TEST(ConvexFn, JsonRoundTrip) {
    const ConvexFn f = sum({scale(norm_fn(Norm::l1, make_vec({1.0, 0.0}), 2.0), 0.5), quadratic_fn(Mat::Identity(2, 2))});
    const Json j = f.to_json();
    const ConvexFn g = convex_fn_from_json(j, 2);
    EXPECT_EQ(canonical_json(g.to_json()), canonical_json(j));
    EXPECT_EQ(g(make_vec({0.3, -2.0})), f(make_vec({0.3, -2.0})));
}

TEST(LipschitzBound, Formula) {
    EXPECT_EQ(lipschitz_bound_on_inner(1.0, 0.5), 4.0);
    EXPECT_EQ(lipschitz_bound_on_inner(0.0, 0.3), 0.0);
}

TEST(LipschitzBound, DominatesSampledSlope) {
    // x^2 on (-2, 2): M = 4, r = 0.5 gives 16 on [-1, 1]; the true constant is 2.
    const double bound = lipschitz_bound_on_inner(4.0, 0.5);
    EXPECT_EQ(bound, 16.0);
    const double est = estimate_lipschitz([](const Vec &x) { return x[0] * x[0]; }, ConvexSet::interval(-1, 1, false), 20000);
    EXPECT_LE(est, 2.0);
    EXPECT_LE(est, bound);
}

TEST(LipschitzExtension, SquareOnInterval) {
    const ConvexSet C = ConvexSet::interval(-1, 1, false);
    const ConvexFn fh = lipschitz_extension(square().restricted(C), C, 2.0);
    // Brute-force infimum of c^2 + 2|2 - c| over a fine grid of C.
    double brute = kInf;
    for (int i = 0; i <= 200000; ++i) {
        const double c = -1.0 + i * 1e-5;
        brute = std::min(brute, c * c + 2.0 * std::abs(2.0 - c));
    }
    EXPECT_NEAR(fh(scalar_vec(2.0)), brute, 1e-9);
    EXPECT_NEAR(fh(scalar_vec(2.0)), 3.0, 1e-12);
    for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0})
        EXPECT_NEAR(fh(scalar_vec(x)), x * x, 1e-12);
}

TEST(LipschitzExtension, AffineExtendsToItself) {
    const ConvexSet C = ConvexSet::interval(0, 1, false);
    const ConvexFn fh = lipschitz_extension(affine_fn(scalar_vec(1.0), 0.0).restricted(C), C, 1.0);
    EXPECT_NEAR(fh(scalar_vec(2.0)), 2.0, 1e-12);
}

TEST(LipschitzExtension, TwoDimensionalAgreesOnSet) {
    const ConvexSet C = ConvexSet::box(make_vec({-1.0, -1.0}), make_vec({1.0, 1.0}), false);
    const ConvexFn f = quadratic_fn(Mat::Identity(2, 2)).restricted(C);
    ExtensionInfo info;
    const ConvexFn fh = lipschitz_extension(f, C, 2.0 * std::sqrt(2.0), &info);
    for (const Vec &x : {make_vec({0.2, -0.4}), make_vec({1.0, 1.0}), make_vec({-0.9, 0.1})})
        EXPECT_NEAR(fh(x), f(x), 1e-6 + info.gap_bound);
    // Outside: the extension never exceeds f(c) + L|x - c| at the nearest corner.
    const Vec out = make_vec({2.0, 2.0});
    EXPECT_LE(fh(out), 2.0 + 2.0 * std::sqrt(2.0) * std::sqrt(2.0) + 1e-9);
}

TEST(QuadraticSplit, Diagonal) {
    Mat Q(2, 2);
    Q << 1, 0, 0, -2;
    auto [P1, P2] = quadratic_dc_split(QuadraticForm(Q));
    Mat E1(2, 2), E2(2, 2);
    E1 << 1, 0, 0, 0;
    E2 << 0, 0, 0, 2;
    EXPECT_LE((P1.matrix - E1).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((P2.matrix - E2).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(QuadraticSplit, PsdStaysWhole) {
    Mat Q(2, 2);
    Q << 2, 1, 1, 2;
    auto [P1, P2] = quadratic_dc_split(QuadraticForm(Q));
    EXPECT_LE((P1.matrix - Q).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE(P2.matrix.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(QuadraticSplit, RandomReconstruction) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> Z;
    for (int t = 0; t < 50; ++t) {
        Mat A(3, 3);
        for (int i = 0; i < 9; ++i)
            A(i / 3, i % 3) = Z(rng);
        const Mat Q = 0.5 * (A + A.transpose());
        auto [P1, P2] = quadratic_dc_split(QuadraticForm(Q));
        EXPECT_LE((P1.matrix - P2.matrix - Q).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_GE(Eigen::SelfAdjointEigenSolver<Mat>(P1.matrix).eigenvalues().minCoeff(), -1e-12);
        EXPECT_GE(Eigen::SelfAdjointEigenSolver<Mat>(P2.matrix).eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(QuadraticForm, RejectsAsymmetric) {
    Mat Q(2, 2);
    Q << 1, 2, 0, 1;
    EXPECT_THROW(QuadraticForm{Q}, InputError);
}

TEST(C11Split, SineHasHalfSquareControl) {
    const ConvexSet D = ConvexSet::interval(-10, 10, false);
    C11Options o;
    o.M = 1.0;
    const DCFunction f = c11_dc_split([](const Vec &x) { return std::sin(x[0]); },
                                      [](const Vec &x) { return scalar_vec(std::cos(x[0])); }, D, o);
    EXPECT_DOUBLE_EQ(f.control()(scalar_vec(2.0)), 2.0);
    ControlCheckOptions co;
    co.segments = 20000;
    EXPECT_TRUE(check_control(f, co).pass);
}

TEST(C11Split, AffineNeedsNoControl) {
    C11Options o;
    o.M = 0.0;
    const DCFunction f = c11_dc_split([](const Vec &x) { return 3.0 * x[0] - x[1]; },
                                      [](const Vec &) { return make_vec({3.0, -1.0}); },
                                      ConvexSet::ball(make_vec({0.0, 0.0}), 1.0, true), o);
    EXPECT_EQ(f.control()(make_vec({0.5, 0.1})), 0.0);
}

TEST(C11Split, HalfSquaredNorm) {
    C11Options o;
    o.M = 1.0;
    const DCFunction f = c11_dc_split([](const Vec &x) { return 0.5 * x.squaredNorm(); },
                                      [](const Vec &x) { return x; }, ConvexSet::ball(make_vec({0.0, 0.0}), 2.0, true),
                                      o);
    const Vec x = make_vec({0.7, -1.1});
    EXPECT_DOUBLE_EQ(f.control()(x), 0.5 * x.squaredNorm());
}

TEST(C11Split, RejectsNonEuclidean) {
    EXPECT_THROW(c11_dc_split([](const Vec &x) { return x[0]; }, [](const Vec &) { return scalar_vec(1.0); },
                              ConvexSet::interval(-1, 1, true, Norm::linf)),
                 InputError);
}

TEST(EstimateLipschitz, Linear) {
    EXPECT_GE(estimate_lipschitz([](const Vec &x) { return 3.0 * x[0]; }, ConvexSet::interval(0, 1, false), 1000),
              3.0 - 1e-6);
}

TEST(EstimateLipschitz, Constant) {
    EXPECT_EQ(estimate_lipschitz([](const Vec &) { return 4.0; }, ConvexSet::interval(0, 1, false), 1000), 0.0);
}

TEST(EstimateLipschitz, SquareApproachesTwoFromBelow) {
    const ConvexSet C = ConvexSet::interval(-1, 1, false);
    auto f = [](const Vec &x) { return x[0] * x[0]; };
    const double a = estimate_lipschitz(f, C, 100), b = estimate_lipschitz(f, C, 100000);
    EXPECT_LE(b, 2.0);
    EXPECT_GE(b, a - 1e-12);
    EXPECT_GT(b, 1.9);
}
