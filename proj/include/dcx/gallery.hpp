#ifndef DCX_GALLERY_HPP
#define DCX_GALLERY_HPP

// Concrete constructions: the Chyba family (a Lipschitz d.c. function on
// [-1, 0] that is no difference of Lipschitz convex functions), the
// strong-exposure checker, the bump mapping with its control, finite bump
// sums, and the hypothesis checker for non-d.c. certificates.

#include "dcx/dc_calculus.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace dcx {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// The double x as an exact rational.
inline Rational exact_rational(double x) {
    if (!std::isfinite(x))
        throw InputError("exact_rational: non-finite input");
    if (x == 0.0)
        return Rational(0);
    int e = 0;
    const double m = std::frexp(x, &e);
    const auto mant = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    Rational r{BigInt(mant)};
    if (e >= 0)
        return r * Rational(BigInt(1) << e);
    return r / Rational(BigInt(1) << (-e));
}

/// 2^k for any integer k.
inline Rational pow2(int k) {
    return k >= 0 ? Rational(BigInt(1) << k) : Rational(BigInt(1), BigInt(1) << (-k));
}

// ---------------------------------------------------------------------------
// Chyba family on [-1, 0]. S is the union of [-2^{2-2n}, -2^{1-2n}), d its
// indicator, g the integral of d, v the variation of d on [-1, x],
// w = v - d, c1 and c2 the integrals of v and w.

/// Stage index n with x in [-2^{1-n}, -2^{-n}); 0 for x = 0.
inline int chyba_stage(double x) {
    if (!(x >= -1.0 && x <= 0.0))
        throw DomainError("chyba: x = " + format_double(x) + " is outside [-1, 0]");
    if (x == 0.0)
        return 0;
    int e = 0;
    const double m = std::frexp(-x, &e); // -x = m 2^e, m in [1/2, 1)
    return m == 0.5 ? 2 - e : 1 - e;
}

inline int chyba_d(double x) {
    const int n = chyba_stage(x);
    return n > 0 && n % 2 == 1 ? 1 : 0;
}

/// v(x) = n - 1 on [-2^{1-n}, -2^{-n}); unbounded at 0.
inline long chyba_v(double x) {
    const int n = chyba_stage(x);
    if (n == 0)
        throw DomainError("chyba_v: the variation diverges at 0");
    return n - 1;
}

struct ChybaValues {
    Rational g, c1, c2;
};

/// Exact g, c1, c2 at x from the closed-form partial sums
///   sum_{j<n, j odd} 2^-j      = 2/3 - (4/3) 2^-j0  (j0 the first odd j >= n)
///   sum_{j<n} (j-1) 2^-j       = 1 - n 2^{1-n}
/// plus the contribution of the stage containing x.
inline ChybaValues chyba_exact(double x) {
    const int n = chyba_stage(x);
    if (n == 0)
        return {Rational(2, 3), Rational(1), Rational(1, 3)};
    const int j0 = n % 2 == 1 ? n : n + 1;
    const Rational odd = Rational(2, 3) - Rational(4, 3) * pow2(-j0);
    const Rational lin = 1 - Rational(n) * pow2(1 - n);
    const int d = n % 2;
    const Rational into = exact_rational(x) + pow2(1 - n);
    ChybaValues r;
    r.g = odd + Rational(d) * into;
    r.c1 = lin + Rational(n - 1) * into;
    r.c2 = lin - odd + Rational(n - 1 - d) * into;
    return r;
}

inline double chyba_g(double x) { return chyba_exact(x).g.convert_to<double>(); }

inline std::pair<double, double> chyba_c1_c2(double x) {
    const auto r = chyba_exact(x);
    return {r.c1.convert_to<double>(), r.c2.convert_to<double>()};
}

/// g(-|x|) for |x| <= 1.
inline double chyba_composed(double x) {
    if (!(std::abs(x) <= 1.0))
        throw DomainError("chyba_composed: |x| must be at most 1");
    return chyba_g(-std::abs(x));
}

/// The right derivative of g is d, and a difference of L-Lipschitz convex
/// functions has right derivative of variation at most 2L on any interval.
/// The variation of d on [-1/2, -2^-(2L+4)] is computed by brute force.
struct VariationWitness {
    int L = 0;
    double a = -0.5, b = 0.0;
    double variation = 0.0;
    double bound = 0.0;
    bool exceeds = false;
};

inline VariationWitness variation_witness(int L) {
    if (L < 1 || L > 200)
        throw InputError("variation_witness: L must be in 1..200");
    VariationWitness w;
    w.L = L;
    w.b = -std::ldexp(1.0, -(2 * L + 4));
    w.variation = total_variation([](double t) { return static_cast<double>(chyba_d(t)); }, w.a, w.b, 2 * L + 8);
    w.bound = 2.0 * L;
    w.exceeds = w.variation > w.bound;
    return w;
}

inline Json to_json(const VariationWitness &w) {
    Json j;
    j["L"] = w.L;
    j["interval"] = {w.a, w.b};
    j["variation"] = w.variation;
    j["bound_for_lipschitz_pair"] = w.bound;
    j["exceeds"] = w.exceeds;
    return j;
}

/// Rows x,d,g,v,c1,c2 at n equally spaced points of [-1, 0) (v diverges at
/// 0, so the grid stops one step short).
inline std::string chyba_csv(std::size_t n) {
    if (n < 1)
        throw InputError("chyba_csv: grid must have at least one point");
    std::string out = "x,d,g,v,c1,c2\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -1.0 + static_cast<double>(i) / static_cast<double>(n);
        const auto r = chyba_exact(x);
        out += format_double(x) + "," + std::to_string(chyba_d(x)) + "," + format_double(r.g.convert_to<double>()) +
               "," + std::to_string(chyba_v(x)) + "," + format_double(r.c1.convert_to<double>()) + "," +
               format_double(r.c2.convert_to<double>()) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Strong exposure.

/// A norm and its dual on R^dim.
struct NormOracle {
    std::string name;
    int dim = 1;
    std::function<double(const Vec &)> norm;
    std::function<double(const Vec &)> dual;
};

inline NormOracle norm_oracle(Norm n, int dim) {
    return {to_string(n), dim, [n](const Vec &x) { return dcx::norm(x, n); },
            [n](const Vec &y) { return dual_norm(y, n); }};
}

/// Gauge of a hull body; the dual norm is the max over the body's vertices.
inline NormOracle norm_oracle(const HullBody &b) {
    return {"hull", b.dim(), [b](const Vec &x) { return b.facet_gauge(x); },
            [b](const Vec &y) {
                double m = 0.0;
                for (const Vec &v : b.vertices())
                    m = std::max(m, y.dot(v));
                return m;
            }};
}

/// Samples both sides of the strong exposure property for (e, e*):
///   hypothesis  e*(u) > 1 - eps, ||u|| <= 1   =>  ||u - e|| <= c eps,
///   conclusion  ||x||^2/2 < ||e||^2/2 + e*(x - e) + delta  =>  ||x - e|| < (1 + 2c) sqrt(2 delta).
/// `samples` candidates are drawn for each side; counts record how many
/// satisfied the premise.
inline VerificationReport strexp_check(const NormOracle &N, const Vec &e, const Vec &e_star, double c, double delta,
                                       std::size_t samples, std::uint64_t seed = 1) {
    require_dim(e, N.dim, "strexp_check e");
    require_dim(e_star, N.dim, "strexp_check e*");
    constexpr double eq = 1e-12;
    if (std::abs(N.norm(e) - 1.0) > eq || std::abs(e_star.dot(e) - 1.0) > eq || std::abs(N.dual(e_star) - 1.0) > eq)
        throw InputError("strexp_check: invalid (e, e*) pair; need ||e|| = ||e*|| = e*(e) = 1");
    if (!(c > 0.0))
        throw InputError("strexp_check: c must be positive");
    if (!(delta > 0.0 && delta < 0.5))
        throw InputError("strexp_check: delta must lie in (0, 1/2)");
    const int d = N.dim;
    const double bound = (1.0 + 2.0 * c) * std::sqrt(2.0 * delta);
    const double ne2 = N.norm(e) * N.norm(e);
    struct Part {
        Violation hyp, con;
        long long nh = 0, nc = 0;
    };
    auto parts = run_batches<Part>(samples, kBatch, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::mt19937_64 rng(batch_seed(seed, b));
        std::uniform_real_distribution<double> U(-1.0, 1.0), V(0.0, 1.0);
        Part p;
        for (std::size_t i = lo; i < hi; ++i) {
            const double eps = std::pow(10.0, -6.0 * V(rng));
            Vec z(d);
            for (int k = 0; k < d; ++k)
                z[k] = U(rng);
            const Vec u = e + 3.0 * std::max(c, 1.0) * eps * z;
            if (N.norm(u) <= 1.0 && e_star.dot(u) > 1.0 - eps) {
                ++p.nh;
                const double dist = N.norm(u - e);
                p.hyp.offer((dist - c * eps) / eps, dist - c * eps, {u, scalar_vec(eps)});
            }
            for (int k = 0; k < d; ++k)
                z[k] = U(rng);
            const Vec x = i == 0 ? e : Vec(e + 2.0 * bound * z);
            const double nx = N.norm(x);
            if (0.5 * nx * nx < 0.5 * ne2 + e_star.dot(x - e) + delta) {
                ++p.nc;
                const double dist = N.norm(x - e);
                p.con.offer((dist - bound) / bound, dist - bound, {x});
            }
        }
        return p;
    });
    Part all;
    for (const Part &p : parts) {
        all.hyp.merge(p.hyp);
        all.con.merge(p.con);
        all.nh += p.nh;
        all.nc += p.nc;
    }
    VerificationReport r;
    r.check = "strong_exposure(" + N.name + ")";
    r.seed = seed;
    r.tolerance = 0.0;
    r.counts = {{"samples", static_cast<long long>(samples)}, {"hypothesis_hits", all.nh}, {"conclusion_hits", all.nc}};
    // The hypothesis bound is non-strict and the conclusion strict.
    const bool hyp_ok = all.nh == 0 || all.hyp.normalized <= 1e-12;
    const bool con_ok = all.nc == 0 || all.con.normalized < 0.0;
    const Violation &w = all.hyp.normalized + 1e-12 > all.con.normalized ? all.hyp : all.con;
    r.worst_violation = std::max(all.hyp.normalized, all.con.normalized);
    r.worst_raw_excess = w.raw;
    r.witness = w.where;
    if (!hyp_ok)
        r.notes.push_back("hypothesis violated: c is too small for this norm");
    if (!con_ok)
        r.notes.push_back("conclusion violated");
    r.pass = hyp_ok && con_ok;
    return r;
}

// ---------------------------------------------------------------------------
// Bump mapping on R^m with the max norm, standard basis e_n and coordinate
// functionals e*_n. The hull body conv(rho B ∪ {±e_n}) gives the norm |||.|||
// and g = |||.|||^2 / 2.

struct BumpSystem {
    int m = 2;
    double R = 1.0;   // sup ||e*_n|| (dual norm)
    double r = 1.0;   // inf ||e_m - e_n||
    double rho = 0.5; // in (0, 1/R)
    double delta = 0.0;
    HullBody body;
    std::vector<Vec> targets;
    Norm codomain = Norm::linf;

    double kappa() const { return 1.0 + 4.0 / (1.0 - R * rho); }
    double s() const {
        double v = 0.0;
        for (const Vec &y : targets)
            v = std::max(v, norm(y, codomain));
        return v;
    }
    Vec e(int n) const { return Vec::Unit(m, n); }
};

/// Default rho = 1/(2R) and delta = min(1/4, (r/(4 kappa))^2 / 2), which
/// makes 2 kappa sqrt(2 delta) <= r/2.
inline BumpSystem make_bump_system(int m, std::vector<Vec> targets, std::optional<double> rho = std::nullopt,
                                   std::optional<double> delta = std::nullopt, Norm codomain = Norm::linf) {
    if (m < 1 || m > 3)
        throw InputError("bump system: dimension must be in 1..3");
    if (static_cast<int>(targets.size()) != m)
        throw InputError("bump system: need one target per basis vector");
    const int q = static_cast<int>(targets.front().size());
    for (const Vec &y : targets)
        require_dim(y, q, "bump target");
    const double R = 1.0;
    const double r = m >= 2 ? 1.0 : 2.0; // m = 1: only e_1, distance to -e_1 is irrelevant
    const double rh = rho ? *rho : 1.0 / (2.0 * R);
    if (!(rh > 0.0 && rh < 1.0 / R))
        throw InputError("bump system: rho must lie in (0, 1/R)");
    std::vector<Vec> pts;
    for (int n = 0; n < m; ++n)
        pts.push_back(Vec::Unit(m, n));
    BumpSystem S{m, R, r, rh, 0.0, HullBody(rh, BaseBall::linf, pts, m), std::move(targets), codomain};
    const double kap = S.kappa();
    S.delta = delta ? *delta : std::min(0.25, 0.5 * std::pow(r / (4.0 * kap), 2));
    if (!(S.delta > 0.0 && S.delta < 0.5))
        throw InputError("bump system: delta must lie in (0, 1/2)");
    // Regions sit inside balls of radius kappa sqrt(2 delta) around e_n.
    if (m >= 2 && !(r - 2.0 * kap * std::sqrt(2.0 * S.delta) > S.delta))
        throw InputError("bump system: bump regions may not separate; choose a smaller delta");
    return S;
}

struct BumpMapping {
    BumpSystem sys;
    DCMapping H;
    ConvexFn h;
    std::vector<ConvexSet> regions;
};

namespace detail {

/// ((g(e_n) - g(x)) + e*_n(x - e_n)) + delta: exactly delta at x = e_n.
inline double bump_bracket(const BumpSystem &S, double ge, int n, double gx, const Vec &x) {
    return ((ge - gx) + (x[n] - 1.0)) + S.delta;
}

inline VecFn bump_value(const BumpSystem &S) {
    const HullBody body = S.body;
    return [S, body](const Vec &x) {
        const double gx = 0.5 * std::pow(body.facet_gauge(x), 2);
        Vec out = Vec::Zero(S.targets.front().size());
        for (int n = 0; n < S.m; ++n) {
            const double ge = 0.5 * std::pow(body.facet_gauge(S.e(n)), 2);
            const double t = bump_bracket(S, ge, n, gx, x);
            if (t > 0.0)
                return Vec((t / S.delta) * S.targets[static_cast<std::size_t>(n)]);
        }
        return out;
    };
}

} // namespace detail

inline BumpMapping build_bump_mapping(const BumpSystem &S) {
    ConvexFn g = gauge_squared(S.body, 0.5);
    const double s = S.s();
    std::vector<ConvexFn> pieces{g};
    std::vector<ConvexSet> regions;
    const double rad = S.kappa() * std::sqrt(2.0 * S.delta);
    for (int n = 0; n < S.m; ++n) {
        const Vec en = S.e(n);
        const double ge = g.value_unchecked(en);
        pieces.push_back(affine_fn(en, ge - 1.0 + S.delta));
        regions.push_back(ConvexSet::oracle(
            S.m,
            [S, g, ge, n](const Vec &x) { return detail::bump_bracket(S, ge, n, g.value_unchecked(x), x) > 0.0; },
            Box{en.array() - rad, en.array() + rad}, "bump region " + std::to_string(n + 1), true, Norm::linf));
    }
    ConvexFn h = sum({scale(pointwise_max(pieces), s / S.delta), scale(g, s / S.delta)});
    DCMapping H(ConvexSet::whole(S.m, Norm::linf), detail::bump_value(S), static_cast<int>(S.targets.front().size()),
                h, {"bump"}, S.codomain);
    return {S, H, h, regions};
}

/// Phi(x) = H(2x) with control h(2x); Phi vanishes outside the unit ball.
inline DCMapping build_bump_scaled(const BumpSystem &S) {
    BumpMapping B = build_bump_mapping(S);
    const Mat two = 2.0 * Mat::Identity(S.m, S.m);
    ConvexFn phi = affine_precompose(B.h, two, Vec::Zero(S.m));
    auto Hv = B.H.value_fn();
    return DCMapping(
        ConvexSet::whole(S.m, Norm::linf), [Hv](const Vec &x) { return Hv(2.0 * x); }, B.H.out_dim(), phi,
        {"bump(scaled)"}, S.codomain);
}

/// Sampled check that each region lies in the ball of radius
/// kappa sqrt(2 delta) around its basis point.
inline VerificationReport check_bump_regions(const BumpSystem &S, std::size_t samples, std::uint64_t seed = 1) {
    ConvexFn g = gauge_squared(S.body, 0.5);
    const double rad = S.kappa() * std::sqrt(2.0 * S.delta);
    Violation worst;
    long long hits = 0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const int n = static_cast<int>(i % static_cast<std::size_t>(S.m));
        const Vec en = S.e(n);
        Vec z(S.m);
        for (int k = 0; k < S.m; ++k)
            z[k] = U(rng);
        const Vec x = en + 2.0 * rad * z;
        const double ge = g.value_unchecked(en);
        if (detail::bump_bracket(S, ge, n, g.value_unchecked(x), x) > 0.0) {
            ++hits;
            const double dist = norm(x - en, Norm::linf);
            worst.offer((dist - rad) / rad, dist - rad, {x});
        }
    }
    VerificationReport r;
    r.check = "bump_region_containment";
    r.seed = seed;
    r.counts = {{"samples", static_cast<long long>(samples)}, {"inside_regions", hits}};
    r.worst_violation = hits ? worst.normalized : 0.0;
    r.worst_raw_excess = hits ? worst.raw : 0.0;
    r.witness = worst.where;
    r.pass = hits == 0 || worst.normalized < 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Finite bump sums.

struct BumpPlacement {
    Vec center;
    double scale = 1.0;
};

/// F(x) = sum_k Phi((x - v_k)/delta_k) on an open polyhedral A (max norm).
/// Each stage of an exhaustion of A meets finitely many supports; the
/// stage control is the sum of their shifted controls, and the stage
/// controls are glued. The result lives on `working`.
inline DCMapping build_bump_sum(const ConvexSet &A, const std::vector<BumpPlacement> &bumps, const BumpSystem &S,
                                const ConvexSet &working, const GlueOptions &go = {}) {
    if (!A.polyhedral() || A.dim() != S.m)
        throw InputError("bump sum: domain must be polyhedral of the bump dimension");
    if (bumps.empty())
        throw InputError("bump sum: no bumps");
    for (std::size_t k = 0; k < bumps.size(); ++k) {
        const auto &b = bumps[k];
        require_dim(b.center, S.m, "bump center");
        if (!(b.scale > 0.0))
            throw InputError("bump sum: scales must be positive");
        if (!(A.dist_to_complement(b.center) > b.scale))
            throw InputError("bump sum: support of bump " + std::to_string(k + 1) + " leaves the domain");
        for (std::size_t j = 0; j < k; ++j)
            if (norm(bumps[j].center - b.center, Norm::linf) < bumps[j].scale + b.scale)
                throw InputError("bump sum: supports of bumps " + std::to_string(j + 1) + " and " +
                                 std::to_string(k + 1) + " overlap");
    }
    const DCMapping Phi = build_bump_scaled(S);
    std::vector<ConvexFn> shifted;
    for (const auto &b : bumps)
        shifted.push_back(affine_precompose(Phi.control(), Mat::Identity(S.m, S.m) / b.scale, -b.center / b.scale));

    auto wb = working.bounding_box();
    const auto gap = compactly_contained(working, A);
    if (!wb || !gap)
        throw InputError("bump sum: working region must be bounded and compactly contained in the domain");
    const Vec x0 = wb->center();
    const double R0 = std::max(1e-3, wb->half_width().maxCoeff());
    std::vector<ConvexSet> D;
    double delta = 0.0;
    for (int n = 1; n <= 200 && D.size() < 200; ++n) {
        const ConvexSet Cn = intersect(A, anchor_box(x0, n * R0, Norm::linf));
        if (n == 1)
            delta = 0.5 * std::min(Cn.inradius(), *gap);
        D.push_back(inner_parallel(Cn, delta / n));
        if (n >= 3 && compactly_contained(working, D[static_cast<std::size_t>(n - 2)]))
            break;
    }
    if (!compactly_contained(working, D[D.size() - 2]))
        throw PreconditionError("bump sum: working region not reached within 200 stages");
    Exhaustion E = make_exhaustion(A, D);
    std::vector<ConvexFn> gamma;
    for (const ConvexSet &Dn : E.stages) {
        std::vector<ConvexFn> meet;
        for (std::size_t k = 0; k < bumps.size(); ++k)
            if (Dn.dist(bumps[k].center) < bumps[k].scale * (1.0 + 1e-9))
                meet.push_back(shifted[k]);
        gamma.push_back(meet.empty() ? constant_fn(S.m, 0.0) : sum(meet));
    }
    GlueResult R = glue(E, gamma, go);
    auto Pv = Phi.value_fn();
    const int q = Phi.out_dim();
    std::vector<BumpPlacement> bs = bumps;
    return DCMapping(
        working,
        [Pv, bs, q](const Vec &x) {
            Vec out = Vec::Zero(q);
            for (const auto &b : bs)
                if (norm(x - b.center, Norm::linf) < b.scale)
                    out += Pv((x - b.center) / b.scale);
            return out;
        },
        q, ConvexFn(R.control.node(), working),
        {"bump sum(" + std::to_string(bumps.size()) + " bumps, " + std::to_string(E.stages.size()) + " stages)",
         "glued"},
        S.codomain);
}

// ---------------------------------------------------------------------------
// Non-d.c. certificates: balls B(x_n, delta_n) inside A with x_n in lambda A,
// delta_n -> 0, and F unbounded on each ball.

struct NonDCWitness {
    ConvexSet A;
    double lambda = 0.5;
    std::vector<Vec> centers;
    std::vector<double> radii;
};

inline void validate_witness(const NonDCWitness &w) {
    if (!(w.lambda > 0.0 && w.lambda < 1.0))
        throw InputError("witness: lambda must lie in (0, 1)");
    if (!w.A.contains(Vec::Zero(w.A.dim())))
        throw InputError("witness: A must contain 0");
    if (w.centers.size() != w.radii.size() || w.centers.empty())
        throw InputError("witness: centers and radii must be nonempty lists of equal length");
    for (std::size_t n = 0; n < w.centers.size(); ++n) {
        const std::string tag = std::to_string(n + 1);
        const Vec &x = w.centers[n];
        require_dim(x, w.A.dim(), "witness center");
        if (!w.A.contains(x / w.lambda))
            throw InputError("witness: x_" + tag + " = " + format_vec(x) + " is not in lambda*A");
        if (!(w.radii[n] > 0.0))
            throw InputError("witness: delta_" + tag + " must be positive");
        if (n > 0 && !(w.radii[n] < w.radii[n - 1]))
            throw InputError("witness: delta_" + tag + " does not decrease");
        if (!(w.A.dist_to_complement(x) >= w.radii[n]))
            throw InputError("witness: ball " + tag + " is not inside A");
    }
}

/// Pass iff sups[n] > escalation[n] for every n and the sups increase
/// strictly. Hypothesis check, not proof.
inline VerificationReport ndc_witness_check(const NonDCWitness &w, const std::vector<double> &sups,
                                            std::vector<double> escalation = {}) {
    validate_witness(w);
    const std::size_t K = w.centers.size();
    if (sups.size() != K)
        throw InputError("witness: one sampled sup per ball is required");
    if (escalation.empty())
        for (std::size_t n = 0; n < K; ++n)
            escalation.push_back(static_cast<double>(n));
    if (escalation.size() != K)
        throw InputError("witness: escalation schedule has the wrong length");
    VerificationReport r;
    r.check = "non_dc_witness";
    r.notes.push_back("hypothesis check, not proof");
    r.counts = {{"balls", static_cast<long long>(K)}};
    double worst = -kInf;
    std::size_t at = 0;
    bool increasing = true;
    for (std::size_t n = 0; n < K; ++n) {
        const double ex = escalation[n] - sups[n];
        if (ex > worst) {
            worst = ex;
            at = n;
        }
        if (n > 0 && !(sups[n] > sups[n - 1]))
            increasing = false;
    }
    r.worst_violation = worst;
    r.worst_raw_excess = worst;
    r.witness = {w.centers[at]};
    if (!increasing)
        r.notes.push_back("sampled sups do not increase strictly");
    r.pass = worst < 0.0 && increasing;
    return r;
}

/// Sampled sup of ||F|| (codomain norm) over each witness ball.
inline std::vector<double> sample_ball_sups(const NonDCWitness &w, const VecFn &F, Norm codomain,
                                            std::size_t per_ball, std::uint64_t seed = 1) {
    validate_witness(w);
    std::vector<double> out;
    for (std::size_t n = 0; n < w.centers.size(); ++n) {
        std::mt19937_64 rng(batch_seed(seed, n));
        const ConvexSet B = ConvexSet::ball(w.centers[n], w.radii[n], true, w.A.ambient());
        double sup = 0.0;
        for (std::size_t i = 0; i < per_ball; ++i)
            sup = std::max(sup, norm(F(sample_point(B, rng)), codomain));
        out.push_back(sup);
    }
    return out;
}

} // namespace dcx

#endif
