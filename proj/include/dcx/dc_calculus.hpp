#ifndef DCX_DC_CALCULUS_HPP
#define DCX_DC_CALCULUS_HPP

// Constructors that build controls for compositions: the Lipschitz
// composition rule h = g(F) + (Lip G + Lip g) f, its global version on
// exhausting stages, and products, quotients and quadratic/bilinear images.

#include "dcx/hartman.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace dcx {

struct LipschitzCertificate {
    enum class Origin { analytic, inner_bound, empirical };
    double constant = 0.0;
    ConvexSet scope;
    Origin origin = Origin::analytic;

    static LipschitzCertificate analytic(double c, ConvexSet scope) {
        if (!(c >= 0.0))
            throw InputError("LipschitzCertificate: constant must be nonnegative");
        return {c, std::move(scope), Origin::analytic};
    }

    /// 1.5 times a sampled lower bound.
    static LipschitzCertificate empirical(const ScalarFn &f, const ConvexSet &scope, std::size_t samples = 4096,
                                          std::uint64_t seed = 1) {
        return {1.5 * estimate_lipschitz(f, scope, samples, seed), scope, Origin::empirical};
    }
};

inline const char *to_string(LipschitzCertificate::Origin o) {
    switch (o) {
    case LipschitzCertificate::Origin::analytic:
        return "analytic";
    case LipschitzCertificate::Origin::inner_bound:
        return "inner-bound";
    case LipschitzCertificate::Origin::empirical:
        return "empirical";
    }
    return "?";
}

struct ComposeOptions {
    std::size_t range_samples = 4096;
    std::uint64_t seed = 1;
    std::optional<Box> window; // for sampling unbounded domains
};

/// G o F with control g(F(x)) + (Lip G + Lip g) f(x), where f controls F on
/// A, g controls G on B, F(A) lies in B, and the constants are Lipschitz
/// bounds on B with respect to the codomain norm of F.
inline DCMapping compose(const DCMapping &F, const DCMapping &G, const LipschitzCertificate &lipG,
                         const LipschitzCertificate &lipg, const ComposeOptions &o = {}) {
    if (G.dim() != F.out_dim())
        throw InputError("compose: inner codomain dimension does not match the outer domain");
    const ConvexSet &B = G.domain();
    {
        std::mt19937_64 rng(o.seed);
        for (std::size_t i = 0; i < o.range_samples; ++i) {
            const Vec x = sample_point(F.domain(), rng, o.window);
            const Vec y = F.value_fn()(x);
            if (!B.contains(y))
                throw PreconditionError("compose: F(" + format_vec(x) + ") = " + format_vec(y) +
                                        " escapes the outer domain " + B.describe());
        }
    }
    const double k = lipG.constant + lipg.constant;
    auto Fv = F.value_fn();
    auto Gv = G.value_fn();
    ConvexFn f = F.control(), g = G.control();
    const int d = F.dim();
    ConvexFn h = opaque_fn(
        d, "composed", [Fv, g, f, k](const Vec &x) { return g.value_unchecked(Fv(x)) + k * f.value_unchecked(x); },
        ConvexSet::whole(d, F.domain().ambient()));
    std::vector<std::string> prov{"composed(" + std::string(to_string(lipG.origin)) + "," +
                                  std::string(to_string(lipg.origin)) + ")"};
    for (const auto &p : G.provenance())
        prov.push_back("outer: " + p);
    for (const auto &p : F.provenance())
        prov.push_back("inner: " + p);
    const bool emp = F.empirical() || G.empirical() || lipG.origin == LipschitzCertificate::Origin::empirical ||
                     lipg.origin == LipschitzCertificate::Origin::empirical;
    return DCMapping(
        F.domain(), [Fv, Gv](const Vec &x) { return Gv(Fv(x)); }, G.out_dim(), h, prov, G.codomain(), emp);
}

inline DCFunction to_function(const DCMapping &M) {
    if (M.out_dim() != 1)
        throw InputError("to_function: mapping is not scalar");
    auto v = M.value_fn();
    return DCFunction(
        M.domain(), [v](const Vec &x) { return v(x)[0]; }, M.control(), M.provenance(), M.empirical());
}

// ---------------------------------------------------------------------------
// Outer functions for the global pipeline.

/// What an outer function g offers on a box B of its arguments: a box E
/// containing B + 2r (max norm), a control of g valid on E, and the values of
/// g there. B_eff may shrink B when part of it is known to be unreachable.
struct LocalOuter {
    Box B_eff;
    Box E;
    double r = 0.0;
    ConvexFn ctrl;
};

struct OuterFunction {
    int dim = 1;
    std::string name;
    ScalarFn value;
    std::function<LocalOuter(const Box &)> local;
    bool empirical = false;
};

namespace detail {

inline double default_margin(const Box &B) { return 0.25 * (1.0 + B.half_width().maxCoeff()); }

inline LocalOuter global_control_on(const Box &B, const ConvexFn &ctrl) {
    const double r = default_margin(B);
    return {B, B.inflated(2.0 * r), r, ctrl};
}

} // namespace detail

/// g with a control valid on all of R^n.
inline OuterFunction outer_with_global_control(int dim, std::string name, ScalarFn value, ConvexFn ctrl) {
    OuterFunction g;
    g.dim = dim;
    g.name = std::move(name);
    g.value = std::move(value);
    g.local = [ctrl](const Box &B) { return detail::global_control_on(B, ctrl); };
    return g;
}

/// Scalar g with |g''| <= M everywhere: control (M/2) y^2.
inline OuterFunction outer_smooth_1d(std::string name, std::function<double(double)> fn, double M) {
    return outer_with_global_control(
        1, std::move(name), [fn](const Vec &y) { return fn(y[0]); }, half_sq_norm_scaled(1, 0.5 * M));
}

inline OuterFunction outer_exp() {
    auto e = smooth_fn(
        1, "exp", [](const Vec &y) { return std::exp(y[0]); },
        [](const Vec &y) { return scalar_vec(std::exp(y[0])); });
    return outer_with_global_control(1, "exp", [](const Vec &y) { return std::exp(y[0]); }, e);
}

inline OuterFunction outer_sin() { return outer_smooth_1d("sin", [](double t) { return std::sin(t); }, 1.0); }

inline OuterFunction outer_atan() {
    return outer_smooth_1d("atan", [](double t) { return std::atan(t); }, 3.0 * std::sqrt(3.0) / 8.0);
}

/// p(y) = sum a_k y^k; on a box the control is (M/2) y^2 with M bounding
/// |p''| there.
inline OuterFunction outer_polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
        throw InputError("polynomial: no coefficients");
    OuterFunction g;
    g.dim = 1;
    g.name = "polynomial";
    g.value = [coeffs](const Vec &y) {
        double v = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;)
            v = v * y[0] + coeffs[k];
        return v;
    };
    g.local = [coeffs](const Box &B) {
        const double r = detail::default_margin(B);
        Box E = B.inflated(2.0 * r);
        const double R = std::max(std::abs(E.lo[0]), std::abs(E.hi[0]));
        double M = 0.0;
        for (std::size_t k = 2; k < coeffs.size(); ++k)
            M += static_cast<double>(k * (k - 1)) * std::abs(coeffs[k]) * std::pow(R, static_cast<double>(k - 2));
        return LocalOuter{B, E, r, half_sq_norm_scaled(1, 0.5 * M)};
    };
    return g;
}

inline OuterFunction outer_linear(const Vec &a) {
    return outer_with_global_control(
        static_cast<int>(a.size()), "linear", [a](const Vec &y) { return a.dot(y); },
        constant_fn(static_cast<int>(a.size()), 0.0));
}

/// g(u, v) = uv = (u+v)^2/4 - (u-v)^2/4, controlled by (u^2 + v^2)/2.
inline OuterFunction outer_product() {
    return outer_with_global_control(
        2, "product", [](const Vec &y) { return y[0] * y[1]; }, half_sq_norm_scaled(2, 0.5));
}

/// y' P y for positive semidefinite P; convex, so its own control.
inline OuterFunction outer_psd_quadratic(const QuadraticForm &P) {
    Mat M = P.matrix;
    return outer_with_global_control(
        P.dim(), "quadratic", [M](const Vec &y) { return y.dot(M * y); }, quadratic_fn(M));
}

/// g(u, v) = u/v on the band sign*v >= m. On a box with |u| <= U and
/// |v| >= m' the Hessian norm is at most 2(U + m')/m'^3, so (M/2)|y|^2 is a
/// control there.
inline OuterFunction outer_quotient(double m, int sign) {
    if (!(m > 0.0))
        throw InputError("quotient: band floor must be positive");
    if (sign != 1 && sign != -1)
        throw InputError("quotient: sign must be +1 or -1");
    OuterFunction g;
    g.dim = 2;
    g.name = "quotient";
    g.value = [](const Vec &y) { return y[0] / y[1]; };
    g.local = [m, sign](const Box &B) {
        Box Be = B;
        // Values of the denominator are known to stay in the band.
        if (sign > 0)
            Be.lo[1] = std::max(Be.lo[1], m);
        else
            Be.hi[1] = std::min(Be.hi[1], -m);
        if (Be.lo[1] > Be.hi[1])
            throw PreconditionError("quotient: denominator range misses the band");
        const double mb = sign > 0 ? Be.lo[1] : -Be.hi[1];
        const double r = std::min(detail::default_margin(Be), 0.25 * mb);
        Box E = Be.inflated(2.0 * r);
        const double mE = mb - 2.0 * r;
        const double U = std::max(std::abs(E.lo[0]), std::abs(E.hi[0]));
        const double M = 2.0 * (U + mE) / (mE * mE * mE);
        return LocalOuter{Be, E, r, half_sq_norm_scaled(2, 0.5 * M)};
    };
    return g;
}

// ---------------------------------------------------------------------------
// Global composition.

struct GlobalOptions {
    std::optional<ConvexSet> working; // defaults to A shrunk by 5% of its inradius
    std::optional<Vec> anchor;        // defaults to the center of the working region
    int max_stages = 200;
    std::size_t range_samples = 4096; // range bounds on non-box stages
    std::uint64_t seed = 1;
    GlueOptions glue;
};

struct GlobalReport {
    int stages = 0;
    double delta = 0.0;
    double level_step = 0.0;
    std::vector<Json> stage_info;
    std::vector<std::string> notes;
};

namespace detail {

inline std::vector<Vec> closure_vertices(const ConvexSet &S) {
    if (S.kind() == ConvexSet::Kind::box || S.kind() == ConvexSet::Kind::polyhedron)
        return S.vertices();
    throw InputError("stage is not polyhedral: " + S.describe());
}

/// Largest r in (0, rmax] with f <= level on closure(box(x0, r) & A); the
/// maximum of a convex function over a polytope sits at a vertex.
inline double sublevel_radius(const ConvexFn &f, const Vec &x0, const ConvexSet &A, double level, double rmax) {
    auto ok = [&](double r) {
        const ConvexSet S = intersect(A, anchor_box(x0, r, A.ambient()));
        if (S.is_empty())
            return false;
        for (const Vec &v : closure_vertices(S)) {
            const double fv = f.value_unchecked(v);
            if (!std::isfinite(fv) || fv > level)
                return false;
        }
        return true;
    };
    if (ok(rmax))
        return rmax;
    double lo = 0.0, hi = rmax;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

/// Box containing F(closure D). For box stages each component splits as
/// F_i = P_i - Q_i with P_i = (f + F_i)/2 and Q_i = (f - F_i)/2 convex; their
/// maxima sit at vertices and their minima are bounded below by reflecting
/// through the center. Other stages use sampled extremes widened by 25%.
inline Box range_box(const DCMapping &F, const ConvexSet &D, std::size_t samples, std::uint64_t seed,
                     bool *sampled) {
    const int n = F.out_dim();
    const auto &Fv = F.value_fn();
    const ConvexFn &f = F.control();
    Box R{Vec::Constant(n, kInf), Vec::Constant(n, -kInf)};
    if (D.kind() == ConvexSet::Kind::box) {
        Vec supP = Vec::Constant(n, -kInf), supQ = Vec::Constant(n, -kInf);
        for (const Vec &v : D.vertices()) {
            const Vec y = Fv(v);
            const double fv = f.value_unchecked(v);
            for (int i = 0; i < n; ++i) {
                supP[i] = std::max(supP[i], 0.5 * (fv + y[i]));
                supQ[i] = std::max(supQ[i], 0.5 * (fv - y[i]));
            }
        }
        const Vec c = 0.5 * (D.lo() + D.hi());
        const Vec yc = Fv(c);
        const double fc = f.value_unchecked(c);
        for (int i = 0; i < n; ++i) {
            const double infP = 2.0 * 0.5 * (fc + yc[i]) - supP[i];
            const double infQ = 2.0 * 0.5 * (fc - yc[i]) - supQ[i];
            R.hi[i] = supP[i] - infQ;
            R.lo[i] = infP - supQ[i];
        }
        return R;
    }
    if (sampled)
        *sampled = true;
    std::mt19937_64 rng(seed);
    auto take = [&](const Vec &x) {
        const Vec y = Fv(x);
        R.lo = R.lo.cwiseMin(y);
        R.hi = R.hi.cwiseMax(y);
    };
    for (const Vec &v : closure_vertices(D))
        take(v);
    for (std::size_t i = 0; i < samples; ++i)
        take(sample_point(D, rng));
    const Vec w = 0.25 * (R.hi - R.lo).array() + 1e-12;
    return {R.lo - w, R.hi + w};
}

/// Lipschitz bound on B for a function convex on E with B + 2r inside E:
/// 2M/r with M = sup_E |fn|, the sup read off the corners of E and the inf
/// bounded by reflection through the center.
template <class Fn>
double inner_lipschitz(const Box &E, double r, Fn fn) {
    double sup = -kInf;
    for (const Vec &v : E.corners())
        sup = std::max(sup, fn(v));
    const double inf = 2.0 * fn(E.center()) - sup;
    return lipschitz_bound_on_inner(std::max(std::abs(sup), std::abs(inf)), r);
}

} // namespace detail

/// g o F on an open polyhedral A (interval, box, halfspaces or R^n). The
/// stages are boxes around the anchor on which F's control stays below
/// f(anchor) + (2^n - 1) s, shrunk as D_n = {dist(., complement) > delta/n}. On each
/// stage the range of F is boxed, g's control and Lipschitz constants are
/// taken there, the composition rule gives a local control, and the local
/// controls are glued. The result lives on the working region.
inline DCFunction compose_global(const DCMapping &F, const OuterFunction &g, const GlobalOptions &o = {},
                                 GlobalReport *report = nullptr) {
    if (g.dim != F.out_dim())
        throw InputError("compose_global: outer function takes " + std::to_string(g.dim) + " arguments, F has " +
                         std::to_string(F.out_dim()) + " components");
    const ConvexSet &A = F.domain();
    if (!A.polyhedral())
        throw InputError("compose_global: the domain must be an interval, box, halfspace intersection or the "
                         "whole space (got " + A.describe() + ")");
    ConvexSet W = o.working ? *o.working : ConvexSet::empty(A.dim());
    if (!o.working) {
        if (!A.bounded())
            throw InputError("compose_global: an unbounded domain needs an explicit working region");
        W = inner_parallel(A, 0.05 * A.inradius());
    }
    auto wb = W.bounding_box();
    if (!wb)
        throw InputError("compose_global: working region must be bounded");
    const auto w_gap = compactly_contained(W, A);
    if (!w_gap)
        throw InputError("compose_global: working region is not compactly contained in the domain");
    const Vec x0 = o.anchor ? *o.anchor : wb->center();
    if (!A.contains(x0))
        throw InputError("compose_global: anchor " + format_vec(x0) + " is outside the domain");
    const ConvexFn &f = F.control();
    const double f0 = f.value_unchecked(x0);
    // Levels double: the second stage reaches the largest control value on
    // the working region's corners.
    double fmax = f0;
    for (const Vec &v : wb->corners())
        fmax = std::max(fmax, f.value_unchecked(v));
    const double step = std::max(1.0, (fmax - f0) / 3.0);
    const double R0 = std::max(1.0, std::max((wb->hi - x0).maxCoeff(), (x0 - wb->lo).maxCoeff()));

    std::vector<ConvexSet> C, D;
    double delta = 0.0;
    int N = 0;
    for (int n = 1; n <= o.max_stages; ++n) {
        const double rad = detail::sublevel_radius(f, x0, A, f0 + std::ldexp(step, std::min(n, 1000)) - step, n * R0);
        if (!(rad > 0.0))
            throw PreconditionError("compose_global: stage " + std::to_string(n) + " is empty");
        C.push_back(intersect(A, anchor_box(x0, rad, A.ambient())));
        if (n == 1)
            delta = 0.5 * std::min(C.front().inradius(), *w_gap);
        D.push_back(inner_parallel(C.back(), delta / n));
        if (D.back().is_empty())
            throw PreconditionError("compose_global: stage " + std::to_string(n) + " is empty after shrinking");
        if (n >= 3 && compactly_contained(W, D[static_cast<std::size_t>(n - 2)])) {
            N = n;
            break;
        }
    }
    if (N == 0)
        throw PreconditionError("compose_global: working region not reached within " +
                                std::to_string(o.max_stages) + " stages");
    Exhaustion E = make_exhaustion(A, D);

    std::vector<ConvexFn> gamma;
    bool sampled = false;
    bool emp = F.empirical() || g.empirical;
    auto Fv = F.value_fn();
    for (int k = 1; k <= N; ++k) {
        const ConvexSet &Dk = E.stages[static_cast<std::size_t>(k - 1)];
        Box B = detail::range_box(F, Dk, o.range_samples, batch_seed(o.seed, static_cast<std::uint64_t>(k)),
                                  &sampled);
        LocalOuter L = g.local(B);
        ConvexFn ctrl = L.ctrl;
        auto gv = g.value;
        const double lipg = detail::inner_lipschitz(L.E, L.r, [&](const Vec &y) { return ctrl.value_unchecked(y); });
        const double lipP = detail::inner_lipschitz(
            L.E, L.r, [&](const Vec &y) { return 0.5 * (ctrl.value_unchecked(y) + gv(y)); });
        const double lipQ = detail::inner_lipschitz(
            L.E, L.r, [&](const Vec &y) { return 0.5 * (ctrl.value_unchecked(y) - gv(y)); });
        const double lipG = lipP + lipQ;
        const double K = lipG + lipg;
        gamma.push_back(opaque_fn(
            A.dim(), "stage control",
            [ctrl, f, Fv, K](const Vec &x) { return ctrl.value_unchecked(Fv(x)) + K * f.value_unchecked(x); },
            ConvexSet::whole(A.dim(), A.ambient())));
        if (report) {
            Json s;
            s["stage"] = k;
            s["set"] = set_to_json(Dk);
            s["range_lo"] = vec_to_json(L.B_eff.lo);
            s["range_hi"] = vec_to_json(L.B_eff.hi);
            s["lip_outer"] = lipG;
            s["lip_outer_control"] = lipg;
            report->stage_info.push_back(s);
        }
    }
    GlueResult R = glue(E, gamma, o.glue);
    if (report) {
        report->stages = N;
        report->delta = delta;
        report->level_step = step;
        if (sampled)
            report->notes.push_back("range of F on non-box stages bounded from samples");
        for (const auto &nt : R.notes)
            report->notes.push_back(nt);
    }
    emp = emp || sampled;
    auto gv = g.value;
    std::vector<std::string> prov{"composed(global, " + g.name + ", " + std::to_string(N) + " stages)", "glued"};
    for (const auto &p : F.provenance())
        prov.push_back("inner: " + p);
    return DCFunction(
        W, [gv, Fv](const Vec &x) { return gv(Fv(x)); }, ConvexFn(R.control.node(), W), prov, emp);
}

inline DCFunction product(const DCFunction &f1, const DCFunction &f2, const GlobalOptions &o = {}) {
    auto r = compose_global(bundle({f1, f2}), outer_product(), o);
    auto v1 = f1.value_fn(), v2 = f2.value_fn();
    return DCFunction(
        r.domain(), [v1, v2](const Vec &x) { return v1(x) * v2(x); }, r.control(), r.provenance(), r.empirical());
}

struct QuotientOptions {
    std::optional<double> m; // floor of |f2|; estimated from samples when absent
    int sign = 0;            // +1, -1, or 0 to read it off the samples
    std::size_t samples = 4096;
    std::uint64_t seed = 1;
    GlobalOptions global;
};

inline DCFunction quotient(const DCFunction &f1, const DCFunction &f2, const QuotientOptions &o = {}) {
    require_same_domain(f1.domain(), f2.domain(), "quotient");
    std::mt19937_64 rng(o.seed);
    int sign = o.sign;
    double mn = kInf;
    auto v2 = f2.value_fn();
    for (std::size_t i = 0; i < o.samples; ++i) {
        const Vec x = sample_point(f2.domain(), rng, o.global.working ? o.global.working->bounding_box()
                                                                       : std::optional<Box>{});
        const double v = v2(x);
        if (sign == 0)
            sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (sign == 0 || sign * v <= 0.0)
            throw PreconditionError("quotient: denominator changes sign or vanishes at " + format_vec(x));
        if (o.m && sign * v < *o.m)
            throw PreconditionError("quotient: |denominator| below the stated floor at " + format_vec(x));
        mn = std::min(mn, sign * v);
    }
    double m = 0.0;
    bool estimated = false;
    if (o.m) {
        m = *o.m;
    } else {
        m = 0.5 * mn;
        estimated = true;
    }
    if (!(m >= 1e-6))
        throw InputError("quotient: denominator floor below 1e-6 is rejected as ill-conditioned");
    auto r = compose_global(bundle({f1, f2}), outer_quotient(m, sign), o.global);
    auto v1 = f1.value_fn();
    auto prov = r.provenance();
    if (estimated)
        prov.insert(prov.begin(), "quotient floor estimated from samples");
    return DCFunction(
        r.domain(), [v1, v2](const Vec &x) { return v1(x) / v2(x); }, r.control(), prov,
        r.empirical() || estimated);
}

/// g = plus - minus with Lipschitz parts on the box B; both parts are
/// extended to the whole space and the composition rule is applied once,
/// without gluing.
inline DCFunction special_compose(const DCMapping &F, const DCPair &g, const ConvexSet &B, double lip_plus,
                                  double lip_minus, const ComposeOptions &o = {}) {
    if (!(lip_plus >= 0.0) || !(lip_minus >= 0.0) || !std::isfinite(lip_plus) || !std::isfinite(lip_minus))
        throw PreconditionError("special_compose: parts must have finite Lipschitz constants");
    if (B.dim() != F.out_dim())
        throw InputError("special_compose: dimension mismatch");
    ConvexFn p = lipschitz_extension(g.plus, B, lip_plus);
    ConvexFn m = lipschitz_extension(g.minus, B, lip_minus);
    const int n = F.out_dim();
    const ConvexSet Rn = ConvexSet::whole(n, Norm::linf);
    const double L = lip_plus + lip_minus;
    DCMapping G(
        Rn, [p, m](const Vec &y) { return scalar_vec(p.value_unchecked(y) - m.value_unchecked(y)); }, 1, sum({p, m}),
        {"extended pair"});
    ComposeOptions co = o;
    co.range_samples = std::min<std::size_t>(co.range_samples, 1);
    auto M = compose(F, G, LipschitzCertificate::analytic(L, Rn), LipschitzCertificate::analytic(L, Rn), co);
    {
        // F must land in B for the extension to agree with g.
        std::mt19937_64 rng(o.seed);
        for (std::size_t i = 0; i < o.range_samples; ++i) {
            const Vec x = sample_point(F.domain(), rng, o.window);
            const Vec y = F.value_fn()(x);
            if (B.dist(y) > 0.0)
                throw PreconditionError("special_compose: F(" + format_vec(x) + ") leaves " + B.describe());
        }
    }
    auto f = to_function(M);
    return f.with_provenance("special(Lipschitz parts)");
}

/// Q o F via Q = P1 - P2 with P1, P2 positive semidefinite.
inline DCFunction quadratic_compose(const DCMapping &F, const QuadraticForm &Q, const GlobalOptions &o = {}) {
    if (Q.dim() != F.out_dim())
        throw InputError("quadratic_compose: form dimension does not match F");
    auto [P1, P2] = quadratic_dc_split(Q);
    auto Fv = F.value_fn();
    Mat Qm = Q.matrix;
    std::vector<ConvexFn> ctrls;
    std::optional<ConvexSet> dom;
    std::vector<std::string> prov{"quadratic(split)"};
    bool emp = false;
    for (const QuadraticForm *P : {&P1, &P2}) {
        if (P->matrix.cwiseAbs().maxCoeff() == 0.0)
            continue;
        auto r = compose_global(F, outer_psd_quadratic(*P), o);
        ctrls.push_back(r.control());
        dom = r.domain();
        emp = emp || r.empirical();
        for (const auto &p : r.provenance())
            prov.push_back(p);
    }
    if (!dom) {
        // Q = 0
        ConvexSet W = o.working ? *o.working : inner_parallel(F.domain(), 0.05 * F.domain().inradius());
        return DCFunction(
            W, [](const Vec &) { return 0.0; }, constant_fn(F.dim(), 0.0), {"quadratic(zero)"});
    }
    ConvexFn ctrl = ctrls.size() == 1 ? ctrls.front() : ConvexFn(sum(ctrls).node(), *dom);
    return DCFunction(
        *dom, [Fv, Qm](const Vec &x) {
            const Vec y = Fv(x);
            return y.dot(Qm * y);
        },
        ctrl, prov, emp);
}

/// x -> F(x)' B G(x) through the symmetric form (1/2)[[0, B], [B', 0]] on
/// the bundled mapping (F, G).
inline DCFunction bilinear_product(const DCMapping &F, const DCMapping &G, const Mat &B,
                                   const GlobalOptions &o = {}) {
    if (B.rows() != F.out_dim() || B.cols() != G.out_dim())
        throw InputError("bilinear_product: matrix shape does not match the mappings");
    require_same_domain(F.domain(), G.domain(), "bilinear_product");
    const int m = F.out_dim(), k = G.out_dim();
    Mat S = Mat::Zero(m + k, m + k);
    S.topRightCorner(m, k) = 0.5 * B;
    S.bottomLeftCorner(k, m) = 0.5 * B.transpose();
    auto Fv = F.value_fn(), Gv = G.value_fn();
    DCMapping H(
        F.domain(),
        [Fv, Gv, m, k](const Vec &x) {
            Vec y(m + k);
            y << Fv(x), Gv(x);
            return y;
        },
        m + k, sum({F.control(), G.control()}), {"bundle"}, Norm::linf, F.empirical() || G.empirical());
    auto r = quadratic_compose(H, QuadraticForm(S), o);
    return DCFunction(
        r.domain(), [Fv, Gv, B](const Vec &x) { return Fv(x).dot(B * Gv(x)); }, r.control(), r.provenance(),
        r.empirical());
}

} // namespace dcx

#endif
