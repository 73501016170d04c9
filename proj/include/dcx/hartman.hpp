#ifndef DCX_HARTMAN_HPP
#define DCX_HARTMAN_HPP

// Exhaustions D_1 c D_2 c ... of a convex set with certified gaps, and the
// gluing recursion that welds local controls gamma_n (each valid on D_n) into
// one control on the union. Only a finite prefix of N stages is built; the
// glued control is certified on D_{N-1}.

#include "dcx/dc_core.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace dcx {

struct Exhaustion {
    ConvexSet ambient;
    std::vector<ConvexSet> stages;
    std::vector<double> gaps; // gaps[i] <= dist(D_{i+1}, C \ D_{i+2}) (0-based stages)
};

/// The closed max-norm box of radius r around a.
inline ConvexSet anchor_box(const Vec &a, double r, Norm ambient) {
    return ConvexSet::box(a.array() - r, a.array() + r, true, ambient);
}

namespace detail {

inline bool same_set(const ConvexSet &A, const ConvexSet &B) { return A.describe() == B.describe(); }

/// A lower bound for dist(D, X \ E) with D inside E, computed per kind.
inline double nested_gap(const ConvexSet &D, const ConvexSet &E) {
    using K = ConvexSet::Kind;
    if (D.kind() == K::empty || E.kind() == K::whole)
        return kInf;
    if (E.kind() == K::empty)
        return 0.0;
    if (D.kind() == K::ball && E.kind() == K::ball) {
        if (D.ambient() != E.ambient())
            throw UndecidableError("gap: balls in different norms");
        return E.radius() - D.radius() - norm(D.center() - E.center(), E.ambient());
    }
    if (D.kind() == K::ball) {
        auto eps = compactly_contained(D, E);
        return eps ? *eps : 0.0;
    }
    if ((D.kind() == K::box || D.kind() == K::polyhedron) && D.bounded()) {
        if (E.kind() == K::ball || E.kind() == K::box || E.kind() == K::polyhedron) {
            double g = kInf;
            for (const Vec &v : D.vertices())
                g = std::min(g, E.dist_to_complement(v));
            return g;
        }
    }
    if ((D.kind() == K::box || D.kind() == K::polyhedron) && E.polyhedral()) {
        // Per face of E: (b_i - sup_D a_i . x) / ||a_i||_*.
        auto PD = D.as_polyhedron();
        auto PE = E.as_polyhedron();
        double g = kInf;
        for (Eigen::Index i = 0; i < PE.normals().rows(); ++i) {
            const Vec a = PE.normals().row(i).transpose();
            auto r = detail::solve_lp(-a, PD.normals(), PD.offsets(), Mat(0, D.dim()), Vec(0));
            if (r.status == LpResult::Status::unbounded)
                return 0.0;
            if (!r.optimal())
                continue;
            g = std::min(g, (PE.offsets()[i] + r.value) / dual_norm(a, E.ambient()));
        }
        return g;
    }
    throw UndecidableError("gap: no certificate for " + D.describe() + " inside " + E.describe());
}

} // namespace detail

/// Certified gap between consecutive stages inside the ambient set C.
inline double stage_gap(const ConvexSet &Dn, const ConvexSet &Dn1, const ConvexSet &C) {
    if (detail::same_set(Dn1, C))
        return kInf;
    return detail::nested_gap(Dn, Dn1);
}

/// Assemble an exhaustion from explicit stages, certifying every gap.
inline Exhaustion make_exhaustion(const ConvexSet &C, std::vector<ConvexSet> stages) {
    if (stages.size() < 2)
        throw InputError("exhaustion: need at least two stages");
    Exhaustion E{C, std::move(stages), {}};
    for (std::size_t i = 0; i + 1 < E.stages.size(); ++i) {
        double g = 0.0;
        try {
            g = stage_gap(E.stages[i], E.stages[i + 1], C);
        } catch (const UndecidableError &e) {
            throw InputError("exhaustion: missing gap certificate for stage " + std::to_string(i + 1) + ": " +
                             e.what());
        }
        if (!(g > 0.0)) {
            std::ostringstream os;
            os << "exhaustion: stage " << i + 1 << " is not compactly contained in stage " << i + 2 << " (gap " << g
               << ")";
            throw InputError(os.str());
        }
        E.gaps.push_back(g);
    }
    return E;
}

/// D_n = {x in C_n : dist(x, X \ C_n) > delta/n}. Requires C_1 to contain an
/// open ball of radius 2*delta.
inline Exhaustion build_exhaustion(const ConvexSet &C, const std::vector<ConvexSet> &Cn, double delta) {
    if (!(delta > 0.0))
        throw InputError("build_exhaustion: delta must be positive");
    if (Cn.empty())
        throw InputError("build_exhaustion: no sets given");
    double inr = 0.0;
    try {
        inr = Cn.front().inradius();
    } catch (const UndecidableError &) {
        throw InputError("build_exhaustion: cannot certify that C_1 contains an open ball of radius 2δ");
    }
    if (inr < 2.0 * delta) {
        std::ostringstream os;
        os.precision(17);
        os << "build_exhaustion: C_1 must contain an open ball of radius 2δ = " << 2.0 * delta << " (inradius "
           << inr << "); use a smaller delta";
        throw InputError(os.str());
    }
    std::vector<ConvexSet> D;
    for (std::size_t n = 1; n <= Cn.size(); ++n)
        D.push_back(inner_parallel(Cn[n - 1], delta / static_cast<double>(n)));
    return make_exhaustion(C, std::move(D));
}

/// C_n = {x in C : f(x) < f(x0) + n}, n = 1..N, as membership oracles.
inline std::vector<ConvexSet> sublevel_exhaustion(const ConvexFn &f, const Vec &x0, int N, const ConvexSet &C) {
    if (!C.contains(x0))
        throw InputError("sublevel_exhaustion: x0 = " + format_vec(x0) + " is outside the set");
    const double f0 = f(x0);
    auto Cp = std::make_shared<ConvexSet>(C);
    std::vector<ConvexSet> out;
    for (int n = 1; n <= N; ++n) {
        const double level = f0 + n;
        out.push_back(ConvexSet::oracle(
            C.dim(), [f, Cp, level](const Vec &x) { return Cp->contains(x) && f.value_unchecked(x) < level; },
            C.bounding_box(), "sublevel " + std::to_string(n), true, C.ambient()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gluing.

struct GlueOptions {
    double inflation = 1.25;    // margin applied to computed sups
    double extra_sup_factor = 1; // further multiplies s and sigma (safety testing)
    std::size_t samples = 4096; // for stages without vertices
    std::uint64_t seed = 1;
};

struct GlueResult {
    struct State;
    std::shared_ptr<const State> state;
    ConvexFn control;     // defined on the ambient set
    ConvexSet certified;  // D_{N-1}: the control is certified here
    int stages = 0;
    std::vector<std::string> notes;

    double phi(int n, const Vec &x) const;
    double h(int n, const Vec &x) const;
    double g(int n, const Vec &x) const;
    double f(int n, const Vec &x) const;
    int last_f() const;
    Json constants() const;
};

struct GlueResult::State {
    Exhaustion E;
    std::vector<ConvexFn> gamma; // unshifted, 1-based via index n-1
    std::vector<double> shift;   // gamma_n + shift_n >= 1 on D_n
    std::vector<double> b;       // bound of shifted gamma_n on D_n
    std::vector<double> d;       // chosen d_n
    std::vector<double> s, sigma;
    int N = 0;

    const ConvexSet &D(int n) const { return E.stages[static_cast<std::size_t>(n - 1)]; }

    double gamma_at(int n, const Vec &x) const {
        const auto i = static_cast<std::size_t>(n - 1);
        return gamma[i].value_unchecked(x) + shift[i];
    }
    double dist_to(int n, const Vec &x) const { return D(n).dist(x); }

    // phi_n = ((b_{n+1} + 1)/d_n) dist(x, D_n)
    double phi(int n, const Vec &x) const {
        const auto i = static_cast<std::size_t>(n - 1);
        if (!std::isfinite(d[i]))
            return 0.0;
        const double dist = dist_to(n, x);
        return dist == 0.0 ? 0.0 : (b[i + 1] + 1.0) / d[i] * dist;
    }
    double h(int n, const Vec &x) const {
        const double p = phi(n, x);
        if (D(n + 1).contains(x))
            return std::max(gamma_at(n + 1, x), p);
        return p;
    }
    double g(int n, const Vec &x) const {
        const auto i = static_cast<std::size_t>(n - 1);
        const double dist = dist_to(n, x);
        const double slope = std::isfinite(d[i]) ? (sigma[i] + s[i] + 1.0) / d[i] : 0.0;
        return h(n + 2, x) - sigma[i] + (dist == 0.0 ? 0.0 : slope * dist);
    }
    double f(int n, const Vec &x) const {
        double v = h(2, x);
        for (int k = 1; k < n; ++k)
            v = std::max(v, g(k, x));
        return v;
    }
};

inline double GlueResult::phi(int n, const Vec &x) const { return state->phi(n, x); }
inline double GlueResult::h(int n, const Vec &x) const { return state->h(n, x); }
inline double GlueResult::g(int n, const Vec &x) const { return state->g(n, x); }
inline double GlueResult::f(int n, const Vec &x) const { return state->f(n, x); }
inline int GlueResult::last_f() const { return state->N >= 3 ? state->N - 2 : 0; }

inline Json GlueResult::constants() const {
    Json j;
    j["stages"] = stages;
    j["shift"] = state->shift;
    j["b"] = state->b;
    j["d"] = state->d;
    j["s"] = state->s;
    j["sigma"] = state->sigma;
    return j;
}

namespace detail {

/// Upper bound of a convex function on the closure of a stage: the maximum
/// over the vertices for polytopes (exact), otherwise a sampled maximum.
template <class Fn>
double convex_sup(const ConvexSet &D, Fn fn, const GlueOptions &o, std::uint64_t salt, bool *sampled) {
    if ((D.kind() == ConvexSet::Kind::box || D.kind() == ConvexSet::Kind::polyhedron) && D.bounded()) {
        double m = -kInf;
        for (const Vec &v : D.vertices())
            m = std::max(m, fn(v));
        return m;
    }
    if (sampled)
        *sampled = true;
    std::mt19937_64 rng(batch_seed(o.seed, salt));
    double m = -kInf;
    for (std::size_t i = 0; i < o.samples; ++i)
        m = std::max(m, fn(sample_point(D, rng)));
    return m;
}

/// Sampled minimum over the stage (vertices and center included when known).
template <class Fn>
double sampled_min(const ConvexSet &D, Fn fn, const GlueOptions &o, std::uint64_t salt) {
    std::mt19937_64 rng(batch_seed(o.seed, salt ^ 0x5a5aULL));
    double m = kInf;
    if (auto bb = D.bounding_box()) {
        const Vec c = bb->center();
        if (D.contains(c))
            m = std::min(m, fn(c));
    }
    if ((D.kind() == ConvexSet::Kind::box || D.kind() == ConvexSet::Kind::polyhedron) && D.bounded())
        for (const Vec &v : D.vertices())
            m = std::min(m, fn(v));
    for (std::size_t i = 0; i < o.samples; ++i)
        m = std::min(m, fn(sample_point(D, rng)));
    return m;
}

inline void require_bounded_stages(const Exhaustion &E) {
    for (std::size_t i = 0; i < E.stages.size(); ++i)
        if (!E.stages[i].bounded())
            throw InputError("glue: stage " + std::to_string(i + 1) +
                             " is unbounded; intersect the stages with anchor boxes first");
}

} // namespace detail

/// Replace each stage D_n by D_n intersected with the max-norm box of radius
/// n around the anchor a (polyhedral stages only).
inline Exhaustion bound_stages(const Exhaustion &E, const Vec &a) {
    std::vector<ConvexSet> st;
    for (std::size_t i = 0; i < E.stages.size(); ++i) {
        const ConvexSet &D = E.stages[i];
        if (D.bounded() && D.kind() != ConvexSet::Kind::whole) {
            st.push_back(D);
            continue;
        }
        st.push_back(intersect(D, anchor_box(a, static_cast<double>(i + 1), D.ambient())));
    }
    return make_exhaustion(E.ambient, std::move(st));
}

/// The gluing recursion on a finite exhaustion. gamma[n-1] must control F on
/// D_n. Returns f_{N-2}, which controls F on D_{N-1} (for N = 2, h_1 on D_1).
inline GlueResult glue(const Exhaustion &E, const std::vector<ConvexFn> &gamma, const GlueOptions &o = {}) {
    const int N = static_cast<int>(E.stages.size());
    if (N < 2)
        throw InputError("glue: need at least 2 stages");
    if (gamma.size() != E.stages.size())
        throw InputError("glue: one local control per stage is required");
    if (E.gaps.size() + 1 != E.stages.size())
        throw InputError("glue: missing gap certificates");
    detail::require_bounded_stages(E);
    auto st = std::make_shared<GlueResult::State>();
    st->E = E;
    st->gamma = gamma;
    st->N = N;
    bool sampled = false;
    for (int n = 1; n <= N; ++n) {
        const ConvexSet &D = st->D(n);
        const ConvexFn &gm = gamma[static_cast<std::size_t>(n - 1)];
        auto raw = [&gm](const Vec &x) { return gm.value_unchecked(x); };
        const double lo = detail::sampled_min(D, raw, o, static_cast<std::uint64_t>(n));
        const double sh = 1.0 - lo;
        st->shift.push_back(sh);
        const double hi = detail::convex_sup(D, raw, o, static_cast<std::uint64_t>(n), &sampled);
        st->b.push_back(o.inflation * (hi + sh));
        const double gap = n < N ? E.gaps[static_cast<std::size_t>(n - 1)] : kInf;
        st->d.push_back(0.9 * gap);
    }
    // s_n = sup f_n(D_{n+2}), sigma_n = sup h_{n+2}(D_n), n = 1..N-3
    for (int n = 1; n + 3 <= N; ++n) {
        st->s.push_back(0.0);
        st->sigma.push_back(0.0);
        const GlueResult::State &cs = *st;
        const double s = detail::convex_sup(
            st->D(n + 2), [&cs, n](const Vec &x) { return cs.f(n, x); }, o,
            static_cast<std::uint64_t>(1000 + n), &sampled);
        const double sg = detail::convex_sup(
            st->D(n), [&cs, n](const Vec &x) { return cs.h(n + 2, x); }, o,
            static_cast<std::uint64_t>(2000 + n), &sampled);
        st->s.back() = o.extra_sup_factor * o.inflation * std::max(0.0, s);
        st->sigma.back() = o.extra_sup_factor * o.inflation * std::max(0.0, sg);
    }
    const ConvexSet &C = E.ambient;
    std::shared_ptr<const GlueResult::State> cst = st;
    const int k = N - 2;
    ConvexFn control = N >= 3 ? opaque_fn(
                                    C.dim(), "glued", [cst, k](const Vec &x) { return cst->f(k, x); }, C)
                              : opaque_fn(
                                    C.dim(), "glued", [cst](const Vec &x) { return cst->h(1, x); }, C);
    GlueResult R{cst, control, N >= 3 ? st->D(N - 1) : st->D(1), N, {}};
    if (sampled)
        R.notes.push_back("some stage bounds were sampled, not computed at vertices");
    return R;
}

/// The glued control paired with F as a d.c. function on the certified
/// region.
inline DCFunction glued_dc(const ScalarFn &F, const GlueResult &R, std::vector<std::string> provenance = {"glued"}) {
    return DCFunction(R.certified, F, R.control.restricted(R.certified), std::move(provenance));
}

/// CSV dump of phi_n, h_n, g_n, f_n at the given points (first coordinate
/// used for x when the dimension is 1).
inline std::string glue_stage_csv(const GlueResult &R, const std::vector<Vec> &points) {
    const int N = R.stages;
    std::ostringstream os;
    os.precision(17);
    const int d = points.empty() ? 1 : static_cast<int>(points.front().size());
    for (int i = 0; i < d; ++i)
        os << (i ? "," : "") << "x" << (d == 1 ? std::string() : std::to_string(i + 1));
    for (int n = 1; n + 1 <= N; ++n)
        os << ",phi_" << n << ",h_" << n;
    for (int n = 1; n + 3 <= N; ++n)
        os << ",g_" << n;
    for (int n = 1; n <= R.last_f(); ++n)
        os << ",f_" << n;
    os << "\n";
    for (const Vec &x : points) {
        for (int i = 0; i < d; ++i)
            os << (i ? "," : "") << x[i];
        for (int n = 1; n + 1 <= N; ++n)
            os << "," << R.phi(n, x) << "," << R.h(n, x);
        for (int n = 1; n + 3 <= N; ++n)
            os << "," << R.g(n, x);
        for (int n = 1; n <= R.last_f(); ++n)
            os << "," << R.f(n, x);
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// From local patches.

struct Patch {
    ConvexSet region;
    DCFunction fn; // its control must be convex on the whole ambient set
};

struct LocalOptions {
    std::size_t samples = 4096;
    double consistency_tol = 1e-10;
    int stages = 0; // 0: pick automatically
    std::uint64_t seed = 1;
    GlueOptions glue;
};

/// F defined patchwise; the controls of the patches meeting each stage are
/// summed and the stage controls glued. The patches must cover a
/// neighbourhood of the working region inside A.
inline DCFunction dc_from_local(const ConvexSet &A, const std::vector<Patch> &locals, const ConvexSet &working,
                                const LocalOptions &o = {}) {
    if (locals.empty())
        throw InputError("dc_from_local: no patches");
    std::vector<ConvexSet> regions;
    std::vector<ScalarFn> fns;
    for (const auto &p : locals) {
        regions.push_back(p.region);
        fns.push_back(p.fn.value_fn());
    }
    auto value = [regions, fns](const Vec &x) {
        for (std::size_t i = 0; i < regions.size(); ++i)
            if (regions[i].contains(x))
                return fns[i](x);
        return fns.front()(x);
    };
    auto wb = working.bounding_box();
    if (!wb)
        throw InputError("dc_from_local: working region must be bounded");
    const int N = o.stages > 0 ? o.stages : 4;
    if (N < 3)
        throw InputError("dc_from_local: need at least 3 stages");
    // base: A cut down to a box around the working region.
    const ConvexSet base =
        intersect(A.kind() == ConvexSet::Kind::whole ? ConvexSet::whole(A.dim(), A.ambient()) : A,
                  ConvexSet::box(wb->lo.array() - 1.0, wb->hi.array() + 1.0, true, A.ambient()));
    auto eps = compactly_contained(working, base);
    if (!eps)
        throw InputError("dc_from_local: working region is not compactly contained in the domain");
    // Stage n is base shrunk by delta*(N+1-n)/(N+1); D_{N-1} is base shrunk by
    // eps/2, which still contains the working region.
    const double delta = std::min(*eps * (N + 1) / 4.0, 0.5 * base.inradius());
    std::vector<ConvexSet> st;
    for (int n = 1; n <= N; ++n)
        st.push_back(inner_parallel(base, delta * static_cast<double>(N + 1 - n) / static_cast<double>(N + 1)));
    if (!compactly_contained(working, st[static_cast<std::size_t>(N - 2)]))
        throw InputError("dc_from_local: working region too close to the domain boundary");
    // Coverage and consistency on the outermost stage.
    std::mt19937_64 rng(o.seed);
    for (std::size_t i = 0; i < o.samples; ++i) {
        const Vec x = sample_point(st.back(), rng);
        std::optional<double> v;
        bool covered = false;
        for (const auto &p : locals) {
            if (!p.region.contains(x))
                continue;
            covered = true;
            const double w = p.fn.value_fn()(x);
            if (v && std::abs(*v - w) > o.consistency_tol * (1.0 + std::abs(w)))
                throw InputError("dc_from_local: patch values disagree at " + format_vec(x));
            v = w;
        }
        if (!covered)
            throw InputError("dc_from_local: point " + format_vec(x) + " is not covered by any patch");
    }
    if (locals.size() == 1)
        return locals.front().fn.restricted(working).with_provenance("local(single patch)");
    Exhaustion E = make_exhaustion(base, st);
    std::vector<ConvexFn> gamma;
    for (const ConvexSet &D : E.stages) {
        std::vector<ConvexFn> cs;
        auto db = D.bounding_box();
        for (const auto &p : locals) {
            auto pb = p.region.bounding_box();
            const bool meets = !pb || !db ||
                               ((pb->lo.array() <= db->hi.array()).all() && (db->lo.array() <= pb->hi.array()).all());
            if (meets)
                cs.push_back(ConvexFn(p.fn.control().node(), ConvexSet::whole(A.dim(), A.ambient())));
        }
        gamma.push_back(sum(cs));
    }
    GlueResult R = glue(E, gamma, o.glue);
    return DCFunction(working, value, R.control, {"glued(local patches)"});
}

} // namespace dcx

#endif
