#ifndef DCX_DC_CORE_HPP
#define DCX_DC_CORE_HPP

// d.c. functions and mappings carried together with a control function f:
// a continuous convex f such that y*(F) + f is convex for every dual vector
// y* of norm at most one.

#include "dcx/convex_fn.hpp"
#include "dcx/verify.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dcx {

using VecFn = std::function<Vec(const Vec &)>;

class DCFunction {
public:
    DCFunction(ConvexSet domain, ScalarFn value, ConvexFn control, std::vector<std::string> provenance,
               bool empirical = false)
        : domain_(std::make_shared<ConvexSet>(std::move(domain))), value_(std::move(value)),
          control_(std::move(control)), provenance_(std::move(provenance)), empirical_(empirical) {
        if (provenance_.empty())
            throw InputError("DCFunction: a provenance tag is required");
        if (control_.dim() != domain_->dim())
            throw InputError("DCFunction: control dimension does not match the domain");
    }

    int dim() const { return domain_->dim(); }
    const ConvexSet &domain() const { return *domain_; }
    const ConvexFn &control() const { return control_; }
    const ScalarFn &value_fn() const { return value_; }
    const std::vector<std::string> &provenance() const { return provenance_; }
    bool empirical() const { return empirical_; }

    double operator()(const Vec &x) const {
        require_dim(x, dim(), "DCFunction");
        if (!domain_->contains(x))
            throw DomainError("DCFunction: point " + format_vec(x) + " outside domain " + domain_->describe());
        return value_(x);
    }

    DCFunction with_provenance(const std::string &tag) const {
        DCFunction g = *this;
        g.provenance_.push_back(tag);
        return g;
    }

    DCFunction restricted(const ConvexSet &D) const {
        return DCFunction(D, value_, control_, provenance_, empirical_);
    }

    std::string provenance_chain() const {
        std::string s;
        for (std::size_t i = 0; i < provenance_.size(); ++i)
            s += (i ? " <- " : "") + provenance_[i];
        return s;
    }

private:
    std::shared_ptr<const ConvexSet> domain_;
    ScalarFn value_;
    ConvexFn control_;
    std::vector<std::string> provenance_;
    bool empirical_;
};

/// g = plus - minus
struct DCPair {
    ConvexFn plus;
    ConvexFn minus;
};

class DCMapping {
public:
    DCMapping(ConvexSet domain, VecFn value, int out_dim, ConvexFn control, std::vector<std::string> provenance,
              Norm codomain = Norm::linf, bool empirical = false)
        : domain_(std::make_shared<ConvexSet>(std::move(domain))), value_(std::move(value)), out_dim_(out_dim),
          control_(std::move(control)), provenance_(std::move(provenance)), codomain_(codomain),
          empirical_(empirical) {
        if (out_dim_ <= 0)
            throw InputError("DCMapping: output dimension must be positive");
        if (provenance_.empty())
            throw InputError("DCMapping: a provenance tag is required");
    }

    int dim() const { return domain_->dim(); }
    int out_dim() const { return out_dim_; }
    const ConvexSet &domain() const { return *domain_; }
    const ConvexFn &control() const { return control_; }
    const VecFn &value_fn() const { return value_; }
    Norm codomain() const { return codomain_; }
    const std::vector<std::string> &provenance() const { return provenance_; }
    bool empirical() const { return empirical_; }
    const std::vector<DCFunction> &components() const { return components_; }

    Vec operator()(const Vec &x) const {
        require_dim(x, dim(), "DCMapping");
        if (!domain_->contains(x))
            throw DomainError("DCMapping: point " + format_vec(x) + " outside domain " + domain_->describe());
        return value_(x);
    }

    DCMapping with_components(std::vector<DCFunction> c) const {
        DCMapping m = *this;
        m.components_ = std::move(c);
        return m;
    }

    DCMapping with_domain(const ConvexSet &D) const {
        DCMapping m = *this;
        m.domain_ = std::make_shared<ConvexSet>(D);
        return m;
    }

private:
    std::shared_ptr<const ConvexSet> domain_;
    VecFn value_;
    int out_dim_;
    ConvexFn control_;
    std::vector<std::string> provenance_;
    Norm codomain_;
    bool empirical_;
    std::vector<DCFunction> components_;
};

inline void require_same_domain(const ConvexSet &A, const ConvexSet &B, const char *what) {
    if (A.dim() != B.dim() || A.describe() != B.describe())
        throw InputError(std::string(what) + ": domain mismatch (" + A.describe() + " vs " + B.describe() + ")");
}

inline DCFunction from_pair(const DCPair &p) {
    if (p.plus.dim() != p.minus.dim())
        throw InputError("from_pair: dimension mismatch");
    require_same_domain(p.plus.domain(), p.minus.domain(), "from_pair");
    ConvexFn plus = p.plus, minus = p.minus;
    return DCFunction(
        p.plus.domain(), [plus, minus](const Vec &x) { return plus.value_unchecked(x) - minus.value_unchecked(x); },
        sum({plus, minus}), {"pair"});
}

/// A convex function viewed as a d.c. function controlled by itself.
inline DCFunction from_convex(const ConvexFn &f) {
    return DCFunction(
        f.domain(), [f](const Vec &x) { return f.value_unchecked(x); }, f, {"convex"});
}

inline DCFunction affine_dc(const ConvexSet &domain, const Vec &slope, double intercept) {
    require_dim(slope, domain.dim(), "affine_dc");
    return DCFunction(
        domain, [slope, intercept](const Vec &x) { return slope.dot(x) + intercept; },
        constant_fn(domain.dim(), 0.0), {"affine"});
}

/// Components share a domain; the combined control is the sum of the
/// component controls, valid for the max norm on the codomain.
inline DCMapping bundle(const std::vector<DCFunction> &components) {
    if (components.empty())
        throw InputError("bundle: empty component list");
    for (const auto &c : components)
        require_same_domain(components.front().domain(), c.domain(), "bundle");
    std::vector<ConvexFn> ctrls;
    std::vector<ScalarFn> fns;
    bool emp = false;
    for (const auto &c : components) {
        ctrls.push_back(c.control());
        fns.push_back(c.value_fn());
        emp = emp || c.empirical();
    }
    const int n = static_cast<int>(components.size());
    DCMapping m(
        components.front().domain(),
        [fns, n](const Vec &x) {
            Vec y(n);
            for (int i = 0; i < n; ++i)
                y[i] = fns[static_cast<std::size_t>(i)](x);
            return y;
        },
        n, sum(ctrls), {"bundle"}, Norm::linf, emp);
    return m.with_components(components);
}

inline DCMapping as_mapping(const DCFunction &f) { return bundle({f}); }

inline DCFunction add(const DCFunction &f, const DCFunction &g) {
    require_same_domain(f.domain(), g.domain(), "add");
    auto fv = f.value_fn(), gv = g.value_fn();
    return DCFunction(
        f.domain(), [fv, gv](const Vec &x) { return fv(x) + gv(x); }, sum({f.control(), g.control()}), {"sum"},
        f.empirical() || g.empirical());
}

inline DCFunction scale(const DCFunction &f, double c) {
    auto fv = f.value_fn();
    return DCFunction(
        f.domain(), [fv, c](const Vec &x) { return c * fv(x); }, scale(f.control(), std::abs(c)), {"scale"},
        f.empirical());
}

inline DCFunction add_constant(const DCFunction &f, double c) {
    auto fv = f.value_fn();
    return DCFunction(
        f.domain(), [fv, c](const Vec &x) { return fv(x) + c; }, f.control(), {"shift"}, f.empirical());
}

/// max(f1, f2). With p = (c + f)/2 and q = (c - f)/2 both convex,
/// max(f1, f2) = max(p1 + q2, p2 + q1) - (q1 + q2).
inline DCFunction dc_max(const DCFunction &f1, const DCFunction &f2) {
    require_same_domain(f1.domain(), f2.domain(), "dc_max");
    auto v1 = f1.value_fn(), v2 = f2.value_fn();
    ConvexFn c1 = f1.control(), c2 = f2.control();
    const int d = f1.dim();
    auto p = [](const ScalarFn &v, const ConvexFn &c) -> ScalarFn {
        return [v, c](const Vec &x) { return 0.5 * (c.value_unchecked(x) + v(x)); };
    };
    auto q = [](const ScalarFn &v, const ConvexFn &c) -> ScalarFn {
        return [v, c](const Vec &x) { return 0.5 * (c.value_unchecked(x) - v(x)); };
    };
    ScalarFn p1 = p(v1, c1), p2 = p(v2, c2), q1 = q(v1, c1), q2 = q(v2, c2);
    ConvexFn big = opaque_fn(
        d, "dc_max_plus", [p1, p2, q1, q2](const Vec &x) { return std::max(p1(x) + q2(x), p2(x) + q1(x)); },
        ConvexSet::whole(d, f1.domain().ambient()));
    ConvexFn small = opaque_fn(
        d, "dc_max_minus", [q1, q2](const Vec &x) { return q1(x) + q2(x); }, ConvexSet::whole(d, f1.domain().ambient()));
    return DCFunction(
        f1.domain(), [v1, v2](const Vec &x) { return std::max(v1(x), v2(x)); }, sum({big, small}), {"max"},
        f1.empirical() || f2.empirical());
}

// ---------------------------------------------------------------------------
// Dual vectors and the control check.

/// Unit vectors of the norm dual to `codomain` on R^n. The extreme points of
/// the dual ball come first (for the polyhedral duals), followed by random
/// points of the dual sphere.
inline std::vector<Vec> sample_duals(int n, Norm codomain, std::size_t count, std::uint64_t seed) {
    const Norm dn = dual(codomain);
    std::vector<Vec> out;
    if (dn == Norm::l1) {
        for (int i = 0; i < n && out.size() < count; ++i) {
            Vec e = Vec::Zero(n);
            e[i] = 1.0;
            out.push_back(e);
            if (out.size() < count)
                out.push_back(-e);
        }
    } else if (dn == Norm::linf) {
        for (int mask = 0; mask < (1 << n) && out.size() < count; ++mask) {
            Vec e(n);
            for (int i = 0; i < n; ++i)
                e[i] = (mask >> i) & 1 ? -1.0 : 1.0;
            out.push_back(e);
        }
    }
    if (n == 1 && dn != Norm::l2) {
        // The dual sphere of R^1 is {-1, +1}.
        while (out.size() < count)
            out.push_back(out[out.size() % 2]);
        return out;
    }
    std::mt19937_64 rng(splitmix64(seed ^ 0xd0a1ULL));
    std::normal_distribution<double> g(0.0, 1.0);
    std::exponential_distribution<double> ex(1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    while (out.size() < count) {
        Vec y(n);
        switch (dn) {
        case Norm::l2:
            for (int i = 0; i < n; ++i)
                y[i] = g(rng);
            break;
        case Norm::l1:
            for (int i = 0; i < n; ++i)
                y[i] = ex(rng) * (u(rng) < 0 ? -1.0 : 1.0);
            break;
        case Norm::linf:
            for (int i = 0; i < n; ++i)
                y[i] = u(rng);
            y[pick(rng)] = u(rng) < 0 ? -1.0 : 1.0;
            break;
        }
        const double s = norm(y, dn);
        if (s > 0.0)
            out.push_back(y / s);
    }
    return out;
}

struct ControlCheckOptions {
    std::size_t duals = 64;
    std::size_t segments = 10000;
    int points_per_segment = 5;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    std::optional<ConvexSet> region; // sampling region; defaults to the domain
    std::optional<Box> window;       // needed when the region is unbounded
};

/// Segment i is tested against dual i mod duals.
inline VerificationReport check_control(const DCMapping &F, const ControlCheckOptions &o = {}) {
    const ConvexSet &R = o.region ? *o.region : F.domain();
    if (R.dim() != F.dim())
        throw InputError("check_control: region dimension mismatch");
    if (o.duals == 0 || o.segments == 0)
        throw InputError("check_control: counts must be positive");
    const auto duals = sample_duals(F.out_dim(), F.codomain(), o.duals, o.seed);
    const auto &val = F.value_fn();
    const ConvexFn ctrl = F.control();
    auto r = segment_check(
        R, o.segments, o.points_per_segment, o.tol, o.seed,
        [&](std::size_t i, const Vec &x) { return duals[i % duals.size()].dot(val(x)) + ctrl.value_unchecked(x); },
        o.window, "control");
    r.counts["duals"] = static_cast<long long>(duals.size());
    std::string chain;
    for (std::size_t i = 0; i < F.provenance().size(); ++i)
        chain += (i ? " <- " : "") + F.provenance()[i];
    r.notes.push_back("provenance: " + chain);
    if (F.empirical())
        r.notes.push_back("contains empirically estimated constants");
    return r;
}

inline VerificationReport check_control(const DCFunction &f, const ControlCheckOptions &o = {}) {
    auto r = check_control(as_mapping(f), o);
    r.notes.front() = "provenance: " + f.provenance_chain();
    return r;
}

// ---------------------------------------------------------------------------
// C^{1,1} splitting.

struct C11Options {
    std::optional<double> M;        // bound on the Lipschitz constant of the gradient
    std::size_t estimate_samples = 4096;
    std::uint64_t seed = 1;
    std::optional<Box> window;
};

/// F with an M-Lipschitz gradient on a convex domain is controlled by
/// (M/2)||x||^2 in the Euclidean norm. Without a supplied M, the constant is
/// estimated from gradient differences and inflated by 1.25; such results
/// are marked empirical.
inline DCFunction c11_dc_split(const ScalarFn &F, const VecFn &grad, const ConvexSet &domain,
                               const C11Options &o = {}) {
    if (domain.ambient() != Norm::l2)
        throw InputError("c11_dc_split: only the Euclidean ambient norm is supported; the constant for "
                         "other norms is not determined");
    double M = 0.0;
    bool empirical = false;
    if (o.M) {
        if (!(*o.M >= 0.0))
            throw InputError("c11_dc_split: M must be nonnegative");
        M = *o.M;
    } else {
        if (!grad)
            throw InputError("c11_dc_split: a gradient oracle is needed to estimate M");
        std::mt19937_64 rng(o.seed);
        for (std::size_t i = 0; i < o.estimate_samples; ++i) {
            auto [x, y] = sample_segment(domain, rng, o.window);
            const double d = (x - y).norm();
            if (d > 0.0)
                M = std::max(M, (grad(x) - grad(y)).norm() / d);
        }
        M *= 1.25;
        empirical = true;
    }
    const int d = domain.dim();
    return DCFunction(domain, F, half_sq_norm_scaled(d, 0.5 * M), {empirical ? "split(c11, empirical M)" : "split(c11)"},
                      empirical);
}

} // namespace dcx

#endif
