#ifndef DCX_CONVEX_FN_HPP
#define DCX_CONVEX_FN_HPP

// Continuous convex functions as immutable expression trees. Every node has
// a fixed input dimension; a ConvexFn pairs a node with a domain and refuses
// to evaluate outside it.

#include "dcx/geometry.hpp"
#include "dcx/geometry_io.hpp"
#include "dcx/json_io.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace dcx {

namespace node {

struct Base {
    explicit Base(int d) : dim(d) {}
    virtual ~Base() = default;
    virtual double value(const Vec &x) const = 0;
    virtual Json to_json() const = 0;
    int dim;
};

using Ptr = std::shared_ptr<const Base>;

struct MaxAffine final : Base {
    MaxAffine(Mat s, Vec c) : Base(static_cast<int>(s.cols())), slopes(std::move(s)), intercepts(std::move(c)) {}
    double value(const Vec &x) const override { return (slopes * x + intercepts).maxCoeff(); }
    Json to_json() const override {
        return {{"kind", "max_affine"}, {"slopes", mat_to_json(slopes)}, {"intercepts", vec_to_json(intercepts)}};
    }
    Mat slopes;
    Vec intercepts;
};

/// Convexity of a smooth oracle is asserted by whoever registers it.
struct Smooth final : Base {
    using Fn = std::function<double(const Vec &)>;
    using Grad = std::function<Vec(const Vec &)>;
    Smooth(int d, std::string n, Fn f, Grad g, Json p)
        : Base(d), name(std::move(n)), fn(std::move(f)), grad(std::move(g)), params(std::move(p)) {}
    double value(const Vec &x) const override { return fn(x); }
    Json to_json() const override {
        Json j{{"kind", "smooth"}, {"name", name}, {"dimension", dim}};
        if (!params.is_null())
            j["params"] = params;
        return j;
    }
    std::string name;
    Fn fn;
    Grad grad;
    Json params;
};

struct GaugeSquared final : Base {
    GaugeSquared(HullBody b, double s) : Base(b.dim()), body(std::move(b)), scale(s) {}
    double value(const Vec &x) const override {
        const double g = body.facet_gauge(x);
        return scale * g * g;
    }
    Json to_json() const override { return {{"kind", "gauge_sq"}, {"body", body_to_json(body)}, {"scale", scale}}; }
    HullBody body;
    double scale;
};

struct DistScaled final : Base {
    DistScaled(double c, ConvexSet s) : Base(s.dim()), coeff(c), set(std::move(s)) {}
    double value(const Vec &x) const override { return coeff == 0.0 ? 0.0 : coeff * set.dist(x); }
    Json to_json() const override { return {{"kind", "dist"}, {"coeff", coeff}, {"set", set_to_json(set)}}; }
    double coeff;
    ConvexSet set;
};

/// x' P x with P positive semidefinite.
struct Quadratic final : Base {
    explicit Quadratic(Mat p) : Base(static_cast<int>(p.rows())), P(std::move(p)) {}
    double value(const Vec &x) const override { return x.dot(P * x); }
    Json to_json() const override { return {{"kind", "quadratic"}, {"matrix", mat_to_json(P)}}; }
    Mat P;
};

struct NormNode final : Base {
    NormNode(Norm n, Vec c, double k) : Base(static_cast<int>(c.size())), which(n), center(std::move(c)), coeff(k) {}
    double value(const Vec &x) const override { return coeff * norm(x - center, which); }
    Json to_json() const override {
        return {{"kind", "norm"}, {"norm", to_string(which)}, {"center", vec_to_json(center)}, {"coeff", coeff}};
    }
    Norm which;
    Vec center;
    double coeff;
};

struct MaxOf final : Base {
    explicit MaxOf(std::vector<Ptr> a) : Base(a.front()->dim), args(std::move(a)) {}
    double value(const Vec &x) const override {
        double m = -kInf;
        for (const auto &a : args)
            m = std::max(m, a->value(x));
        return m;
    }
    Json to_json() const override {
        Json arr = Json::array();
        for (const auto &a : args)
            arr.push_back(a->to_json());
        return {{"kind", "max"}, {"args", arr}};
    }
    std::vector<Ptr> args;
};

struct SumOf final : Base {
    explicit SumOf(std::vector<Ptr> a) : Base(a.front()->dim), args(std::move(a)) {}
    double value(const Vec &x) const override {
        double s = 0.0;
        for (const auto &a : args)
            s += a->value(x);
        return s;
    }
    Json to_json() const override {
        Json arr = Json::array();
        for (const auto &a : args)
            arr.push_back(a->to_json());
        return {{"kind", "sum"}, {"args", arr}};
    }
    std::vector<Ptr> args;
};

struct Scaled final : Base {
    Scaled(double f, Ptr a) : Base(a->dim), factor(f), arg(std::move(a)) {}
    double value(const Vec &x) const override { return factor == 0.0 ? 0.0 : factor * arg->value(x); }
    Json to_json() const override { return {{"kind", "scale"}, {"factor", factor}, {"arg", arg->to_json()}}; }
    double factor;
    Ptr arg;
};

/// x -> arg(A x + b)
struct Precompose final : Base {
    Precompose(Ptr a, Mat m, Vec s) : Base(static_cast<int>(m.cols())), arg(std::move(a)), A(std::move(m)), b(std::move(s)) {}
    double value(const Vec &x) const override { return arg->value(A * x + b); }
    Json to_json() const override {
        return {{"kind", "precompose"}, {"arg", arg->to_json()}, {"A", mat_to_json(A)}, {"b", vec_to_json(b)}};
    }
    Ptr arg;
    Mat A;
    Vec b;
};

/// A convex function produced by a construction (gluing, composition) and
/// known only through its evaluator.
struct Opaque final : Base {
    Opaque(int d, std::string l, std::function<double(const Vec &)> f) : Base(d), label(std::move(l)), fn(std::move(f)) {}
    double value(const Vec &x) const override { return fn(x); }
    Json to_json() const override {
        throw InputError("ConvexFn: '" + label + "' is a constructed function and has no JSON form");
    }
    std::string label;
    std::function<double(const Vec &)> fn;
};

} // namespace node

class ConvexFn {
public:
    ConvexFn() = default;
    ConvexFn(node::Ptr n, ConvexSet domain) : node_(std::move(n)), domain_(std::make_shared<ConvexSet>(std::move(domain))) {
        if (!node_)
            throw InputError("ConvexFn: null node");
        if (domain_->dim() != node_->dim)
            throw InputError("ConvexFn: domain dimension does not match the function");
    }
    explicit ConvexFn(node::Ptr n) : ConvexFn(n, ConvexSet::whole(n ? n->dim : 1)) {}

    int dim() const { return node_->dim; }
    const ConvexSet &domain() const { return *domain_; }
    const node::Ptr &node() const { return node_; }
    bool valid() const { return static_cast<bool>(node_); }

    double operator()(const Vec &x) const {
        require_dim(x, dim(), "ConvexFn");
        if (!domain_->contains(x))
            throw DomainError("ConvexFn: point " + format_vec(x) + " outside domain " + domain_->describe());
        return node_->value(x);
    }

    /// Evaluate the underlying formula without the domain check (used for
    /// limits at boundary points of open domains).
    double value_unchecked(const Vec &x) const { return node_->value(x); }

    ConvexFn restricted(const ConvexSet &D) const {
        if (D.dim() != dim())
            throw InputError("ConvexFn::restricted: dimension mismatch");
        if (domain_->kind() == ConvexSet::Kind::whole)
            return ConvexFn(node_, D);
        if (D.kind() == ConvexSet::Kind::whole)
            return *this;
        return ConvexFn(node_, intersect(*domain_, D));
    }

    Json to_json() const {
        Json j = node_->to_json();
        if (domain_->kind() != ConvexSet::Kind::whole)
            j["domain"] = set_to_json(*domain_);
        return j;
    }

    bool serializable() const {
        try {
            (void)to_json();
            return true;
        } catch (const InputError &) {
            return false;
        }
    }

private:
    node::Ptr node_;
    std::shared_ptr<const ConvexSet> domain_;
};

// ---------------------------------------------------------------------------
// Constructors.

inline ConvexSet common_domain(const std::vector<ConvexFn> &fs) {
    ConvexSet D = fs.front().domain();
    for (std::size_t i = 1; i < fs.size(); ++i) {
        const ConvexSet &E = fs[i].domain();
        if (E.kind() == ConvexSet::Kind::whole)
            continue;
        if (D.kind() == ConvexSet::Kind::whole) {
            D = E;
            continue;
        }
        if (D.polyhedral() && E.polyhedral()) {
            D = intersect(D, E);
            continue;
        }
        auto a = std::make_shared<ConvexSet>(D);
        auto b = std::make_shared<ConvexSet>(E);
        D = ConvexSet::oracle(
            D.dim(), [a, b](const Vec &x) { return a->contains(x) && b->contains(x); },
            a->bounding_box() ? a->bounding_box() : b->bounding_box(), a->describe() + " & " + b->describe(), true,
            a->ambient());
    }
    return D;
}

inline void check_same_dim(const std::vector<ConvexFn> &fs, const char *what) {
    if (fs.empty())
        throw InputError(std::string(what) + ": empty argument list");
    for (const auto &f : fs)
        if (f.dim() != fs.front().dim())
            throw InputError(std::string(what) + ": dimension mismatch");
}

inline ConvexFn max_affine(Mat slopes, Vec intercepts) {
    if (slopes.rows() != intercepts.size() || slopes.rows() == 0)
        throw InputError("max_affine: need matching nonempty slopes and intercepts");
    return ConvexFn(std::make_shared<node::MaxAffine>(std::move(slopes), std::move(intercepts)));
}

inline ConvexFn constant_fn(int dim, double c) {
    return max_affine(Mat::Zero(1, dim), scalar_vec(c));
}

inline ConvexFn affine_fn(const Vec &slope, double intercept) {
    return max_affine(slope.transpose(), scalar_vec(intercept));
}

inline ConvexFn smooth_fn(int dim, std::string name, node::Smooth::Fn f, node::Smooth::Grad g = nullptr,
                          Json params = nullptr) {
    return ConvexFn(std::make_shared<node::Smooth>(dim, std::move(name), std::move(f), std::move(g), std::move(params)));
}

inline ConvexFn gauge_squared(HullBody body, double scale = 0.5) {
    return ConvexFn(std::make_shared<node::GaugeSquared>(std::move(body), scale));
}

inline ConvexFn distance_scaled(double coeff, ConvexSet set) {
    if (!(coeff >= 0.0))
        throw InputError("distance_scaled: coefficient must be nonnegative");
    return ConvexFn(std::make_shared<node::DistScaled>(coeff, std::move(set)));
}

inline ConvexFn norm_fn(Norm n, Vec center, double coeff = 1.0) {
    if (!(coeff >= 0.0))
        throw InputError("norm_fn: coefficient must be nonnegative");
    return ConvexFn(std::make_shared<node::NormNode>(n, std::move(center), coeff));
}

inline ConvexFn opaque_fn(int dim, std::string label, std::function<double(const Vec &)> f,
                          ConvexSet domain) {
    return ConvexFn(std::make_shared<node::Opaque>(dim, std::move(label), std::move(f)), std::move(domain));
}

inline ConvexFn sum(const std::vector<ConvexFn> &fs) {
    check_same_dim(fs, "sum");
    if (fs.size() == 1)
        return fs.front();
    std::vector<node::Ptr> ns;
    for (const auto &f : fs)
        ns.push_back(f.node());
    return ConvexFn(std::make_shared<node::SumOf>(std::move(ns)), common_domain(fs));
}

inline ConvexFn pointwise_max(const std::vector<ConvexFn> &fs) {
    check_same_dim(fs, "pointwise_max");
    if (fs.size() == 1)
        return fs.front();
    std::vector<node::Ptr> ns;
    for (const auto &f : fs)
        ns.push_back(f.node());
    return ConvexFn(std::make_shared<node::MaxOf>(std::move(ns)), common_domain(fs));
}

inline ConvexFn scale(const ConvexFn &f, double c) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw InputError("scale: factor must be finite and nonnegative");
    if (c == 1.0)
        return f;
    return ConvexFn(std::make_shared<node::Scaled>(c, f.node()), f.domain());
}

inline ConvexFn add_constant(const ConvexFn &f, double c) {
    return sum({f, constant_fn(f.dim(), c).restricted(f.domain())});
}

/// x -> f(A x + b). The result lives on the whole space unless f does; a
/// restricted f is pulled back through an oracle domain.
inline ConvexFn affine_precompose(const ConvexFn &f, const Mat &A, const Vec &b) {
    if (A.rows() != f.dim() || b.size() != f.dim())
        throw InputError("affine_precompose: shape mismatch");
    const int d = static_cast<int>(A.cols());
    auto n = std::make_shared<node::Precompose>(f.node(), A, b);
    if (f.domain().kind() == ConvexSet::Kind::whole)
        return ConvexFn(n, ConvexSet::whole(d, f.domain().ambient()));
    auto dom = std::make_shared<ConvexSet>(f.domain());
    return ConvexFn(n, ConvexSet::oracle(
                           d, [dom, A, b](const Vec &x) { return dom->contains(A * x + b); }, std::nullopt,
                           "preimage of " + dom->describe()));
}

// ---------------------------------------------------------------------------
// Quadratic forms.

struct QuadraticForm {
    Mat matrix;

    explicit QuadraticForm(Mat m) : matrix(std::move(m)) {
        if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
            throw InputError("QuadraticForm: matrix must be square and nonempty");
        const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * std::max(1.0, matrix.cwiseAbs().maxCoeff()))
            throw InputError("QuadraticForm: matrix is not symmetric");
        matrix = 0.5 * (matrix + matrix.transpose());
    }

    int dim() const { return static_cast<int>(matrix.rows()); }
    double operator()(const Vec &x) const { return x.dot(matrix * x); }
    ConvexFn as_convex() const { return ConvexFn(std::make_shared<node::Quadratic>(matrix)); }
    double operator_norm() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(matrix);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
};

/// Q = P1 - P2 with P1, P2 positive semidefinite, split along the spectrum.
inline std::pair<QuadraticForm, QuadraticForm> quadratic_dc_split(const QuadraticForm &Q) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Q.matrix);
    const Vec &lam = es.eigenvalues();
    const Mat &V = es.eigenvectors();
    Vec pos = lam.cwiseMax(0.0);
    Vec neg = (-lam).cwiseMax(0.0);
    Mat P1 = V * pos.asDiagonal() * V.transpose();
    Mat P2 = V * neg.asDiagonal() * V.transpose();
    P1 = 0.5 * (P1 + P1.transpose());
    P2 = 0.5 * (P2 + P2.transpose());
    return {QuadraticForm(P1), QuadraticForm(P2)};
}

inline ConvexFn quadratic_fn(const Mat &P) {
    QuadraticForm q(P);
    Eigen::SelfAdjointEigenSolver<Mat> es(q.matrix);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, q.matrix.cwiseAbs().maxCoeff()))
        throw InputError("quadratic_fn: matrix is not positive semidefinite");
    return q.as_convex();
}

/// c * ||x||_2^2
inline ConvexFn half_sq_norm_scaled(int dim, double c) {
    return quadratic_fn(c * Mat::Identity(dim, dim));
}

// ---------------------------------------------------------------------------
// Lipschitz tools.

/// If |f| <= M on C and D + B(0, 2r) is inside C, then f is (2M/r)-Lipschitz
/// on D.
inline double lipschitz_bound_on_inner(double M, double r) {
    if (!(r > 0.0))
        throw InputError("lipschitz_bound_on_inner: r must be positive");
    if (!(M >= 0.0))
        throw InputError("lipschitz_bound_on_inner: M must be nonnegative");
    return 2.0 * M / r;
}

struct ExtensionInfo {
    double gap_bound = 0.0; // estimated suboptimality of the inner minimization
    bool closed_form = false;
};

/// f^(x) = inf{ f(c) + L ||x - c|| : c in C }, a convex L-Lipschitz
/// extension of an L-Lipschitz convex f from C to the whole space.
/// Intervals use the closed form; boxes and other bounded sets in d <= 3 use
/// a grid search followed by coordinate-wise golden section refinement.
inline ConvexFn lipschitz_extension(const ConvexFn &f, const ConvexSet &C, double L,
                                    ExtensionInfo *info = nullptr) {
    if (C.is_empty())
        throw InputError("lipschitz_extension: empty set");
    if (!(L >= 0.0))
        throw InputError("lipschitz_extension: L must be nonnegative");
    const int d = C.dim();
    const Norm n = C.ambient();
    auto bb = C.bounding_box();
    if (!bb)
        throw InputError("lipschitz_extension: set must be bounded");
    if (d == 1 && C.kind() == ConvexSet::Kind::box) {
        if (info)
            *info = {0.0, true};
        const double a = C.lo()[0], b = C.hi()[0];
        const double fa = f.value_unchecked(scalar_vec(a)), fb = f.value_unchecked(scalar_vec(b));
        return opaque_fn(
            1, "lipschitz_extension",
            [f, a, b, fa, fb, L](const Vec &x) {
                const double t = x[0];
                if (t > b)
                    return fb + L * (t - b);
                if (t < a)
                    return fa + L * (a - t);
                return f.value_unchecked(x);
            },
            ConvexSet::whole(1, n));
    }
    if (d > 3)
        throw InputError("lipschitz_extension: dimension above 3 is not supported");
    const int per_axis = d == 2 ? 64 : 16;
    Vec step = (bb->hi - bb->lo) / per_axis;
    if (info)
        *info = {L * norm(step, n), false};
    auto C_ptr = std::make_shared<ConvexSet>(C);
    auto box = *bb;
    auto objective = [f, L, n, C_ptr](const Vec &x, const Vec &c) {
        if (!C_ptr->contains(c) && C_ptr->dist(c) > 0.0)
            return kInf;
        return f.value_unchecked(c) + L * norm(x - c, n);
    };
    return opaque_fn(
        d, "lipschitz_extension",
        [f, C_ptr, box, per_axis, objective](const Vec &x) {
            if (C_ptr->contains(x))
                return f.value_unchecked(x);
            const int d = static_cast<int>(x.size());
            // Coarse grid over the bounding box (cell centers and corners).
            std::vector<std::pair<double, Vec>> best;
            int total = 1;
            for (int i = 0; i < d; ++i)
                total *= per_axis + 1;
            Vec c(d);
            for (int idx = 0; idx < total; ++idx) {
                int r = idx;
                for (int i = 0; i < d; ++i) {
                    c[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * (r % (per_axis + 1)) / per_axis;
                    r /= per_axis + 1;
                }
                const double v = objective(x, c);
                if (!std::isfinite(v))
                    continue;
                best.emplace_back(v, c);
            }
            if (best.empty())
                throw InternalError("lipschitz_extension: no feasible grid point");
            std::partial_sort(best.begin(), best.begin() + std::min<std::size_t>(8, best.size()), best.end(),
                              [](const auto &p, const auto &q) { return p.first < q.first; });
            double result = best.front().first;
            for (std::size_t s = 0; s < std::min<std::size_t>(8, best.size()); ++s) {
                Vec cur = best[s].second;
                double val = best[s].first;
                double radius = (box.hi - box.lo).maxCoeff() / per_axis;
                for (int sweep = 0; sweep < 12; ++sweep) {
                    for (int i = 0; i < d; ++i) {
                        const double lo = std::max(box.lo[i], cur[i] - radius);
                        const double hi = std::min(box.hi[i], cur[i] + radius);
                        Vec probe = cur;
                        auto line = [&](double t) {
                            probe[i] = t;
                            return objective(x, probe);
                        };
                        double bt = cur[i];
                        double bv = val;
                        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
                        double a = lo, b = hi;
                        for (int it = 0; it < 60; ++it) {
                            const double c1 = b - r * (b - a), c2 = a + r * (b - a);
                            const double v1 = line(c1), v2 = line(c2);
                            if (v1 < bv) {
                                bv = v1;
                                bt = c1;
                            }
                            if (v2 < bv) {
                                bv = v2;
                                bt = c2;
                            }
                            if (v1 <= v2)
                                b = c2;
                            else
                                a = c1;
                        }
                        cur[i] = bt;
                        val = bv;
                    }
                    radius *= 0.5;
                }
                result = std::min(result, val);
            }
            return result;
        },
        ConvexSet::whole(d, n));
}

} // namespace dcx

#endif
