#ifndef DCX_GEOMETRY_HPP
#define DCX_GEOMETRY_HPP

// Convex sets in R^d (d <= 3 in practice): membership, distances measured in
// a configurable ambient norm, inner/outer parallel sets, compact containment,
// and Minkowski gauges of symmetric hull bodies.

#include "dcx/detail/simplex.hpp"
#include "dcx/errors.hpp"
#include "dcx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace dcx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Axis-aligned box [lo, hi] used for bounding and sampling windows.
struct Box {
    Vec lo;
    Vec hi;

    Eigen::Index dim() const { return lo.size(); }
    Vec center() const { return 0.5 * (lo + hi); }
    Vec half_width() const { return 0.5 * (hi - lo); }
    bool contains(const Vec &x, double slack = 0.0) const {
        for (Eigen::Index i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] - slack || x[i] > hi[i] + slack)
                return false;
        return true;
    }
    Box inflated(double r) const { return {lo.array() - r, hi.array() + r}; }

    /// All 2^d corners.
    std::vector<Vec> corners() const {
        const auto d = static_cast<int>(lo.size());
        std::vector<Vec> out;
        out.reserve(std::size_t{1} << d);
        for (int mask = 0; mask < (1 << d); ++mask) {
            Vec c(d);
            for (int i = 0; i < d; ++i)
                c[i] = (mask >> i) & 1 ? hi[i] : lo[i];
            out.push_back(std::move(c));
        }
        return out;
    }
};

class ConvexSet {
public:
    enum class Kind { empty, whole, ball, box, polyhedron, dilated, oracle };

    using Membership = std::function<bool(const Vec &)>;

    /// The empty subset of R^1; placeholder for default-constructed holders.
    ConvexSet() : ConvexSet(Kind::empty, 1, Norm::l2) {}

    static ConvexSet whole(int dim, Norm ambient = Norm::l2) {
        check_dim(dim);
        ConvexSet s(Kind::whole, dim, ambient);
        s.open_ = true;
        return s;
    }

    static ConvexSet empty(int dim, Norm ambient = Norm::l2) {
        check_dim(dim);
        return ConvexSet(Kind::empty, dim, ambient);
    }

    /// Ball of the ambient norm.
    static ConvexSet ball(Vec center, double radius, bool open, Norm ambient = Norm::l2) {
        if (!(radius >= 0.0) || !std::isfinite(radius))
            throw InputError("ball: radius must be finite and nonnegative");
        const auto d = static_cast<int>(center.size());
        check_dim(d);
        if (open && radius == 0.0)
            return empty(d, ambient);
        ConvexSet s(Kind::ball, d, ambient);
        s.center_ = std::move(center);
        s.radius_ = radius;
        s.open_ = open;
        return s;
    }

    static ConvexSet box(Vec lo, Vec hi, bool open, Norm ambient = Norm::l2) {
        if (lo.size() != hi.size())
            throw InputError("box: lo/hi dimension mismatch");
        const auto d = static_cast<int>(lo.size());
        check_dim(d);
        for (int i = 0; i < d; ++i) {
            if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
                throw InputError("box: bounds must be finite");
            if (lo[i] > hi[i] || (open && lo[i] >= hi[i]))
                return empty(d, ambient);
        }
        ConvexSet s(Kind::box, d, ambient);
        s.lo_ = std::move(lo);
        s.hi_ = std::move(hi);
        s.open_ = open;
        return s;
    }

    static ConvexSet interval(double a, double b, bool open, Norm ambient = Norm::l2) {
        return box(scalar_vec(a), scalar_vec(b), open, ambient);
    }

    /// {x : normals.row(i) . x <= offsets[i]} (strict when open).
    static ConvexSet polyhedron(Mat normals, Vec offsets, bool open, Norm ambient = Norm::l2) {
        if (normals.rows() != offsets.size())
            throw InputError("polyhedron: normals/offsets count mismatch");
        const auto d = static_cast<int>(normals.cols());
        check_dim(d);
        for (Eigen::Index i = 0; i < normals.rows(); ++i)
            if (normals.row(i).norm() == 0.0)
                throw InputError("polyhedron: zero normal");
        ConvexSet s(Kind::polyhedron, d, ambient);
        s.normals_ = std::move(normals);
        s.offsets_ = std::move(offsets);
        s.open_ = open;
        return s;
    }

    /// The open set {x : dist(x, base) < r}.
    static ConvexSet dilated(const ConvexSet &base, double r) {
        if (!(r > 0.0))
            throw InputError("dilated: radius must be positive");
        ConvexSet s(Kind::dilated, base.dim(), base.ambient());
        s.base_ = std::make_shared<const ConvexSet>(base);
        s.radius_ = r;
        s.open_ = true;
        return s;
    }

    /// Convex set known only through a membership predicate. `bounds` is a
    /// box containing the set, required for sampling.
    static ConvexSet oracle(int dim, Membership member, std::optional<Box> bounds, std::string label,
                            bool open = true, Norm ambient = Norm::l2) {
        check_dim(dim);
        ConvexSet s(Kind::oracle, dim, ambient);
        s.member_ = std::make_shared<const Membership>(std::move(member));
        s.oracle_bounds_ = std::move(bounds);
        s.label_ = std::move(label);
        s.open_ = open;
        return s;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    Norm ambient() const { return ambient_; }
    bool is_open() const { return open_; }
    const Vec &center() const { return center_; }
    double radius() const { return radius_; }
    const Vec &lo() const { return lo_; }
    const Vec &hi() const { return hi_; }
    const Mat &normals() const { return normals_; }
    const Vec &offsets() const { return offsets_; }
    const ConvexSet &base() const { return *base_; }
    const std::string &label() const { return label_; }

    /// Same set, distances measured in another norm. Balls keep their shape
    /// only when the norm is unchanged.
    ConvexSet with_ambient(Norm n) const {
        if (kind_ == Kind::ball && n != ambient_)
            throw InputError("with_ambient: a ball is tied to its own norm");
        ConvexSet s = *this;
        s.ambient_ = n;
        return s;
    }

    bool contains(const Vec &x) const {
        require_dim(x, dim_, "ConvexSet::contains");
        switch (kind_) {
        case Kind::empty:
            return false;
        case Kind::whole:
            return true;
        case Kind::ball: {
            const double r = norm(x - center_, ambient_);
            return open_ ? r < radius_ : r <= radius_;
        }
        case Kind::box:
            for (int i = 0; i < dim_; ++i) {
                if (open_ ? (x[i] <= lo_[i] || x[i] >= hi_[i]) : (x[i] < lo_[i] || x[i] > hi_[i]))
                    return false;
            }
            return true;
        case Kind::polyhedron: {
            const Vec ax = normals_ * x;
            for (Eigen::Index i = 0; i < ax.size(); ++i)
                if (open_ ? ax[i] >= offsets_[i] : ax[i] > offsets_[i])
                    return false;
            return true;
        }
        case Kind::dilated:
            return base_->dist(x) < radius_;
        case Kind::oracle:
            return (*member_)(x);
        }
        return false;
    }

    /// Distance from x to the closure of the set in the ambient norm.
    double dist(const Vec &x) const {
        require_dim(x, dim_, "dist_to_set");
        switch (kind_) {
        case Kind::empty:
            return kInf;
        case Kind::whole:
            return 0.0;
        case Kind::ball:
            return std::max(0.0, norm(x - center_, ambient_) - radius_);
        case Kind::box: {
            Vec gap = x - x.cwiseMax(lo_).cwiseMin(hi_);
            return norm(gap, ambient_);
        }
        case Kind::polyhedron:
            return polyhedron_dist(x);
        case Kind::dilated:
            return std::max(0.0, base_->dist(x) - radius_);
        case Kind::oracle:
            throw UndecidableError("dist_to_set: no distance available for oracle set '" + label_ + "'");
        }
        return kInf;
    }

    /// dist(x, X \ C) for x in C, 0 for x outside C.
    double dist_to_complement(const Vec &x) const {
        require_dim(x, dim_, "dist_to_complement");
        switch (kind_) {
        case Kind::empty:
            return 0.0;
        case Kind::whole:
            return kInf;
        case Kind::ball:
            return std::max(0.0, radius_ - norm(x - center_, ambient_));
        case Kind::box: {
            double m = kInf;
            for (int i = 0; i < dim_; ++i)
                m = std::min({m, x[i] - lo_[i], hi_[i] - x[i]});
            return std::max(0.0, m);
        }
        case Kind::polyhedron: {
            double m = kInf;
            for (Eigen::Index i = 0; i < normals_.rows(); ++i) {
                const Vec a = normals_.row(i).transpose();
                m = std::min(m, (offsets_[i] - a.dot(x)) / dual_norm(a, ambient_));
            }
            return std::max(0.0, m);
        }
        case Kind::dilated:
        case Kind::oracle:
            throw UndecidableError("dist_to_complement: not available for " + describe());
        }
        return 0.0;
    }

    bool is_empty() const {
        if (kind_ == Kind::empty)
            return true;
        if (kind_ == Kind::polyhedron)
            return open_ ? !(inradius() > 0.0) : !closed_polyhedron_feasible();
        return false;
    }

    bool bounded() const {
        switch (kind_) {
        case Kind::empty:
        case Kind::ball:
        case Kind::box:
            return true;
        case Kind::whole:
            return false;
        case Kind::polyhedron:
            return polyhedron_bounds().has_value();
        case Kind::dilated:
            return base_->bounded();
        case Kind::oracle:
            return oracle_bounds_.has_value();
        }
        return false;
    }

    /// Smallest axis box containing the set, when bounded.
    std::optional<Box> bounding_box() const {
        switch (kind_) {
        case Kind::empty:
        case Kind::whole:
            return std::nullopt;
        case Kind::ball: {
            // Every ambient ball lies in the linf ball of the same radius.
            Vec r = Vec::Constant(dim_, radius_);
            return Box{center_ - r, center_ + r};
        }
        case Kind::box:
            return Box{lo_, hi_};
        case Kind::polyhedron:
            return polyhedron_bounds();
        case Kind::dilated: {
            auto b = base_->bounding_box();
            if (!b)
                return std::nullopt;
            return b->inflated(radius_);
        }
        case Kind::oracle:
            return oracle_bounds_;
        }
        return std::nullopt;
    }

    /// sup_x dist(x, X \ C): radius of the largest ambient ball inside C.
    double inradius() const {
        switch (kind_) {
        case Kind::empty:
            return 0.0;
        case Kind::whole:
            return kInf;
        case Kind::ball:
            return radius_;
        case Kind::box:
            return 0.5 * (hi_ - lo_).minCoeff();
        case Kind::polyhedron: {
            // max t  s.t.  a_i . x + t ||a_i||_* <= b_i
            const auto m = normals_.rows();
            Mat A(m, dim_ + 1);
            A.leftCols(dim_) = normals_;
            for (Eigen::Index i = 0; i < m; ++i)
                A(i, dim_) = dual_norm(normals_.row(i).transpose(), ambient_);
            Mat Ab(m + 1, dim_ + 1);
            Ab.topRows(m) = A;
            Ab.row(m).setZero();
            Ab(m, dim_) = 1.0;
            Vec bb(m + 1);
            bb.head(m) = offsets_;
            bb[m] = 1e6;
            Vec c = Vec::Zero(dim_ + 1);
            c[dim_] = -1.0;
            auto r = detail::solve_lp(c, Ab, bb, Mat(0, dim_ + 1), Vec(0));
            if (!r.optimal())
                return 0.0;
            return std::max(0.0, r.x[dim_]);
        }
        case Kind::dilated:
            return base_->inradius() + radius_;
        case Kind::oracle:
            throw UndecidableError("inradius: not available for oracle set '" + label_ + "'");
        }
        return 0.0;
    }

    /// Vertices of the closure for bounded box/polyhedron sets (d <= 3).
    std::vector<Vec> vertices() const {
        if (kind_ == Kind::box)
            return Box{lo_, hi_}.corners();
        if (kind_ == Kind::polyhedron)
            return polyhedron_vertices();
        throw InputError("vertices: only box and polyhedron sets have vertices");
    }

    /// H-representation of box/polyhedron sets.
    ConvexSet as_polyhedron() const {
        if (kind_ == Kind::polyhedron)
            return *this;
        if (kind_ != Kind::box)
            throw InputError("as_polyhedron: not a polyhedral set: " + describe());
        Mat A = Mat::Zero(2 * dim_, dim_);
        Vec b(2 * dim_);
        for (int i = 0; i < dim_; ++i) {
            A(2 * i, i) = 1.0;
            b[2 * i] = hi_[i];
            A(2 * i + 1, i) = -1.0;
            b[2 * i + 1] = -lo_[i];
        }
        return polyhedron(A, b, open_, ambient_);
    }

    bool polyhedral() const {
        return kind_ == Kind::box || kind_ == Kind::polyhedron || kind_ == Kind::whole ||
               kind_ == Kind::empty;
    }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
        case Kind::empty:
            os << "empty(R^" << dim_ << ")";
            break;
        case Kind::whole:
            os << "R^" << dim_;
            break;
        case Kind::ball:
            os << (open_ ? "open" : "closed") << " " << to_string(ambient_) << "-ball(" << format_vec(center_)
               << ", " << radius_ << ")";
            break;
        case Kind::box:
            os << (open_ ? "open" : "closed") << " box[" << format_vec(lo_) << ", " << format_vec(hi_) << "]";
            break;
        case Kind::polyhedron:
            os << (open_ ? "open" : "closed") << " polyhedron(" << normals_.rows() << " halfspaces)";
            break;
        case Kind::dilated:
            os << "dilated(" << base_->describe() << ", " << radius_ << ")";
            break;
        case Kind::oracle:
            os << "oracle(" << label_ << ")";
            break;
        }
        return os.str();
    }

private:
    ConvexSet(Kind k, int d, Norm n) : kind_(k), dim_(d), ambient_(n) {}

    static void check_dim(int d) {
        if (d <= 0)
            throw InputError("convex set: dimension must be positive");
    }

    bool closed_polyhedron_feasible() const {
        auto r = detail::solve_lp(Vec::Zero(dim_), normals_, offsets_, Mat(0, dim_), Vec(0));
        return r.optimal();
    }

    std::optional<Box> polyhedron_bounds() const {
        Vec lo(dim_), hi(dim_);
        for (int i = 0; i < dim_; ++i) {
            Vec c = Vec::Zero(dim_);
            c[i] = 1.0;
            auto rmin = detail::solve_lp(c, normals_, offsets_, Mat(0, dim_), Vec(0));
            auto rmax = detail::solve_lp(-c, normals_, offsets_, Mat(0, dim_), Vec(0));
            if (!rmin.optimal() || !rmax.optimal())
                return std::nullopt;
            lo[i] = rmin.value;
            hi[i] = -rmax.value;
        }
        return Box{lo, hi};
    }

    std::vector<Vec> polyhedron_vertices() const {
        if (!polyhedron_bounds())
            throw InputError("vertices: polyhedron is unbounded");
        const auto m = static_cast<int>(normals_.rows());
        std::vector<Vec> out;
        std::vector<int> pick(static_cast<std::size_t>(dim_));
        // Enumerate dim-subsets of constraints.
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == dim_) {
                Mat A(dim_, dim_);
                Vec b(dim_);
                for (int k = 0; k < dim_; ++k) {
                    A.row(k) = normals_.row(pick[static_cast<std::size_t>(k)]);
                    b[k] = offsets_[pick[static_cast<std::size_t>(k)]];
                }
                Eigen::FullPivLU<Mat> lu(A);
                if (lu.rank() < dim_)
                    return;
                Vec v = lu.solve(b);
                const Vec ax = normals_ * v;
                for (int i = 0; i < m; ++i)
                    if (ax[i] > offsets_[i] + 1e-10 * (1.0 + std::abs(offsets_[i])))
                        return;
                for (const Vec &w : out)
                    if ((w - v).lpNorm<Eigen::Infinity>() < 1e-12)
                        return;
                out.push_back(v);
                return;
            }
            for (int i = start; i < m; ++i) {
                pick[static_cast<std::size_t>(depth)] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        return out;
    }

    double polyhedron_dist(const Vec &x) const {
        {
            const Vec ax = normals_ * x;
            bool inside = true;
            for (Eigen::Index i = 0; i < ax.size(); ++i)
                inside = inside && ax[i] <= offsets_[i];
            if (inside)
                return 0.0;
        }
        const auto m = static_cast<int>(normals_.rows());
        if (ambient_ == Norm::l2) {
            // Nearest point lies on a face with at most d independent active
            // constraints: enumerate the active sets.
            double best = kInf;
            std::vector<int> pick;
            std::function<void(int)> rec = [&](int start) {
                if (!pick.empty()) {
                    const auto k = static_cast<Eigen::Index>(pick.size());
                    Mat A(k, dim_);
                    Vec b(k);
                    for (Eigen::Index r = 0; r < k; ++r) {
                        A.row(r) = normals_.row(pick[static_cast<std::size_t>(r)]);
                        b[r] = offsets_[pick[static_cast<std::size_t>(r)]];
                    }
                    Mat G = A * A.transpose();
                    Eigen::FullPivLU<Mat> lu(G);
                    if (lu.rank() == k) {
                        Vec y = x - A.transpose() * lu.solve(A * x - b);
                        const Vec ay = normals_ * y;
                        bool ok = true;
                        for (int i = 0; i < m && ok; ++i)
                            ok = ay[i] <= offsets_[i] + 1e-12 * (1.0 + std::abs(offsets_[i]));
                        if (ok)
                            best = std::min(best, (x - y).norm());
                    }
                }
                if (static_cast<int>(pick.size()) == dim_)
                    return;
                for (int i = start; i < m; ++i) {
                    pick.push_back(i);
                    rec(i + 1);
                    pick.pop_back();
                }
            };
            rec(0);
            if (!std::isfinite(best) && is_empty())
                return kInf;
            return best;
        }
        // l1 / linf: linear program in (y, s).
        const int d = dim_;
        const int ns = ambient_ == Norm::linf ? 1 : d;
        const int nv = d + ns;
        Mat A = Mat::Zero(2 * d + m, nv);
        Vec b(2 * d + m);
        for (int i = 0; i < d; ++i) {
            const int si = ambient_ == Norm::linf ? d : d + i;
            A(2 * i, i) = 1.0;
            A(2 * i, si) = -1.0;
            b[2 * i] = x[i];
            A(2 * i + 1, i) = -1.0;
            A(2 * i + 1, si) = -1.0;
            b[2 * i + 1] = -x[i];
        }
        A.block(2 * d, 0, m, d) = normals_;
        b.tail(m) = offsets_;
        Vec c = Vec::Zero(nv);
        c.tail(ns).setOnes();
        auto r = detail::solve_lp(c, A, b, Mat(0, nv), Vec(0));
        if (r.status == detail::LpResult::Status::infeasible)
            return kInf;
        if (!r.optimal())
            throw InternalError("dist_to_set: polyhedron distance LP failed");
        return std::max(0.0, r.value);
    }

    Kind kind_;
    int dim_;
    Norm ambient_;
    bool open_ = false;
    Vec center_;
    double radius_ = 0.0;
    Vec lo_, hi_;
    Mat normals_;
    Vec offsets_;
    std::shared_ptr<const ConvexSet> base_;
    std::shared_ptr<const Membership> member_;
    std::optional<Box> oracle_bounds_;
    std::string label_;
};

inline double dist_to_set(const Vec &x, const ConvexSet &C) { return C.dist(x); }

/// {x in C : dist(x, X \ C) > r}, an open convex set.
inline ConvexSet inner_parallel(const ConvexSet &C, double r) {
    if (!(r > 0.0))
        throw InputError("inner_parallel: r must be positive");
    const Norm n = C.ambient();
    switch (C.kind()) {
    case ConvexSet::Kind::empty:
    case ConvexSet::Kind::whole:
        return C;
    case ConvexSet::Kind::ball:
        if (C.radius() <= r)
            return ConvexSet::empty(C.dim(), n);
        return ConvexSet::ball(C.center(), C.radius() - r, true, n);
    case ConvexSet::Kind::box:
        return ConvexSet::box(C.lo().array() + r, C.hi().array() - r, true, n);
    case ConvexSet::Kind::polyhedron: {
        Vec b = C.offsets();
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b[i] -= r * dual_norm(C.normals().row(i).transpose(), n);
        auto P = ConvexSet::polyhedron(C.normals(), b, true, n);
        if (P.is_empty())
            return ConvexSet::empty(C.dim(), n);
        return P;
    }
    case ConvexSet::Kind::dilated:
    case ConvexSet::Kind::oracle:
        break;
    }
    throw UndecidableError("inner_parallel: unsupported set kind " + C.describe());
}

/// {x : dist(x, C) < r}, an open convex set.
inline ConvexSet outer_parallel(const ConvexSet &C, double r) {
    if (!(r > 0.0))
        throw InputError("outer_parallel: r must be positive");
    const Norm n = C.ambient();
    switch (C.kind()) {
    case ConvexSet::Kind::empty:
    case ConvexSet::Kind::whole:
        return C;
    case ConvexSet::Kind::ball:
        return ConvexSet::ball(C.center(), C.radius() + r, true, n);
    case ConvexSet::Kind::box:
        if (n == Norm::linf || C.dim() == 1)
            return ConvexSet::box(C.lo().array() - r, C.hi().array() + r, true, n);
        return ConvexSet::dilated(C, r);
    case ConvexSet::Kind::polyhedron:
        return ConvexSet::dilated(C, r);
    case ConvexSet::Kind::dilated:
        return ConvexSet::dilated(C.base(), C.radius() + r);
    case ConvexSet::Kind::oracle:
        break;
    }
    throw UndecidableError("outer_parallel: unsupported set kind " + C.describe());
}

/// Intersection of polyhedral sets (box, polyhedron, whole, empty).
inline ConvexSet intersect(const ConvexSet &A, const ConvexSet &B) {
    if (A.dim() != B.dim())
        throw InputError("intersect: dimension mismatch");
    using K = ConvexSet::Kind;
    if (A.kind() == K::whole)
        return B;
    if (B.kind() == K::whole)
        return A;
    if (A.kind() == K::empty || B.kind() == K::empty)
        return ConvexSet::empty(A.dim(), A.ambient());
    if (!A.polyhedral() || !B.polyhedral())
        throw UndecidableError("intersect: only polyhedral sets are supported (" + A.describe() + ", " +
                               B.describe() + ")");
    const bool open = A.is_open() || B.is_open();
    if (A.kind() == K::box && B.kind() == K::box)
        return ConvexSet::box(A.lo().cwiseMax(B.lo()), A.hi().cwiseMin(B.hi()), open, A.ambient());
    auto PA = A.as_polyhedron();
    auto PB = B.as_polyhedron();
    Mat N(PA.normals().rows() + PB.normals().rows(), A.dim());
    N << PA.normals(), PB.normals();
    Vec b(N.rows());
    b << PA.offsets(), PB.offsets();
    return ConvexSet::polyhedron(N, b, open, A.ambient());
}

/// A certified eps > 0 with A + B(0, eps) contained in B, or nothing when
/// there is no slack.
inline std::optional<double> compactly_contained(const ConvexSet &A, const ConvexSet &B) {
    if (A.dim() != B.dim())
        throw InputError("compactly_contained: dimension mismatch");
    using K = ConvexSet::Kind;
    if (A.kind() == K::empty || B.kind() == K::whole)
        return kInf;
    if (B.kind() == K::empty)
        return std::nullopt;
    if (A.kind() == K::whole)
        return std::nullopt;
    if (A.kind() == K::dilated || A.kind() == K::oracle || B.kind() == K::dilated || B.kind() == K::oracle)
        throw UndecidableError("compactly_contained: undecidable for these kinds (" + A.describe() + ", " +
                               B.describe() + ")");
    double eps = kInf;
    if (A.kind() == K::ball) {
        if (A.ambient() != B.ambient())
            throw UndecidableError("compactly_contained: ball and container use different norms");
        const Vec &c = A.center();
        const double ra = A.radius();
        if (B.kind() == K::ball) {
            eps = B.radius() - norm(c - B.center(), B.ambient()) - ra;
        } else {
            // Linear constraints: min over the ball of (b - a.x)/||a||_* is
            // attained at distance ra along the dual direction.
            auto P = B.as_polyhedron();
            for (Eigen::Index i = 0; i < P.normals().rows(); ++i) {
                const Vec a = P.normals().row(i).transpose();
                const double an = dual_norm(a, B.ambient());
                eps = std::min(eps, (P.offsets()[i] - a.dot(c)) / an - ra);
            }
        }
    } else {
        if (!A.bounded())
            throw UndecidableError("compactly_contained: unbounded polyhedron " + A.describe());
        // dist(., X \ B) is concave on B, so its minimum over the polytope
        // closure(A) is attained at a vertex.
        for (const Vec &v : A.vertices())
            eps = std::min(eps, B.dist_to_complement(v));
    }
    if (!(eps > 0.0))
        return std::nullopt;
    return eps;
}

/// Uniform sample from a bounded convex set by rejection from its bounding
/// box. Degenerate box coordinates are held fixed (affine hull sampling).
template <class Rng>
Vec sample_point(const ConvexSet &C, Rng &rng, const std::optional<Box> &window = std::nullopt) {
    std::optional<Box> bb = C.bounding_box();
    if (window) {
        if (bb) {
            bb = Box{bb->lo.cwiseMax(window->lo), bb->hi.cwiseMin(window->hi)};
        } else {
            bb = window;
        }
    }
    if (!bb)
        throw InputError("sample_point: unbounded set " + C.describe() + " needs a sampling window");
    if (C.kind() == ConvexSet::Kind::empty)
        throw InputError("sample_point: empty set");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto d = C.dim();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Vec x(d);
        for (int i = 0; i < d; ++i)
            x[i] = bb->lo[i] + (bb->hi[i] - bb->lo[i]) * u(rng);
        if (C.contains(x))
            return x;
    }
    throw InputError("sample_point: set " + C.describe() + " has no sampleable interior");
}

// ---------------------------------------------------------------------------
// Hull bodies and their gauges.

enum class BaseBall { linf, l1 };

/// conv(rho * base-ball  U  {+-p_i}), a symmetric polytope.
class HullBody {
public:
    HullBody(double rho, BaseBall base, std::vector<Vec> points, int dim)
        : rho_(rho), base_(base), dim_(dim) {
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw InputError("HullBody: rho must be positive");
        if (dim <= 0 || dim > 3)
            throw InputError("HullBody: dimension must be in 1..3");
        for (Vec &p : points) {
            require_dim(p, dim, "HullBody point");
            add_point(p);
            add_point(-p);
        }
        build_vertices();
        build_facets();
    }

    double rho() const { return rho_; }
    BaseBall base() const { return base_; }
    int dim() const { return dim_; }
    Norm base_norm() const { return base_ == BaseBall::linf ? Norm::linf : Norm::l1; }
    const std::vector<Vec> &points() const { return points_; }
    const std::vector<Vec> &vertices() const { return vertices_; }

    /// max(rho, max ||p_i||) in the base norm.
    double outer_radius() const {
        double r = rho_;
        for (const Vec &p : points_)
            r = std::max(r, norm(p, base_norm()));
        return r;
    }

    /// x in t * body, decided by linear feasibility over the vertex hull.
    bool contains_scaled(const Vec &x, double t) const {
        if (t <= 0.0)
            return x.isZero(0.0);
        const auto nv = static_cast<Eigen::Index>(vertices_.size());
        Mat A(dim_ + 1, nv);
        for (Eigen::Index j = 0; j < nv; ++j) {
            A.block(0, j, dim_, 1) = vertices_[static_cast<std::size_t>(j)];
            A(dim_, j) = 1.0;
        }
        Vec b(dim_ + 1);
        b.head(dim_) = x / t;
        b[dim_] = 1.0;
        auto r = detail::simplex_standard(A, b, Vec::Zero(nv), 1e-13, 1e-13);
        return r.optimal();
    }

    /// Exact gauge from the facet description: max over facets a.x with
    /// a.v <= 1 on the body.
    double facet_gauge(const Vec &x) const {
        double g = 0.0;
        for (const Vec &a : facets_)
            g = std::max(g, a.dot(x));
        return g;
    }

    const std::vector<Vec> &facet_normals() const { return facets_; }

private:
    void add_point(const Vec &p) {
        for (const Vec &q : points_)
            if ((q - p).lpNorm<Eigen::Infinity>() == 0.0)
                return;
        points_.push_back(p);
    }

    void build_vertices() {
        std::vector<Vec> cand;
        if (base_ == BaseBall::linf) {
            Box b{Vec::Constant(dim_, -rho_), Vec::Constant(dim_, rho_)};
            cand = b.corners();
        } else {
            for (int i = 0; i < dim_; ++i) {
                Vec e = Vec::Zero(dim_);
                e[i] = rho_;
                cand.push_back(e);
                cand.push_back(-e);
            }
        }
        for (const Vec &p : points_)
            cand.push_back(p);
        for (const Vec &v : cand) {
            bool dup = false;
            for (const Vec &w : vertices_)
                dup = dup || (w - v).lpNorm<Eigen::Infinity>() == 0.0;
            if (!dup)
                vertices_.push_back(v);
        }
    }

    void build_facets() {
        const auto n = static_cast<int>(vertices_.size());
        if (dim_ == 1) {
            double m = 0.0;
            for (const Vec &v : vertices_)
                m = std::max(m, std::abs(v[0]));
            facets_.push_back(scalar_vec(1.0 / m));
            facets_.push_back(scalar_vec(-1.0 / m));
            return;
        }
        std::vector<int> pick;
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(pick.size()) == dim_) {
                Mat V(dim_, dim_);
                for (int k = 0; k < dim_; ++k)
                    V.row(k) = vertices_[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])].transpose();
                Eigen::FullPivLU<Mat> lu(V);
                if (lu.rank() < dim_)
                    return;
                Vec a = lu.solve(Vec::Ones(dim_));
                for (const Vec &w : vertices_)
                    if (a.dot(w) > 1.0 + 1e-12)
                        return;
                for (const Vec &f : facets_)
                    if ((f - a).lpNorm<Eigen::Infinity>() < 1e-12)
                        return;
                facets_.push_back(a);
                return;
            }
            for (int i = start; i < n; ++i) {
                pick.push_back(i);
                rec(i + 1);
                pick.pop_back();
            }
        };
        rec(0);
        if (facets_.empty())
            throw InternalError("HullBody: no supporting facets found");
    }

    double rho_;
    BaseBall base_;
    int dim_;
    std::vector<Vec> points_;
    std::vector<Vec> vertices_;
    std::vector<Vec> facets_;
};

/// inf{t > 0 : x in t * body}, by bisection on t with an LP membership test.
inline double minkowski_gauge(const Vec &x, const HullBody &body, double tol = 1e-10) {
    require_dim(x, body.dim(), "minkowski_gauge");
    if (x.isZero(0.0))
        return 0.0;
    const double nx = norm(x, body.base_norm());
    double lo = nx / body.outer_radius() * (1.0 - 1e-12);
    double hi = nx / body.rho() * (1.0 + 1e-12);
    if (!body.contains_scaled(x, hi)) {
        std::ostringstream os;
        os.precision(17);
        os << "minkowski_gauge: upper bracket " << hi << " infeasible at x=" << format_vec(x);
        throw InternalError(os.str());
    }
    if (body.contains_scaled(x, lo))
        return lo;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (body.contains_scaled(x, mid))
            hi = mid;
        else
            lo = mid;
    }
    if (hi - lo > tol)
        throw InternalError("minkowski_gauge: bisection did not converge at x=" + format_vec(x));
    return 0.5 * (lo + hi);
}

} // namespace dcx

#endif
