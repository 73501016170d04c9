#ifndef DCX_LINALG_HPP
#define DCX_LINALG_HPP

#include "dcx/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>

namespace dcx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Norm { l1, l2, linf };

inline double norm(const Vec &x, Norm n) {
    switch (n) {
    case Norm::l1:
        return x.lpNorm<1>();
    case Norm::l2:
        return x.norm();
    case Norm::linf:
        return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
    }
    return 0.0;
}

/// The norm dual to `n` on R^d (l1 <-> linf, l2 self-dual).
constexpr Norm dual(Norm n) {
    switch (n) {
    case Norm::l1:
        return Norm::linf;
    case Norm::linf:
        return Norm::l1;
    default:
        return Norm::l2;
    }
}

inline double dual_norm(const Vec &y, Norm n) { return norm(y, dual(n)); }

inline std::string to_string(Norm n) {
    switch (n) {
    case Norm::l1:
        return "l1";
    case Norm::l2:
        return "l2";
    case Norm::linf:
        return "linf";
    }
    return "?";
}

inline Norm parse_norm(std::string_view s) {
    if (s == "l1")
        return Norm::l1;
    if (s == "l2")
        return Norm::l2;
    if (s == "linf")
        return Norm::linf;
    throw InputError("unknown norm '" + std::string(s) + "' (expected l1, l2 or linf)");
}

inline Vec make_vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v[i++] = x;
    return v;
}

inline Vec scalar_vec(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

inline std::string format_vec(const Vec &x) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (Eigen::Index i = 0; i < x.size(); ++i)
        os << (i ? "," : "") << x[i];
    os << ')';
    return os.str();
}

inline void require_dim(const Vec &x, Eigen::Index d, const char *what) {
    if (x.size() != d) {
        std::ostringstream os;
        os << what << ": dimension mismatch (got " << x.size() << ", expected " << d << ")";
        throw InputError(os.str());
    }
}

} // namespace dcx

#endif
