#ifndef DCX_DETAIL_SIMPLEX_HPP
#define DCX_DETAIL_SIMPLEX_HPP

// Dense two-phase simplex with Bland's rule. Problem sizes here are tiny
// (a handful of variables in dimension <= 3), so no attempt at sparsity.

#include "dcx/errors.hpp"
#include "dcx/linalg.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace dcx::detail {

struct LpResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    Vec x;
    double value = 0.0;

    bool optimal() const { return status == Status::optimal; }
};

class SimplexTableau {
public:
    SimplexTableau(Mat A, Vec b, double eps) : eps_(eps) {
        m_ = static_cast<int>(A.rows());
        n_ = static_cast<int>(A.cols());
        for (int i = 0; i < m_; ++i) {
            if (b[i] < 0) {
                A.row(i) *= -1.0;
                b[i] = -b[i];
            }
        }
        t_ = Mat::Zero(m_, n_ + m_ + 1);
        t_.leftCols(n_) = A;
        t_.block(0, n_, m_, m_).setIdentity();
        t_.col(n_ + m_) = b;
        basis_.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i)
            basis_[static_cast<std::size_t>(i)] = n_ + i;
        allowed_.assign(static_cast<std::size_t>(n_ + m_), true);
    }

    // Returns false when the objective is unbounded below.
    bool run(const Vec &cost) {
        const int cols = n_ + m_;
        for (int iter = 0; iter < 100000; ++iter) {
            int enter = -1;
            for (int j = 0; j < cols && enter < 0; ++j) {
                if (!allowed_[static_cast<std::size_t>(j)] || in_basis(j))
                    continue;
                double r = cost[j];
                for (int i = 0; i < m_; ++i)
                    r -= cost[basis_[static_cast<std::size_t>(i)]] * t_(i, j);
                if (r < -eps_)
                    enter = j;
            }
            if (enter < 0)
                return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                const double a = t_(i, enter);
                if (a <= eps_)
                    continue;
                const double ratio = t_(i, cols) / a;
                if (leave < 0 || ratio < best - 1e-14 ||
                    (std::abs(ratio - best) <= 1e-14 &&
                     basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
        }
        throw InternalError("simplex: iteration limit exceeded");
    }

    double artificial_sum() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] >= n_)
                s += t_(i, n_ + m_);
        return s;
    }

    // Pivot artificials out of the basis where possible and forbid them
    // from re-entering.
    void retire_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < n_)
                continue;
            for (int j = 0; j < n_; ++j) {
                if (!in_basis(j) && std::abs(t_(i, j)) > eps_) {
                    pivot(i, j);
                    break;
                }
            }
        }
        for (int j = n_; j < n_ + m_; ++j)
            allowed_[static_cast<std::size_t>(j)] = false;
    }

    Vec solution() const {
        Vec x = Vec::Zero(n_);
        for (int i = 0; i < m_; ++i) {
            const int b = basis_[static_cast<std::size_t>(i)];
            if (b < n_)
                x[b] = t_(i, n_ + m_);
        }
        return x;
    }

    int variables() const { return n_; }
    int rows() const { return m_; }

private:
    bool in_basis(int j) const {
        for (int b : basis_)
            if (b == j)
                return true;
        return false;
    }

    void pivot(int row, int col) {
        t_.row(row) /= t_(row, col);
        for (int i = 0; i < m_; ++i) {
            if (i == row)
                continue;
            const double f = t_(i, col);
            if (f != 0.0)
                t_.row(i) -= f * t_.row(row);
        }
        basis_[static_cast<std::size_t>(row)] = col;
    }

    double eps_;
    int m_ = 0;
    int n_ = 0;
    Mat t_;
    std::vector<int> basis_;
    std::vector<bool> allowed_;
};

/// minimize c^T x subject to A x = b, x >= 0.
inline LpResult simplex_standard(const Mat &A, const Vec &b, const Vec &c, double eps = 1e-11,
                                 double feasibility_tol = 1e-9) {
    if (A.rows() != b.size() || A.cols() != c.size())
        throw InputError("simplex: inconsistent problem dimensions");
    LpResult out;
    SimplexTableau tab(A, b, eps);
    const int n = tab.variables();
    const int m = tab.rows();
    Vec phase1 = Vec::Zero(n + m);
    phase1.tail(m).setOnes();
    tab.run(phase1);
    if (tab.artificial_sum() > feasibility_tol * (1.0 + b.lpNorm<1>())) {
        out.status = LpResult::Status::infeasible;
        return out;
    }
    tab.retire_artificials();
    Vec phase2 = Vec::Zero(n + m);
    phase2.head(n) = c;
    if (!tab.run(phase2)) {
        out.status = LpResult::Status::unbounded;
        return out;
    }
    out.status = LpResult::Status::optimal;
    out.x = tab.solution();
    out.value = c.dot(out.x);
    return out;
}

/// minimize c^T z over free z subject to A_ub z <= b_ub and A_eq z = b_eq.
/// Either constraint block may have zero rows.
inline LpResult solve_lp(const Vec &c, const Mat &A_ub, const Vec &b_ub, const Mat &A_eq,
                         const Vec &b_eq) {
    const Eigen::Index k = c.size();
    const Eigen::Index mu = A_ub.rows();
    const Eigen::Index me = A_eq.rows();
    if ((mu > 0 && A_ub.cols() != k) || (me > 0 && A_eq.cols() != k))
        throw InputError("solve_lp: constraint width does not match cost vector");
    Mat A = Mat::Zero(mu + me, 2 * k + mu);
    Vec b(mu + me);
    if (mu > 0) {
        A.block(0, 0, mu, k) = A_ub;
        A.block(0, k, mu, k) = -A_ub;
        A.block(0, 2 * k, mu, mu).setIdentity();
        b.head(mu) = b_ub;
    }
    if (me > 0) {
        A.block(mu, 0, me, k) = A_eq;
        A.block(mu, k, me, k) = -A_eq;
        b.tail(me) = b_eq;
    }
    Vec cost = Vec::Zero(2 * k + mu);
    cost.head(k) = c;
    cost.segment(k, k) = -c;
    LpResult r = simplex_standard(A, b, cost);
    if (r.optimal()) {
        Vec z = r.x.head(k) - r.x.segment(k, k);
        r.x = z;
        r.value = c.dot(z);
    }
    return r;
}

} // namespace dcx::detail

#endif
