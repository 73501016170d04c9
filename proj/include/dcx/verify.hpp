#ifndef DCX_VERIFY_HPP
#define DCX_VERIFY_HPP

// Randomized convexity and control checks. Work is split into fixed-size
// batches; each batch draws from its own generator seeded from the master seed
// and the batch index, and results are reduced in batch order, so reports do
// not depend on the number of threads.

#include "dcx/geometry.hpp"
#include "dcx/json_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace dcx {

using ScalarFn = std::function<double(const Vec &)>;

struct VerificationReport {
    std::string check;
    bool pass = true;
    double worst_violation = 0.0; // normalized by the local scale
    double worst_raw_excess = 0.0;
    std::vector<Vec> witness;
    std::map<std::string, long long> counts;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::vector<std::string> notes;

    void finalize() { pass = worst_violation <= tolerance; }

    Json to_json() const {
        Json j;
        j["check"] = check;
        j["pass"] = pass;
        j["worst_violation"] = worst_violation;
        j["worst_raw_excess"] = worst_raw_excess;
        Json loc = Json::array();
        for (const Vec &w : witness)
            loc.push_back(vec_to_json(w));
        j["location"] = loc;
        j["counts"] = Json(counts);
        j["seed"] = seed;
        j["tolerance"] = tolerance;
        j["notes"] = notes;
        return j;
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t batch_seed(std::uint64_t master, std::uint64_t batch) {
    return splitmix64(master ^ splitmix64(batch + 1));
}

/// Worker count: DCX_THREADS if set, else the hardware concurrency.
inline unsigned thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("DCX_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(std::min<long>(v, 256));
    }
    return hw;
}

/// Run fn(batch_index, begin, end) over [0, total) in batches and return the
/// per-batch results in order.
template <class R, class Fn>
std::vector<R> run_batches(std::size_t total, std::size_t batch, Fn fn) {
    const std::size_t nb = total == 0 ? 0 : (total + batch - 1) / batch;
    std::vector<R> out(nb);
    const unsigned nt = std::min<std::size_t>(thread_count(), std::max<std::size_t>(nb, 1));
    auto work = [&](unsigned t) {
        for (std::size_t b = t; b < nb; b += nt)
            out[b] = fn(b, b * batch, std::min(total, (b + 1) * batch));
    };
    if (nt <= 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nt);
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            try {
                work(t);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto &th : pool)
        th.join();
    for (auto &e : errs)
        if (e)
            std::rethrow_exception(e);
    return out;
}

struct Violation {
    double normalized = -kInf;
    double raw = -kInf;
    std::vector<Vec> where;

    void offer(double norm_excess, double raw_excess, std::vector<Vec> loc) {
        if (norm_excess > normalized) {
            normalized = norm_excess;
            raw = raw_excess;
            where = std::move(loc);
        }
    }
    void merge(const Violation &o) {
        if (o.normalized > normalized)
            *this = o;
    }
};

inline constexpr std::size_t kBatch = 1024;

/// A segment [x, y] inside C. Half the segments are shortened toward x by a
/// random factor in [1e-3, 1] so that local kinks are probed as well.
template <class Rng>
std::pair<Vec, Vec> sample_segment(const ConvexSet &C, Rng &rng, const std::optional<Box> &window) {
    Vec x = sample_point(C, rng, window);
    Vec y = sample_point(C, rng, window);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < 0.5)
        y = x + std::pow(10.0, -3.0 * u(rng)) * (y - x);
    return {x, y};
}

/// Core engine: for each segment i, eval(i, point) gives the function under
/// test. Points are equally spaced; second differences must be >= -tol*scale.
template <class Eval>
VerificationReport segment_check(const ConvexSet &C, std::size_t n_segments, int points, double tol,
                                 std::uint64_t seed, Eval eval, const std::optional<Box> &window = std::nullopt,
                                 std::string name = "segment_convex") {
    if (points < 3)
        throw InputError("segment check: need at least 3 points per segment");
    auto res = run_batches<Violation>(n_segments, kBatch, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::mt19937_64 rng(batch_seed(seed, b));
        Violation v;
        std::vector<double> vals(static_cast<std::size_t>(points));
        std::vector<Vec> pts(static_cast<std::size_t>(points));
        for (std::size_t i = lo; i < hi; ++i) {
            auto [x, y] = sample_segment(C, rng, window);
            for (int k = 0; k < points; ++k) {
                const double t = static_cast<double>(k) / (points - 1);
                pts[static_cast<std::size_t>(k)] = x + t * (y - x);
                vals[static_cast<std::size_t>(k)] = eval(i, pts[static_cast<std::size_t>(k)]);
            }
            for (int k = 1; k + 1 < points; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                const double d2 = vals[kk - 1] - 2.0 * vals[kk] + vals[kk + 1];
                const double scale = 1.0 + std::abs(vals[kk - 1]) + std::abs(vals[kk]) + std::abs(vals[kk + 1]);
                v.offer(-d2 / scale, -d2, {pts[kk - 1], pts[kk], pts[kk + 1]});
            }
        }
        return v;
    });
    Violation worst;
    for (const auto &v : res)
        worst.merge(v);
    VerificationReport r;
    r.check = std::move(name);
    r.seed = seed;
    r.tolerance = tol;
    r.counts["segments"] = static_cast<long long>(n_segments);
    r.counts["points_per_segment"] = points;
    if (n_segments > 0) {
        r.worst_violation = worst.normalized;
        r.worst_raw_excess = worst.raw;
        r.witness = worst.where;
    }
    r.finalize();
    return r;
}

inline VerificationReport check_segment_convex(const ScalarFn &f, const ConvexSet &C, std::size_t n_segments,
                                               int points_per_segment, double tol, std::uint64_t seed = 1,
                                               const std::optional<Box> &window = std::nullopt) {
    return segment_check(
        C, n_segments, points_per_segment, tol, seed, [&](std::size_t, const Vec &x) { return f(x); }, window);
}

inline VerificationReport check_midpoint_convex(const ScalarFn &f, const ConvexSet &C, std::size_t n_triples,
                                                double tol, std::uint64_t seed = 1,
                                                const std::optional<Box> &window = std::nullopt) {
    auto res = run_batches<Violation>(n_triples, kBatch, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::mt19937_64 rng(batch_seed(seed, b));
        Violation v;
        for (std::size_t i = lo; i < hi; ++i) {
            auto [x, y] = sample_segment(C, rng, window);
            const double fx = f(x), fy = f(y);
            const Vec m = 0.5 * (x + y);
            const double excess = f(m) - 0.5 * (fx + fy);
            v.offer(excess / (1.0 + std::abs(fx) + std::abs(fy)), excess, {x, y});
        }
        return v;
    });
    Violation worst;
    for (const auto &v : res)
        worst.merge(v);
    VerificationReport r;
    r.check = "midpoint_convex";
    r.seed = seed;
    r.tolerance = tol;
    r.counts["triples"] = static_cast<long long>(n_triples);
    if (n_triples > 0) {
        r.worst_violation = worst.normalized;
        r.worst_raw_excess = worst.raw;
        r.witness = worst.where;
    }
    r.finalize();
    return r;
}

/// Grid for total variation of dyadic step functions on [a, b]: the points
/// +-2^k (1 + i/2^8), i < 2^8, for 2^k between 2^-depth and max(|a|,|b|),
/// together with a, b and 0. Any breakpoint with at most 8 significant bits
/// and magnitude >= 2^-depth is on the grid, and consecutive such breakpoints
/// have a grid point strictly between them.
inline std::vector<double> dyadic_variation_grid(double a, double b, int depth) {
    constexpr int q = 8;
    std::set<double> pts{a, b};
    if (a < 0.0 && b > 0.0)
        pts.insert(0.0);
    const double top = std::max(std::abs(a), std::abs(b));
    int kmax = 0;
    std::frexp(top, &kmax);
    for (int k = -depth; k <= kmax; ++k) {
        const double base = std::ldexp(1.0, k);
        for (int i = 0; i < (1 << q); ++i) {
            const double m = base * (1.0 + std::ldexp(static_cast<double>(i), -q));
            if (m > a && m < b)
                pts.insert(m);
            if (-m > a && -m < b)
                pts.insert(-m);
        }
    }
    return {pts.begin(), pts.end()};
}

/// Variation sum over the dyadic grid; exact for step functions whose
/// breakpoints sit on the grid.
inline double total_variation(const std::function<double(double)> &step_fn, double a, double b, int depth) {
    if (!(a < b))
        throw InputError("total_variation: need a < b");
    if (depth < 0 || depth > 1000)
        throw InputError("total_variation: depth out of range");
    const auto grid = dyadic_variation_grid(a, b, depth);
    double tv = 0.0;
    double prev = step_fn(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = step_fn(grid[i]);
        tv += std::abs(cur - prev);
        prev = cur;
    }
    return tv;
}

/// Largest |f(x) - f(y)| / ||x - y|| over sampled pairs in C; a lower bound
/// on the Lipschitz constant. Half the pairs are close together.
inline double estimate_lipschitz(const ScalarFn &f, const ConvexSet &C, std::size_t n_samples,
                                 std::uint64_t seed = 1, const std::optional<Box> &window = std::nullopt) {
    if (n_samples < 2)
        throw InputError("estimate_lipschitz: need at least 2 samples");
    const Norm n = C.ambient();
    auto res = run_batches<double>(n_samples, kBatch, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::mt19937_64 rng(batch_seed(seed, b));
        double best = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            auto [x, y] = sample_segment(C, rng, window);
            const double d = norm(x - y, n);
            if (d > 0.0)
                best = std::max(best, std::abs(f(x) - f(y)) / d);
        }
        return best;
    });
    double best = 0.0;
    for (double v : res)
        best = std::max(best, v);
    return best;
}

} // namespace dcx

#endif
