// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance --only N   run criterion N (13 reruns 1..12 twice)

#include "dcx/dcx.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cstring>
#include <iostream>

using namespace dcx;

namespace {

const std::string kWs = DCX_WORKSPACES;

struct Outcome {
    bool pass = true;
    Json report = Json::object(); // seed-determined content only, no timings
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Vec v2(double a, double b) { return make_vec({a, b}); }

ControlCheckOptions strict(std::size_t segments) {
    ControlCheckOptions o;
    o.tol = 1e-8;
    o.segments = segments;
    o.duals = 64;
    o.seed = 1;
    return o;
}

Outcome criterion_1() {
    Outcome o;
    Json rows = Json::array();
    for (int n = 1; n <= 20; ++n) {
        const double x = -std::ldexp(1.0, -n) * (1.0 + 1e-9);
        const long v = chyba_v(x);
        const double tv =
            total_variation([](double t) { return static_cast<double>(chyba_d(t)); }, -1.0, x, 2 * n + 4);
        const bool ok = v == n && tv == static_cast<double>(n);
        o.pass = o.pass && ok;
        rows.push_back({{"n", n}, {"chyba_v", v}, {"brute_force", tv}, {"expected", n}});
    }
    o.report["rows"] = rows;
    return o;
}

Outcome criterion_2() {
    Outcome o;
    const auto r = chyba_exact(0.0);
    const double c1 = r.c1.convert_to<double>(), g = r.g.convert_to<double>();
    // Adaptive quadrature of d and v piece by piece; the tail beyond 2^-60 is
    // below 60 * 2^-60.
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double qg = 0.0, qc1 = 0.0;
    for (int k = 1; k <= 60; ++k) {
        const double a = -std::ldexp(1.0, 1 - k), b = -std::ldexp(1.0, -k);
        const double lo = a, hi = std::nextafter(b, a);
        qg += GK::integrate([](double t) { return static_cast<double>(chyba_d(t)); }, lo, hi, 5, 1e-12);
        qc1 += GK::integrate([](double t) { return static_cast<double>(chyba_v(t)); }, lo, hi, 5, 1e-12);
    }
    o.pass = std::abs(c1 - 1.0) <= 1e-12 && std::abs(g - 2.0 / 3.0) <= 1e-12 && std::abs(qg - g) <= 1e-6 &&
             std::abs(qc1 - c1) <= 1e-6;
    o.report = {{"c1_0", c1}, {"g_0", g}, {"quadrature_g", qg}, {"quadrature_c1", qc1}};
    return o;
}

Outcome criterion_3() {
    Outcome o;
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = -1.0 + i / 10000.0;
        const auto [c1, c2] = chyba_c1_c2(x);
        worst = std::max(worst, std::abs(c1 - c2 - chyba_g(x)));
    }
    o.pass = worst <= 1e-12;
    o.report = {{"grid", 10001}, {"max_error", worst}};
    return o;
}

Outcome criterion_4() {
    Outcome o;
    Json rows = Json::array();
    for (int L = 1; L <= 20; ++L) {
        const auto w = variation_witness(L);
        o.pass = o.pass && w.exceeds;
        rows.push_back(to_json(w));
    }
    o.report["witnesses"] = rows;
    return o;
}

struct ComposeCase {
    std::string name;
    DCMapping F, G;
    double lipG, lipg;
};

std::vector<ComposeCase> compose_cases() {
    const double e = std::exp(1.0), r2 = std::sqrt(2.0);
    const ConvexSet I2 = ConvexSet::interval(-2, 2, true), I1 = ConvexSet::interval(-1, 1, true);
    const ConvexFn abs1 = norm_fn(Norm::l2, scalar_vec(0.0));
    const ConvexFn sq1 = quadratic_fn(Mat::Identity(1, 1));
    std::vector<ComposeCase> cs;
    {
        const ConvexSet B = ConvexSet::interval(0, 2, false);
        DCMapping G(B, [](const Vec &y) { return scalar_vec(y[0] * y[0]); }, 1, sq1.restricted(B), {"y^2"});
        cs.push_back({"abs then square", as_mapping(from_convex(abs1.restricted(I2))), G, 4.0, 4.0});
    }
    {
        const ConvexSet B = ConvexSet::interval(0, 1, false);
        DCMapping G(B, [](const Vec &y) { return scalar_vec(std::sin(y[0])); }, 1,
                    half_sq_norm_scaled(1, 0.5).restricted(B), {"sin"});
        cs.push_back({"square then sin", as_mapping(from_convex(sq1.restricted(I1))), G, 1.0, 1.0});
    }
    {
        const ConvexSet A = ConvexSet::box(v2(-1, -1), v2(1, 1), true);
        const ConvexSet B = ConvexSet::box(v2(0, -1), v2(r2, 1), false, Norm::linf);
        const DCMapping F = bundle({from_convex(norm_fn(Norm::l2, Vec::Zero(2)).restricted(A)),
                                    affine_dc(A, v2(1, 0), 0.0)});
        DCMapping G(B, [](const Vec &y) { return scalar_vec(y[0] * y[1]); }, 1,
                    half_sq_norm_scaled(2, 0.5).restricted(B), {"y1 y2"});
        cs.push_back({"(|x|, x1) then product", F, G, 1 + r2, 1 + r2});
    }
    {
        const ConvexSet B = ConvexSet::box(v2(-1, 0), v2(1, 1), false, Norm::linf);
        const DCMapping F = bundle({affine_dc(I1, scalar_vec(1.0), 0.0), from_convex(abs1.restricted(I1))});
        const ConvexFn ex = smooth_fn(2, "exp(y1)", [](const Vec &y) { return std::exp(y[0]); });
        DCMapping G(B, [](const Vec &y) { return scalar_vec(std::exp(y[0]) + y[1]); }, 1, ex.restricted(B),
                    {"exp(y1) + y2"});
        cs.push_back({"(x, |x|) then exp plus", F, G, e + 1, e});
    }
    {
        const ConvexSet B = ConvexSet::interval(-1, 1, false);
        DCMapping G(B, [](const Vec &y) { return v2(std::sin(y[0]), std::cos(y[0])); }, 2, sq1.restricted(B),
                    {"(sin, cos)"});
        cs.push_back({"x then (sin, cos)", as_mapping(affine_dc(I1, scalar_vec(1.0), 0.0)), G, 1.0, 2.0});
    }
    return cs;
}

Outcome criterion_5() {
    Outcome o;
    const auto t0 = Clock::now();
    Json rows = Json::array();
    for (const auto &c : compose_cases()) {
        const DCMapping H = compose(c.F, c.G, LipschitzCertificate::analytic(c.lipG, c.G.domain()),
                                    LipschitzCertificate::analytic(c.lipg, c.G.domain()));
        const auto r = check_control(H, strict(100000));
        o.pass = o.pass && r.pass;
        rows.push_back({{"case", c.name}, {"check", r.to_json()}});
    }
    const double t = seconds_since(t0);
    o.pass = o.pass && t < 10.0;
    o.report["cases"] = rows;
    std::cerr << "  criterion 5: " << t << " s (limit 10 s)\n";
    return o;
}

Outcome criterion_6() {
    Outcome o;
    const auto t0 = Clock::now();
    Json rows = Json::array();
    for (const char *name : {"exp_abs.json", "fh_quotient.json"}) {
        const Workspace w = workspace_from_json(read_json_file(kWs + "/" + name));
        const DCFunction f = build_expression(w);
        const auto r = check_control(f, strict(100000));
        o.pass = o.pass && r.pass;
        rows.push_back({{"workspace", name}, {"provenance", f.provenance()}, {"check", r.to_json()}});
    }
    const double t = seconds_since(t0);
    o.pass = o.pass && t < 30.0;
    o.report["workspaces"] = rows;
    std::cerr << "  criterion 6: " << t << " s (limit 30 s)\n";
    return o;
}

Outcome criterion_7() {
    Outcome o;
    const Json spec = read_json_file(kWs + "/glued_sin.json");
    const GluedFunction G = run_glue_spec(glue_spec_from_json(spec));
    const ConvexSet region = ConvexSet::interval(-20, 20, false);
    const auto ctrl = check_control(G.fn, strict(100000));
    const auto conv = check_segment_convex([c = G.result.control](const Vec &x) { return c.value_unchecked(x); },
                                           region, 100000, 5, 1e-8, 1);
    auto with_count = [&spec](int N) {
        Json j = spec;
        j["stages"]["symmetric_intervals"]["count"] = N;
        return run_glue_spec(glue_spec_from_json(j)).result;
    };
    const GlueResult a = with_count(3), b = with_count(6);
    std::size_t mismatches = 0;
    for (int i = -899; i <= 899; ++i) {
        const Vec x = scalar_vec(i / 1000.0);
        if (a.control.value_unchecked(x) != b.control.value_unchecked(x))
            ++mismatches;
    }
    o.pass = G.result.stages == 22 && ctrl.pass && conv.pass && mismatches == 0;
    o.report = {{"stages", G.result.stages},
                {"control_check", ctrl.to_json()},
                {"convexity_check", conv.to_json()},
                {"stabilization_mismatches", mismatches}};
    return o;
}

Outcome criterion_8() {
    Outcome o;
    const HullBody B = body_from_json(read_json_file(kWs + "/octagon.json"));
    const double g = minkowski_gauge(v2(0.75, 0.75), B);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> Z;
    std::uniform_real_distribution<double> T(-5.0, 5.0);
    double hom = 0.0, tri = -kInf;
    for (int i = 0; i < 1000; ++i) {
        const Vec x = v2(Z(rng), Z(rng)), y = v2(Z(rng), Z(rng));
        const double t = T(rng);
        const double gx = minkowski_gauge(x, B);
        hom = std::max(hom, std::abs(minkowski_gauge(t * x, B) - std::abs(t) * gx) / (1.0 + std::abs(t) * gx));
        tri = std::max(tri, minkowski_gauge(x + y, B) - gx - minkowski_gauge(y, B));
    }
    o.pass = std::abs(g - 1.5) <= 1e-9 && hom <= 1e-9 && tri <= 1e-9;
    o.report = {{"gauge", g}, {"homogeneity_error", hom}, {"triangle_excess", tri}, {"samples", 1000}};
    return o;
}

Outcome criterion_9() {
    Outcome o;
    const auto t0 = Clock::now();
    const Json spec = read_json_file(kWs + "/bumps.json");
    std::vector<Vec> targets;
    for (const Json &y : spec["targets"])
        targets.push_back(vec_from_json(y, "target"));
    const BumpSystem S = make_bump_system(2, targets, spec["rho"].get<double>());
    const BumpMapping B = build_bump_mapping(S);
    const DCMapping Phi = build_bump_scaled(S);
    bool exact = true;
    for (int n = 0; n < 2; ++n)
        exact = exact && B.H.value_fn()(S.e(n)) == targets[static_cast<std::size_t>(n)];
    const bool h0 = B.h.value_unchecked(Vec::Zero(2)) == 0.0;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> Z;
    int vanish = 0;
    for (int i = 0; i < 100; ++i) {
        Vec x = v2(Z(rng), Z(rng));
        x *= 1.01 / norm(x, Norm::linf);
        vanish += Phi.value_fn()(x).isZero(0.0) ? 1 : 0;
    }
    ControlCheckOptions co = strict(10000);
    co.window = Box{Vec::Constant(2, -1.5), Vec::Constant(2, 1.5)};
    const auto ctrl = check_control(Phi, co);
    // H(x) lies on the segment [0, y_n] for some n.
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double rad = S.kappa() * std::sqrt(2.0 * S.delta);
    int off_segment = 0, nonzero = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec c = i % 2 ? S.e(i / 2 % 2) : Vec::Zero(2);
        // Regions are much smaller than the ball of radius rad, so spread over scales.
        const double spread = i % 2 ? 2.0 * rad * std::pow(10.0, -3.0 * (0.5 + 0.5 * U(rng))) : 1.5;
        const Vec x = c + spread * v2(U(rng), U(rng));
        const Vec h = B.H.value_fn()(x);
        if (h.isZero(0.0))
            continue;
        ++nonzero;
        bool on = false;
        for (const Vec &y : targets) {
            const double t = h.dot(y) / y.squaredNorm();
            on = on || (t >= 0.0 && t <= 1.0 && (h - t * y).norm() <= 1e-12 * y.norm());
        }
        off_segment += on ? 0 : 1;
    }
    const double t = seconds_since(t0);
    o.pass = exact && h0 && vanish == 100 && ctrl.pass && off_segment == 0 && nonzero > 0 && t < 20.0;
    o.report = {{"delta", S.delta},
                {"H_at_basis_exact", exact},
                {"h_at_zero", h0},
                {"vanishing_points", vanish},
                {"control_check", ctrl.to_json()},
                {"segment_samples_nonzero", nonzero},
                {"segment_violations", off_segment}};
    std::cerr << "  criterion 9: " << t << " s (limit 20 s)\n";
    return o;
}

Outcome criterion_10() {
    Outcome o;
    const HullBody B(0.5, BaseBall::linf, {v2(1, 0), v2(0, 1)}, 2);
    const double c_hull = 2.0 / (1.0 - 1.0 * 0.5);
    Json rows = Json::array();
    for (double delta : {0.01, 0.1, 0.4}) {
        const auto a = strexp_check(norm_oracle(Norm::l1, 2), v2(1, 0), v2(1, 0), 2.0, delta, 1000000, 10);
        const auto b = strexp_check(norm_oracle(B), v2(1, 0), v2(1, 0), c_hull, delta, 1000000, 11);
        o.pass = o.pass && a.pass && b.pass;
        rows.push_back({{"delta", delta}, {"l1", a.to_json()}, {"hull", b.to_json()}});
    }
    o.report["runs"] = rows;
    return o;
}

Outcome criterion_11() {
    Outcome o;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> Z;
    double recon = 0.0, floor = kInf;
    for (int k = 0; k < 100; ++k) {
        const int d = 1 + k % 3;
        Mat M(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                M(i, j) = Z(rng);
        const QuadraticForm Q(0.5 * (M + M.transpose()));
        const auto [P1, P2] = quadratic_dc_split(Q);
        recon = std::max(recon, (P1.matrix - P2.matrix - Q.matrix).cwiseAbs().maxCoeff());
        for (const Mat &P : {P1.matrix, P2.matrix})
            floor = std::min(floor, Eigen::SelfAdjointEigenSolver<Mat>(P).eigenvalues().minCoeff());
    }
    o.pass = recon <= 1e-10 && floor >= -1e-12;
    o.report = {{"matrices", 100}, {"reconstruction_error", recon}, {"eigenvalue_floor", floor}};
    return o;
}

Outcome criterion_12() {
    Outcome o;
    const ConvexSet C = ConvexSet::interval(-1, 1, false);
    const ConvexFn f = quadratic_fn(Mat::Identity(1, 1)).restricted(C);
    const ConvexFn fh = lipschitz_extension(f, C, 2.0);
    const double at2 = fh(scalar_vec(2.0));
    double agree = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const Vec x = scalar_vec(-1.0 + i / 1000.0);
        agree = std::max(agree, std::abs(fh(x) - f(x)));
    }
    const ConvexSet wide = ConvexSet::interval(-10, 10, false);
    auto val = [fh](const Vec &x) { return fh.value_unchecked(x); };
    const double lip = estimate_lipschitz(val, wide, 100000, 12);
    const auto conv = check_segment_convex(val, wide, 100000, 5, 1e-10, 12);
    o.pass = std::abs(at2 - 3.0) <= 1e-6 && agree <= 1e-12 && lip <= 2.0 + 1e-6 && conv.pass;
    o.report = {{"value_at_2", at2}, {"max_gap_on_C", agree}, {"empirical_lipschitz", lip},
                {"convexity_check", conv.to_json()}};
    return o;
}

Outcome run(int n);

Outcome criterion_13() {
    Outcome o;
    std::vector<std::string> first, second;
    for (int n = 1; n <= 12; ++n)
        first.push_back(canonical_json(run(n).report));
    for (int n = 1; n <= 12; ++n)
        second.push_back(canonical_json(run(n).report));
    Json diff = Json::array();
    for (std::size_t i = 0; i < first.size(); ++i)
        if (first[i] != second[i])
            diff.push_back(static_cast<int>(i + 1));
    o.pass = diff.empty();
    o.report = {{"criteria_compared", 12}, {"differing", diff}};
    return o;
}

Outcome run(int n) {
    switch (n) {
    case 1: return criterion_1();
    case 2: return criterion_2();
    case 3: return criterion_3();
    case 4: return criterion_4();
    case 5: return criterion_5();
    case 6: return criterion_6();
    case 7: return criterion_7();
    case 8: return criterion_8();
    case 9: return criterion_9();
    case 10: return criterion_10();
    case 11: return criterion_11();
    case 12: return criterion_12();
    case 13: return criterion_13();
    }
    throw InputError("no criterion " + std::to_string(n));
}

// Runtime limits in seconds for the whole criterion, where one is stated.
double limit(int n) {
    switch (n) {
    case 1: case 2: return 1.0;
    case 5: return 10.0;
    case 6: return 30.0;
    case 9: return 20.0;
    }
    return kInf;
}

} // namespace

int main(int argc, char **argv) {
    std::vector<int> which;
    if (argc == 3 && std::strcmp(argv[1], "--only") == 0) {
        which.push_back(std::atoi(argv[2]));
    } else if (argc == 1) {
        for (int n = 1; n <= 13; ++n)
            which.push_back(n);
    } else {
        std::cerr << "usage: acceptance [--only N]\n";
        return 2;
    }
    bool all = true;
    for (int n : which) {
        bool pass = false;
        std::string detail;
        const auto t0 = Clock::now();
        try {
            const Outcome o = run(n);
            const double t = seconds_since(t0);
            pass = o.pass && t < limit(n);
            detail = o.report.dump();
            if (detail.size() > 4000)
                detail = detail.substr(0, 4000) + "...";
            char buf[64];
            std::snprintf(buf, sizeof buf, " [%.2f s]", t);
            detail += buf;
        } catch (const std::exception &e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << "criterion " << n << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
        all = all && pass;
    }
    return all ? 0 : 1;
}
