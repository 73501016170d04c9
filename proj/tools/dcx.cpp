// dcx: command-line front end.
//
//   dcx decompose WORKSPACE        build the root expression and check its control
//   dcx glue SPEC                  glue stage controls, check the result
//   dcx verify --fn FILE           re-check a workspace or glue spec
//   dcx gallery chyba --grid N     CSV of x,d,g,v,c1,c2
//   dcx gallery bumps --spec FILE  bump mapping checks
//   dcx gauge --body FILE --point a,b
//
// Exit codes: 0 pass, 1 verification failure, 2 input error, 3 internal error.

#include "dcx/dcx.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace dcx;

namespace {

struct Common {
    std::string out;
    std::uint64_t seed = 1;
    std::optional<double> tol;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> grid;
    std::string norm;
};

void emit(const std::string &text, const std::string &out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f)
        throw InputError("cannot write " + out);
    f << text;
}

std::vector<double> parse_point(const std::string &s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw InputError("--point: cannot parse '" + item + "'");
        }
    }
    if (v.empty())
        throw InputError("--point: empty");
    return v;
}

Json value_samples(const DCFunction &f, std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    Json arr = Json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const Vec x = sample_point(f.domain(), rng);
        arr.push_back({{"x", vec_to_json(x)}, {"value", f(x)}, {"control", f.control().value_unchecked(x)}});
    }
    return arr;
}

int decompose_workspace(const Json &j, const Common &c, std::optional<std::size_t> segments) {
    Workspace w = workspace_from_json(j);
    if (!c.norm.empty())
        w.norm = parse_norm(c.norm);
    if (c.seed != 1)
        w.seed = c.seed;
    DCFunction f = build_expression(w);
    ControlCheckOptions o;
    o.seed = w.seed;
    o.tol = c.tol.value_or(w.tolerance);
    o.segments = segments.value_or(c.samples.value_or(w.segments));
    o.duals = w.duals;
    VerificationReport r = check_control(f, o);
    Json rep;
    rep["pass"] = r.pass;
    rep["provenance"] = f.provenance();
    rep["empirical"] = f.empirical();
    rep["domain"] = set_to_json(f.domain());
    rep["samples"] = value_samples(f, w.seed, 8);
    rep["verification"] = r.to_json();
    emit(canonical_json(rep), c.out);
    return r.pass ? 0 : 1;
}

int glue_and_check(const Json &j, const Common &c, std::optional<std::size_t> segments) {
    GlueSpec g = glue_spec_from_json(j);
    if (c.seed != 1)
        g.options.seed = c.seed;
    GluedFunction G = run_glue_spec(g);
    ControlCheckOptions o;
    o.seed = c.seed;
    o.tol = c.tol.value_or(1e-8);
    o.segments = segments.value_or(c.samples.value_or(100000));
    VerificationReport ctrl = check_control(G.fn, o);
    VerificationReport conv = check_segment_convex(
        [f = G.fn.control()](const Vec &x) { return f.value_unchecked(x); }, G.fn.domain(), o.segments, 5, o.tol,
        c.seed);
    Json rep;
    rep["pass"] = ctrl.pass && conv.pass;
    rep["stages"] = G.result.stages;
    rep["certified"] = set_to_json(G.result.certified);
    rep["domain"] = set_to_json(G.fn.domain());
    rep["constants"] = G.result.constants();
    rep["notes"] = G.result.notes;
    rep["control_check"] = ctrl.to_json();
    rep["convexity_check"] = conv.to_json();
    emit(canonical_json(rep), c.out);
    return ctrl.pass && conv.pass ? 0 : 1;
}

int cmd_glue(const std::string &spec, const Common &c) {
    const Json j = read_json_file(spec);
    if (c.grid) {
        GlueSpec g = glue_spec_from_json(j);
        GluedFunction G = run_glue_spec(g);
        auto bb = G.result.certified.bounding_box();
        if (!bb || G.result.certified.dim() != 1)
            throw InputError("glue --grid: CSV dumps need a bounded one-dimensional certified region");
        std::vector<Vec> pts;
        const std::size_t n = *c.grid;
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back(scalar_vec(bb->lo[0] + (bb->hi[0] - bb->lo[0]) * (static_cast<double>(i) + 0.5) /
                                                     static_cast<double>(n)));
        emit(glue_stage_csv(G.result, pts), c.out);
        return 0;
    }
    return glue_and_check(j, c, std::nullopt);
}

int cmd_verify(const std::string &file, const Common &c, std::optional<std::size_t> segments) {
    const Json j = read_json_file(file);
    if (j.is_object() && j.contains("kind") && j["kind"] == "glue")
        return glue_and_check(j, c, segments);
    return decompose_workspace(j, c, segments);
}

int cmd_bumps(const std::string &spec, const Common &c) {
    const Json j = read_json_file(spec);
    const int m = static_cast<int>(json_number(j, "dimension", "bump spec"));
    std::vector<Vec> targets;
    for (const Json &y : json_field(j, "targets", "bump spec"))
        targets.push_back(vec_from_json(y, "target"));
    std::optional<double> rho, delta;
    if (j.contains("rho"))
        rho = json_number(j, "rho", "bump spec");
    if (j.contains("delta"))
        delta = json_number(j, "delta", "bump spec");
    const Norm cod = j.contains("codomain") ? parse_norm(json_string(j, "codomain", "bump spec")) : Norm::linf;
    BumpSystem S = make_bump_system(m, targets, rho, delta, cod);
    BumpMapping B = build_bump_mapping(S);
    DCMapping Phi = build_bump_scaled(S);
    const std::size_t n = c.samples.value_or(10000);

    bool exact = true;
    for (int k = 0; k < m; ++k)
        exact = exact && (B.H.value_fn()(S.e(k)) - targets[static_cast<std::size_t>(k)]).isZero(0.0);
    const bool h0 = B.h.value_unchecked(Vec::Zero(m)) == 0.0;
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> Z;
    bool outside = true;
    for (int i = 0; i < 100; ++i) {
        Vec x(m);
        for (int k = 0; k < m; ++k)
            x[k] = Z(rng);
        x *= 1.01 / norm(x, Norm::linf);
        outside = outside && Phi.value_fn()(x).isZero(0.0);
    }
    ControlCheckOptions o;
    o.segments = n;
    o.seed = c.seed;
    o.tol = c.tol.value_or(1e-8);
    o.window = Box{Vec::Constant(m, -1.5), Vec::Constant(m, 1.5)};
    VerificationReport ctrl = check_control(Phi, o);
    VerificationReport regions = check_bump_regions(S, n, c.seed);

    Json rep;
    rep["delta"] = S.delta;
    rep["rho"] = S.rho;
    rep["H_at_basis_is_target"] = exact;
    rep["h_at_zero_is_zero"] = h0;
    rep["phi_vanishes_outside_ball"] = outside;
    rep["control_check"] = ctrl.to_json();
    rep["region_check"] = regions.to_json();
    const bool pass = exact && h0 && outside && ctrl.pass && regions.pass;
    rep["pass"] = pass;
    emit(canonical_json(rep), c.out);
    return pass ? 0 : 1;
}

int cmd_gauge(const std::string &body_file, const std::string &point, const Common &c) {
    const HullBody body = body_from_json(read_json_file(body_file));
    const auto v = parse_point(point);
    if (static_cast<int>(v.size()) != body.dim())
        throw InputError("--point: expected " + std::to_string(body.dim()) + " coordinates");
    Vec x(body.dim());
    for (int i = 0; i < body.dim(); ++i)
        x[i] = v[static_cast<std::size_t>(i)];
    // The gauge is bisected to 1e-10, so ten significant digits are meaningful.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g\n", minkowski_gauge(x, body));
    emit(buf, c.out);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"d.c. function calculus"};
    app.require_subcommand(1);
    Common c;
    auto common = [&c](CLI::App *s) {
        s->add_option("--out", c.out, "output file (default stdout)");
        s->add_option("--seed", c.seed, "master seed");
        s->add_option("--tol", c.tol, "verification tolerance");
        s->add_option("--samples", c.samples, "sample or segment count");
        s->add_option("--grid", c.grid, "grid size for CSV dumps");
        s->add_option("--norm", c.norm, "ambient norm override")->check(CLI::IsMember({"l1", "l2", "linf"}));
    };

    std::string ws, spec, fn, body, point, bump_spec;
    std::optional<std::size_t> segments;
    auto *dec = app.add_subcommand("decompose", "build and check a workspace expression");
    dec->add_option("workspace", ws, "workspace JSON")->required();
    common(dec);
    auto *gl = app.add_subcommand("glue", "glue stage controls from a glue spec");
    gl->add_option("spec", spec, "glue spec JSON")->required();
    common(gl);
    auto *ver = app.add_subcommand("verify", "re-check a workspace or glue spec");
    ver->add_option("--fn", fn, "workspace or glue spec JSON")->required();
    ver->add_option("--segments", segments, "segment count");
    common(ver);
    auto *gal = app.add_subcommand("gallery", "explicit constructions");
    gal->require_subcommand(1);
    auto *chy = gal->add_subcommand("chyba", "CSV of the Chyba family");
    common(chy);
    auto *bum = gal->add_subcommand("bumps", "bump mapping checks");
    bum->add_option("--spec", bump_spec, "bump spec JSON")->required();
    common(bum);
    auto *gau = app.add_subcommand("gauge", "Minkowski gauge of a hull body");
    gau->add_option("--body", body, "body JSON")->required();
    gau->add_option("--point", point, "comma-separated coordinates")->required();
    common(gau);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*dec)
            return decompose_workspace(read_json_file(ws), c, std::nullopt);
        if (*gl)
            return cmd_glue(spec, c);
        if (*ver)
            return cmd_verify(fn, c, segments);
        if (*chy) {
            emit(chyba_csv(c.grid.value_or(4096)), c.out);
            return 0;
        }
        if (*bum)
            return cmd_bumps(bump_spec, c);
        if (*gau)
            return cmd_gauge(body, point, c);
    } catch (const InputError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const UndecidableError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError &e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
