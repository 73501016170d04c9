#ifndef DCX_WORKSPACE_HPP
#define DCX_WORKSPACE_HPP

// JSON workspaces: an ambient space, a domain, named definitions and a root
// d.c. expression, plus glue specifications. Parsing builds DCFunctions
// through the closure operations of the library.

#include "dcx/gallery.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace dcx {

inline Json parse_json_text(const std::string &text, const std::string &source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw InputError(source + ": " + e.what());
    }
}

inline Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

inline const Json &json_field(const Json &j, const char *key, const char *what) {
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string(what) + ": missing field '" + key + "'");
    return j[key];
}

inline std::string json_string(const Json &j, const char *key, const char *what) {
    const Json &v = json_field(j, key, what);
    if (!v.is_string())
        throw InputError(std::string(what) + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

/// Inverse of ConvexFn::to_json for every closed-form kind. Smooth kinds
/// come from a fixed registry; opaque functions cannot be read back.
inline ConvexFn convex_fn_from_json(const Json &j, int dim, Norm norm = Norm::l2) {
    const std::string kind = json_string(j, "kind", "convex function");
    ConvexFn f = constant_fn(dim, 0.0);
    if (kind == "max_affine") {
        f = max_affine(mat_from_json(json_field(j, "slopes", "max_affine"), "slopes"),
                       vec_from_json(json_field(j, "intercepts", "max_affine"), "intercepts"));
    } else if (kind == "gauge_sq") {
        f = gauge_squared(body_from_json(json_field(j, "body", "gauge_sq")), json_number(j, "scale", "gauge_sq"));
    } else if (kind == "dist") {
        f = distance_scaled(json_number(j, "coeff", "dist"), set_from_json(json_field(j, "set", "dist"), norm));
    } else if (kind == "quadratic") {
        f = quadratic_fn(mat_from_json(json_field(j, "matrix", "quadratic"), "matrix"));
    } else if (kind == "norm") {
        f = norm_fn(j.contains("norm") ? parse_norm(json_string(j, "norm", "norm")) : norm,
                    j.contains("center") ? vec_from_json(j["center"], "center") : Vec::Zero(dim),
                    j.contains("coeff") ? json_number(j, "coeff", "norm") : 1.0);
    } else if (kind == "max" || kind == "sum") {
        std::vector<ConvexFn> args;
        for (const Json &a : json_field(j, "args", kind.c_str()))
            args.push_back(convex_fn_from_json(a, dim, norm));
        f = kind == "max" ? pointwise_max(args) : sum(args);
    } else if (kind == "scale") {
        f = scale(convex_fn_from_json(json_field(j, "arg", "scale"), dim, norm), json_number(j, "factor", "scale"));
    } else if (kind == "precompose") {
        const Mat A = mat_from_json(json_field(j, "A", "precompose"), "A");
        f = affine_precompose(convex_fn_from_json(json_field(j, "arg", "precompose"), static_cast<int>(A.rows()), norm),
                              A, vec_from_json(json_field(j, "b", "precompose"), "b"));
    } else if (kind == "smooth") {
        const std::string name = json_string(j, "name", "smooth");
        if (name != "exp" || dim != 1)
            throw InputError("smooth: only the one-dimensional 'exp' is in the registry");
        f = smooth_fn(
            1, "exp", [](const Vec &y) { return std::exp(y[0]); },
            [](const Vec &y) { return scalar_vec(std::exp(y[0])); });
    } else if (kind == "opaque") {
        throw InputError("convex function of kind 'opaque' has no closed form and cannot be read");
    } else {
        throw InputError("unknown convex function kind '" + kind + "'");
    }
    if (f.dim() != dim)
        throw InputError("convex function '" + kind + "' has dimension " + std::to_string(f.dim()) + ", expected " +
                         std::to_string(dim));
    if (j.contains("domain"))
        f = f.restricted(set_from_json(j["domain"], norm));
    return f;
}

// ---------------------------------------------------------------------------
// Workspaces.

struct Workspace {
    int dimension = 1;
    Norm norm = Norm::l2;
    ConvexSet domain;
    std::optional<ConvexSet> working;
    std::map<std::string, Json> definitions;
    Json expression;
    std::uint64_t seed = 1;
    double tolerance = 1e-8;
    std::size_t segments = 100000;
    std::size_t duals = 64;
};

inline Workspace workspace_from_json(const Json &j) {
    if (!j.is_object())
        throw InputError("workspace: expected a JSON object");
    Workspace w;
    const Json &amb = json_field(j, "ambient", "workspace");
    w.dimension = static_cast<int>(json_number(amb, "dimension", "ambient"));
    w.norm = amb.contains("norm") ? parse_norm(json_string(amb, "norm", "ambient")) : Norm::l2;
    w.domain = set_from_json(json_field(j, "domain", "workspace"), w.norm);
    if (w.domain.dim() != w.dimension)
        throw InputError("workspace: domain dimension does not match the ambient dimension");
    if (j.contains("working"))
        w.working = set_from_json(j["working"], w.norm);
    if (j.contains("definitions")) {
        if (!j["definitions"].is_object())
            throw InputError("workspace: 'definitions' must be an object");
        for (auto it = j["definitions"].begin(); it != j["definitions"].end(); ++it)
            w.definitions[it.key()] = it.value();
    }
    w.expression = json_field(j, "expression", "workspace");
    if (j.contains("seed"))
        w.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerances")) {
        const Json &t = j["tolerances"];
        if (t.contains("control"))
            w.tolerance = json_number(t, "control", "tolerances");
        if (t.contains("segments"))
            w.segments = t["segments"].get<std::size_t>();
        if (t.contains("duals"))
            w.duals = t["duals"].get<std::size_t>();
    }
    return w;
}

inline Json workspace_to_json(const Workspace &w) {
    Json j;
    j["ambient"] = {{"dimension", w.dimension}, {"norm", to_string(w.norm)}};
    j["domain"] = set_to_json(w.domain);
    if (w.working)
        j["working"] = set_to_json(*w.working);
    if (!w.definitions.empty()) {
        Json d = Json::object();
        for (const auto &[k, v] : w.definitions)
            d[k] = v;
        j["definitions"] = d;
    }
    j["expression"] = w.expression;
    j["seed"] = w.seed;
    j["tolerances"] = {{"control", w.tolerance}, {"segments", w.segments}, {"duals", w.duals}};
    return j;
}

inline std::string serialize_workspace(const Workspace &w) { return canonical_json(workspace_to_json(w)); }

// ---------------------------------------------------------------------------
// Expression building.

class ExpressionBuilder {
public:
    explicit ExpressionBuilder(const Workspace &w) : w_(w) {}

    DCFunction build(const Json &e) { return node(e, w_.domain); }

private:
    const Workspace &w_;
    std::map<std::string, DCFunction> memo_;
    std::set<std::string> visiting_;

    GlobalOptions global(const Json &e) const {
        GlobalOptions o;
        o.seed = w_.seed;
        o.glue.seed = w_.seed;
        if (e.contains("working"))
            o.working = set_from_json(e["working"], w_.norm);
        return o;
    }

    /// Restrict all arguments to the intersection of their domains.
    static std::vector<DCFunction> common(std::vector<DCFunction> fs) {
        ConvexSet D = fs.front().domain();
        for (const auto &f : fs)
            if (f.domain().describe() != D.describe())
                D = intersect(D, f.domain());
        for (auto &f : fs)
            if (f.domain().describe() != D.describe())
                f = f.restricted(D);
        return fs;
    }

    std::vector<DCFunction> list(const Json &e, const char *key, const ConvexSet &A) {
        const Json &arr = json_field(e, key, "expression");
        if (!arr.is_array() || arr.empty())
            throw InputError(std::string("expression: '") + key + "' must be a nonempty array");
        std::vector<DCFunction> out;
        for (const Json &a : arr)
            out.push_back(node(a, A));
        return common(std::move(out));
    }

    DCFunction node(const Json &e, const ConvexSet &A) {
        const std::string op = json_string(e, "op", "expression");
        const int d = A.dim();
        if (op == "const")
            return affine_dc(A, Vec::Zero(d), json_number(e, "value", "const"));
        if (op == "var") {
            const int i = static_cast<int>(json_number(e, "index", "var"));
            if (i < 0 || i >= d)
                throw InputError("var: index out of range");
            return affine_dc(A, Vec::Unit(d, i), 0.0);
        }
        if (op == "affine")
            return affine_dc(A, vec_from_json(json_field(e, "slope", "affine"), "slope"),
                             e.contains("intercept") ? json_number(e, "intercept", "affine") : 0.0);
        if (op == "norm") {
            const Norm n = e.contains("norm") ? parse_norm(json_string(e, "norm", "norm")) : w_.norm;
            const Vec c = e.contains("center") ? vec_from_json(e["center"], "center") : Vec::Zero(d);
            return from_convex(norm_fn(n, c, e.contains("coeff") ? json_number(e, "coeff", "norm") : 1.0).restricted(A));
        }
        if (op == "convex")
            return from_convex(convex_fn_from_json(json_field(e, "fn", "convex"), d, w_.norm).restricted(A));
        if (op == "pair")
            return from_pair({convex_fn_from_json(json_field(e, "plus", "pair"), d, w_.norm).restricted(A),
                              convex_fn_from_json(json_field(e, "minus", "pair"), d, w_.norm).restricted(A)});
        if (op == "sum" || op == "max") {
            auto fs = list(e, "args", A);
            DCFunction acc = fs.front();
            for (std::size_t i = 1; i < fs.size(); ++i)
                acc = op == "sum" ? add(acc, fs[i]) : dc_max(acc, fs[i]);
            return acc;
        }
        if (op == "scale")
            return scale(node(json_field(e, "arg", "scale"), A), json_number(e, "factor", "scale"));
        if (op == "shift")
            return add_constant(node(json_field(e, "arg", "shift"), A), json_number(e, "value", "shift"));
        if (op == "product") {
            auto fs = list(e, "args", A);
            if (fs.size() != 2)
                throw InputError("product: exactly two arguments");
            return product(fs[0], fs[1], global(e));
        }
        if (op == "quotient") {
            auto fs = common({node(json_field(e, "num", "quotient"), A), node(json_field(e, "den", "quotient"), A)});
            QuotientOptions q;
            q.global = global(e);
            q.seed = w_.seed;
            if (e.contains("floor"))
                q.m = json_number(e, "floor", "quotient");
            return quotient(fs[0], fs[1], q);
        }
        if (op == "compose") {
            const std::string outer = json_string(e, "outer", "compose");
            OuterFunction g;
            if (outer == "exp")
                g = outer_exp();
            else if (outer == "sin")
                g = outer_sin();
            else if (outer == "atan")
                g = outer_atan();
            else if (outer == "polynomial") {
                std::vector<double> c;
                for (const Json &x : json_field(e, "coeffs", "polynomial"))
                    c.push_back(x.get<double>());
                g = outer_polynomial(c);
            } else
                throw InputError("compose: outer function '" + outer + "' is not in the registry");
            return compose_global(as_mapping(node(json_field(e, "arg", "compose"), A)), g, global(e));
        }
        if (op == "quadratic") {
            auto fs = list(e, "args", A);
            return quadratic_compose(bundle(fs), QuadraticForm(mat_from_json(json_field(e, "matrix", "quadratic"), "matrix")),
                                     global(e));
        }
        if (op == "bilinear") {
            auto l = list(e, "left", A), r = list(e, "right", A);
            std::vector<DCFunction> all = l;
            all.insert(all.end(), r.begin(), r.end());
            all = common(all);
            l.assign(all.begin(), all.begin() + static_cast<long>(l.size()));
            r.assign(all.begin() + static_cast<long>(l.size()), all.end());
            return bilinear_product(bundle(l), bundle(r), mat_from_json(json_field(e, "matrix", "bilinear"), "matrix"),
                                    global(e));
        }
        if (op == "gallery") {
            const std::string name = json_string(e, "name", "gallery");
            if (name != "chyba_g")
                throw InputError("gallery: unknown entry '" + name + "'");
            auto bb = A.bounding_box();
            if (d != 1 || !bb || bb->lo[0] < -1.0 || bb->hi[0] > 0.0)
                throw InputError("gallery chyba_g: domain must lie in [-1, 0]");
            // g = c1 - c2 with c1, c2 convex, so c1 + c2 controls g.
            ConvexFn ctrl = opaque_fn(
                1, "chyba c1 + c2",
                [](const Vec &x) {
                    const auto r = chyba_exact(x[0]);
                    return (r.c1 + r.c2).convert_to<double>();
                },
                A);
            return DCFunction(
                A, [](const Vec &x) { return chyba_g(x[0]); }, ctrl, {"gallery(chyba_g)"});
        }
        if (op == "ref") {
            const std::string name = json_string(e, "name", "ref");
            if (auto it = memo_.find(name); it != memo_.end())
                return it->second.domain().describe() == A.describe() ? it->second : it->second.restricted(A);
            if (!w_.definitions.count(name))
                throw InputError("ref: undefined name '" + name + "'");
            if (!visiting_.insert(name).second)
                throw InputError("ref: definition '" + name + "' refers to itself");
            DCFunction f = node(w_.definitions.at(name), A);
            visiting_.erase(name);
            memo_.emplace(name, f);
            return f;
        }
        throw InputError("expression: unknown op '" + op + "'");
    }
};

inline DCFunction build_expression(const Workspace &w) { return ExpressionBuilder(w).build(w.expression); }

/// Value-only evaluation of an expression (no controls), for glue specs.
inline ScalarFn expression_value(const Json &e, int dim) {
    const std::string op = json_string(e, "op", "expression");
    if (op == "const") {
        const double c = json_number(e, "value", "const");
        return [c](const Vec &) { return c; };
    }
    if (op == "var") {
        const int i = static_cast<int>(json_number(e, "index", "var"));
        if (i < 0 || i >= dim)
            throw InputError("var: index out of range");
        return [i](const Vec &x) { return x[i]; };
    }
    if (op == "affine") {
        const Vec a = vec_from_json(json_field(e, "slope", "affine"), "slope");
        const double b = e.contains("intercept") ? json_number(e, "intercept", "affine") : 0.0;
        return [a, b](const Vec &x) { return a.dot(x) + b; };
    }
    if (op == "norm") {
        const Norm n = e.contains("norm") ? parse_norm(json_string(e, "norm", "norm")) : Norm::l2;
        const Vec c = e.contains("center") ? vec_from_json(e["center"], "center") : Vec::Zero(dim);
        const double k = e.contains("coeff") ? json_number(e, "coeff", "norm") : 1.0;
        return [n, c, k](const Vec &x) { return k * norm(x - c, n); };
    }
    if (op == "shift") {
        auto f = expression_value(json_field(e, "arg", "shift"), dim);
        const double c = json_number(e, "value", "shift");
        return [f, c](const Vec &x) { return f(x) + c; };
    }
    if (op == "scale") {
        auto f = expression_value(json_field(e, "arg", "scale"), dim);
        const double c = json_number(e, "factor", "scale");
        return [f, c](const Vec &x) { return c * f(x); };
    }
    if (op == "sum" || op == "max") {
        std::vector<ScalarFn> fs;
        for (const Json &a : json_field(e, "args", op.c_str()))
            fs.push_back(expression_value(a, dim));
        if (fs.empty())
            throw InputError(op + ": no arguments");
        const bool is_max = op == "max";
        return [fs, is_max](const Vec &x) {
            double s = fs.front()(x);
            for (std::size_t i = 1; i < fs.size(); ++i)
                s = is_max ? std::max(s, fs[i](x)) : s + fs[i](x);
            return s;
        };
    }
    if (op == "compose") {
        const std::string outer = json_string(e, "outer", "compose");
        auto f = expression_value(json_field(e, "arg", "compose"), dim);
        if (outer == "sin")
            return [f](const Vec &x) { return std::sin(f(x)); };
        if (outer == "exp")
            return [f](const Vec &x) { return std::exp(f(x)); };
        if (outer == "atan")
            return [f](const Vec &x) { return std::atan(f(x)); };
        throw InputError("compose: outer function '" + outer + "' is not available here");
    }
    throw InputError("expression: op '" + op + "' is not available in glue specifications");
}

// ---------------------------------------------------------------------------
// Glue specifications: a function, an ambient set, stages and one control per
// stage (or one shared control).

struct GlueSpec {
    ConvexSet ambient;
    std::vector<ConvexSet> stages;
    std::vector<ConvexFn> controls;
    ScalarFn value;
    std::optional<ConvexSet> verify_region;
    GlueOptions options;
    Json raw;
};

inline GlueSpec glue_spec_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("kind") || j["kind"] != "glue")
        throw InputError("glue spec: expected an object with kind 'glue'");
    GlueSpec g;
    g.raw = j;
    const Norm n = j.contains("norm") ? parse_norm(json_string(j, "norm", "glue spec")) : Norm::l2;
    g.ambient = set_from_json(json_field(j, "ambient", "glue spec"), n);
    const int d = g.ambient.dim();
    const Json &st = json_field(j, "stages", "glue spec");
    if (st.is_array()) {
        for (const Json &s : st)
            g.stages.push_back(set_from_json(s, n));
    } else if (st.is_object() && st.contains("symmetric_intervals")) {
        // D_n = (-n + inset, n - inset), n = 1..count
        const Json &si = st["symmetric_intervals"];
        const int count = static_cast<int>(json_number(si, "count", "symmetric_intervals"));
        const double inset = json_number(si, "inset", "symmetric_intervals");
        if (d != 1 || count < 2)
            throw InputError("symmetric_intervals: need a one-dimensional ambient set and count >= 2");
        for (int k = 1; k <= count; ++k)
            g.stages.push_back(ConvexSet::interval(-k + inset, k - inset, true, n));
    } else {
        throw InputError("glue spec: 'stages' must be a list of sets or a generator");
    }
    if (j.contains("controls")) {
        for (const Json &c : j["controls"])
            g.controls.push_back(convex_fn_from_json(c, d, n));
    } else {
        const ConvexFn c = convex_fn_from_json(json_field(j, "control", "glue spec"), d, n);
        g.controls.assign(g.stages.size(), c);
    }
    if (g.controls.size() != g.stages.size())
        throw InputError("glue spec: need one control per stage");
    g.value = expression_value(json_field(j, "function", "glue spec"), d);
    if (j.contains("verify_region"))
        g.verify_region = set_from_json(j["verify_region"], n);
    if (j.contains("options")) {
        const Json &o = j["options"];
        if (o.contains("inflation"))
            g.options.inflation = json_number(o, "inflation", "options");
        if (o.contains("samples"))
            g.options.samples = o["samples"].get<std::size_t>();
    }
    if (j.contains("seed"))
        g.options.seed = j["seed"].get<std::uint64_t>();
    return g;
}

struct GluedFunction {
    GlueResult result;
    DCFunction fn;
};

inline GluedFunction run_glue_spec(const GlueSpec &g) {
    GlueResult R = glue(make_exhaustion(g.ambient, g.stages), g.controls, g.options);
    DCFunction f = glued_dc(g.value, R);
    if (g.verify_region)
        f = DCFunction(*g.verify_region, g.value, ConvexFn(R.control.node(), *g.verify_region), f.provenance());
    return {R, f};
}

} // namespace dcx

#endif
