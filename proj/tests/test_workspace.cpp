#include "dcx/dcx.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>

using namespace dcx;
namespace fs = std::filesystem;

namespace {

const std::string kCli = DCX_CLI;
const std::string kWs = DCX_WORKSPACES;

Workspace ws_1d(const Json &expr, double a = -2, double b = 2) {
    Json j = {{"ambient", {{"dimension", 1}, {"norm", "l2"}}},
              {"domain", {{"kind", "interval"}, {"a", a}, {"b", b}, {"open", true}}},
              {"expression", expr}};
    return workspace_from_json(j);
}

double eval(const Json &expr, double x) { return build_expression(ws_1d(expr))(scalar_vec(x)); }

std::string slurp(const fs::path &p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(const std::string &args) {
    const fs::path out = fs::temp_directory_path() / ("dcx_test_" + std::to_string(::getpid()) + ".out");
    const std::string cmd = kCli + " " + args + " > " + out.string() + " 2>/dev/null";
    const int st = std::system(cmd.c_str());
    CliRun r{WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(out)};
    fs::remove(out);
    return r;
}

fs::path write_temp(const std::string &name, const std::string &text) {
    const fs::path p = fs::temp_directory_path() / (std::to_string(::getpid()) + "_" + name);
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST(WorkspaceIo, RoundTripIsByteIdentical) {
    for (const char *name : {"exp_abs.json", "fh_quotient.json"}) {
        const std::string once = serialize_workspace(workspace_from_json(read_json_file(kWs + "/" + name)));
        const std::string twice = serialize_workspace(workspace_from_json(parse_json_text(once, name)));
        EXPECT_EQ(once, twice) << name;
    }
}

TEST(WorkspaceIo, MalformedTextReportsPosition) {
    try {
        parse_json_text("{\n  \"a\": [1, 2,\n}", "inline");
        FAIL() << "expected InputError";
    } catch (const InputError &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(WorkspaceIo, MissingFieldsRejected) {
    EXPECT_THROW(workspace_from_json(Json{{"ambient", {{"dimension", 1}}}}), InputError);
    EXPECT_THROW(workspace_from_json(Json::array()), InputError);
}

TEST(Expressions, ElementaryOps) {
    EXPECT_EQ(eval({{"op", "const"}, {"value", 2.5}}, 1.0), 2.5);
    EXPECT_EQ(eval({{"op", "var"}, {"index", 0}}, -1.5), -1.5);
    EXPECT_EQ(eval({{"op", "affine"}, {"slope", {2.0}}, {"intercept", 1.0}}, 0.5), 2.0);
    EXPECT_EQ(eval({{"op", "norm"}}, -1.25), 1.25);
    EXPECT_EQ(eval({{"op", "scale"}, {"factor", -2.0}, {"arg", {{"op", "norm"}}}}, 0.5), -1.0);
    EXPECT_EQ(eval({{"op", "shift"}, {"value", 3.0}, {"arg", {{"op", "norm"}}}}, 0.5), 3.5);
    const Json two{{"op", "const"}, {"value", 2.0}}, x{{"op", "var"}, {"index", 0}};
    EXPECT_EQ(eval({{"op", "sum"}, {"args", {two, x}}}, 0.25), 2.25);
    EXPECT_EQ(eval({{"op", "max"}, {"args", {two, x}}}, 0.25), 2.0);
}

TEST(Expressions, PairAndConvex) {
    const Json sq{{"kind", "quadratic"}, {"matrix", {{1.0}}}};
    const Json ab{{"kind", "norm"}};
    EXPECT_EQ(eval({{"op", "pair"}, {"plus", sq}, {"minus", ab}}, 1.5), 0.75);
    EXPECT_EQ(eval({{"op", "convex"}, {"fn", sq}}, -1.5), 2.25);
}

TEST(Expressions, ComposedOpsPassControlCheck) {
    const Json x{{"op", "var"}, {"index", 0}};
    const std::vector<Json> exprs{
        {{"op", "product"}, {"args", {x, {{"op", "norm"}}}}},
        {{"op", "compose"}, {"outer", "atan"}, {"arg", {{"op", "norm"}}}},
        {{"op", "compose"}, {"outer", "polynomial"}, {"coeffs", {0.0, 1.0, -1.0}}, {"arg", x}},
        {{"op", "quadratic"}, {"matrix", {{0.0, 1.0}, {1.0, 0.0}}}, {"args", {x, {{"op", "norm"}}}}},
    };
    for (const Json &e : exprs) {
        const DCFunction f = build_expression(ws_1d(e));
        ControlCheckOptions o;
        o.segments = 10000;
        EXPECT_TRUE(check_control(f, o).pass) << e.dump();
    }
    EXPECT_NEAR(eval(exprs[0], -1.5), -2.25, 1e-12);
    EXPECT_NEAR(eval(exprs[2], 0.5), 0.25, 1e-12);
    EXPECT_NEAR(eval(exprs[3], -1.5), -4.5, 1e-12);
}

TEST(Expressions, GalleryChyba) {
    const DCFunction f = build_expression(ws_1d({{"op", "gallery"}, {"name", "chyba_g"}}, -1, 0));
    EXPECT_DOUBLE_EQ(f(scalar_vec(-0.5)), 0.5);
    EXPECT_THROW(build_expression(ws_1d({{"op", "gallery"}, {"name", "chyba_g"}}, -1, 1)), InputError);
}

TEST(Expressions, References) {
    Workspace w = ws_1d({{"op", "sum"}, {"args", {{{"op", "ref"}, {"name", "a"}}, {{"op", "ref"}, {"name", "a"}}}}});
    w.definitions["a"] = {{"op", "norm"}};
    EXPECT_EQ(build_expression(w)(scalar_vec(-0.75)), 1.5);
}

TEST(Expressions, CycleRejected) {
    Workspace w = ws_1d({{"op", "ref"}, {"name", "a"}});
    w.definitions["a"] = {{"op", "scale"}, {"factor", 2.0}, {"arg", {{"op", "ref"}, {"name", "b"}}}};
    w.definitions["b"] = {{"op", "ref"}, {"name", "a"}};
    try {
        build_expression(w);
        FAIL() << "expected InputError";
    } catch (const InputError &e) {
        EXPECT_NE(std::string(e.what()).find("refers to itself"), std::string::npos);
    }
}

TEST(Expressions, UnknownNamesRejected) {
    EXPECT_THROW(build_expression(ws_1d({{"op", "frobnicate"}})), InputError);
    EXPECT_THROW(build_expression(ws_1d({{"op", "compose"}, {"outer", "tan"}, {"arg", {{"op", "norm"}}}})), InputError);
    EXPECT_THROW(build_expression(ws_1d({{"op", "ref"}, {"name", "nope"}})), InputError);
    EXPECT_THROW(build_expression(ws_1d({{"op", "var"}, {"index", 3}})), InputError);
}

TEST(Expressions, ValueOnlyMatchesBuilt) {
    const Json e{{"op", "compose"}, {"outer", "exp"}, {"arg", {{"op", "norm"}}}};
    const ScalarFn v = expression_value(e, 1);
    const DCFunction f = build_expression(ws_1d(e));
    for (double x : {-1.8, 0.0, 1.2})
        EXPECT_NEAR(v(scalar_vec(x)), f(scalar_vec(x)), 1e-15);
}

TEST(GlueSpecs, SymmetricIntervalsSine) {
    Json j = read_json_file(kWs + "/glued_sin.json");
    j["stages"]["symmetric_intervals"]["count"] = 8;
    j.erase("verify_region");
    const GluedFunction G = run_glue_spec(glue_spec_from_json(j));
    EXPECT_EQ(G.result.stages, 8);
    ControlCheckOptions o;
    o.segments = 20000;
    EXPECT_TRUE(check_control(G.fn, o).pass);
}

TEST(Cli, DecomposePasses) {
    const CliRun r = cli("decompose " + kWs + "/exp_abs.json --samples 20000");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(parse_json_text(r.out, "cli")["pass"].get<bool>());
}

TEST(Cli, DecomposeIsDeterministic) {
    EXPECT_EQ(cli("decompose " + kWs + "/exp_abs.json --samples 5000 --seed 4").out,
              cli("decompose " + kWs + "/exp_abs.json --samples 5000 --seed 4").out);
}

TEST(Cli, VerifyGlueSpec) { EXPECT_EQ(cli("verify --fn " + kWs + "/glued_sin.json --segments 20000").code, 0); }

TEST(Cli, GaugePrintsValue) {
    const CliRun r = cli("gauge --body " + kWs + "/octagon.json --point 0.75,0.75");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1.5\n");
}

TEST(Cli, ChybaCsvRows) {
    const CliRun r = cli("gallery chyba --grid 64");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 65);
}

TEST(Cli, BumpsPass) { EXPECT_EQ(cli("gallery bumps --spec " + kWs + "/bumps.json --samples 5000").code, 0); }

TEST(Cli, VerificationFailureExitsOne) {
    // A negative tolerance cannot be met, so the check reports failure.
    const CliRun r = cli("decompose " + kWs + "/exp_abs.json --samples 2000 --tol=-1");
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(parse_json_text(r.out, "cli")["pass"].get<bool>());
}

TEST(Cli, InputErrorsExitTwo) {
    const fs::path bad = write_temp("malformed.json", "{\"ambient\": ");
    EXPECT_EQ(cli("decompose " + bad.string()).code, 2);
    fs::remove(bad);
    EXPECT_EQ(cli("decompose /nonexistent/ws.json").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("gauge --body " + kWs + "/octagon.json --point 1,x").code, 2);
    EXPECT_EQ(cli("gauge --body " + kWs + "/octagon.json --point 1,2,3").code, 2);
}

TEST(Cli, PreconditionFailureExitsTwo) {
    const fs::path p = write_temp("signchange.json", R"({"ambient": {"dimension": 1},
      "domain": {"kind": "interval", "a": -1, "b": 1, "open": true},
      "expression": {"op": "quotient", "num": {"op": "const", "value": 1}, "den": {"op": "var", "index": 0}}})");
    EXPECT_EQ(cli("decompose " + p.string()).code, 2);
    fs::remove(p);
}
