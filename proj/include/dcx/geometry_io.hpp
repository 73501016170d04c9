#ifndef DCX_GEOMETRY_IO_HPP
#define DCX_GEOMETRY_IO_HPP

#include "dcx/geometry.hpp"
#include "dcx/json_io.hpp"

#include <string>

namespace dcx {

inline Json set_to_json(const ConvexSet &C) {
    using K = ConvexSet::Kind;
    Json j;
    j["norm"] = to_string(C.ambient());
    switch (C.kind()) {
    case K::empty:
        j["kind"] = "empty";
        j["dimension"] = C.dim();
        break;
    case K::whole:
        j["kind"] = "whole";
        j["dimension"] = C.dim();
        break;
    case K::ball:
        j["kind"] = "ball";
        j["center"] = vec_to_json(C.center());
        j["radius"] = C.radius();
        j["open"] = C.is_open();
        break;
    case K::box:
        if (C.dim() == 1) {
            j["kind"] = "interval";
            j["a"] = C.lo()[0];
            j["b"] = C.hi()[0];
        } else {
            j["kind"] = "box";
            j["lo"] = vec_to_json(C.lo());
            j["hi"] = vec_to_json(C.hi());
        }
        j["open"] = C.is_open();
        break;
    case K::polyhedron:
        j["kind"] = "halfspaces";
        j["normals"] = mat_to_json(C.normals());
        j["offsets"] = vec_to_json(C.offsets());
        j["open"] = C.is_open();
        break;
    case K::dilated:
        j["kind"] = "dilated";
        j["base"] = set_to_json(C.base());
        j["radius"] = C.radius();
        break;
    case K::oracle:
        throw InputError("set_to_json: oracle set '" + C.label() + "' is not serializable");
    }
    return j;
}

inline double json_number(const Json &j, const char *key, const char *what) {
    if (!j.contains(key) || !j[key].is_number())
        throw InputError(std::string(what) + ": missing numeric field '" + key + "'");
    return j[key].get<double>();
}

inline bool json_flag(const Json &j, const char *key, bool fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_boolean())
        throw InputError(std::string("field '") + key + "' must be a boolean");
    return j[key].get<bool>();
}

inline ConvexSet set_from_json(const Json &j, Norm fallback = Norm::l2) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw InputError("set: expected an object with a string 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    const Norm n = j.contains("norm") ? parse_norm(j["norm"].get<std::string>()) : fallback;
    const bool open = json_flag(j, "open", true);
    if (kind == "whole" || kind == "empty") {
        const int d = static_cast<int>(json_number(j, "dimension", "set"));
        return kind == "whole" ? ConvexSet::whole(d, n) : ConvexSet::empty(d, n);
    }
    if (kind == "ball")
        return ConvexSet::ball(vec_from_json(j.at("center"), "ball center"), json_number(j, "radius", "ball"), open,
                               n);
    if (kind == "interval")
        return ConvexSet::interval(json_number(j, "a", "interval"), json_number(j, "b", "interval"), open, n);
    if (kind == "box")
        return ConvexSet::box(vec_from_json(j.at("lo"), "box lo"), vec_from_json(j.at("hi"), "box hi"), open, n);
    if (kind == "halfspaces")
        return ConvexSet::polyhedron(mat_from_json(j.at("normals"), "normals"),
                                     vec_from_json(j.at("offsets"), "offsets"), open, n);
    if (kind == "dilated")
        return ConvexSet::dilated(set_from_json(j.at("base"), n), json_number(j, "radius", "dilated"));
    throw InputError("set: unknown kind '" + kind + "'");
}

inline Json body_to_json(const HullBody &b) {
    Json j;
    j["rho"] = b.rho();
    j["base"] = b.base() == BaseBall::linf ? "linf" : "l1";
    j["dimension"] = b.dim();
    Json pts = Json::array();
    for (const Vec &p : b.points())
        pts.push_back(vec_to_json(p));
    j["points"] = pts;
    return j;
}

inline HullBody body_from_json(const Json &j) {
    if (!j.is_object())
        throw InputError("body: expected an object");
    const double rho = json_number(j, "rho", "body");
    const std::string base = j.value("base", std::string("linf"));
    BaseBall bb;
    if (base == "linf")
        bb = BaseBall::linf;
    else if (base == "l1")
        bb = BaseBall::l1;
    else
        throw InputError("body: base must be 'linf' or 'l1'");
    std::vector<Vec> pts;
    if (j.contains("points"))
        for (const auto &p : j["points"])
            pts.push_back(vec_from_json(p, "body point"));
    int d = 0;
    if (j.contains("dimension"))
        d = static_cast<int>(json_number(j, "dimension", "body"));
    else if (!pts.empty())
        d = static_cast<int>(pts.front().size());
    else
        throw InputError("body: dimension missing");
    return HullBody(rho, bb, std::move(pts), d);
}

} // namespace dcx

#endif
