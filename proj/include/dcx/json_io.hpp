#ifndef DCX_JSON_IO_HPP
#define DCX_JSON_IO_HPP

// Canonical JSON text: object keys sorted (nlohmann::json keeps them in a
// std::map), floats printed with 17 significant digits, two-space indent.

#include "dcx/linalg.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <string>

namespace dcx {

using Json = nlohmann::json;

inline std::string format_double(double v) {
    if (std::isnan(v))
        return "\"nan\"";
    if (std::isinf(v))
        return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep floats distinguishable from integers on reparse.
    if (s.find_first_of(".eE") == std::string::npos)
        s += ".0";
    return s;
}

namespace detail {

inline void canonical_dump(const Json &j, std::string &out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad_in + Json(it.key()).dump() + ": ";
            canonical_dump(it.value(), out, indent + 1);
        }
        out += "\n" + pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        bool scalars = true;
        for (const auto &e : j)
            scalars = scalars && !e.is_structured();
        if (scalars) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    out += ", ";
                canonical_dump(j[i], out, indent + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ",\n";
            out += pad_in;
            canonical_dump(j[i], out, indent + 1);
        }
        out += "\n" + pad + "]";
        return;
    }
    case Json::value_t::number_float:
        out += format_double(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

} // namespace detail

inline std::string canonical_json(const Json &j) {
    std::string out;
    detail::canonical_dump(j, out, 0);
    out += "\n";
    return out;
}

inline Json vec_to_json(const Vec &x) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i)
        a.push_back(x[i]);
    return a;
}

inline Vec vec_from_json(const Json &j, const char *what) {
    if (j.is_number())
        return scalar_vec(j.get<double>());
    if (!j.is_array())
        throw InputError(std::string(what) + ": expected a number or an array of numbers");
    Vec x(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw InputError(std::string(what) + ": non-numeric entry");
        x[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return x;
}

inline Json mat_to_json(const Mat &m) {
    Json a = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        a.push_back(row);
    }
    return a;
}

inline Mat mat_from_json(const Json &j, const char *what) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw InputError(std::string(what) + ": expected a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw InputError(std::string(what) + ": ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!row[static_cast<std::size_t>(c)].is_number())
                throw InputError(std::string(what) + ": non-numeric entry");
            m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
    }
    return m;
}

} // namespace dcx

#endif
