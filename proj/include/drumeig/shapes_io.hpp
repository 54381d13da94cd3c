#pragma once

// JSON shape specifications -> Boundary objects, plus the catalogue of named
// built-in shapes. Spec grammar:
//   {"type":"disk","radius":R}
//   {"type":"radial","a0":A,"cos":[ac1,ac2,...],"sin":[as1,as2,...]}
//   {"type":"ellipse","a":A,"b":B}
//   {"type":"crescent"}
//   {"type":"annulus","outer":<curve spec>,"inner":<curve spec>}
// where <curve spec> is any of the non-annulus forms.

#include "errors.hpp"
#include "geometry.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace drumeig {

inline Curve curve_from_spec(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ShapeError("shape spec: expected an object with a string \"type\"");
    const std::string type = j["type"].get<std::string>();
    try {
        if (type == "disk") {
            const double r = j.value("radius", 1.0);
            if (!(r > 0.0)) throw ShapeError("disk: radius must be positive");
            return make_circle(r);
        }
        if (type == "radial") {
            if (!j.contains("a0")) throw ShapeError("radial: missing \"a0\"");
            const double a0 = j["a0"].get<double>();
            std::vector<double> c = j.value("cos", std::vector<double>{});
            std::vector<double> s = j.value("sin", std::vector<double>{});
            return make_radial_curve(a0, std::move(c), std::move(s));
        }
        if (type == "ellipse") {
            if (!j.contains("a") || !j.contains("b"))
                throw ShapeError("ellipse: missing \"a\" or \"b\"");
            return make_ellipse(j["a"].get<double>(), j["b"].get<double>());
        }
        if (type == "crescent") return make_crescent_curve();
    } catch (const nlohmann::json::exception& e) {
        throw ShapeError(std::string("shape spec: bad parameter types: ") + e.what());
    }
    throw ShapeError("shape spec: unknown curve type \"" + type + "\"");
}

inline Boundary boundary_from_spec(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ShapeError("shape spec: expected an object with a string \"type\"");
    if (j["type"].get<std::string>() == "annulus") {
        if (!j.contains("outer") || !j.contains("inner"))
            throw ShapeError("annulus: missing \"outer\" or \"inner\" curve spec");
        return make_annulus(curve_from_spec(j["outer"]), curve_from_spec(j["inner"]));
    }
    return make_boundary(curve_from_spec(j));
}

inline Boundary boundary_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ShapeError(std::string("shape spec: invalid JSON: ") + e.what());
    }
    return boundary_from_spec(j);
}

// Named built-ins with their canonical specs (also what the CLI catalogue prints).
inline std::vector<std::pair<std::string, nlohmann::json>> builtin_shape_specs() {
    using nlohmann::json;
    std::vector<std::pair<std::string, json>> v;
    v.emplace_back("disk", json{{"type", "disk"}, {"radius", 1.0}});
    v.emplace_back("nonsymmetric", json{{"type", "radial"},
                                        {"a0", 1.0},
                                        {"cos", {0.0, 0.0, 0.2}},
                                        {"sin", {0.0, 0.3}}});
    v.emplace_back("ellipse", json{{"type", "ellipse"}, {"a", 1.0}, {"b", 0.5}});
    v.emplace_back("crescent", json{{"type", "crescent"}});
    v.emplace_back("annulus",
                   json{{"type", "annulus"},
                        {"outer", {{"type", "radial"}, {"a0", 1.0}, {"cos", {0.0, 0.0, 0.2}}, {"sin", {0.0, 0.3}}}},
                        {"inner", {{"type", "radial"}, {"a0", 0.5}, {"cos", {0.0, 0.0, 0.1}}, {"sin", {0.0, 0.15}}}}});
    return v;
}

inline Boundary builtin_shape(const std::string& name) {
    for (const auto& [n, spec] : builtin_shape_specs())
        if (n == name) return boundary_from_spec(spec);
    throw ShapeError("unknown built-in shape \"" + name + "\"");
}

} // namespace drumeig
