#pragma once

// Built-in surfaces and the JSON surface-spec format:
//
//   {"name": "enneper", "g": "z", "f": "1",
//    "domain": {"kind": "disk", "center": [0, 0], "radius": 1.5,
//               "excluded": [{"point": [0, 0], "radius": 0.25}]},
//    "base_point": [0, 0]}
//
// annulus domains use "inner"/"outer", rectangles "lo"/"hi" corner pairs.

#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "minsurf/domain.hpp"
#include "minsurf/parser.hpp"
#include "minsurf/surface.hpp"

namespace minsurf {

using nlohmann::json;

namespace detail {

inline json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error("surface spec: '" + std::string(what) + "' must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw Error(std::string("surface spec: missing number '") + key + "'");
  return j[key].get<double>();
}

}  // namespace detail

inline json domain_to_json(const DomainSpec& d) {
  json j;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          j = {{"kind", "disk"}, {"center", detail::complex_json(s.center)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, Annulus>) {
          j = {{"kind", "annulus"},
               {"center", detail::complex_json(s.center)},
               {"inner", s.inner},
               {"outer", s.outer}};
        } else {
          j = {{"kind", "rectangle"}, {"lo", detail::complex_json(s.lo)}, {"hi", detail::complex_json(s.hi)}};
        }
      },
      d.shape());
  if (!d.excluded().empty()) {
    json ex = json::array();
    for (const auto& e : d.excluded()) ex.push_back({{"point", detail::complex_json(e.point)}, {"radius", e.radius}});
    j["excluded"] = ex;
  }
  return j;
}

inline DomainSpec domain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw Error("surface spec: domain needs a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto center = [&] { return j.contains("center") ? detail::complex_from_json(j["center"], "center") : Complex{}; };
  std::vector<ExcludedPoint> excluded;
  if (j.contains("excluded")) {
    for (const auto& e : j["excluded"]) {
      excluded.push_back({detail::complex_from_json(e.at("point"), "excluded.point"), detail::number_field(e, "radius")});
    }
  }
  if (kind == "disk") return DomainSpec(Disk{center(), detail::number_field(j, "radius")}, excluded);
  if (kind == "annulus") {
    return DomainSpec(Annulus{center(), detail::number_field(j, "inner"), detail::number_field(j, "outer")}, excluded);
  }
  if (kind == "rectangle") {
    return DomainSpec(Rectangle{detail::complex_from_json(j.at("lo"), "lo"), detail::complex_from_json(j.at("hi"), "hi")},
                      excluded);
  }
  throw Error("surface spec: unknown domain kind '" + kind + "'");
}

inline json surface_to_json(const WeierstrassSurface& s) {
  return {{"name", s.name()},
          {"g", to_string(s.g())},
          {"f", to_string(s.f())},
          {"domain", domain_to_json(s.domain())},
          {"base_point", detail::complex_json(s.base_point())}};
}

/// Throws Error (or ParseError for bad expressions) on malformed specs.
inline WeierstrassSurface surface_from_json(const json& j) {
  if (!j.is_object()) throw Error("surface spec must be a JSON object");
  for (const char* key : {"name", "g", "f"}) {
    if (!j.contains(key) || !j[key].is_string()) throw Error(std::string("surface spec: missing string '") + key + "'");
  }
  if (!j.contains("domain")) throw Error("surface spec: missing 'domain'");
  const Complex base = j.contains("base_point") ? detail::complex_from_json(j["base_point"], "base_point") : Complex{};
  return WeierstrassSurface(j["name"].get<std::string>(), parse(j["g"].get<std::string>()),
                            parse(j["f"].get<std::string>()), domain_from_json(j["domain"]), base);
}

struct CatalogEntry {
  const char* name;
  const char* g;
  const char* f;
  const char* domain;  // JSON
  Complex base_point;
};

// The catenoid exclusion keeps integration paths away from the pole of f.
inline constexpr CatalogEntry kCatalog[] = {
    {"enneper", "z", "1", R"({"kind":"disk","center":[0,0],"radius":1.5})", {0.0, 0.0}},
    {"catenoid", "z", "1/z^2",
     R"({"kind":"annulus","center":[0,0],"inner":0.5,"outer":2,"excluded":[{"point":[0,0],"radius":0.25}]})",
     {1.0, 0.0}},
    {"helicoid", "exp(z)", "i*exp(-z)", R"({"kind":"rectangle","lo":[-1,0],"hi":[1,2]})", {0.0, 1.0}},
    {"enneper2", "z^2", "1", R"({"kind":"annulus","center":[0,0],"inner":1,"outer":2})", {1.0, 0.0}},
    {"enneper3", "z^3", "1", R"({"kind":"annulus","center":[0,0],"inner":1,"outer":2})", {1.0, 0.0}},
    {"plane", "0", "1", R"({"kind":"disk","center":[0,0],"radius":1})", {0.0, 0.0}},
};

inline WeierstrassSurface make_catalog_surface(const CatalogEntry& e) {
  return WeierstrassSurface(e.name, parse(e.g), parse(e.f), domain_from_json(json::parse(e.domain)), e.base_point);
}

inline std::vector<WeierstrassSurface> catalog() {
  std::vector<WeierstrassSurface> out;
  for (const auto& e : kCatalog) out.push_back(make_catalog_surface(e));
  return out;
}

inline std::optional<WeierstrassSurface> find_catalog_surface(std::string_view name) {
  for (const auto& e : kCatalog) {
    if (name == e.name) return make_catalog_surface(e);
  }
  return std::nullopt;
}

/// Catalog lookup that throws on unknown names.
inline WeierstrassSurface catalog_surface(std::string_view name) {
  if (auto s = find_catalog_surface(name)) return *s;
  throw Error("unknown catalog surface '" + std::string(name) + "'");
}

/// Catalog name, or else path to a JSON surface spec. File problems throw
/// std::ios_base::failure so callers can tell I/O from content errors.
inline WeierstrassSurface load_surface(const std::string& name_or_path) {
  if (auto s = find_catalog_surface(name_or_path)) return *s;
  std::ifstream in(name_or_path);
  if (!in) throw std::ios_base::failure("cannot open surface spec '" + name_or_path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("surface spec '" + name_or_path + "' is not valid JSON: " + e.what());
  }
  return surface_from_json(j);
}

}  // namespace minsurf
