#pragma once

// JSON views of reports. Floats go through nlohmann's shortest round-trip
// printer, which is deterministic and re-reads to the same double.

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "minsurf/classifier.hpp"
#include "minsurf/surface.hpp"
#include "minsurf/verifier.hpp"

namespace minsurf {

namespace detail {

// NaN/inf are not JSON; emit null.
inline nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

inline nlohmann::json vec_json(const Vec3& v) {
  return nlohmann::json::array({number_or_null(v.x()), number_or_null(v.y()), number_or_null(v.z())});
}

}  // namespace detail

inline nlohmann::json to_json(const ResidualReport& r) {
  return {{"identity", std::string(identity_name(r.identity))},
          {"h", r.h},
          {"nx", r.nx},
          {"ny", r.ny},
          {"usable", r.usable_count},
          {"sup", r.sup_norm},
          {"rms", r.rms},
          {"worst_point", nlohmann::json::array({r.worst_point.real(), r.worst_point.imag()})}};
}

inline nlohmann::json to_json(Identity id, const ConvergenceStudy& st) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : st.levels) {
    levels.push_back({{"h", l.h}, {"sup", l.sup_norm}, {"sup_all", l.sup_norm_full}, {"rms", l.rms}, {"usable", l.usable_count}});
  }
  return {{"identity", std::string(identity_name(id))},
          {"levels", levels},
          {"order", st.order ? nlohmann::json(*st.order) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const ClassificationResult& r, bool with_trace = false) {
  nlohmann::json j = {{"is_enneper_candidate", r.is_enneper_candidate},
                      {"verdict", r.is_enneper_candidate ? "numerical Enneper candidate on the sampled patch"
                                                         : "not an Enneper candidate on the sampled patch"},
                      {"best_direction", detail::vec_json(r.best_direction.vector())},
                      {"sigma_best", r.sigma_best},
                      {"chi_mean", r.chi_mean},
                      {"samples_used", r.samples_used},
                      {"threshold", r.threshold}};
  if (with_trace) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& e : r.search_trace) {
      t.push_back({{"direction", detail::vec_json(e.direction.vector())}, {"sigma", e.sigma}, {"oscillation", e.oscillation}});
    }
    j["search_trace"] = t;
  }
  return j;
}

inline nlohmann::json to_json(const PointReport& r) {
  return {{"zeta", nlohmann::json::array({r.zeta.real(), r.zeta.imag()})},
          {"mask", std::string(mask_name(r.mask))},
          {"lambda", detail::number_or_null(r.geometry.lambda)},
          {"K", detail::number_or_null(r.geometry.K)},
          {"N", detail::vec_json(r.geometry.N)},
          {"NV", detail::number_or_null(r.NV)},
          {"chi", detail::number_or_null(r.chi)}};
}

}  // namespace minsurf
