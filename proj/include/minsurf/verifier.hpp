#pragma once

// Discrete Laplace–Beltrami operator on conformal grids and residuals of the
// flatness / harmonicity identities satisfied by minimal surfaces:
//
//   ricci       Δ_g ln(-K) - 4K
//   chern       Δ_g ln(1 + N_V) - K
//   harmonic    Δ_g χ_V,  χ_V = ln((1 + N_V)² / (-K)^{1/2})
//   flat_ricci  curvature of (-K)^{1/2} g
//   flat_chern  curvature of (1 + N_V)² g
//
// Every residual vanishes identically for exact data, so what is measured
// is the O(h²) error of the 5-point stencil.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minsurf/domain.hpp"
#include "minsurf/error.hpp"
#include "minsurf/grid.hpp"
#include "minsurf/surface.hpp"

namespace minsurf {

/// Values on a grid; `defined` flags the nodes where value is meaningful.
struct ScalarField {
  std::vector<double> value;
  std::vector<std::uint8_t> defined;

  ScalarField() = default;
  explicit ScalarField(std::size_t n) : value(n, std::numeric_limits<double>::quiet_NaN()), defined(n, 0) {}

  std::size_t size() const { return value.size(); }
  std::size_t defined_count() const { return static_cast<std::size_t>(std::count(defined.begin(), defined.end(), 1)); }
  void set(std::size_t k, double v) {
    value[k] = v;
    defined[k] = 1;
  }
};

/// Field u(z) evaluated at every grid node inside the domain.
template <class Fn>
ScalarField field_from_function(const DomainGrid& grid, Fn&& fn) {
  ScalarField out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!grid.inside[k]) continue;
    const double v = fn(grid.point(k));
    if (std::isfinite(v)) out.set(k, v);
  }
  return out;
}

/// Δ_g u = λ⁻² (u_E + u_W + u_N + u_S - 4 u_C) / h². Defined where λ and
/// u are defined at the node and u at all four neighbours.
inline ScalarField laplace_beltrami(const DomainGrid& grid, const ScalarField& lambda, const ScalarField& u) {
  ScalarField out(grid.size());
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  for (int j = 1; j + 1 < grid.ny; ++j) {
    for (int i = 1; i + 1 < grid.nx; ++i) {
      const std::size_t c = grid.index(i, j);
      const std::size_t e = grid.index(i + 1, j);
      const std::size_t w = grid.index(i - 1, j);
      const std::size_t n = grid.index(i, j + 1);
      const std::size_t s = grid.index(i, j - 1);
      if (!lambda.defined[c] || !u.defined[c] || !u.defined[e] || !u.defined[w] || !u.defined[n] || !u.defined[s]) {
        continue;
      }
      const double flat = (u.value[e] + u.value[w] + u.value[n] + u.value[s] - 4.0 * u.value[c]) * inv_h2;
      out.set(c, flat / (lambda.value[c] * lambda.value[c]));
    }
  }
  return out;
}

/// Conformal factor wherever the data have no pole.
inline ScalarField lambda_field(const DomainGrid& grid, const std::vector<PointGeometry>& geom) {
  ScalarField out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (geom[k].mask == Mask::valid || geom[k].mask == Mask::flat_point) out.set(k, geom[k].lambda);
  }
  return out;
}

/// Surface-level Laplace–Beltrami. Throws EmptyReportError when no node has
/// a complete stencil.
inline ScalarField laplace_beltrami(const WeierstrassSurface& s, const ScalarField& u, const DomainGrid& grid) {
  const ScalarField lb = laplace_beltrami(grid, lambda_field(grid, sample_geometry(s, grid)), u);
  if (lb.defined_count() == 0) throw EmptyReportError("laplace_beltrami: grid has no usable points");
  return lb;
}

/// Curvature e^{-2u} (K - Δ_g u) of the metric e^{2u} g, at nodes where
/// the stencil of u is complete.
inline ScalarField conformal_curvature(const DomainGrid& grid, const std::vector<PointGeometry>& geom,
                                       const ScalarField& u) {
  const ScalarField lb = laplace_beltrami(grid, lambda_field(grid, geom), u);
  ScalarField out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!lb.defined[k]) continue;
    out.set(k, std::exp(-2.0 * u.value[k]) * (geom[k].K - lb.value[k]));
  }
  return out;
}

inline ScalarField conformal_curvature(const WeierstrassSurface& s, const DomainGrid& grid, const ScalarField& u) {
  const ScalarField out = conformal_curvature(grid, sample_geometry(s, grid), u);
  if (out.defined_count() == 0) throw EmptyReportError("conformal_curvature: grid has no usable points");
  return out;
}

enum class Identity { ricci, chern, harmonic, flat_ricci, flat_chern };

inline std::string_view identity_name(Identity id) {
  switch (id) {
    case Identity::ricci: return "ricci";
    case Identity::chern: return "chern";
    case Identity::harmonic: return "harmonic";
    case Identity::flat_ricci: return "flat_ricci";
    case Identity::flat_chern: return "flat_chern";
  }
  return "?";
}

/// Accepts both "flat_chern" and "flat-chern".
inline std::optional<Identity> identity_from_name(std::string_view name) {
  std::string n(name);
  std::replace(n.begin(), n.end(), '-', '_');
  for (Identity id : {Identity::ricci, Identity::chern, Identity::harmonic, Identity::flat_ricci, Identity::flat_chern}) {
    if (n == identity_name(id)) return id;
  }
  return std::nullopt;
}

inline bool needs_direction(Identity id) {
  return id == Identity::chern || id == Identity::harmonic || id == Identity::flat_chern;
}

struct ResidualReport {
  Identity identity = Identity::ricci;
  double sup_norm = 0.0;
  double rms = 0.0;
  std::size_t usable_count = 0;
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  Complex worst_point;  // node where the sup is attained
};

/// sup and RMS of |r| over defined nodes. Throws EmptyReportError if none.
inline ResidualReport summarize(Identity id, const DomainGrid& grid, const ScalarField& r) {
  ResidualReport rep;
  rep.identity = id;
  rep.h = grid.h;
  rep.nx = grid.nx;
  rep.ny = grid.ny;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (!r.defined[k]) continue;
    const double a = std::abs(r.value[k]);
    ++rep.usable_count;
    sum_sq += a * a;
    if (a > rep.sup_norm || rep.usable_count == 1) {
      rep.sup_norm = a;
      rep.worst_point = grid.point(k);
    }
  }
  if (rep.usable_count == 0) {
    throw EmptyReportError(std::string(identity_name(id)) + " residual: grid has no usable points");
  }
  rep.rms = std::sqrt(sum_sq / static_cast<double>(rep.usable_count));
  return rep;
}

/// Residual field of one identity; nodes without a complete valid stencil
/// are undefined. Points count as valid when K < 0 (no flat point, no pole)
/// and, for direction-dependent identities, 1 + N_V >= tol.chern.
inline ScalarField residual_field(const WeierstrassSurface& s, Identity id, const DomainGrid& grid,
                                  const Direction& V, const Tolerances& tol = {}) {
  const std::vector<PointGeometry> geom = sample_geometry(s, grid, tol);
  const bool directional = needs_direction(id);
  auto valid = [&](std::size_t k) {
    if (geom[k].mask != Mask::valid) return false;
    return !directional || 1.0 + angle_value(geom[k].N, V) >= tol.chern;
  };

  ScalarField u(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!valid(k)) continue;
    const double K = geom[k].K;
    switch (id) {
      case Identity::ricci: u.set(k, std::log(-K)); break;
      case Identity::flat_ricci: u.set(k, 0.25 * std::log(-K)); break;
      case Identity::chern:
      case Identity::flat_chern: u.set(k, std::log1p(angle_value(geom[k].N, V))); break;
      case Identity::harmonic: u.set(k, chern_ricci_value(angle_value(geom[k].N, V), K)); break;
    }
  }

  if (id == Identity::flat_ricci || id == Identity::flat_chern) return conformal_curvature(grid, geom, u);

  const ScalarField lb = laplace_beltrami(grid, lambda_field(grid, geom), u);
  ScalarField r(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!lb.defined[k]) continue;
    switch (id) {
      case Identity::ricci: r.set(k, lb.value[k] - 4.0 * geom[k].K); break;
      case Identity::chern: r.set(k, lb.value[k] - geom[k].K); break;
      default: r.set(k, lb.value[k]); break;
    }
  }
  return r;
}

inline ResidualReport residual(const WeierstrassSurface& s, Identity id, const DomainGrid& grid,
                               const Direction& V = Direction::normalized(0, 0, 1), const Tolerances& tol = {}) {
  return summarize(id, grid, residual_field(s, id, grid, V, tol));
}

inline ResidualReport ricci_residual(const WeierstrassSurface& s, const DomainGrid& grid, const Tolerances& tol = {}) {
  return residual(s, Identity::ricci, grid, Direction::normalized(0, 0, 1), tol);
}

inline ResidualReport chern_residual(const WeierstrassSurface& s, const DomainGrid& grid, const Direction& V,
                                     const Tolerances& tol = {}) {
  return residual(s, Identity::chern, grid, V, tol);
}

inline ResidualReport harmonic_residual(const WeierstrassSurface& s, const DomainGrid& grid, const Direction& V,
                                        const Tolerances& tol = {}) {
  return residual(s, Identity::harmonic, grid, V, tol);
}

// ---------------------------------------------------------------------------
// Convergence studies

struct ConvergenceLevel {
  double h = 0.0;
  double sup_norm = 0.0;       // over nodes shared with the coarsest grid
  double sup_norm_full = 0.0;  // over every usable node of this level
  double rms = 0.0;
  std::size_t usable_count = 0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
  /// Least-squares slope of log(sup) against log(h); nullopt when some
  /// level is already at round-off (sup <= 1e-12) and the order is
  /// meaningless.
  std::optional<double> order;
};

inline std::optional<double> fitted_order(const std::vector<ConvergenceLevel>& levels) {
  if (levels.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& l : levels) {
    if (!(l.sup_norm > 1e-12)) return std::nullopt;
    const double x = std::log(l.h);
    const double y = std::log(l.sup_norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(levels.size());
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

/// Evaluates `residual_at` on `coarse` and `levels - 1` successive
/// refinements. The fitted sup is taken over the coarse nodes usable at
/// every level, so that boundary nodes entering at finer levels do not
/// pollute the order. Each level needs at least 25 usable points.
inline ConvergenceStudy convergence_study(const DomainGrid& coarse, int levels,
                                          const std::function<ScalarField(const DomainGrid&)>& residual_at) {
  if (levels < 2) throw Error("convergence study needs at least 2 levels");
  std::vector<DomainGrid> grids{coarse};
  for (int level = 1; level < levels; ++level) grids.push_back(refine(grids.back()));

  std::vector<ScalarField> fields;
  for (int level = 0; level < levels; ++level) {
    ScalarField r;
    try {
      r = residual_at(grids[static_cast<std::size_t>(level)]);
    } catch (const EmptyReportError& e) {
      throw ConvergenceLevelError(level, e.what());
    }
    const std::size_t n = r.defined_count();
    if (n < 25) throw ConvergenceLevelError(level, "only " + std::to_string(n) + " usable points (need 25)");
    fields.push_back(std::move(r));
  }

  // Coarse node (i, j) is node (i, j) * 2^level of the refined grid.
  std::vector<std::size_t> common;
  for (int j = 0; j < coarse.ny; ++j) {
    for (int i = 0; i < coarse.nx; ++i) {
      bool all = true;
      for (int level = 0; level < levels && all; ++level) {
        const int scale = 1 << level;
        const auto& g = grids[static_cast<std::size_t>(level)];
        all = fields[static_cast<std::size_t>(level)].defined[g.index(i * scale, j * scale)] != 0;
      }
      if (all) common.push_back(coarse.index(i, j));
    }
  }
  if (common.empty()) throw ConvergenceLevelError(0, "no node is usable at every level");

  ConvergenceStudy study;
  for (int level = 0; level < levels; ++level) {
    const auto& g = grids[static_cast<std::size_t>(level)];
    const auto& r = fields[static_cast<std::size_t>(level)];
    const ResidualReport full = summarize(Identity::ricci, g, r);
    const int scale = 1 << level;
    double sup = 0.0;
    for (std::size_t k : common) {
      const int i = static_cast<int>(k % static_cast<std::size_t>(coarse.nx));
      const int j = static_cast<int>(k / static_cast<std::size_t>(coarse.nx));
      sup = std::max(sup, std::abs(r.value[g.index(i * scale, j * scale)]));
    }
    study.levels.push_back({g.h, sup, full.sup_norm, full.rms, full.usable_count});
  }
  study.order = fitted_order(study.levels);
  return study;
}

// ---------------------------------------------------------------------------
// Standard verification grids
//
// ln(1 + N_V) is singular where N = -V. Near such a point the stencil error
// grows like h²/r⁴ in the z-distance r, and the flat_chern residual is
// further amplified by (1 + N_V)⁻². Verification grids for V-dependent
// identities therefore drop a disk around each such point and require
// 1 + N_V >= kVerificationChernMargin.

inline constexpr double kChernExclusionRadius = 0.9;
inline constexpr double kVerificationChernMargin = 0.5;

inline Tolerances verification_tolerances(Identity id, Tolerances base = {}) {
  if (needs_direction(id)) base.chern = std::max(base.chern, kVerificationChernMargin);
  return base;
}

inline DomainSpec verification_domain(const WeierstrassSurface& s, Identity id, const Direction& V) {
  DomainSpec d = s.domain();
  if (!needs_direction(id)) return d;
  auto [lo, hi] = d.bounds();
  const Complex pad(kChernExclusionRadius, kChernExclusionRadius);
  for (Complex p : gauss_map_preimages(s, -V.vector(), lo - pad, hi + pad)) {
    d = d.with_exclusion({p, kChernExclusionRadius});
  }
  return d;
}

inline DomainGrid verification_grid(const WeierstrassSurface& s, Identity id, const Direction& V, double h) {
  return make_grid(verification_domain(s, id, V), h);
}

/// Residual on the standard verification grid of spacing h.
inline ResidualReport verify_identity(const WeierstrassSurface& s, Identity id, double h,
                                      const Direction& V = Direction::normalized(0, 0, 1), Tolerances base = {}) {
  return residual(s, id, verification_grid(s, id, V, h), V, verification_tolerances(id, base));
}

inline ConvergenceStudy convergence_study(const WeierstrassSurface& s, Identity id, const DomainGrid& coarse,
                                          int levels, const Direction& V = Direction::normalized(0, 0, 1),
                                          const Tolerances& tol = {}) {
  return convergence_study(coarse, levels, [&](const DomainGrid& g) { return residual_field(s, id, g, V, tol); });
}

/// Convergence study on the standard verification grids.
inline ConvergenceStudy verify_convergence(const WeierstrassSurface& s, Identity id, double coarse_h, int levels,
                                           const Direction& V = Direction::normalized(0, 0, 1), Tolerances base = {}) {
  return convergence_study(s, id, verification_grid(s, id, V, coarse_h), levels, V, verification_tolerances(id, base));
}

}  // namespace minsurf
