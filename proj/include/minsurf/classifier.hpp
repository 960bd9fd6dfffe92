#pragma once

// Enneper detection: a minimal surface whose Chern–Ricci function
// χ_V = ln((1+N_V)²/(-K)^{1/2}) is constant for some unit V is a piece of
// Enneper's surface up to isometries and homotheties. The classifier
// searches the sphere for the V that makes χ_V most nearly constant on a
// sampled patch and reports a numerical candidate verdict; sampling cannot
// certify exact constancy.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "minsurf/error.hpp"
#include "minsurf/grid.hpp"
#include "minsurf/nelder_mead.hpp"
#include "minsurf/surface.hpp"

namespace minsurf {

/// Normals and ln(-K) at the valid (non-flat, pole-free) nodes of a grid.
/// χ_V for any V is cheap to evaluate from these.
struct SampledGeometry {
  std::vector<Vec3> normals;
  std::vector<double> log_neg_k;

  std::size_t size() const { return normals.size(); }

  /// Applies an ambient rotation to every normal; K is unchanged.
  SampledGeometry rotated(const Eigen::Matrix3d& R) const {
    SampledGeometry out = *this;
    for (auto& n : out.normals) n = R * n;
    return out;
  }
};

inline SampledGeometry sample_geometry_for_classification(const WeierstrassSurface& s, const DomainGrid& grid,
                                                          const Tolerances& tol = {}) {
  SampledGeometry out;
  for (const PointGeometry& p : sample_geometry(s, grid, tol)) {
    if (p.mask != Mask::valid) continue;
    out.normals.push_back(p.N);
    out.log_neg_k.push_back(std::log(-p.K));
  }
  return out;
}

struct ChiStats {
  double mean = 0.0;
  double sigma = 0.0;  // population standard deviation
  double oscillation = 0.0;  // max - min
  std::size_t count = 0;
};

/// Statistics of χ_V over samples with 1 + N_V >= chern_tol.
inline ChiStats chi_statistics(const SampledGeometry& g, const Direction& V, double chern_tol = Tolerances{}.chern) {
  ChiStats st;
  std::vector<double> chi;
  chi.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double nv = g.normals[k].dot(V.vector());
    if (1.0 + nv < chern_tol) continue;
    chi.push_back(2.0 * std::log1p(nv) - 0.5 * g.log_neg_k[k]);
  }
  st.count = chi.size();
  if (chi.empty()) return st;
  double sum = 0.0;
  for (double c : chi) sum += c;
  st.mean = sum / static_cast<double>(chi.size());
  double ss = 0.0;
  for (double c : chi) ss += (c - st.mean) * (c - st.mean);
  st.sigma = std::sqrt(ss / static_cast<double>(chi.size()));
  const auto [mn, mx] = std::minmax_element(chi.begin(), chi.end());
  st.oscillation = *mx - *mn;
  return st;
}

inline constexpr std::size_t kMinChiSamples = 25;

/// Throws InsufficientSamplesError below kMinChiSamples usable samples.
inline ChiStats chi_spread(const SampledGeometry& g, const Direction& V, double chern_tol = Tolerances{}.chern) {
  const ChiStats st = chi_statistics(g, V, chern_tol);
  if (st.count < kMinChiSamples) throw InsufficientSamplesError(st.count, kMinChiSamples);
  return st;
}

inline ChiStats chi_spread(const WeierstrassSurface& s, const DomainGrid& grid, const Direction& V,
                           const Tolerances& tol = {}) {
  return chi_spread(sample_geometry_for_classification(s, grid, tol), V, tol.chern);
}

/// n nearly uniform directions on the unit sphere (golden-angle spiral).
inline std::vector<Direction> fibonacci_sphere(int n) {
  std::vector<Direction> out;
  out.reserve(static_cast<std::size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.push_back(Direction::normalized(r * std::cos(phi), r * std::sin(phi), z));
  }
  return out;
}

struct TraceEntry {
  Direction direction;
  double sigma = 0.0;
  double oscillation = 0.0;
};

struct ClassificationResult {
  bool is_enneper_candidate = false;
  Direction best_direction;
  double sigma_best = 0.0;
  double chi_mean = 0.0;
  std::size_t samples_used = 0;
  double threshold = 0.0;
  std::vector<TraceEntry> search_trace;
};

struct ClassifierOptions {
  int net_size = 400;
  NelderMeadOptions refine{200, 1e-10, 0.05};
  double chern_tol = Tolerances{}.chern;
};

/// Global net over the sphere, then Nelder–Mead on spherical angles around
/// the best net direction. The angles are measured from a polar axis
/// orthogonal to that direction, so the start sits on the chart's equator,
/// away from the coordinate singularity.
inline ClassificationResult optimize_direction(const SampledGeometry& g, const ClassifierOptions& opt = {}) {
  ClassificationResult res;
  std::size_t best_count_seen = 0;
  const TraceEntry* best = nullptr;
  for (const Direction& V : fibonacci_sphere(opt.net_size)) {
    const ChiStats st = chi_statistics(g, V, opt.chern_tol);
    best_count_seen = std::max(best_count_seen, st.count);
    if (st.count < kMinChiSamples) continue;
    res.search_trace.push_back({V, st.sigma, st.oscillation});
  }
  if (res.search_trace.empty()) throw InsufficientSamplesError(best_count_seen, kMinChiSamples);
  best = &*std::min_element(res.search_trace.begin(), res.search_trace.end(),
                            [](const TraceEntry& a, const TraceEntry& b) { return a.sigma < b.sigma; });

  const Vec3 a = best->direction.vector();
  Vec3 c = a.unitOrthogonal();
  const Vec3 b = c.cross(a);
  auto direction_at = [&](const std::array<double, 2>& angles) {
    const double theta = angles[0];
    const double phi = angles[1];
    return Direction::normalized(std::sin(theta) * std::cos(phi) * a + std::sin(theta) * std::sin(phi) * b +
                                 std::cos(theta) * c);
  };
  auto objective = [&](const std::array<double, 2>& angles) {
    const ChiStats st = chi_statistics(g, direction_at(angles), opt.chern_tol);
    return st.count < kMinChiSamples ? std::numeric_limits<double>::infinity() : st.sigma;
  };
  std::vector<TraceEntry> refinement;
  nelder_mead<2>(objective, {std::numbers::pi / 2.0, 0.0}, opt.refine,
                 [&](const std::array<double, 2>& x, double) {
                   const Direction V = direction_at(x);
                   const ChiStats st = chi_statistics(g, V, opt.chern_tol);
                   if (st.count >= kMinChiSamples) refinement.push_back({V, st.sigma, st.oscillation});
                 });
  res.search_trace.insert(res.search_trace.end(), refinement.begin(), refinement.end());

  const TraceEntry& winner = *std::min_element(res.search_trace.begin(), res.search_trace.end(),
                                                [](const TraceEntry& x, const TraceEntry& y) { return x.sigma < y.sigma; });
  const ChiStats st = chi_statistics(g, winner.direction, opt.chern_tol);
  res.best_direction = winner.direction;
  res.sigma_best = winner.sigma;
  res.chi_mean = st.mean;
  res.samples_used = st.count;
  return res;
}

inline ClassificationResult optimize_direction(const WeierstrassSurface& s, const DomainGrid& grid,
                                               const ClassifierOptions& opt = {}) {
  Tolerances tol;
  tol.chern = opt.chern_tol;
  return optimize_direction(sample_geometry_for_classification(s, grid, tol), opt);
}

inline constexpr double kDefaultClassifyThreshold = 1e-6;

/// Candidate verdict: sigma_best < threshold * (1 + |chi_mean|).
inline ClassificationResult classify(const SampledGeometry& g, double threshold = kDefaultClassifyThreshold,
                                     const ClassifierOptions& opt = {}) {
  ClassificationResult res = optimize_direction(g, opt);
  res.threshold = threshold;
  res.is_enneper_candidate = res.sigma_best < threshold * (1.0 + std::abs(res.chi_mean));
  return res;
}

inline ClassificationResult classify(const WeierstrassSurface& s, const DomainGrid& grid,
                                     double threshold = kDefaultClassifyThreshold, const ClassifierOptions& opt = {}) {
  Tolerances tol;
  tol.chern = opt.chern_tol;
  return classify(sample_geometry_for_classification(s, grid, tol), threshold, opt);
}

/// Default classification grid spacing.
inline constexpr double kClassifySpacing = 0.05;

}  // namespace minsurf
