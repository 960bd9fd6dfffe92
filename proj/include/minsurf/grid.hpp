#pragma once

// Rectangular sampling lattices in the z-plane and per-point field sampling.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "minsurf/domain.hpp"
#include "minsurf/error.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/surface.hpp"

namespace minsurf {

/// Lattice x0 + i*h, y0 + j*h for 0 <= i < nx, 0 <= j < ny, stored row by
/// row (j major). `inside` flags lattice nodes that lie in the domain.
struct DomainGrid {
  DomainSpec domain;
  double x0 = 0.0;
  double y0 = 0.0;
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> inside;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i); }
  Complex point(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
  Complex point(std::size_t k) const {
    return point(static_cast<int>(k % static_cast<std::size_t>(nx)), static_cast<int>(k / static_cast<std::size_t>(nx)));
  }
};

namespace detail {

inline void fill_inside(DomainGrid& grid) {
  grid.inside.assign(grid.size(), 0);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) grid.inside[grid.index(i, j)] = grid.domain.contains(grid.point(i, j)) ? 1 : 0;
  }
}

}  // namespace detail

/// Grid covering `domain` with spacing h, aligned to the domain anchor so
/// that halving h keeps every coarse node.
inline DomainGrid make_grid(const DomainSpec& domain, double h) {
  if (!(h > 0.0)) throw Error("grid spacing must be positive");
  const auto [lo, hi] = domain.bounds();
  const Complex a = domain.anchor();
  const double eps = 1e-9;
  const long ilo = static_cast<long>(std::ceil((lo.real() - a.real()) / h - eps));
  const long ihi = static_cast<long>(std::floor((hi.real() - a.real()) / h + eps));
  const long jlo = static_cast<long>(std::ceil((lo.imag() - a.imag()) / h - eps));
  const long jhi = static_cast<long>(std::floor((hi.imag() - a.imag()) / h + eps));
  DomainGrid grid;
  grid.domain = domain;
  grid.h = h;
  grid.x0 = a.real() + static_cast<double>(ilo) * h;
  grid.y0 = a.imag() + static_cast<double>(jlo) * h;
  grid.nx = static_cast<int>(ihi - ilo + 1);
  grid.ny = static_cast<int>(jhi - jlo + 1);
  if (grid.nx < 5 || grid.ny < 5) throw Error("grid needs at least 5 nodes per side; reduce h");
  detail::fill_inside(grid);
  return grid;
}

/// nx-by-ny grid spanning the box [lo, hi] (corners included); nodes
/// outside `domain` are flagged as such.
inline DomainGrid make_box_grid(const DomainSpec& domain, Complex lo, Complex hi, int nx, int ny) {
  if (nx < 5 || ny < 5) throw Error("grid needs at least 5 nodes per side");
  const double hx = (hi.real() - lo.real()) / (nx - 1);
  const double hy = (hi.imag() - lo.imag()) / (ny - 1);
  if (!(hx > 0.0) || std::abs(hx - hy) > 1e-9 * hx) throw Error("box grid must have equal positive spacing in x and y");
  DomainGrid grid;
  grid.domain = domain;
  grid.x0 = lo.real();
  grid.y0 = lo.imag();
  grid.h = hx;
  grid.nx = nx;
  grid.ny = ny;
  detail::fill_inside(grid);
  return grid;
}

/// Same box with h halved; every node of `grid` is a node of the result.
inline DomainGrid refine(const DomainGrid& grid) {
  DomainGrid fine = grid;
  fine.h = grid.h / 2.0;
  fine.nx = 2 * grid.nx - 1;
  fine.ny = 2 * grid.ny - 1;
  detail::fill_inside(fine);
  return fine;
}

/// Point geometry at every node. Nodes outside the domain get
/// Mask::outside.
inline std::vector<PointGeometry> sample_geometry(const WeierstrassSurface& s, const DomainGrid& grid,
                                                  const Tolerances& tol = {}) {
  std::vector<PointGeometry> out(grid.size());
  parallel_for(grid.ny, [&](int j) {
    for (int i = 0; i < grid.nx; ++i) {
      const std::size_t k = grid.index(i, j);
      if (!grid.inside[k]) {
        out[k].mask = Mask::outside;
        continue;
      }
      out[k] = point_geometry(s, grid.point(i, j), tol);
    }
  });
  return out;
}

/// Per-node record for field dumps.
struct FieldSample {
  Complex zeta;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double K = std::numeric_limits<double>::quiet_NaN();
  Vec3 N = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  double NV = std::numeric_limits<double>::quiet_NaN();
  double chi = std::numeric_limits<double>::quiet_NaN();
  Mask mask = Mask::outside;
};

inline std::vector<FieldSample> sample_field(const WeierstrassSurface& s, const DomainGrid& grid, const Direction& V,
                                             const Tolerances& tol = {}) {
  std::vector<FieldSample> out(grid.size());
  parallel_for(grid.ny, [&](int j) {
    for (int i = 0; i < grid.nx; ++i) {
      const std::size_t k = grid.index(i, j);
      FieldSample& f = out[k];
      f.zeta = grid.point(i, j);
      if (!grid.inside[k]) continue;
      const PointReport r = point_report(s, f.zeta, V, tol);
      f.lambda = r.geometry.lambda;
      f.K = r.geometry.K;
      f.N = r.geometry.N;
      f.NV = r.NV;
      f.chi = r.chi;
      f.mask = r.mask;
    }
  });
  return out;
}

}  // namespace minsurf
