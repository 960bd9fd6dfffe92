#pragma once

// Integration of the Weierstrass forms to points of R³, total curvature and
// mesh export.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "minsurf/domain.hpp"
#include "minsurf/error.hpp"
#include "minsurf/grid.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/surface.hpp"

namespace minsurf {

/// Gauss–Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n)) {
    if (n < 1) throw Error("Gauss-Legendre rule needs at least one node");
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double pn = n == 1 ? x : p1;
        const double pn1 = n == 1 ? 1.0 : p0;
        dp = n * (x * pn - pn1) / (x * x - 1.0);
        const double dx = pn / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(n - 1 - i);
      nodes[a] = -x;
      nodes[b] = x;
      weights[a] = w;
      weights[b] = w;
    }
  }
};

struct QuadratureSpec {
  int nodes_per_segment = 16;
};

struct ImmersedPoint {
  Vec3 position = Vec3::Zero();
  Complex zeta;
  Vec3 normal = Vec3::Zero();
};

namespace detail {

inline double segment_distance(Complex a, Complex b, Complex p) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

inline std::string point_text(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

}  // namespace detail

/// Re ∫ Φ dw along the straight segment a -> b.
inline Vec3 integrate_segment(const WeierstrassSurface& s, Complex a, Complex b, const QuadratureSpec& q = {}) {
  if (q.nodes_per_segment < 4) throw Error("quadrature needs at least 4 nodes per segment");
  for (const auto& e : s.domain().excluded()) {
    if (detail::segment_distance(a, b, e.point) < e.radius) {
      throw PathThroughPoleError("integration path " + detail::point_text(a) + " -> " + detail::point_text(b) +
                                 " passes within " + std::to_string(e.radius) + " of excluded point " +
                                 detail::point_text(e.point));
    }
  }
  const GaussLegendre rule(q.nodes_per_segment);
  const Complex half = (b - a) / 2.0;
  const Complex mid = (a + b) / 2.0;
  std::array<Complex, 3> sum{};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const Complex w = mid + half * rule.nodes[k];
    const Evaluation g = evaluate(s.g(), w);
    const Evaluation f = evaluate(s.f(), w);
    if (!g || !f) {
      throw PathThroughPoleError("integration path " + detail::point_text(a) + " -> " + detail::point_text(b) +
                                 " hits a pole near " + detail::point_text(w));
    }
    const Complex g2 = *g * *g;
    const double wk = rule.weights[k];
    sum[0] += wk * (*f * (1.0 - g2) / 2.0);
    sum[1] += wk * (Complex(0.0, 1.0) * *f * (1.0 + g2) / 2.0);
    sum[2] += wk * (*f * *g);
  }
  return Vec3((half * sum[0]).real(), (half * sum[1]).real(), (half * sum[2]).real());
}

/// Position along a polyline path; path.front() is taken as the origin of
/// the integration.
inline Vec3 integrate_path(const WeierstrassSurface& s, const std::vector<Complex>& path, const QuadratureSpec& q = {}) {
  Vec3 x = Vec3::Zero();
  for (std::size_t k = 1; k < path.size(); ++k) x += integrate_segment(s, path[k - 1], path[k], q);
  return x;
}

/// X(zeta) with X(base_point) = 0, via the straight segment from the base
/// point. Throws PathThroughPoleError.
inline ImmersedPoint immerse(const WeierstrassSurface& s, Complex zeta, const QuadratureSpec& q = {}) {
  const auto n = gauss_map(s, zeta);
  if (!n) throw PathThroughPoleError("point " + detail::point_text(zeta) + " is a pole of the Weierstrass data");
  ImmersedPoint p;
  p.zeta = zeta;
  p.normal = n.value;
  p.position = zeta == s.base_point() ? Vec3::Zero() : integrate_segment(s, s.base_point(), zeta, q);
  return p;
}

// ---------------------------------------------------------------------------

struct TotalCurvature {
  double value = 0.0;  // steradians, signed
  std::size_t cells = 0;
  std::size_t flat_cells = 0;
  bool all_flat = false;  // every sampled cell was a flat point
};

/// Default spacing for a disk of the given radius.
inline double auto_spacing(double radius) { return std::max(0.005, radius / 600.0); }

/// Midpoint rule for ∫∫ K λ² dx dy over `region`. Cell centers sit at
/// anchor + (k + 1/2) h. Flat points contribute zero; poles are skipped.
/// The region is not required to lie in the surface's catalog domain;
/// only the data's own poles restrict it.
inline TotalCurvature total_curvature(const WeierstrassSurface& s, const DomainSpec& region, double h) {
  if (!(h > 0.0)) throw Error("total curvature: spacing must be positive");
  const auto [lo, hi] = region.bounds();
  const Complex a = region.anchor();
  const long ilo = static_cast<long>(std::floor((lo.real() - a.real()) / h));
  const long ihi = static_cast<long>(std::ceil((hi.real() - a.real()) / h));
  const long jlo = static_cast<long>(std::floor((lo.imag() - a.imag()) / h));
  const long jhi = static_cast<long>(std::ceil((hi.imag() - a.imag()) / h));
  const int rows = static_cast<int>(jhi - jlo);

  struct RowSum {
    double sum = 0.0;
    std::size_t cells = 0;
    std::size_t flat = 0;
  };
  std::vector<RowSum> per_row(static_cast<std::size_t>(std::max(rows, 0)));
  parallel_for(rows, [&](int r) {
    RowSum acc;
    const double y = a.imag() + (static_cast<double>(jlo + r) + 0.5) * h;
    for (long i = ilo; i < ihi; ++i) {
      const Complex z(a.real() + (static_cast<double>(i) + 0.5) * h, y);
      if (!region.contains(z)) continue;
      const PointGeometry p = point_geometry(s, z);
      if (p.mask == Mask::pole) continue;
      ++acc.cells;
      if (p.mask == Mask::flat_point) {
        ++acc.flat;
        continue;
      }
      acc.sum += p.K * p.lambda * p.lambda;
    }
    per_row[static_cast<std::size_t>(r)] = acc;
  });

  TotalCurvature out;
  for (const auto& r : per_row) {
    out.value += r.sum;
    out.cells += r.cells;
    out.flat_cells += r.flat;
  }
  if (out.cells == 0) throw EmptyReportError("total curvature: every cell of the region is masked");
  out.value *= h * h;
  out.all_flat = out.flat_cells == out.cells;
  return out;
}

// ---------------------------------------------------------------------------
// Mesh export

struct MeshVertex {
  std::size_t grid_index = 0;
  Complex zeta;
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
  double K = 0.0;
  double chi = std::numeric_limits<double>::quiet_NaN();  // NaN where masked
};

struct Mesh {
  std::vector<MeshVertex> vertices;
  std::vector<std::array<std::size_t, 4>> quads;  // 0-based vertex indices, counter-clockwise in z
};

/// Immerses every usable node (inside the domain, no pole, reachable by a
/// pole-free straight path) and emits a quad for every cell whose four
/// corners are usable. Vertices are in row-major grid order.
inline Mesh build_mesh(const WeierstrassSurface& s, const DomainGrid& grid, const Direction& V,
                       const QuadratureSpec& q = {}, const Tolerances& tol = {}) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<MeshVertex> slots(grid.size());
  std::vector<std::uint8_t> usable(grid.size(), 0);
  parallel_for(grid.ny, [&](int j) {
    for (int i = 0; i < grid.nx; ++i) {
      const std::size_t k = grid.index(i, j);
      if (!grid.inside[k]) continue;
      const PointReport r = point_report(s, grid.point(i, j), V, tol);
      if (r.geometry.mask == Mask::pole) continue;
      try {
        const ImmersedPoint p = immerse(s, grid.point(i, j), q);
        slots[k] = {k, p.zeta, p.position, p.normal, r.geometry.K, r.chi};
        usable[k] = 1;
      } catch (const PathThroughPoleError&) {
      }
    }
  });

  Mesh mesh;
  std::vector<std::size_t> vertex_of(grid.size(), none);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!usable[k]) continue;
    vertex_of[k] = mesh.vertices.size();
    mesh.vertices.push_back(slots[k]);
  }
  for (int j = 0; j + 1 < grid.ny; ++j) {
    for (int i = 0; i + 1 < grid.nx; ++i) {
      const std::array<std::size_t, 4> c{vertex_of[grid.index(i, j)], vertex_of[grid.index(i + 1, j)],
                                         vertex_of[grid.index(i + 1, j + 1)], vertex_of[grid.index(i, j + 1)]};
      if (c[0] == none || c[1] == none || c[2] == none || c[3] == none) continue;
      mesh.quads.push_back(c);
    }
  }
  return mesh;
}

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// ASCII OBJ: v, vn and 1-based quad faces f a//a b//b c//c d//d.
inline void write_obj(const Mesh& mesh, std::ostream& out) {
  using detail::fmt17;
  out << "# minsurf mesh: " << mesh.vertices.size() << " vertices, " << mesh.quads.size() << " quads\n";
  for (const auto& v : mesh.vertices) {
    out << "v " << fmt17(v.position.x()) << ' ' << fmt17(v.position.y()) << ' ' << fmt17(v.position.z()) << '\n';
  }
  for (const auto& v : mesh.vertices) {
    out << "vn " << fmt17(v.normal.x()) << ' ' << fmt17(v.normal.y()) << ' ' << fmt17(v.normal.z()) << '\n';
  }
  for (const auto& f : mesh.quads) {
    out << 'f';
    for (std::size_t idx : f) out << ' ' << idx + 1 << "//" << idx + 1;
    out << '\n';
  }
}

/// Per-vertex CSV, one row per OBJ vertex in the same order.
inline void write_sidecar(const Mesh& mesh, std::ostream& out) {
  using detail::fmt17;
  out << "x,y,K,N1,N2,N3,chi\n";
  for (const auto& v : mesh.vertices) {
    out << fmt17(v.zeta.real()) << ',' << fmt17(v.zeta.imag()) << ',' << fmt17(v.K) << ',' << fmt17(v.normal.x())
        << ',' << fmt17(v.normal.y()) << ',' << fmt17(v.normal.z()) << ',' << fmt17(v.chi) << '\n';
  }
}

/// Parsed contents of an OBJ file written by write_obj.
struct ObjData {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;
  std::vector<std::array<std::size_t, 4>> quads;  // 1-based, as in the file
};

inline ObjData read_obj(std::istream& in) {
  ObjData d;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v" || tag == "vn") {
      std::array<std::string, 3> t;
      ls >> t[0] >> t[1] >> t[2];
      if (!ls) throw Error("malformed OBJ line: " + line);
      const Vec3 v(std::stod(t[0]), std::stod(t[1]), std::stod(t[2]));
      (tag == "v" ? d.positions : d.normals).push_back(v);
    } else if (tag == "f") {
      std::array<std::size_t, 4> face{};
      for (auto& idx : face) {
        std::string tok;
        ls >> tok;
        if (!ls) throw Error("malformed OBJ face: " + line);
        idx = std::stoul(tok.substr(0, tok.find('/')));
      }
      d.quads.push_back(face);
    }
  }
  return d;
}

}  // namespace minsurf
