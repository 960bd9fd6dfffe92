#pragma once

// Weierstrass data (g, f) and the pointwise geometry they generate.
//
// Convention: the immersion is X = Re ∫ Φ dz with
//   Φ = ( f(1 - g²)/2, i f(1 + g²)/2, f g ),
// so the induced metric is λ²|dz|² with
//   λ = |f| (1 + |g|²) / 2,
//   K = -( 4|g'| / (|f| (1 + |g|²)²) )²,
//   N = ( 2 Re g, 2 Im g, |g|² - 1 ) / (1 + |g|²).

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "minsurf/domain.hpp"
#include "minsurf/error.hpp"
#include "minsurf/expression.hpp"

namespace minsurf {

using Vec3 = Eigen::Vector3d;

enum class Mask : std::uint8_t { valid, flat_point, pole, chern_singular, outside };

inline std::string_view mask_name(Mask m) {
  switch (m) {
    case Mask::valid: return "valid";
    case Mask::flat_point: return "flat_point";
    case Mask::pole: return "pole";
    case Mask::chern_singular: return "chern_singular";
    case Mask::outside: return "outside";
  }
  return "unknown";
}

/// Degeneracy thresholds. A point is a flat point when |K| < flat, and
/// Chern-singular for a direction V when 1 + N_V < chern.
struct Tolerances {
  double flat = 1e-12;
  double chern = 1e-9;
};

/// Constant unit vector in R³.
class Direction {
 public:
  Direction() = default;

  /// Normalizes v; throws on a zero or non-finite vector.
  static Direction normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw Error("direction must be a finite non-zero vector");
    Direction d;
    d.v_ = v / n;
    return d;
  }
  static Direction normalized(double x, double y, double z) { return normalized(Vec3(x, y, z)); }

  const Vec3& vector() const { return v_; }
  double operator[](int i) const { return v_[i]; }

 private:
  Vec3 v_{0.0, 0.0, 1.0};
};

/// Geodesic angle between two directions, in radians.
inline double angle_between(const Direction& a, const Direction& b) {
  return std::atan2(a.vector().cross(b.vector()).norm(), a.vector().dot(b.vector()));
}

/// A value together with the mask that qualifies it. The value is
/// meaningful only when mask == valid, except where documented.
template <class T>
struct Masked {
  Mask mask = Mask::valid;
  T value{};

  bool ok() const { return mask == Mask::valid; }
  explicit operator bool() const { return ok(); }
};

struct PointGeometry {
  Mask mask = Mask::pole;  // valid | flat_point | pole | outside
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double K = std::numeric_limits<double>::quiet_NaN();
  Vec3 N = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
};

class WeierstrassSurface {
 public:
  /// Throws if the base point is outside the domain or a pole of f, g or g'.
  WeierstrassSurface(std::string name, Expression g, Expression f, DomainSpec domain, Complex base_point)
      : name_(std::move(name)),
        g_(std::move(g)),
        f_(std::move(f)),
        g_prime_(differentiate(g_)),
        domain_(std::move(domain)),
        base_point_(base_point) {
    if (!domain_.contains(base_point_)) throw Error("surface '" + name_ + "': base point lies outside the domain");
    if (!evaluate(f_, base_point_) || !evaluate(g_, base_point_) || !evaluate(g_prime_, base_point_)) {
      throw Error("surface '" + name_ + "': base point is a pole of the Weierstrass data");
    }
  }

  const std::string& name() const { return name_; }
  const Expression& g() const { return g_; }
  const Expression& f() const { return f_; }
  const Expression& g_prime() const { return g_prime_; }
  const DomainSpec& domain() const { return domain_; }
  Complex base_point() const { return base_point_; }

  /// Homothety of R³ by t: replaces f with t*f.
  WeierstrassSurface scaled(double t) const {
    if (!(t > 0.0)) throw Error("scale factor must be positive");
    return WeierstrassSurface(name_, g_, Expression::constant(t) * f_, domain_, base_point_);
  }

  WeierstrassSurface with_domain(DomainSpec d) const {
    return WeierstrassSurface(name_, g_, f_, std::move(d), base_point_);
  }
  WeierstrassSurface with_domain(DomainSpec d, Complex base_point) const {
    return WeierstrassSurface(name_, g_, f_, std::move(d), base_point);
  }

 private:
  std::string name_;
  Expression g_;
  Expression f_;
  Expression g_prime_;
  DomainSpec domain_;
  Complex base_point_;
};

/// λ, K and N from one evaluation of g, f and g'. Points outside the domain
/// are not rejected here; grid sampling applies the domain.
inline PointGeometry point_geometry(const WeierstrassSurface& s, Complex zeta, const Tolerances& tol = {}) {
  PointGeometry out;
  const Evaluation g = evaluate(s.g(), zeta);
  const Evaluation f = evaluate(s.f(), zeta);
  const Evaluation dg = evaluate(s.g_prime(), zeta);
  if (!g || !f || !dg) return out;

  const double g2 = std::norm(*g);
  const double one_g2 = 1.0 + g2;
  const double abs_f = std::abs(*f);
  const double lambda = abs_f * one_g2 / 2.0;
  if (!(lambda > kPoleModulus) || !std::isfinite(lambda)) return out;

  const double root = 4.0 * std::abs(*dg) / (abs_f * one_g2 * one_g2);
  const double K = -root * root;
  const Vec3 N(2.0 * g->real() / one_g2, 2.0 * g->imag() / one_g2, (g2 - 1.0) / one_g2);
  if (!std::isfinite(K) || !N.allFinite()) return out;

  out.lambda = lambda;
  out.K = K;
  out.N = N;
  out.mask = std::abs(K) < tol.flat ? Mask::flat_point : Mask::valid;
  return out;
}

/// λ = |f|(1+|g|²)/2. Only poles mask λ; flat points do not.
inline Masked<double> conformal_factor(const WeierstrassSurface& s, Complex zeta) {
  const PointGeometry p = point_geometry(s, zeta);
  if (p.mask == Mask::pole) return {Mask::pole, p.lambda};
  return {Mask::valid, p.lambda};
}

/// Gauss curvature. The value is also filled in for flat points.
inline Masked<double> gauss_curvature(const WeierstrassSurface& s, Complex zeta, const Tolerances& tol = {}) {
  const PointGeometry p = point_geometry(s, zeta, tol);
  return {p.mask, p.K};
}

/// Unit normal. Poles of g are masked; the limit (0,0,1) is not substituted.
inline Masked<Vec3> gauss_map(const WeierstrassSurface& s, Complex zeta) {
  const PointGeometry p = point_geometry(s, zeta);
  if (p.mask == Mask::pole) return {Mask::pole, p.N};
  return {Mask::valid, p.N};
}

inline double angle_value(const Vec3& N, const Direction& V) { return N.dot(V.vector()); }

/// log of the ratio of the Chern and Ricci conformal factors,
/// ln((1+N_V)² / (-K)^{1/2}).
inline double chern_ricci_value(double NV, double K) { return 2.0 * std::log1p(NV) - 0.5 * std::log(-K); }

/// N_V = <N, V>. The value is reported even when chern_singular.
inline Masked<double> angle_function(const WeierstrassSurface& s, Complex zeta, const Direction& V,
                                     const Tolerances& tol = {}) {
  const PointGeometry p = point_geometry(s, zeta, tol);
  if (p.mask == Mask::pole) return {Mask::pole, std::numeric_limits<double>::quiet_NaN()};
  const double nv = angle_value(p.N, V);
  return {1.0 + nv < tol.chern ? Mask::chern_singular : Mask::valid, nv};
}

struct PointReport {
  Complex zeta;
  PointGeometry geometry;
  double NV = std::numeric_limits<double>::quiet_NaN();
  double chi = std::numeric_limits<double>::quiet_NaN();
  Mask mask = Mask::pole;
};

inline PointReport point_report(const WeierstrassSurface& s, Complex zeta, const Direction& V,
                                const Tolerances& tol = {}) {
  PointReport r;
  r.zeta = zeta;
  r.geometry = point_geometry(s, zeta, tol);
  r.mask = r.geometry.mask;
  if (r.geometry.mask == Mask::pole || r.geometry.mask == Mask::outside) return r;
  r.NV = angle_value(r.geometry.N, V);
  if (r.mask == Mask::valid && 1.0 + r.NV < tol.chern) r.mask = Mask::chern_singular;
  if (r.mask == Mask::valid) r.chi = chern_ricci_value(r.NV, r.geometry.K);
  return r;
}

inline Masked<double> chern_ricci(const WeierstrassSurface& s, Complex zeta, const Direction& V,
                                  const Tolerances& tol = {}) {
  const PointReport r = point_report(s, zeta, V, tol);
  return {r.mask, r.chi};
}

/// Inverse stereographic projection matching N above: the value of g whose
/// normal is n. Returns nullopt for the north pole (g = infinity).
inline std::optional<Complex> stereographic_value(const Vec3& n) {
  if (n.z() >= 1.0 - 1e-15) return std::nullopt;
  return Complex(n.x(), n.y()) / (1.0 - n.z());
}

/// Points of the box [lo, hi] where the Gauss map equals `target`, found by
/// Newton iteration from a lattice of seeds. Used to cut singular loci of
/// the angle function out of sampling domains.
inline std::vector<Complex> gauss_map_preimages(const WeierstrassSurface& s, const Vec3& target, Complex lo,
                                                Complex hi, int seeds_per_side = 24) {
  const std::optional<Complex> w = stereographic_value(target);
  // Residual F(z) and its derivative; for g = infinity, F = 1/g.
  auto step = [&](Complex z) -> std::optional<Complex> {
    const Evaluation g = evaluate(s.g(), z);
    const Evaluation dg = evaluate(s.g_prime(), z);
    if (!g || !dg) return std::nullopt;
    Complex F, dF;
    if (w) {
      F = *g - *w;
      dF = *dg;
    } else {
      if (std::abs(*g) < kPoleModulus) return std::nullopt;
      F = 1.0 / *g;
      dF = -*dg / (*g * *g);
    }
    if (std::abs(dF) < kPoleModulus) return std::nullopt;
    return F / dF;
  };
  auto residual = [&](Complex z) -> double {
    const Evaluation g = evaluate(s.g(), z);
    if (!g) return w ? std::numeric_limits<double>::infinity() : 0.0;
    return w ? std::abs(*g - *w) : 1.0 / std::abs(*g);
  };

  std::vector<Complex> roots;
  const double span = std::max(hi.real() - lo.real(), hi.imag() - lo.imag());
  for (int a = 0; a < seeds_per_side; ++a) {
    for (int b = 0; b < seeds_per_side; ++b) {
      Complex z(lo.real() + (a + 0.5) * (hi.real() - lo.real()) / seeds_per_side,
                lo.imag() + (b + 0.5) * (hi.imag() - lo.imag()) / seeds_per_side);
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const auto d = step(z);
        if (!d) {
          // Landed on a pole of g: that is a root of 1/g.
          converged = !w && !evaluate(s.g(), z);
          break;
        }
        z -= *d;
        if (std::abs(z - lo) > 100.0 * (1.0 + span)) break;
        if (std::abs(*d) < 1e-14 * (1.0 + std::abs(z))) {
          converged = residual(z) < 1e-9;
          break;
        }
      }
      if (!converged) continue;
      if (z.real() < lo.real() || z.real() > hi.real() || z.imag() < lo.imag() || z.imag() > hi.imag()) continue;
      const bool seen = std::any_of(roots.begin(), roots.end(), [&](Complex r) { return std::abs(r - z) < 1e-6; });
      if (!seen) roots.push_back(z);
    }
  }
  return roots;
}

}  // namespace minsurf
