#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "minsurf/error.hpp"

namespace minsurf {

using Complex = std::complex<double>;

struct Disk {
  Complex center;
  double radius = 1.0;
};

struct Annulus {
  Complex center;
  double inner = 0.5;
  double outer = 1.0;
};

struct Rectangle {
  Complex lo;
  Complex hi;
};

/// A point removed from the domain together with an open disk around it.
struct ExcludedPoint {
  Complex point;
  double radius = 0.0;
};

/// Region of the z-plane on which a surface is sampled.
class DomainSpec {
 public:
  using Shape = std::variant<Disk, Annulus, Rectangle>;

  DomainSpec() : DomainSpec(Disk{}) {}

  explicit DomainSpec(Shape shape, std::vector<ExcludedPoint> excluded = {})
      : shape_(std::move(shape)), excluded_(std::move(excluded)) {
    validate();
  }

  const Shape& shape() const { return shape_; }
  const std::vector<ExcludedPoint>& excluded() const { return excluded_; }

  std::string kind() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Disk>) return "disk";
          else if constexpr (std::is_same_v<T, Annulus>) return "annulus";
          else return "rectangle";
        },
        shape_);
  }

  DomainSpec with_exclusion(ExcludedPoint p) const {
    DomainSpec copy = *this;
    copy.excluded_.push_back(p);
    copy.validate();
    return copy;
  }

  /// Closed region test (boundary included up to rounding) minus open
  /// exclusion disks.
  bool contains(Complex z) const {
    constexpr double slack = 1e-12;
    const bool in_shape = std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Disk>) {
            return std::abs(z - s.center) <= s.radius * (1.0 + slack);
          } else if constexpr (std::is_same_v<T, Annulus>) {
            const double r = std::abs(z - s.center);
            return r >= s.inner * (1.0 - slack) && r <= s.outer * (1.0 + slack);
          } else {
            const double sx = slack * (1.0 + std::abs(s.hi.real() - s.lo.real()));
            const double sy = slack * (1.0 + std::abs(s.hi.imag() - s.lo.imag()));
            return z.real() >= s.lo.real() - sx && z.real() <= s.hi.real() + sx && z.imag() >= s.lo.imag() - sy &&
                   z.imag() <= s.hi.imag() + sy;
          }
        },
        shape_);
    if (!in_shape) return false;
    return std::none_of(excluded_.begin(), excluded_.end(),
                        [&](const ExcludedPoint& e) { return std::abs(z - e.point) < e.radius; });
  }

  /// Lower-left and upper-right corners of the bounding box.
  std::pair<Complex, Complex> bounds() const {
    return std::visit(
        [](const auto& s) -> std::pair<Complex, Complex> {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Disk>) {
            return {s.center - Complex(s.radius, s.radius), s.center + Complex(s.radius, s.radius)};
          } else if constexpr (std::is_same_v<T, Annulus>) {
            return {s.center - Complex(s.outer, s.outer), s.center + Complex(s.outer, s.outer)};
          } else {
            return {s.lo, s.hi};
          }
        },
        shape_);
  }

  /// Grid nodes are placed at anchor + (i, j) * h so that halving h nests
  /// the coarse nodes inside the fine ones.
  Complex anchor() const {
    return std::visit(
        [](const auto& s) -> Complex {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Rectangle>) return s.lo;
          else return s.center;
        },
        shape_);
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Disk>) {
            if (!(s.radius > 0.0)) throw Error("domain: disk radius must be positive");
          } else if constexpr (std::is_same_v<T, Annulus>) {
            if (!(s.inner > 0.0) || !(s.inner < s.outer)) throw Error("domain: annulus needs 0 < inner < outer");
          } else {
            if (!(s.lo.real() < s.hi.real()) || !(s.lo.imag() < s.hi.imag())) {
              throw Error("domain: rectangle corners must satisfy lo < hi");
            }
          }
        },
        shape_);
    for (const auto& e : excluded_) {
      if (!(e.radius >= 0.0)) throw Error("domain: exclusion radius must be non-negative");
    }
  }

  Shape shape_;
  std::vector<ExcludedPoint> excluded_;
};

}  // namespace minsurf
