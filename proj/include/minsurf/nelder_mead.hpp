#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace minsurf {

struct NelderMeadOptions {
  int max_iterations = 200;
  double ftol = 1e-10;  // stop once max f - min f over the simplex is below this
  double initial_step = 0.05;
};

template <std::size_t N>
struct NelderMeadResult {
  std::array<double, N> x{};
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

/// Downhill simplex with the standard coefficients (1, 2, 1/2, 1/2).
/// `on_iteration(best_x, best_f)` is called after every iteration.
template <std::size_t N, class F, class Observer>
NelderMeadResult<N> nelder_mead(F&& f, const std::array<double, N>& start, const NelderMeadOptions& opt,
                                Observer&& on_iteration) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> simplex;
  std::array<double, N + 1> value{};
  NelderMeadResult<N> res;
  auto eval = [&](const Point& p) {
    ++res.evaluations;
    return f(p);
  };

  simplex[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += opt.initial_step;
  }
  for (std::size_t i = 0; i <= N; ++i) value[i] = eval(simplex[i]);

  auto combine = [](const Point& a, const Point& b, double t) {
    Point out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  std::array<std::size_t, N + 1> order{};
  for (std::size_t i = 0; i <= N; ++i) order[i] = i;
  auto sort = [&] {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
  };

  sort();
  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[N - 1];
    if (value[worst] - value[best] < opt.ftol) break;

    Point centroid{};
    for (std::size_t k = 0; k < N; ++k) {
      for (std::size_t i = 0; i < N; ++i) centroid[i] += simplex[order[k]][i] / static_cast<double>(N);
    }

    const Point reflected = combine(centroid, simplex[worst], -1.0);
    const double fr = eval(reflected);
    if (fr < value[best]) {
      const Point expanded = combine(centroid, simplex[worst], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        value[worst] = fe;
      } else {
        simplex[worst] = reflected;
        value[worst] = fr;
      }
    } else if (fr < value[second]) {
      simplex[worst] = reflected;
      value[worst] = fr;
    } else {
      const bool outside = fr < value[worst];
      const Point contracted = outside ? combine(centroid, reflected, 0.5) : combine(centroid, simplex[worst], 0.5);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : value[worst])) {
        simplex[worst] = contracted;
        value[worst] = fc;
      } else {
        for (std::size_t k = 1; k <= N; ++k) {
          const std::size_t idx = order[k];
          simplex[idx] = combine(simplex[best], simplex[idx], 0.5);
          value[idx] = eval(simplex[idx]);
        }
      }
    }
    sort();
    on_iteration(simplex[order.front()], value[order.front()]);
  }
  res.x = simplex[order.front()];
  res.value = value[order.front()];
  return res;
}

template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& f, const std::array<double, N>& start, const NelderMeadOptions& opt = {}) {
  return nelder_mead<N>(std::forward<F>(f), start, opt, [](const auto&, double) {});
}

}  // namespace minsurf
