// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "minsurf/minsurf.hpp"
#include "oracles.hpp"

using namespace minsurf;
using C = std::complex<double>;

namespace {

const Direction kUp = Direction::normalized(0, 0, 1);
const Direction kDown = Direction::normalized(0, 0, -1);
const Direction kX = Direction::normalized(1, 0, 0);

struct Check {
  bool ok = true;
  std::ostringstream notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << "\n    failed: " << what;
    }
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int failures = 0;

void criterion(int n, const std::string& title, double budget_s, const std::function<std::string(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::string summary;
  try {
    summary = body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) c.expect(secs < budget_s, "runtime " + num(secs) + " s over budget " + num(budget_s) + " s");
  if (!c.ok) ++failures;
  std::printf("%s %d %s: %s [%.2f s]%s\n", c.ok ? "PASS" : "FAIL", n, title.c_str(), summary.c_str(), secs,
              c.notes.str().c_str());
  std::fflush(stdout);
}

std::string label(const WeierstrassSurface& s, Identity id, const Direction& V) {
  std::ostringstream o;
  o << s.name() << " " << identity_name(id);
  if (needs_direction(id)) o << " V=(" << V[0] << "," << V[1] << "," << V[2] << ")";
  return o.str();
}

// sup at h = 0.01 on the full finest grid, order over h = 0.04, 0.02, 0.01.
struct StudyTally {
  int run = 0;
  int skipped = 0;
  double worst_sup = 0.0;
  double min_order = INFINITY;
  double max_order = -INFINITY;
};

void study(Check& c, StudyTally& t, const WeierstrassSurface& s, Identity id, const Direction& V) {
  ConvergenceStudy st;
  try {
    st = verify_convergence(s, id, 0.04, 3, V);
  } catch (const EmptyReportError&) {
    ++t.skipped;
    return;
  }
  if (st.levels.front().usable_count < 25) {
    ++t.skipped;
    return;
  }
  ++t.run;
  const double sup = st.levels.back().sup_norm_full;
  t.worst_sup = std::max(t.worst_sup, sup);
  c.expect(sup <= 5e-3, label(s, id, V) + " sup " + num(sup));
  c.expect(st.order.has_value(), label(s, id, V) + " order undefined");
  if (st.order) {
    t.min_order = std::min(t.min_order, *st.order);
    t.max_order = std::max(t.max_order, *st.order);
    c.expect(*st.order >= 1.8 && *st.order <= 2.2, label(s, id, V) + " order " + num(*st.order));
  }
}

std::string tally(const StudyTally& t) {
  return std::to_string(t.run) + " studies, " + std::to_string(t.skipped) + " skipped, worst sup " +
         num(t.worst_sup) + ", order in [" + num(t.min_order) + ", " + num(t.max_order) + "]";
}

const char* kGridSurfaces[] = {"enneper", "catenoid", "helicoid"};

SampledGeometry classify_sample(const WeierstrassSurface& s) {
  return sample_geometry_for_classification(s, make_grid(s.domain(), kClassifySpacing));
}

}  // namespace

int main() {
  const std::string cli = MINSURF_CLI_PATH;

  criterion(1, "total curvature", 10.0, [&](Check& c) {
    const auto r3 = oracle::run(cli + " totalcurv -s enneper --radius 3 --h 0.005");
    const auto r50 = oracle::run(cli + " totalcurv -s enneper --radius 50");
    c.expect(r3.status == 0 && r50.status == 0, "cli exit status");
    const double v3 = std::stod(r3.out);
    const double v50 = std::stod(r50.out);
    const double closed3 = -4.0 * std::numbers::pi * 9.0 / 10.0;
    c.expect(std::abs(v3 - closed3) <= 2e-3, "R=3 value " + num(v3));
    c.expect(std::abs(v50 + 4.0 * std::numbers::pi) <= 6e-2, "R=50 value " + num(v50));
    return "R=3 " + num(v3) + " (err " + num(std::abs(v3 - closed3)) + "), R=50 " + num(v50) + " (err " +
           num(std::abs(v50 + 4.0 * std::numbers::pi)) + ")";
  });

  criterion(2, "Ricci condition", 30.0, [&](Check& c) {
    StudyTally t;
    for (const char* name : kGridSurfaces) study(c, t, catalog_surface(name), Identity::ricci, kUp);
    c.expect(t.run == 3, "expected 3 studies");
    return tally(t);
  });

  criterion(3, "Chern identity", 0.0, [&](Check& c) {
    StudyTally t;
    for (const char* name : kGridSurfaces) {
      for (const Direction& V : {kUp, kDown, kX}) study(c, t, catalog_surface(name), Identity::chern, V);
    }
    c.expect(t.run > 0, "no admissible direction");
    return tally(t);
  });

  criterion(4, "flatness of the conformal metrics", 0.0, [&](Check& c) {
    StudyTally t;
    for (const char* name : kGridSurfaces) {
      const auto s = catalog_surface(name);
      study(c, t, s, Identity::flat_ricci, kUp);
      for (const Direction& V : {kUp, kDown, kX}) study(c, t, s, Identity::flat_chern, V);
    }
    c.expect(t.run > 3, "too few studies");
    return tally(t);
  });

  criterion(5, "harmonicity", 0.0, [&](Check& c) {
    int run = 0, skipped = 0;
    double worst = 0.0;
    for (const auto& s : catalog()) {
      for (const Direction& V : {kUp, kDown, kX}) {
        ResidualReport r;
        try {
          r = verify_identity(s, Identity::harmonic, 0.01, V);
        } catch (const EmptyReportError&) {
          ++skipped;  // e.g. the plane: every point is flat
          continue;
        }
        if (r.usable_count < 25) {
          ++skipped;
          continue;
        }
        ++run;
        worst = std::max(worst, r.sup_norm);
        c.expect(r.sup_norm <= 5e-3, label(s, Identity::harmonic, V) + " sup " + num(r.sup_norm));
      }
    }
    const double exact = verify_identity(catalog_surface("enneper"), Identity::harmonic, 0.01, kDown).sup_norm;
    c.expect(exact <= 1e-9, "enneper V=-e3 sup " + num(exact));
    return std::to_string(run) + " cases, " + std::to_string(skipped) + " skipped, worst sup " + num(worst) +
           ", enneper V=-e3 sup " + num(exact);
  });

  criterion(6, "Enneper characterization", 0.0, [&](Check& c) {
    std::ostringstream o;
    for (const char* name : {"enneper", "catenoid", "helicoid", "enneper2", "enneper3"}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = classify(classify_sample(catalog_surface(name)));
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      c.expect(secs < 60.0, std::string(name) + " took " + num(secs) + " s");
      const bool want = std::string(name) == "enneper";
      c.expect(r.is_enneper_candidate == want, std::string(name) + " verdict");
      if (want) {
        c.expect(r.sigma_best <= 1e-8, "enneper sigma " + num(r.sigma_best));
        const double ang = angle_between(r.best_direction, kDown);
        c.expect(ang <= 1e-3, "enneper direction off by " + num(ang));
      } else {
        c.expect(r.sigma_best >= 0.1, std::string(name) + " sigma " + num(r.sigma_best));
      }
      o << name << " " << (r.is_enneper_candidate ? "true" : "false") << " sigma " << num(r.sigma_best) << "; ";
    }
    return o.str();
  });

  criterion(7, "homothety", 0.0, [&](Check& c) {
    double worst_shift = 0.0, worst_dir = 0.0;
    for (const char* name : {"enneper", "catenoid", "helicoid", "enneper2", "enneper3"}) {
      const auto s = catalog_surface(name);
      const auto base = classify(classify_sample(s));
      for (double t : {0.1, 10.0}) {
        const auto st = s.scaled(t);
        // pointwise shift of chi by ln t
        for (C z : oracle::box_points(200, s.domain().bounds().first, s.domain().bounds().second, 99)) {
          for (const Direction& V : {kUp, kDown, kX}) {
            const auto a = chern_ricci(s, z, V);
            const auto b = chern_ricci(st, z, V);
            c.expect(a.mask == b.mask, std::string(name) + " mask changed under scaling");
            if (a.mask != Mask::valid || b.mask != Mask::valid) continue;
            worst_shift = std::max(worst_shift, std::abs(b.value - a.value - std::log(t)));
          }
        }
        const auto r = classify(classify_sample(st));
        c.expect(r.is_enneper_candidate == base.is_enneper_candidate, std::string(name) + " verdict changed");
        worst_dir = std::max(worst_dir, (r.best_direction.vector() - base.best_direction.vector()).norm());
      }
    }
    c.expect(worst_shift <= 1e-9, "chi shift error " + num(worst_shift));
    c.expect(worst_dir <= 1e-6, "direction moved by " + num(worst_dir));
    return "max |chi_t - chi - ln t| " + num(worst_shift) + ", max direction change " + num(worst_dir);
  });

  criterion(8, "oracle suite", 0.0, [&](Check& c) {
    double min_order = INFINITY, worst_deriv = 0.0, worst_pos = 0.0;
    const auto pts = oracle::annulus_points(100, 0.3, 2.0);
    for (const auto& s : catalog()) {
      for (const Expression& e : {s.g(), s.f(), s.g_prime()}) {
        const Expression d = differentiate(e);
        for (C w : pts) {
          const auto fd = oracle::central_difference(e, w);
          const auto v = evaluate(d, w);
          if (!fd || !v) continue;
          worst_deriv = std::max(worst_deriv, std::abs(*v - *fd) / (1.0 + std::abs(*fd)));
        }
      }
      if (s.name() == "plane") continue;
      const auto [lo, hi] = s.domain().bounds();
      int used = 0;
      for (C z : oracle::box_points(40, lo, hi, 4242)) {
        if (!s.domain().contains(z) || used == 5) continue;
        const auto K = gauss_curvature(s, z);
        if (!K) continue;
        ++used;
        if (std::abs(oracle::fd_curvature(s, z, 1e-3) - K.value) < 1e-9 * std::abs(K.value)) continue;
        const double order = oracle::curvature_order(s, z, K.value);
        min_order = std::min(min_order, order);
        c.expect(order >= 1.9, s.name() + " FD curvature order " + num(order));
      }
    }
    c.expect(worst_deriv <= 1e-7, "derivative mismatch " + num(worst_deriv));
    const auto e = catalog_surface("enneper");
    for (C z : oracle::annulus_points(200, 0.0, 1.5, 3)) {
      worst_pos = std::max(worst_pos, (immerse(e, z, QuadratureSpec{16}).position - oracle::enneper_position(z)).norm());
    }
    c.expect(worst_pos <= 1e-10, "immersion error " + num(worst_pos));
    return "min FD order " + num(min_order) + ", max derivative rel err " + num(worst_deriv) +
           ", max immersion err " + num(worst_pos);
  });

  std::printf("%s (%d failing)\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED", failures);
  return failures ? 1 : 0;
}
