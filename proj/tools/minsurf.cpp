// minsurf command-line front end.
//
// Exit codes: 0 success, 1 tolerance failure, 2 degenerate or invalid
// input (masked point, empty report, too few samples, bad arguments),
// 3 I/O error.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "minsurf/minsurf.hpp"

namespace {

using namespace minsurf;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitIo = 3;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_numbers(const std::string& text, std::size_t count, char sep, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(sep, pos);
    if (end == std::string::npos) end = text.size();
    const char* b = text.data() + pos;
    const char* e = text.data() + end;
    while (b < e && *b == ' ') ++b;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) throw Error(std::string("bad ") + what + " '" + text + "'");
    out.push_back(v);
    pos = end + 1;
  }
  if (out.size() != count) {
    throw Error(std::string(what) + " needs " + std::to_string(count) + " values, got '" + text + "'");
  }
  return out;
}

struct Common {
  std::string surface;
  std::string v_text = "0,0,1";
  std::string format = "text";
  double flat_tol = Tolerances{}.flat;
  double chern_tol = Tolerances{}.chern;

  WeierstrassSurface load() const { return load_surface(surface); }
  Direction direction() const {
    const auto v = parse_numbers(v_text, 3, ',', "direction");
    return Direction::normalized(v[0], v[1], v[2]);
  }
  Tolerances tolerances() const { return {flat_tol, chern_tol}; }
};

void add_surface(CLI::App* cmd, Common& c) {
  cmd->add_option("-s,--surface", c.surface, "catalog name or path to a JSON surface spec")->required();
}
void add_direction(CLI::App* cmd, Common& c) {
  cmd->add_option("--v", c.v_text, "direction V as x,y,z (normalized on load)")->capture_default_str();
}
void add_tolerances(CLI::App* cmd, Common& c) {
  cmd->add_option("--flat-tol", c.flat_tol, "flat point threshold on |K|")->capture_default_str();
  cmd->add_option("--chern-tol", c.chern_tol, "threshold on 1 + N_V")->capture_default_str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  return out;
}

void finish_output(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

// --- catalog ---------------------------------------------------------------

int cmd_catalog(const std::string& format, const std::string& name) {
  std::vector<WeierstrassSurface> list;
  if (name.empty()) {
    list = catalog();
  } else {
    list.push_back(catalog_surface(name));
  }
  if (format == "json") {
    json arr = json::array();
    for (const auto& s : list) arr.push_back(surface_to_json(s));
    std::cout << (name.empty() ? arr : arr[0]).dump(2) << '\n';
    return kExitOk;
  }
  for (const auto& s : list) {
    std::cout << s.name() << "\n  g = " << to_string(s.g()) << "\n  f = " << to_string(s.f())
              << "\n  domain = " << domain_to_json(s.domain()).dump() << "\n  base_point = " << fmt(s.base_point().real())
              << "," << fmt(s.base_point().imag()) << '\n';
  }
  return kExitOk;
}

// --- eval ------------------------------------------------------------------

int cmd_eval(const Common& c, const std::string& at) {
  const WeierstrassSurface s = c.load();
  const auto p = parse_numbers(at, 2, ',', "point");
  const Complex zeta(p[0], p[1]);
  // A pole wins over "outside": excluded disks are usually drawn around poles.
  PointReport r = point_report(s, zeta, c.direction(), c.tolerances());
  if (r.mask != Mask::pole && !s.domain().contains(zeta)) r.mask = Mask::outside;
  if (c.format == "json") {
    std::cout << to_json(r).dump(2) << '\n';
  } else {
    std::cout << "surface " << s.name() << " at " << fmt(zeta.real()) << "," << fmt(zeta.imag()) << '\n'
              << "mask   " << mask_name(r.mask) << '\n';
    if (r.geometry.mask != Mask::pole) {
      std::cout << "lambda " << fmt(r.geometry.lambda) << '\n'
                << "K      " << fmt(r.geometry.K) << '\n'
                << "N      " << fmt(r.geometry.N.x()) << "," << fmt(r.geometry.N.y()) << "," << fmt(r.geometry.N.z())
                << '\n'
                << "NV     " << fmt(r.NV) << '\n'
                << "chi    " << fmt(r.chi) << '\n';
    }
  }
  if (r.mask != Mask::valid) {
    std::cerr << "masked point: " << mask_name(r.mask) << '\n';
    return kExitDegenerate;
  }
  return kExitOk;
}

// --- field -----------------------------------------------------------------

DomainGrid grid_for(const WeierstrassSurface& s, double h, const std::string& bounds) {
  if (bounds.empty()) return make_grid(s.domain(), h);
  const auto b = parse_numbers(bounds, 4, ',', "bounds");
  const int nx = static_cast<int>(std::floor((b[2] - b[0]) / h + 1e-9)) + 1;
  const int ny = static_cast<int>(std::floor((b[3] - b[1]) / h + 1e-9)) + 1;
  return make_box_grid(s.domain(), {b[0], b[1]}, {b[0] + (nx - 1) * h, b[1] + (ny - 1) * h}, nx, ny);
}

int cmd_field(const Common& c, double h, const std::string& bounds, const std::string& out_path) {
  const WeierstrassSurface s = c.load();
  const DomainGrid grid = grid_for(s, h, bounds);
  const auto samples = sample_field(s, grid, c.direction(), c.tolerances());
  std::size_t valid = 0;
  for (const auto& f : samples) valid += f.mask == Mask::valid ? 1 : 0;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file = open_output(out_path);
    out = &file;
  }
  if (c.format == "json") {
    json arr = json::array();
    for (const auto& f : samples) {
      PointReport r;
      r.zeta = f.zeta;
      r.mask = f.mask;
      r.geometry.lambda = f.lambda;
      r.geometry.K = f.K;
      r.geometry.N = f.N;
      r.NV = f.NV;
      r.chi = f.chi;
      arr.push_back(to_json(r));
    }
    *out << arr.dump() << '\n';
  } else {
    *out << "x,y,lambda,K,N1,N2,N3,NV,chi,mask\n";
    for (const auto& f : samples) {
      *out << fmt(f.zeta.real()) << ',' << fmt(f.zeta.imag()) << ',' << fmt(f.lambda) << ',' << fmt(f.K) << ','
           << fmt(f.N.x()) << ',' << fmt(f.N.y()) << ',' << fmt(f.N.z()) << ',' << fmt(f.NV) << ',' << fmt(f.chi)
           << ',' << mask_name(f.mask) << '\n';
    }
  }
  finish_output(*out, out_path.empty() ? "stdout" : out_path);
  if (valid == 0) {
    std::cerr << "every grid point is masked\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string identity;
  double h = 0.01;
  int refine = 0;
  double tol = 5e-3;
  double min_order = 1.8;
  std::string grid = "standard";
};

int cmd_verify(const Common& c, const VerifyArgs& a) {
  const WeierstrassSurface s = c.load();
  const auto id = identity_from_name(a.identity);
  if (!id) throw Error("unknown identity '" + a.identity + "'");
  const Direction V = c.direction();
  const bool standard = a.grid == "standard";
  const Tolerances tol = standard ? verification_tolerances(*id, c.tolerances()) : c.tolerances();

  if (a.refine == 0) {
    const DomainGrid grid = standard ? verification_grid(s, *id, V, a.h) : make_grid(s.domain(), a.h);
    const ResidualReport r = residual(s, *id, grid, V, tol);
    const bool pass = r.sup_norm <= a.tol;
    if (c.format == "json") {
      json j = to_json(r);
      j["tolerance"] = a.tol;
      j["pass"] = pass;
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << identity_name(r.identity) << " on " << s.name() << ": h=" << fmt(r.h) << " grid " << r.nx << "x"
                << r.ny << " usable=" << r.usable_count << "\n  sup=" << fmt(r.sup_norm) << " rms=" << fmt(r.rms)
                << "\n  " << (pass ? "PASS" : "FAIL") << " (tolerance " << fmt(a.tol) << ")\n";
    }
    return pass ? kExitOk : kExitTolerance;
  }

  if (a.refine < 2) throw Error("--refine needs at least 2 levels");
  // The study ends at --h: the coarsest level is h * 2^(levels-1).
  const double coarse_h = a.h * static_cast<double>(1 << (a.refine - 1));
  const DomainGrid coarse =
      standard ? verification_grid(s, *id, V, coarse_h) : make_grid(s.domain(), coarse_h);
  const ConvergenceStudy st = convergence_study(s, *id, coarse, a.refine, V, tol);
  // A residual already at round-off has no meaningful order.
  const bool roundoff = st.levels.back().sup_norm <= 1e-9;
  const bool pass = roundoff || (st.order && *st.order >= a.min_order);
  if (c.format == "json") {
    json j = to_json(*id, st);
    j["roundoff"] = roundoff;
    j["pass"] = pass;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << identity_name(*id) << " convergence on " << s.name() << "\n  h                        sup (common nodes)       usable\n";
    for (const auto& l : st.levels) {
      std::printf("  %-24s %-24s %zu\n", fmt(l.h).c_str(), fmt(l.sup_norm).c_str(), l.usable_count);
    }
    std::cout << "  fitted order " << (st.order ? fmt(*st.order) : std::string("undefined")) << (roundoff ? " (round-off level)" : "")
              << "\n  " << (pass ? "PASS" : "FAIL") << '\n';
  }
  return pass ? kExitOk : kExitTolerance;
}

// --- classify --------------------------------------------------------------

int cmd_classify(const Common& c, double h, double threshold, bool trace) {
  const WeierstrassSurface s = c.load();
  ClassifierOptions opt;
  opt.chern_tol = c.chern_tol;
  const DomainGrid grid = make_grid(s.domain(), h);
  Tolerances tol = c.tolerances();
  const ClassificationResult r = classify(sample_geometry_for_classification(s, grid, tol), threshold, opt);
  json j = to_json(r, trace);
  j["surface"] = s.name();
  j["h"] = h;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

// --- mesh ------------------------------------------------------------------

int cmd_mesh(const Common& c, const std::string& grid_text, const std::string& bounds, const std::string& out_path,
             std::string sidecar_path, int nodes) {
  const WeierstrassSurface s = c.load();
  const auto n = parse_numbers(grid_text, 2, 'x', "grid");
  const int nx = static_cast<int>(n[0]);
  const int ny = static_cast<int>(n[1]);
  if (nx != n[0] || ny != n[1]) throw Error("grid sizes must be integers");
  Complex lo, hi;
  if (bounds.empty()) {
    std::tie(lo, hi) = s.domain().bounds();
  } else {
    const auto b = parse_numbers(bounds, 4, ',', "bounds");
    lo = {b[0], b[1]};
    hi = {b[2], b[3]};
  }
  // Square cells: shrink the longer side of the box if needed.
  const double hx = (hi.real() - lo.real()) / (nx - 1);
  const double hy = (hi.imag() - lo.imag()) / (ny - 1);
  const double step = std::min(hx, hy);
  const Complex center = (lo + hi) / 2.0;
  lo = center - Complex(step * (nx - 1), step * (ny - 1)) / 2.0;
  hi = center + Complex(step * (nx - 1), step * (ny - 1)) / 2.0;
  const DomainGrid grid = make_box_grid(s.domain(), lo, hi, nx, ny);

  const Mesh mesh = build_mesh(s, grid, c.direction(), QuadratureSpec{nodes}, c.tolerances());
  if (mesh.vertices.empty()) {
    std::cerr << "no grid vertex could be immersed\n";
    return kExitDegenerate;
  }
  if (sidecar_path.empty()) {
    const auto dot = out_path.rfind('.');
    sidecar_path = (dot == std::string::npos ? out_path : out_path.substr(0, dot)) + ".csv";
  }
  {
    auto out = open_output(out_path);
    write_obj(mesh, out);
    finish_output(out, out_path);
  }
  {
    auto out = open_output(sidecar_path);
    write_sidecar(mesh, out);
    finish_output(out, sidecar_path);
  }
  std::cout << "wrote " << out_path << " (" << mesh.vertices.size() << " vertices, " << mesh.quads.size()
            << " quads) and " << sidecar_path << '\n';
  return kExitOk;
}

// --- totalcurv -------------------------------------------------------------

int cmd_totalcurv(const Common& c, double radius, const std::string& center_text, std::optional<double> h) {
  const WeierstrassSurface s = c.load();
  const auto ctr = parse_numbers(center_text, 2, ',', "center");
  const DomainSpec region(Disk{{ctr[0], ctr[1]}, radius});
  const double spacing = h ? *h : auto_spacing(radius);
  const TotalCurvature tc = total_curvature(s, region, spacing);
  if (tc.all_flat) std::cerr << "warning: every cell is a flat point; total curvature reported as 0\n";
  if (c.format == "json") {
    std::cout << json{{"surface", s.name()}, {"radius", radius}, {"h", spacing}, {"total_curvature", tc.value},
                      {"cells", tc.cells}, {"flat_cells", tc.flat_cells}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << fmt(tc.value) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal surfaces from Weierstrass data: geometry, identity checks, Enneper classification"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h is free for --h spacing options

  auto* catalog_cmd = app.add_subcommand("catalog", "list built-in surfaces");
  std::string catalog_format = "text";
  std::string catalog_name;
  catalog_cmd->add_option("--format", catalog_format)->check(CLI::IsMember({"text", "json"}));
  catalog_cmd->add_option("--name", catalog_name, "show a single entry");

  Common common;

  auto* eval_cmd = app.add_subcommand("eval", "point report: lambda, K, N, N_V, chi");
  std::string at;
  add_surface(eval_cmd, common);
  add_direction(eval_cmd, common);
  add_tolerances(eval_cmd, common);
  eval_cmd->add_option("--at", at, "point as re,im")->required();
  eval_cmd->add_option("--format", common.format)->check(CLI::IsMember({"text", "json"}));

  auto* field_cmd = app.add_subcommand("field", "sample fields on a grid");
  double field_h = 0.05;
  std::string field_bounds, field_out;
  add_surface(field_cmd, common);
  add_direction(field_cmd, common);
  add_tolerances(field_cmd, common);
  field_cmd->add_option("--h", field_h, "grid spacing")->capture_default_str();
  field_cmd->add_option("--bounds", field_bounds, "x0,y0,x1,y1 (default: domain)");
  field_cmd->add_option("--out", field_out, "output file (default stdout)");
  field_cmd->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json", "text"}));

  auto* verify_cmd = app.add_subcommand("verify", "residual of an identity, or a convergence study");
  VerifyArgs va;
  add_surface(verify_cmd, common);
  add_direction(verify_cmd, common);
  add_tolerances(verify_cmd, common);
  verify_cmd->add_option("--identity", va.identity, "ricci | chern | harmonic | flat-ricci | flat-chern")->required();
  verify_cmd->add_option("--h", va.h, "grid spacing (finest level with --refine)")->capture_default_str();
  verify_cmd->add_option("--refine", va.refine, "number of levels of a convergence study");
  verify_cmd->add_option("--tol", va.tol, "sup-norm tolerance")->capture_default_str();
  verify_cmd->add_option("--min-order", va.min_order, "required fitted order")->capture_default_str();
  verify_cmd->add_option("--grid", va.grid, "standard (singular loci removed) or domain")
      ->check(CLI::IsMember({"standard", "domain"}))
      ->capture_default_str();
  verify_cmd->add_option("--format", common.format)->check(CLI::IsMember({"text", "json"}));

  auto* classify_cmd = app.add_subcommand("classify", "numerical Enneper candidate test");
  double classify_h = kClassifySpacing;
  double threshold = kDefaultClassifyThreshold;
  bool trace = false;
  add_surface(classify_cmd, common);
  add_tolerances(classify_cmd, common);
  classify_cmd->add_option("--h", classify_h, "grid spacing")->capture_default_str();
  classify_cmd->add_option("--threshold", threshold, "relative threshold on sigma")->capture_default_str();
  classify_cmd->add_flag("--trace", trace, "include the search trace");

  auto* mesh_cmd = app.add_subcommand("mesh", "export an OBJ mesh and a per-vertex CSV");
  std::string grid_text = "41x41", mesh_bounds, mesh_out, sidecar;
  int nodes = QuadratureSpec{}.nodes_per_segment;
  add_surface(mesh_cmd, common);
  add_direction(mesh_cmd, common);
  add_tolerances(mesh_cmd, common);
  mesh_cmd->add_option("--grid", grid_text, "NXxNY vertices")->capture_default_str();
  mesh_cmd->add_option("--bounds", mesh_bounds, "x0,y0,x1,y1 (default: domain bounding box)");
  mesh_cmd->add_option("--out", mesh_out, "OBJ path")->required();
  mesh_cmd->add_option("--sidecar", sidecar, "CSV path (default: OBJ path with .csv)");
  mesh_cmd->add_option("--nodes", nodes, "Gauss-Legendre nodes per segment")->capture_default_str();

  auto* tc_cmd = app.add_subcommand("totalcurv", "total curvature over a disk");
  double radius = 0.0;
  std::string center = "0,0";
  std::optional<double> tc_h;
  add_surface(tc_cmd, common);
  tc_cmd->add_option("--radius", radius, "disk radius")->required()->check(CLI::PositiveNumber);
  tc_cmd->add_option("--center", center, "disk center re,im")->capture_default_str();
  tc_cmd->add_option("--h", tc_h, "cell size (default max(0.005, R/600))");
  tc_cmd->add_option("--format", common.format)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitDegenerate;
  }

  try {
    if (*catalog_cmd) return cmd_catalog(catalog_format, catalog_name);
    if (*eval_cmd) return cmd_eval(common, at);
    if (*field_cmd) {
      if (common.format == "text") common.format = "csv";
      return cmd_field(common, field_h, field_bounds, field_out);
    }
    if (*verify_cmd) return cmd_verify(common, va);
    if (*classify_cmd) return cmd_classify(common, classify_h, threshold, trace);
    if (*mesh_cmd) return cmd_mesh(common, grid_text, mesh_bounds, mesh_out, sidecar, nodes);
    if (*tc_cmd) return cmd_totalcurv(common, radius, center, tc_h);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const EmptyReportError& e) {
    std::cerr << "empty report: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const InsufficientSamplesError& e) {
    std::cerr << e.what() << '\n';
    return kExitDegenerate;
  } catch (const PathThroughPoleError& e) {
    std::cerr << "path through pole: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "surface spec: " << e.what() << '\n';
    return kExitDegenerate;
  }
  return kExitDegenerate;
}
