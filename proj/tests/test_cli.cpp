#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "minsurf/immersion.hpp"
#include "oracles.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = MINSURF_CLI_PATH;

oracle::Run cli(const std::string& args, bool with_stderr = false) {
  return oracle::run(kCli + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null"));
}

json cli_json(const std::string& args) {
  const auto r = cli(args);
  EXPECT_EQ(r.status, 0) << args;
  return json::parse(r.out);
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("minsurf_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, Catalog) {
  const auto text = cli("catalog");
  EXPECT_EQ(text.status, 0);
  EXPECT_NE(text.out.find("enneper\n  g = z\n  f = 1\n"), std::string::npos);
  const json all = cli_json("catalog --format json");
  ASSERT_TRUE(all.is_array());
  EXPECT_EQ(all.size(), 6u);
  const json one = cli_json("catalog --format json --name enneper");
  EXPECT_EQ(one["name"], "enneper");
  EXPECT_EQ(one["g"], "z");
  EXPECT_EQ(one["f"], "1");
  EXPECT_EQ(cli("catalog --name nosuch").status, 2);
}

TEST(Cli, EvalEnneper) {
  const json r = cli_json("eval -s enneper --at 1,0 --v 0,0,-1 --format json");
  EXPECT_EQ(r["mask"], "valid");
  EXPECT_NEAR(r["K"].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(r["chi"].get<double>(), 0.0, 1e-12);
  const auto text = cli("eval -s enneper --at 1,0 --v 0,0,-1");
  EXPECT_EQ(text.status, 0);
  EXPECT_NE(text.out.find("K      -1\n"), std::string::npos) << text.out;
}

TEST(Cli, EvalMaskedPoints) {
  const auto pole = cli("eval -s catenoid --at 0,0", true);
  EXPECT_EQ(pole.status, 2);
  EXPECT_NE(pole.out.find("pole"), std::string::npos) << pole.out;
  const auto chern = cli("eval -s enneper --at 0,0 --v 0,0,1", true);
  EXPECT_EQ(chern.status, 2);
  EXPECT_NE(chern.out.find("chern_singular"), std::string::npos) << chern.out;
  const auto outside = cli("eval -s enneper --at 5,0", true);
  EXPECT_EQ(outside.status, 2);
  EXPECT_NE(outside.out.find("outside"), std::string::npos) << outside.out;
}

TEST(Cli, BadInputIsExitTwo) {
  EXPECT_EQ(cli("eval -s enneper --at 1,0 --v 0,0,0").status, 2);
  EXPECT_EQ(cli("eval -s enneper --at 1").status, 2);
  EXPECT_EQ(cli("eval -s enneper").status, 2);  // missing --at
  EXPECT_EQ(cli("verify -s enneper --identity nonsense").status, 2);
  EXPECT_EQ(cli("frobnicate").status, 2);
  EXPECT_EQ(cli("totalcurv -s enneper --radius -1").status, 2);
}

TEST(Cli, SurfaceFromJsonFile) {
  TempDir dir;
  const std::string path = dir / "scaled.json";
  std::ofstream(path) << R"({"name": "big", "g": "z", "f": "5", "domain": {"kind": "disk", "center": [0, 0], "radius": 1.5}})";
  const json r = cli_json("eval -s " + path + " --at 1,0 --v 0,0,-1 --format json");
  EXPECT_NEAR(r["chi"].get<double>(), std::log(5.0), 1e-12);
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_EQ(cli("eval -s " + (dir / "broken.json") + " --at 1,0").status, 2);
  EXPECT_EQ(cli("eval -s " + (dir / "missing.json") + " --at 1,0").status, 3);
}

TEST(Cli, VerifyExitCodes) {
  const json ok = cli_json("verify -s enneper --identity ricci --h 0.01 --format json");
  EXPECT_LE(ok["sup"].get<double>(), 5e-3);
  EXPECT_EQ(cli("verify -s enneper --identity ricci --h 0.01 --tol 1e-12").status, 1);
  EXPECT_EQ(cli("verify -s plane --identity ricci").status, 2);
}

TEST(Cli, VerifyRefineOrder) {
  const json st = cli_json("verify -s enneper --identity flat-chern --v 0,0,1 --refine 3 --format json");
  ASSERT_EQ(st["levels"].size(), 3u);
  EXPECT_DOUBLE_EQ(st["levels"][2]["h"].get<double>(), 0.01);
  EXPECT_NEAR(st["order"].get<double>(), 2.0, 0.2);
  EXPECT_EQ(cli("verify -s enneper --identity harmonic --v 0,0,-1 --refine 3").status, 0);  // round-off level
}

TEST(Cli, Classify) {
  const json e = cli_json("classify -s enneper");
  EXPECT_TRUE(e["is_enneper_candidate"].get<bool>());
  EXPECT_NEAR(e["best_direction"][2].get<double>(), -1.0, 1e-6);
  EXPECT_FALSE(cli_json("classify -s catenoid")["is_enneper_candidate"].get<bool>());
  EXPECT_FALSE(cli_json("classify -s enneper2")["is_enneper_candidate"].get<bool>());
  EXPECT_EQ(cli("classify -s plane").status, 2);
  const json t = cli_json("classify -s enneper --trace");
  EXPECT_GE(t["search_trace"].size(), 400u);
}

TEST(Cli, TotalCurvature) {
  const auto r = cli("totalcurv -s enneper --radius 3 --h 0.005");
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(std::stod(r.out), -3.6 * std::numbers::pi, 2e-3);
  const auto flat = cli("totalcurv -s plane --radius 1", true);
  EXPECT_EQ(flat.status, 0);
  EXPECT_NE(flat.out.find("warning"), std::string::npos);
  EXPECT_EQ(cli("totalcurv -s catenoid --radius 0.001 --h 0.01").status, 2);
}

TEST(Cli, FieldCsvAndErrors) {
  const auto r = cli("field -s enneper --h 0.5 --v 0,0,1");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,lambda,K,N1,N2,N3,NV,chi,mask");
  int rows = 0, chern = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
    if (line.ends_with(",chern_singular")) ++chern;
  }
  EXPECT_GT(rows, 0);
  EXPECT_EQ(chern, 1);  // only the origin
  EXPECT_EQ(cli("field -s catenoid --bounds -0.1,-0.1,0.1,0.1 --h 0.05").status, 2);
  EXPECT_EQ(cli("field -s enneper --h 0.5 --out /nonexistent-dir/x.csv").status, 3);
}

TEST(Cli, MeshWritesObjAndSidecar) {
  TempDir dir;
  const std::string obj = dir / "enneper.obj";
  const auto r = cli("mesh -s enneper --grid 41x41 --out " + obj);
  ASSERT_EQ(r.status, 0);
  std::ifstream in(obj);
  const minsurf::ObjData d = minsurf::read_obj(in);
  EXPECT_GT(d.positions.size(), 1000u);
  EXPECT_EQ(d.normals.size(), d.positions.size());
  for (const auto& n : d.normals) EXPECT_NEAR(n.norm(), 1.0, 1e-12);
  EXPECT_TRUE(fs::exists(dir / "enneper.csv"));
  EXPECT_EQ(cli("mesh -s enneper --out /nonexistent-dir/m.obj").status, 3);
  EXPECT_EQ(cli("mesh -s enneper --grid 41 --out " + obj).status, 2);
}

TEST(Cli, Determinism) {
  TempDir dir;
  for (const std::string args : {"field -s helicoid --h 0.1 --v 1,0,0", "field -s enneper --h 0.1 --format json",
                                 "classify -s catenoid --trace", "verify -s catenoid --identity chern --v 0,0,-1 --format json"}) {
    const auto a = cli(args);
    const auto b = oracle::run("MINSURF_THREADS=1 " + kCli + " " + args + " 2>/dev/null");
    EXPECT_EQ(a.status, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
  const std::string m1 = dir / "a.obj", m2 = dir / "b.obj";
  ASSERT_EQ(cli("mesh -s catenoid --out " + m1).status, 0);
  ASSERT_EQ(oracle::run("MINSURF_THREADS=1 " + kCli + " mesh -s catenoid --out " + m2 + " 2>/dev/null").status, 0);
  EXPECT_EQ(slurp(m1), slurp(m2));
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}
