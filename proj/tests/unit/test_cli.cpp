#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("lightray_cli_" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& body) const {
    std::ofstream(dir / name) << body;
    return dir / name;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "lightray");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lightray::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("phantom normalises specs") {
  Scratch s;
  auto spec = s.write("spec.json", R"({"n": 3, "m": 2, "c": 1,
    "terms": [{"coeff": {"1,0": 0.5, "3,3": -1}, "center": [0, 0, 0, 0], "sigma": 1}]})");
  auto r = run({"--out", s.dir.string(), "phantom", spec.string()});
  REQUIRE(r.code == 0);
  auto doc = json::parse(s.read("phantom.json"));
  CHECK(doc["terms"].size() == 1);
  CHECK(doc["terms"][0]["coeff"].contains("0,1"));
  CHECK_FALSE(doc["terms"][0]["coeff"].contains("1,0"));

  auto bad = s.write("bad.json", R"({"n": 3, "m": 0, "terms": [{"coeff": {"": 1}, "center": [0,0,0,0], "sigma": 0}]})");
  auto rb = run({"--out", s.dir.string(), "phantom", bad.string()});
  CHECK(rb.code == 2);
  CHECK(rb.err.find("sigma") != std::string::npos);

  auto rd = run({"--out", s.dir.string(), "phantom"});
  CHECK(rd.code == 0);
  CHECK(json::parse(s.read("phantom.json"))["terms"].size() == 1);
}

TEST_CASE("forward writes one row per ray and moment") {
  Scratch s;
  REQUIRE(run({"--out", s.dir.string(), "--seed", "5", "forward"}).code == 0);
  const std::string first = s.read("forward.csv");
  CHECK(count_lines(first) == 1 + 20);
  REQUIRE(run({"--out", s.dir.string(), "--seed", "5", "forward"}).code == 0);
  CHECK(s.read("forward.csv") == first);
  REQUIRE(run({"--out", s.dir.string(), "--seed", "6", "forward"}).code == 0);
  CHECK(s.read("forward.csv") != first);

  auto rays = s.write("rays.csv", "t,x1,x2,x3,omega1,omega2,omega3\n0,0,0,0,1,0,0\n");
  REQUIRE(run({"--out", s.dir.string(), "forward", "--rays", rays.string()}).code == 0);
  std::istringstream csv(s.read("forward.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(row.substr(row.rfind(',') + 1, 7) == "1.25331");
}

TEST_CASE("verify suites and exit codes") {
  Scratch s;
  auto ok = run({"--out", s.dir.string(), "--set", "verify.samples=5", "verify", "algebra"});
  CHECK(ok.code == 0);
  auto report = json::parse(s.read("verify_algebra.json"));
  CHECK(report["pass"] == true);
  CHECK(report["suite"] == "algebra");
  for (const auto& c : report["checks"]) CHECK(c["pass"] == true);

  auto broken = run({"--out", s.dir.string(), "--set", "verify.samples=5", "--set", "verify.inject_fault=commutator",
                     "verify", "algebra"});
  CHECK(broken.code == 1);
  CHECK(json::parse(s.read("verify_algebra.json"))["pass"] == false);

  CHECK(run({"--out", s.dir.string(), "verify", "nonsense"}).code == 2);
  CHECK(run({"--out", s.dir.string(), "verify"}).code == 2);
}

TEST_CASE("config files reject unknown fields") {
  Scratch s;
  auto cfg = s.write("cfg.json", R"({"version": 1, "slice": {"nodes": 3}})");
  auto r = run({"--config", cfg.string(), "--out", s.dir.string(), "forward"});
  CHECK(r.code == 2);
  CHECK(r.err.find("slice.nodes") != std::string::npos);

  auto wrong = s.write("v2.json", R"({"version": 2})");
  CHECK(run({"--config", wrong.string(), "--out", s.dir.string(), "forward"}).code == 2);
  CHECK(run({"--set", "quadrature.nodes=4", "--out", s.dir.string(), "forward"}).code == 2);
}

TEST_CASE("slice output is independent of the thread count") {
  Scratch s;
  const std::vector<std::string> common{"--out", s.dir.string(), "--set", "slice.count=2", "--set",
                                        "slice.nodes_per_axis=8", "--set", "generate={\"m\": 1}"};
  auto args1 = common;
  args1.insert(args1.end(), {"--threads", "1", "slice"});
  REQUIRE(run(args1).code == 0);
  const std::string one = s.read("slice.csv");
  auto args3 = common;
  args3.insert(args3.end(), {"--threads", "3", "slice"});
  REQUIRE(run(args3).code == 0);
  CHECK(s.read("slice.csv") == one);
  CHECK(count_lines(one) == 3);
}

TEST_CASE("reconstruct") {
  Scratch s;
  auto r = run({"--out", s.dir.string(), "--set", "recon.zeta_count=2", "reconstruct", "--rank", "1"});
  CHECK(r.code == 0);
  auto report = json::parse(s.read("recon_rank1.json"));
  CHECK(report["sign"] == 1);
  CHECK(report["points"] == 2);
  CHECK(report["aggregate_rel_error"].get<double>() <= 0.05);
  CHECK(count_lines(s.read("recon_rank1.csv")) == 3);

  auto planar = run({"--out", s.dir.string(), "--set", "generate={\"n\": 2, \"m\": 1}", "reconstruct", "--rank", "1"});
  CHECK(planar.code == 2);
  CHECK(planar.err.find("two") != std::string::npos);

  CHECK(run({"--out", s.dir.string(), "reconstruct", "--rank", "4"}).code == 2);
  CHECK(run({"--out", s.dir.string(), "reconstruct"}).code == 2);
}

}  // TEST_SUITE
