#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "support.hpp"

using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = 0;
  std::string out;
  fs::path dir;
};

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() /
               ("cppweave-test-" + std::to_string(::getpid()) + "-" + tag + "-" +
                std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Run cli(const std::string& args, const std::string& tag, const std::string& env = "") {
  Run r;
  r.dir = fresh_dir(tag);
  fs::path log = r.dir / "stdout.log";
  std::string cmd = env + " \"" + std::string(CPPWEAVE_BIN) + "\" " + args + " --out \"" +
                    r.dir.string() + "\" > \"" + log.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(log.string());
  return r;
}

std::string instance_args(const std::string& stem) {
  return "--topology \"" + data_path(stem + "_topology.txt") + "\" --demands \"" +
         data_path(stem + "_demands.txt") + "\"";
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(read_file(p.string())); }

}  // namespace

TEST_CASE("solve on the square writes the SPP artifact only") {
  Run r = cli("solve " + instance_args("square"), "solve");
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(r.dir / "spp.json"));
  CHECK_FALSE(fs::exists(r.dir / "design.json"));
  auto spp = load_json(r.dir / "spp.json");
  CHECK(spp["scap"]["percent"].get<double>() == doctest::Approx(50.0));
  CHECK(r.out.find("wrote spp.json") != std::string::npos);
}

TEST_CASE("full run on the sharing example verifies with no extra capacity") {
  Run r = cli("all " + instance_args("sharing"), "all");
  REQUIRE(r.exit_code == 0);
  for (const char* f : {"spp.json", "design.json", "trails.json", "verification.json",
                        "verification.txt", "report.json", "report.txt", "topology.dot",
                        "group-1.dot"})
    CHECK(fs::exists(r.dir / f));
  auto report = load_json(r.dir / "report.json");
  CHECK(report["verification"] == "PASS");
  CHECK(report["extra_capacity"].get<double>() == doctest::Approx(0.0));
  CHECK(report["unrecovered"] == 0);
  CHECK(r.out.find("verification          PASS") != std::string::npos);
}

TEST_CASE("report figures recount from the artifacts") {
  Run r = cli("all " + instance_args("ring") + " --mode relaxed", "recount");
  REQUIRE(r.exit_code == 0);
  Topology t = load_topology(read_file(data_path("ring_topology.txt")));
  auto spp = load_json(r.dir / "spp.json");
  auto design = load_json(r.dir / "design.json");
  auto report = load_json(r.dir / "report.json");

  double working = 0, spare = 0, cpp = 0;
  for (const auto& d : spp["demands"])
    for (LinkId l : d["primary"]) working += d["units"].get<int>() * t.link(l).length;
  for (const auto& entry : spp["spare"])
    for (const auto& u : entry["units"])
      spare += u["width"].get<int>() * t.link(entry["link"].get<LinkId>()).length;
  for (const auto& [key, units] : design["capacity"].items())
    cpp += units.get<int>() * t.link(std::stoi(key)).length;

  CHECK(report["working"].get<double>() == doctest::Approx(working));
  CHECK(report["spp_spare"].get<double>() == doctest::Approx(spare));
  CHECK(report["scap_spp"].get<double>() == doctest::Approx(100 * spare / (spare + working)));
  CHECK(report["cpp_protection"].get<double>() == doctest::Approx(cpp));
  CHECK(report["extra_capacity"].get<double>() == doctest::Approx(cpp - spare));
  CHECK(report["scap_cpp"].get<double>() == doctest::Approx(100 * cpp / (cpp + working)));
  CHECK(report["spp_hash"] == design["spp_hash"]);
}

TEST_CASE("a bridge makes the instance infeasible") {
  Run r = cli("all " + instance_args("path"), "bridge");
  CHECK(r.exit_code == 3);
  CHECK(r.out.find("solve:") != std::string::npos);
  CHECK(r.out.find("demand 1") != std::string::npos);
}

TEST_CASE("bad input exits with the input error code") {
  Run r = cli("solve --topology \"" + data_path("bad_topology.txt") + "\" --demands \"" +
                  data_path("square_demands.txt") + "\"",
              "bad");
  CHECK(r.exit_code == 4);
  CHECK(r.out.find("line") != std::string::npos);
}

TEST_CASE("the environment seed overrides the flag") {
  std::string args = "convert --topology \"" + data_path("tree_topology.txt") +
                     "\" --demands \"" + data_path("tree_demands_7.txt") + "\"";
  Run flag = cli(args + " --seed 3", "seed-flag");
  Run env = cli(args + " --seed 99", "seed-env", "CPPWEAVE_SEED=3");
  REQUIRE(flag.exit_code == 0);
  REQUIRE(env.exit_code == 0);
  auto a = load_json(flag.dir / "trails.json");
  auto b = load_json(env.dir / "trails.json");
  CHECK(a["seed"] == 3);
  CHECK(a == b);
}

TEST_CASE("DOT output marks protection and branch origins") {
  Run r = cli("all --topology \"" + data_path("tree_topology.txt") + "\" --demands \"" +
                  data_path("tree_demands_7.txt") + "\"",
              "dot");
  REQUIRE(r.exit_code == 0);
  std::string topo = read_file((r.dir / "topology.dot").string());
  CHECK(topo.rfind("graph topology {", 0) == 0);
  CHECK(topo.find("style=dashed") != std::string::npos);
  CHECK(topo.find("style=bold") != std::string::npos);
  std::string group = read_file((r.dir / "group-1.dot").string());
  CHECK(group.find("truck trail 0") != std::string::npos);
  CHECK(group.find("branch trail 1 from D: T'3 ⊕ S'5 ⊕ S'6") != std::string::npos);
  CHECK(group.find("style=dotted") != std::string::npos);
}

TEST_CASE("runs are byte-identical") {
  Run a = cli("all " + instance_args("ring") + " --seed 11", "det-a");
  Run b = cli("all " + instance_args("ring") + " --seed 11", "det-b");
  REQUIRE(a.exit_code == 0);
  for (const auto& entry : fs::directory_iterator(a.dir)) {
    std::string name = entry.path().filename().string();
    if (name == "stdout.log") continue;
    CHECK_MESSAGE(read_file(entry.path().string()) == read_file((b.dir / name).string()), name);
  }
}
