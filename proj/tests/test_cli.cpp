#include <doctest.h>

#include "geoloop/io.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <string>

using namespace geoloop;

namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(GEOLOOP_BIN) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("geoloop_cli_" + std::to_string(getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string scene(const std::string& name) { return std::string(GEOLOOP_SCENES) + "/" + name; }

}  // namespace

TEST_CASE("malformed scene json exits 1") {
  const fs::path d = scratch("malformed");
  write_text(d / "bad.json", "{\"mode\": ");
  CHECK(cli("run " + (d / "bad.json").string() + " --out " + (d / "out").string()) == 1);
  CHECK(cli("run " + (d / "missing.json").string() + " --out " + (d / "out").string()) == 1);
  CHECK(cli("frobnicate") == 1);
}

TEST_CASE("shorten scene runs, verifies and is deterministic") {
  const fs::path d = scratch("wiggle");
  REQUIRE(cli("run " + scene("sphere_wiggle.json") + " --out " + (d / "a").string()) == 0);
  REQUIRE(cli("run " + scene("sphere_wiggle.json") + " --out " + (d / "b").string()) == 0);
  CHECK(read_text(d / "a" / "report.json") == read_text(d / "b" / "report.json"));
  CHECK(cli("verify " + (d / "a" / "report.json").string()) == 0);
  CHECK(cli("verify " + (d / "a" / "report.json").string() + " --curves " + (d / "b" / "curves").string()) == 0);
  CHECK(fs::exists(d / "a" / "family.csv"));

  const Json report = read_json(d / "a" / "report.json");
  CHECK(report.at("status") == "ok");
  CHECK(report.at("certificates").size() == 4);

  SUBCASE("edited measured value is a mismatch") {
    Json t = report;
    t["certificates"][0]["measured_max"] = t["certificates"][0]["measured_max"].get<double>() * 0.5;
    write_text(d / "a" / "tampered.json", canonical_json(t));
    CHECK(cli("verify " + (d / "a" / "tampered.json").string()) == 3);
  }
  SUBCASE("edited bound value is a mismatch") {
    Json t = report;
    t["certificates"][1]["value"] = 1e6;
    write_text(d / "a" / "tampered.json", canonical_json(t));
    CHECK(cli("verify " + (d / "a" / "tampered.json").string()) == 3);
  }
  SUBCASE("missing witness curve exits 1") {
    fs::remove(d / "a" / "curves" / "final.json");
    CHECK(cli("verify " + (d / "a" / "report.json").string()) == 1);
  }
}

TEST_CASE("seed changes the curve and the report") {
  const fs::path d = scratch("seed");
  REQUIRE(cli("run " + scene("sphere_wiggle.json") + " --out " + (d / "a").string() + " --seed 7") == 0);
  REQUIRE(cli("run " + scene("sphere_wiggle.json") + " --out " + (d / "b").string()) == 0);
  CHECK(read_text(d / "a" / "report.json") != read_text(d / "b" / "report.json"));
  CHECK(read_json(d / "a" / "report.json").at("seed") == 7);
}

TEST_CASE("slack override is recorded and re-checked") {
  const fs::path d = scratch("slack");
  REQUIRE(cli("run " + scene("sphere_wiggle.json") + " --out " + d.string() + " --slack-c0 0.25") == 0);
  const Json report = read_json(d / "report.json");
  CHECK(report.at("slack_policy").at("c0") == 0.25);
  CHECK(cli("verify " + (d / "report.json").string()) == 0);
}

TEST_CASE("torus violation exits 2 with the refuting loop serialized") {
  const fs::path d = scratch("torus");
  CHECK(cli("run " + scene("torus_violation.json") + " --out " + d.string()) == 2);
  const Json report = read_json(d / "report.json");
  CHECK(report.at("status") == "hypothesis_violated");
  CHECK(report.at("refuting_loop").at("length").get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(fs::exists(d / "curves" / "refuting_loop.json"));
  CHECK(cli("verify " + (d / "report.json").string()) == 0);
}

TEST_CASE("formula and trace subcommands") {
  const fs::path d = scratch("formula");
  const std::string out = (d / "f.csv").string();
  REQUIRE(std::system((std::string(GEOLOOP_BIN) + " formula --k 1.5 --m 2 --a 3.14159265 > " + out).c_str()) == 0);
  const std::string text = read_text(out);
  CHECK(text.find("bound_formula,1.5,1,3.14159265,25.1327412") != std::string::npos);
  CHECK(text.find("loop_count_bound_loops") != std::string::npos);
  CHECK(cli("trace " + scene("sphere_wiggle.json") + " --out " + (d / "t.csv").string()) == 0);
  CHECK(read_text(d / "t.csv").rfind("index,s,tau,length,frozen", 0) == 0);
  CHECK(cli("trace " + scene("sphere_sweep.json")) == 1);
}
