#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coopdyn/commands.hpp"
#include "coopdyn/error.hpp"
#include "coopdyn/io.hpp"
#include "coopdyn/scenario.hpp"
#include "support.hpp"

using namespace coopdyn;
using io::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("coopdyn_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

json small_dc1() {
  json j = json::parse(slurp(testing::scenario("dc1.json")));
  j["grid"]["resolution"] = 96;
  j["depths"]["mc_samples"] = 400;
  j["depths"]["mc_steps"] = 100;
  return j;
}

std::string write_scenario(const json& j, const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("coopdyn_test_cli_" + name + ".json");
  std::ofstream(p) << j.dump();
  return p.string();
}

std::string parse_error(const json& j) {
  try {
    parse_scenario(j);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse the dc1 scenario") {
  const Scenario s = parse_scenario_file(testing::scenario("dc1.json"));
  REQUIRE(s.measure.has_value());
  CHECK(s.measure->size() == 2);
  CHECK(s.measure->system[0].degree() == 4);
  CHECK(s.measure->system[1].degree() == 4);
  CHECK(s.measure->weights[0] == 0.5);
  REQUIRE(s.seed.has_value());
  CHECK(s.grid.resolution == 1024);
  CHECK(s.grid.half_width == 4.5);
  CHECK(s.depths.classify == 200);
  CHECK(s.depths.omega_words == 4000);  // default
}

TEST_CASE("scenario errors name the field") {
  json j = small_dc1();
  j["weights"] = {0.7, 0.4};
  CHECK(parse_error(j).find("weights") != std::string::npos);

  j = small_dc1();
  j["grid"]["colour"] = 1;
  CHECK(parse_error(j).find("grid.colour") != std::string::npos);
  try {
    parse_scenario(j);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::schema);
  }

  j = small_dc1();
  j["depths"]["classify"] = "deep";
  CHECK(parse_error(j).find("depths.classify") != std::string::npos);

  j = small_dc1();
  j["maps"][0]["num"][1] = json::array({1, 2, 3});
  CHECK(parse_error(j).find("maps") != std::string::npos);

  CHECK_THROWS_AS(parse_scenario_file("/nonexistent/scenario.json"), Error);
}

TEST_CASE("bare numbers are real coefficients") {
  json j = small_dc1();
  j["maps"][0]["num"] = {0, 0, -2, 0, 1};
  const Scenario s = parse_scenario(j);
  CHECK(s.measure->system[0].numerator()[2] == Complex(-2.0));
}

TEST_CASE("commands need a seed") {
  json j = small_dc1();
  j.erase("seed");
  const Scenario s = parse_scenario(j);
  CHECK_THROWS_AS(run_command("solve-T", s), Error);
  CHECK(command_needs_seed("solve-T"));
  CHECK_FALSE(command_needs_seed("oracle-1d"));
  CHECK(is_command("render-julia"));
  CHECK_FALSE(is_command("dance"));
  CHECK_THROWS_AS(run_command("dance", s), Error);
}

TEST_CASE("oracle-1d writes three tables") {
  const fs::path out = scratch("oracle");
  std::string err;
  const int code = run_command_to_directory("oracle-1d", testing::scenario("oracle1d.json"), out.string(), {}, &err);
  CHECK(code == kExitOk);
  CHECK(err.empty());
  for (const char* name : {"devils_staircase.csv", "lebesgue.csv", "takagi.csv", "report.json", "manifest.json"})
    CHECK(fs::exists(out / name));
  const json report = json::parse(slurp(out / "report.json"));
  CHECK(report["command"] == "oracle-1d");
  CHECK(report["exit_code"] == 0);
  fs::remove_all(out);
}

TEST_CASE("solve-T writes T_infinity and a small residual") {
  const fs::path out = scratch("solve");
  const std::string path = write_scenario(small_dc1(), "solve");
  std::string err;
  const int code = run_command_to_directory("solve-T", path, out.string(), {}, &err);
  CHECK_MESSAGE(code == kExitOk, err);
  CHECK(fs::exists(out / "T_infinity.pgm"));
  CHECK(fs::exists(out / "T_infinity.json"));
  const json report = json::parse(slurp(out / "report.json"));
  CHECK(report["residual"].get<double>() <= 1e-8);
  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["command"] == "solve-T");
  CHECK(manifest["files"].size() >= 3);
  fs::remove_all(out);
}

TEST_CASE("runs are byte-identical for a fixed seed") {
  const std::string path = write_scenario(small_dc1(), "det");
  const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  REQUIRE(run_command_to_directory("classify-basins", path, a.string(), {}) == kExitOk);
  REQUIRE(run_command_to_directory("classify-basins", path, b.string(), {}) == kExitOk);
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name.string());
  }
  // A different seed is recorded in the echo.
  REQUIRE(run_command_to_directory("classify-basins", path, c.string(), std::uint64_t{99}) == kExitOk);
  const json manifest = json::parse(slurp(c / "manifest.json"));
  CHECK(manifest["scenario"]["seed"] == 99);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST_CASE("emit_outputs") {
  const fs::path out = scratch("emit");
  const json echo = {{"name", "x"}};
  const json m = io::emit_outputs({{"a.txt", "hello"}, {"b.bin", std::string("\0\1", 2)}}, out.string(), echo, "demo");
  CHECK(m["files"].size() == 2);
  CHECK(m["files"][0]["bytes"] == 5);
  CHECK(m["files"][0]["sha256"] == "2cf24dba5fb0a30e26e83b2ac5b9e29e1b161e5c1fa7425e73043362938b9824");
  CHECK(slurp(out / "a.txt") == "hello");
  CHECK(slurp(out / "b.bin").size() == 2);
  CHECK(fs::exists(out / "manifest.json"));

  const fs::path empty = scratch("emit_empty");
  const json e = io::emit_outputs({}, empty.string(), echo, "demo");
  CHECK(e["files"].empty());
  CHECK(fs::exists(empty / "manifest.json"));

  // A path below a regular file cannot be created.
  const fs::path blocker = scratch("emit_blocker");
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(io::emit_outputs({{"a", "b"}}, (blocker / "sub").string(), echo, "demo"), Error);
  fs::remove_all(out);
  fs::remove_all(empty);
  fs::remove(blocker);
}

TEST_CASE("errors map to exit code 1") {
  std::string err;
  CHECK(run_command_to_directory("solve-T", "/nonexistent.json", scratch("bad").string(), {}, &err) == kExitError);
  CHECK_FALSE(err.empty());
}

TEST_CASE("pgm encoding") {
  const std::string p8 = io::encode_pgm(2, 1, {0, 255}, 255);
  CHECK(p8 == std::string("P5\n2 1\n255\n\x00\xff", 13));
  const std::string p16 = io::encode_pgm(1, 1, {258}, 65535);
  CHECK(p16.substr(p16.size() - 2) == std::string("\x01\x02", 2));
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) CHECK(std::stod(io::format_double(v)) == v);
}
