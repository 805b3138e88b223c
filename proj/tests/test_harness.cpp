#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "conslaw/errors.hpp"
#include "conslaw/harness.hpp"
#include "conslaw/io.hpp"
#include "conslaw/report.hpp"

using namespace conslaw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("conslaw_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config(R"({"name": "x", "flux": "nope", "ic": {"key": "riemann"}})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"name": "x", "bogus": 1})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"name": "x", "ic": {"key": "riemann"}, "grid": {"n": 1000}})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"name": "x", "ic": {"key": "riemann"}, "stages": {"dissipation": {}}})"), InputError);
  const auto c = parse_config(R"({"name": "x", "ic": {"key": "riemann", "params": {"uL": 2}}, "grid": {"n": 256}})");
  CHECK(c.ic.params.at("uL") == 2.0);
  const auto again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
}

TEST_CASE("shock preset run, report and determinism") {
  auto c = load_config(preset_path("shock_dissipation"));
  c.n = 512;
  const auto d1 = scratch("shock1"), d2 = scratch("shock2");
  const auto r1 = run_experiment(c, d1);
  CHECK(r1.ok);
  CHECK(r1.errors.empty());
  CHECK(fs::exists(d1 / "mu.csv"));
  CHECK(fs::exists(d1 / "mask.json"));
  CHECK(fs::exists(d1 / "trace.json"));
  const auto m = nlohmann::json::parse(slurp(d1 / "manifest.json"));
  CHECK(m["stages"]["dissipation"]["summary"]["total_per_unit_time"].get<double>() ==
        doctest::Approx(1.0 / 12.0).epsilon(0.1));
  for (const auto& f : m["files"]) CHECK(sha256_file(d1 / f["path"].get<std::string>()) == f["sha256"]);

  run_experiment(c, d2);
  for (const char* f : {"trajectory.bin", "mu.csv", "mask.csv", "final_frame.csv"})
    CHECK(sha256_file(d1 / f) == sha256_file(d2 / f));

  emit_report(d1, ReportFormat::md);
  const auto md = slurp(d1 / "report.md");
  CHECK(md.find("| stage | check |") != std::string::npos);
  const auto rj = nlohmann::json::parse(slurp(emit_report(d1, ReportFormat::json)));
  CHECK(rj["complete"].get<bool>());
  CHECK(rj["sections"]["structure"]["status"] == "ok");
  CHECK(rj["sections"]["decay"]["status"] == "absent");

  std::ofstream(d1 / "mu.csv", std::ios::app) << "tampered\n";
  const auto rt = nlohmann::json::parse(slurp(emit_report(d1, ReportFormat::json)));
  CHECK_FALSE(rt["complete"].get<bool>());
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("solve-only run marks downstream sections absent") {
  const auto c = parse_config(R"({"name": "solo", "ic": {"key": "riemann"}, "grid": {"n": 128}, "t_end": 0.5})");
  const auto d = scratch("solo");
  CHECK(run_experiment(c, d).ok);
  const auto r = nlohmann::json::parse(slurp(emit_report(d, ReportFormat::json)));
  CHECK(r["sections"]["solve"]["status"] == "ok");
  for (const char* s : {"dissipation", "structure", "degiorgi", "characteristics", "decay"})
    CHECK(r["sections"][s]["status"] == "absent");
  CHECK_THROWS_AS(emit_report(scratch("missing"), ReportFormat::md), InputError);
  fs::remove_all(d);
}

TEST_CASE("decay preset") {
  auto c = load_config(preset_path("decay_burgers"));
  c.n = 2048;
  c.decay.gamma_tol = 0.05;
  const auto d = scratch("decay");
  const auto r = run_experiment(c, d);
  CHECK(r.ok);
  CHECK(fs::exists(d / "decay.csv"));
  fs::remove_all(d);
}

TEST_CASE("every preset parses") {
  const auto names = preset_names();
  CHECK(names.size() >= 4);
  for (const auto& n : names) CHECK_NOTHROW(load_config(preset_path(n)));
}
