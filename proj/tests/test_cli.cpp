#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "lemonlens/report.hpp"

using lemonlens::load_json_file;
using lemonlens::ordered_json;
using lemonlens::validate_json;

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + LEMONLENS_CLI_PATH + "\" " + args +
                          " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
  const int status = pclose(pipe);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, output};
}

fs::path sandbox() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "lemonlens_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& name, const std::string& body) {
  const fs::path path = sandbox() / name;
  std::ofstream out(path);
  out << body;
  out.close();
  return path.string();
}

const char* kBetaConfig = R"({
  "schema": "lemonlens/v1",
  "dist": {"family": "beta", "params": [3, 3]},
  "q_lo": 1.05, "q_hi": 9.0, "cost": 1.0,
  "grid": 200, "resolution": 10000
})";

const char* kUniformChainConfig = R"({
  "schema": "lemonlens/v1",
  "dist": {"family": "uniform"},
  "q_lo": 2.0, "q_hi": 4.0, "cost": 1.0,
  "prior": [[2.0, 0.5], [4.0, 0.5]],
  "resolution": 10000
})";

const char* kDisclosureConfig = R"({
  "schema": "lemonlens/v1",
  "dist": {"family": "uniform"},
  "q_lo": 2.0, "q_hi": 4.0, "cost": 1.0,
  "info": {
    "qualities": [2, 4], "prior": [0.5, 0.5],
    "signals": ["lo", "hi"], "channel": [[1, 0], [0, 1]]
  }
})";

ordered_json schema_doc() { return load_json_file(LEMONLENS_SCHEMA_PATH); }

void expect_valid_report(const std::string& text) {
  std::string err;
  const ordered_json doc = ordered_json::parse(text);
  const bool ok = validate_json(doc, schema_doc(), &err);
  CAPTURE(err);
  CHECK(ok);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze emits a schema-valid report with the expected headline") {
  const std::string cfg = write_config("beta.json", kBetaConfig);
  const RunResult r = run_cli("analyze --config \"" + cfg + "\"");
  REQUIRE(r.exit_code == 0);
  expect_valid_report(r.output);
  const ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["kind"] == "analyze");
  CHECK(doc["buyer_holds"] == true);
  CHECK(doc["sufficient"] == true);
  CHECK(std::fabs(doc["k"].get<double>() - 9.6869574090929288) < 1e-5);
}

TEST_CASE("analyze runs are byte-identical") {
  const std::string cfg = write_config("beta2.json", kBetaConfig);
  const RunResult a = run_cli("analyze --config \"" + cfg + "\"");
  const RunResult b = run_cli("analyze --config \"" + cfg + "\"");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("analyze --format csv streams the schedule") {
  const std::string cfg = write_config("beta3.json", kBetaConfig);
  const RunResult r = run_cli("analyze --format csv --config \"" + cfg + "\"");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("q,p,pbar,pbar1,pbar2,p2,revenue\n", 0) == 0);
}

TEST_CASE("analyze --out writes both artifacts") {
  const std::string cfg = write_config("beta4.json", kBetaConfig);
  const fs::path out = sandbox() / "analyze_out";
  const RunResult r =
      run_cli("analyze --config \"" + cfg + "\" --out \"" + out.string() + "\"");
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "schedule.csv"));
  std::string err;
  CHECK(validate_json(load_json_file((out / "report.json").string()),
                      schema_doc(), &err));
}

TEST_CASE("invalid configs exit with code 2") {
  const std::string bad_cost = write_config("bad_cost.json", R"({
    "schema": "lemonlens/v1",
    "dist": {"family": "uniform"},
    "q_lo": 1.0, "q_hi": 4.0, "cost": 1.5
  })");
  CHECK(run_cli("analyze --config \"" + bad_cost + "\"").exit_code == 2);
  CHECK(run_cli("analyze --config /nonexistent.json").exit_code == 2);
  const std::string bad_json = write_config("bad.json", "{not json");
  CHECK(run_cli("analyze --config \"" + bad_json + "\"").exit_code == 2);
  // CLI11-level problems map to the same code.
  CHECK(run_cli("analyze").exit_code == 2);
  const std::string cfg = write_config("beta5.json", kBetaConfig);
  CHECK(run_cli("analyze --config \"" + cfg + "\" --format yaml").exit_code == 2);
}

TEST_CASE("k reports null for families whose threshold never binds") {
  const std::string cfg = write_config("unif_k.json", R"({
    "schema": "lemonlens/v1",
    "dist": {"family": "uniform"},
    "resolution": 10000
  })");
  const RunResult r = run_cli("k --config \"" + cfg + "\"");
  REQUIRE(r.exit_code == 0);
  expect_valid_report(r.output);
  const ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["k"].is_null());
  CHECK(doc["infinite_up_to_resolution"] == true);
}

TEST_CASE("compare emits the chain CSV with verdict trailers") {
  const std::string cfg = write_config("chain.json", kUniformChainConfig);
  const RunResult r =
      run_cli("compare --config \"" + cfg + "\" --steps 1 --seed 0");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("step,e_rev,e_cs,e_ts,e_price\n", 0) == 0);
  CHECK(r.output.find("0,0.34375,") != std::string::npos);
  CHECK(r.output.find("# verdict e_rev nondecreasing") != std::string::npos);
  CHECK(r.output.find("# verdict e_price constant") != std::string::npos);

  const RunResult again =
      run_cli("compare --config \"" + cfg + "\" --steps 1 --seed 0");
  CHECK(again.output == r.output);

  const RunResult json =
      run_cli("compare --config \"" + cfg + "\" --steps 1 --seed 0 --format json");
  REQUIRE(json.exit_code == 0);
  expect_valid_report(json.output);

  // steps beyond atoms-1 is a config error.
  CHECK(run_cli("compare --config \"" + cfg + "\" --steps 5").exit_code == 2);
}

TEST_CASE("persuasion reports that full revelation is optimal") {
  const std::string cfg = write_config("pers.json", kUniformChainConfig);
  const RunResult r =
      run_cli("persuasion --config \"" + cfg + "\" --steps 20 --seed 3");
  REQUIRE(r.exit_code == 0);
  expect_valid_report(r.output);
  const ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["optimal_is_full"] == true);
  CHECK(doc["max_gap"].get<double>() < 0.0);
  CHECK(doc["samples"] == 20);
}

TEST_CASE("disclosure requires an info section and then unravels") {
  const std::string cfg = write_config("disc.json", kDisclosureConfig);
  const RunResult r = run_cli("disclosure --config \"" + cfg + "\"");
  REQUIRE(r.exit_code == 0);
  expect_valid_report(r.output);
  const ordered_json doc = ordered_json::parse(r.output);
  CHECK(doc["unraveling"] == true);
  CHECK(doc["count"].get<int>() >= 1);

  const std::string no_info = write_config("noinfo.json", kUniformChainConfig);
  CHECK(run_cli("disclosure --config \"" + no_info + "\"").exit_code == 2);
}

TEST_CASE("sweep covers the full shape grid deterministically") {
  const RunResult r = run_cli("sweep --grid 200");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("alpha,beta,max_margin,holds\n", 0) == 0);
  int lines = 0;
  for (char ch : r.output)
    if (ch == '\n') ++lines;
  CHECK(lines == 257);  // header + 16x16 rows
  const RunResult again = run_cli("sweep --grid 200");
  CHECK(again.output == r.output);
  const RunResult json = run_cli("sweep --grid 200 --format json");
  REQUIRE(json.exit_code == 0);
  expect_valid_report(json.output);
}

TEST_CASE("reproduce passes and filters by group") {
  const RunResult spot = run_cli("reproduce --only spot");
  REQUIRE(spot.exit_code == 0);
  CHECK(spot.output.find("PASS") != std::string::npos);
  CHECK(spot.output.find("FAIL") == std::string::npos);
  CHECK(spot.output.find("0 failed") != std::string::npos);

  CHECK(run_cli("reproduce --only nonsense").exit_code == 2);

  const RunResult full = run_cli("reproduce");
  REQUIRE(full.exit_code == 0);
  CHECK(full.output.find("0 failed") != std::string::npos);
}

}  // TEST_SUITE
