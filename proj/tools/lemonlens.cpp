// lemonlens command-line tool. Subcommands:
//   analyze     conditions + k + sufficiency + price schedule for one scenario
//   k           information-precision threshold for a type distribution
//   compare     welfare along a seeded garbling chain, with monotonicity verdicts
//   persuasion  sampled check that full revelation maximizes seller revenue
//   disclosure  equilibria of the verifiable-disclosure game
//   sweep       total-payoff-condition margins over a Beta(alpha,beta) grid
//   reproduce   re-runs the headline numbers against pinned expectations
//
// Exit codes: 0 success, 1 reproduce-check failure, 2 config/usage error,
// 3 numerical failure. With --out DIR results land in files; otherwise the
// primary artifact goes to stdout in --format {json,csv}.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lemonlens/dist.hpp"
#include "lemonlens/error.hpp"
#include "lemonlens/info.hpp"
#include "lemonlens/parallel.hpp"
#include "lemonlens/posterior.hpp"
#include "lemonlens/pricing.hpp"
#include "lemonlens/report.hpp"
#include "lemonlens/welfare.hpp"

namespace {

using namespace lemonlens;

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int run_analyze(const std::string& config_path, const std::string& out_dir,
                long long grid_flag, const std::string& format) {
  const RunConfig cfg = parse_config_file(config_path);
  const MarketScenario s = scenario_from(cfg);
  const long long grid = grid_flag > 0 ? grid_flag : cfg.grid.value_or(1000);
  const long long resolution = cfg.resolution.value_or(100000);

  const ConditionReport cond = check_conditions(s, static_cast<int>(grid));
  const KResult k = compute_k(s.dist, resolution);
  const bool sufficient = sufficient_check(s, k);
  const TailAdvisory tail = tail_curvature_advisory(s.dist);
  const std::string report =
      dump(analyze_report(s, cond, k, sufficient, tail, grid));
  const std::string schedule =
      schedule_csv(price_schedule(s, static_cast<int>(grid)));

  if (!out_dir.empty()) {
    write_file(out_dir, "report.json", report);
    write_file(out_dir, "schedule.csv", schedule);
  } else {
    std::cout << (format == "csv" ? schedule : report);
  }
  return 0;
}

int run_k(const std::string& config_path, const std::string& out_dir,
          long long grid_flag) {
  const RunConfig cfg = parse_config_file(config_path);
  const long long resolution =
      grid_flag > 0 ? grid_flag : cfg.resolution.value_or(100000);
  const std::string report = dump(k_report(cfg.dist, compute_k(cfg.dist, resolution)));
  if (!out_dir.empty())
    write_file(out_dir, "k.json", report);
  else
    std::cout << report;
  return 0;
}

int run_compare(const std::string& config_path, const std::string& out_dir,
                long long grid_flag, long long steps_flag, long long seed_flag,
                double tol_flag, const std::string& format) {
  const RunConfig cfg = parse_config_file(config_path);
  const MarketScenario s = scenario_from(cfg);
  const long long grid = grid_flag > 0 ? grid_flag : cfg.grid.value_or(1000);
  const long long steps =
      steps_flag >= 0
          ? steps_flag
          : cfg.steps.value_or(static_cast<long long>(s.prior.size()) - 1);
  const std::uint64_t seed =
      seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : cfg.seed.value_or(0);
  const double tol = tol_flag > 0 ? tol_flag : cfg.tol.value_or(1e-9);

  const std::vector<PosteriorMeanDistribution> chain =
      garble_chain(s.prior, static_cast<int>(steps), seed);
  std::vector<ChainRow> rows;
  rows.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i)
    rows.push_back({static_cast<int>(i), expected_welfare(s, chain[i], tol)});

  auto column = [&](double WelfareAverages::*field) {
    std::vector<double> xs;
    xs.reserve(rows.size());
    for (const ChainRow& r : rows) xs.push_back(r.w.*field);
    return xs;
  };
  ordered_json verdicts;
  verdicts["e_rev"] = monotone_verdict(column(&WelfareAverages::e_rev));
  verdicts["e_cs"] = monotone_verdict(column(&WelfareAverages::e_cs));
  verdicts["e_ts"] = monotone_verdict(column(&WelfareAverages::e_ts));
  verdicts["e_price"] = monotone_verdict(column(&WelfareAverages::e_price));

  const ConditionReport cond = check_conditions(s, static_cast<int>(grid));
  const std::string csv = chain_csv(rows, verdicts);
  const std::string report = dump(compare_report(s, seed, rows, verdicts, cond));
  if (!out_dir.empty()) {
    write_file(out_dir, "compare.csv", csv);
    write_file(out_dir, "compare.json", report);
  } else {
    std::cout << (format == "json" ? report : csv);
  }
  return 0;
}

int run_persuasion(const std::string& config_path, const std::string& out_dir,
                   long long steps_flag, long long seed_flag) {
  const RunConfig cfg = parse_config_file(config_path);
  const MarketScenario s = scenario_from(cfg);
  const long long samples = steps_flag >= 0 ? steps_flag : cfg.steps.value_or(64);
  const std::uint64_t seed =
      seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : cfg.seed.value_or(0);
  const PersuasionResult r =
      persuasion_check(s, s.prior, static_cast<int>(samples), seed);
  const std::string report = dump(persuasion_report(s, r, seed));
  if (!out_dir.empty())
    write_file(out_dir, "persuasion.json", report);
  else
    std::cout << report;
  return 0;
}

int run_disclosure(const std::string& config_path, const std::string& out_dir) {
  const RunConfig cfg = parse_config_file(config_path);
  const MarketScenario s = scenario_from(cfg);
  if (!cfg.info)
    throw ConfigError("disclosure: config needs an 'info' section");
  for (double q : cfg.info->qualities)
    if (q < s.q_lo || q > s.q_hi)
      throw ConfigError("disclosure: info qualities must lie in [q_lo, q_hi]");
  const std::vector<DisclosureEquilibrium> eqs = disclosure_equilibria(s, *cfg.info);
  const std::string report = dump(disclosure_report(s, *cfg.info, eqs));
  if (!out_dir.empty())
    write_file(out_dir, "disclosure.json", report);
  else
    std::cout << report;
  return 0;
}

int run_sweep(const std::string& out_dir, long long grid_flag,
              const std::string& format) {
  const long long grid = grid_flag > 0 ? grid_flag : 2000;
  if (grid < 100) throw ConfigError("sweep: --grid must be >= 100");
  constexpr int kShapes = 16;  // alpha, beta in 0.25, 0.50, ..., 4.00
  std::vector<SweepRow> rows(kShapes * kShapes);
  parallel_for(ExecPolicy::Parallel, rows.size(), [&](std::size_t idx) {
    const double alpha = 0.25 * (1.0 + static_cast<double>(idx / kShapes));
    const double beta = 0.25 * (1.0 + static_cast<double>(idx % kShapes));
    const TypeDistribution d = TypeDistribution::beta(alpha, beta);
    double worst = -std::numeric_limits<double>::infinity();
    for (long long i = 1; i < grid; ++i) {
      const HazardProfile h = hazard_profile(d, static_cast<double>(i) / grid);
      if (h.psi <= 0.0) continue;
      const double margin = (h.r * h.r2 + h.r1) - (1.0 + (1.0 - h.r1) * (1.0 - h.r1));
      if (margin > worst) worst = margin;
    }
    if (!std::isfinite(worst))
      throw NumericalError("sweep: no grid point with psi > 0");
    rows[idx] = {alpha, beta, worst, worst <= 0.0};
  });
  const std::string csv = sweep_csv(rows);
  const std::string report = dump(sweep_report(rows));
  if (!out_dir.empty()) {
    write_file(out_dir, "sweep.csv", csv);
    write_file(out_dir, "sweep.json", report);
  } else {
    std::cout << (format == "json" ? report : csv);
  }
  return 0;
}

// ---- reproduce -------------------------------------------------------------

struct CheckRow {
  std::string name;
  std::string expected;
  std::string computed;
  std::string tol;
  bool pass;
};

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// First v where psi crosses from negative to nonnegative (scan + bisection).
double psi_boundary(const TypeDistribution& d) {
  const int n = 4096;
  double prev_v = kEdgeClip;
  double prev_psi = hazard_profile(d, prev_v).psi;
  for (int i = 1; i <= n; ++i) {
    const double v = kEdgeClip + (1.0 - 2.0 * kEdgeClip) * i / n;
    const double psi = hazard_profile(d, v).psi;
    if (prev_psi < 0.0 && psi >= 0.0) {
      double lo = prev_v;
      double hi = v;
      for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        (hazard_profile(d, mid).psi < 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_v = v;
    prev_psi = psi;
  }
  throw NumericalError("psi never becomes nonnegative");
}

int run_reproduce(const std::string& only, long long grid_flag) {
  if (!only.empty() && only != "k" && only != "pbar" && only != "conditions" &&
      only != "spot") {
    std::cerr << "reproduce: unknown --only group '" << only
              << "' (expected k, pbar, conditions, or spot)\n";
    return 2;
  }
  const long long resolution = grid_flag > 0 ? grid_flag : 100000;
  const double sd_peaked = std::sqrt(0.001);
  std::vector<CheckRow> rows;

  auto want = [&](const std::string& group) {
    return only.empty() || only == group;
  };
  auto num_row = [&](const std::string& name, double expected, double tol,
                     double computed) {
    rows.push_back({name, short_num(expected), short_num(computed), short_num(tol),
                    std::fabs(computed - expected) <= tol});
  };
  auto bool_row = [&](const std::string& name, bool expected, bool computed) {
    rows.push_back({name, expected ? "true" : "false",
                    computed ? "true" : "false", "exact", expected == computed});
  };

  if (want("k")) {
    num_row("k[beta(3,3)]", 9.68, 0.05,
            compute_k(TypeDistribution::beta(3, 3), resolution).k);
    num_row("k[truncnorm(0.5,0.1)]", 2.88, 0.05,
            compute_k(TypeDistribution::truncnorm(0.5, 0.1), resolution).k);
    const TypeDistribution infinite_families[] = {
        TypeDistribution::uniform(),        TypeDistribution::beta(1, 0.5),
        TypeDistribution::beta(1, 1),       TypeDistribution::beta(1, 2),
        TypeDistribution::beta(2, 2),       TypeDistribution::truncnorm(0.5, std::sqrt(0.1)),
    };
    bool all_infinite = true;
    for (const TypeDistribution& d : infinite_families)
      all_infinite =
          all_infinite && compute_k(d, resolution).infinite_up_to_resolution;
    bool_row("k infinite flags (6 families)", true, all_infinite);
  }
  if (want("pbar")) {
    const MarketScenario s(2.0, 20.0, 1.0,
                           PosteriorMeanDistribution({{2.0, 0.5}, {20.0, 0.5}}),
                           TypeDistribution::truncnorm(0.5, sd_peaked));
    num_row("pbar(2) peaked normal", 0.52, 0.005, solve_price(s, 2.0).pbar);
    num_row("pbar(4) peaked normal", 0.4546, 0.002, solve_price(s, 4.0).pbar);
    num_row("pbar(5) peaked normal", 0.4507, 0.002, solve_price(s, 5.0).pbar);
    num_row("pbar(20) peaked normal", 0.44, 0.005, solve_price(s, 20.0).pbar);
  }
  if (want("conditions")) {
    const TypeDistribution d = TypeDistribution::truncnorm(0.5, sd_peaked);
    const MarketScenario narrow(
        2.0, 4.0, 1.0, PosteriorMeanDistribution({{2.0, 0.5}, {4.0, 0.5}}), d);
    const MarketScenario wide(
        5.0, 20.0, 1.0, PosteriorMeanDistribution({{5.0, 0.5}, {20.0, 0.5}}), d);
    bool_row("total condition on Q=[2,4]", true,
             check_conditions(narrow, 1000).total_holds);
    bool_row("total condition on Q=[5,20]", false,
             check_conditions(wide, 1000).total_holds);
  }
  if (want("spot")) {
    const TypeDistribution b33 = TypeDistribution::beta(3, 3);
    const HazardProfile h = hazard_profile(b33, 0.4);
    num_row("psi(0.4) beta(3,3)", 0.005, 1e-6, h.psi);
    num_row("r r'' + r' at 0.4, beta(3,3)", 2.25, 0.01, h.r * h.r2 + h.r1);
    num_row("psi boundary beta(2,2)", (1.0 + std::sqrt(33.0)) / 16.0, 1e-6,
            psi_boundary(TypeDistribution::beta(2, 2)));
  }

  int failures = 0;
  std::printf("%-36s %-14s %-22s %-10s %s\n", "check", "expected", "computed",
              "tol", "status");
  for (const CheckRow& r : rows) {
    if (!r.pass) ++failures;
    std::printf("%-36s %-14s %-22s %-10s %s\n", r.name.c_str(),
                r.expected.c_str(), r.computed.c_str(), r.tol.c_str(),
                r.pass ? "PASS" : "FAIL");
  }
  std::printf("%zu checks, %d failed\n", rows.size(), failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lemonlens: posted prices, welfare, and information comparative statics "
      "for markets with quality uncertainty"};
  app.require_subcommand(1);
  int rc = 0;

  struct {
    std::string config, out, format = "json";
    long long grid = -1;
  } a;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Conditions, k threshold, sufficiency, and price schedule");
  analyze->add_option("--config", a.config, "scenario config JSON")->required();
  analyze->add_option("--out", a.out, "directory for report.json + schedule.csv");
  analyze->add_option("--grid", a.grid, "scan/schedule grid (default 1000)");
  analyze->add_option("--format", a.format, "stdout format")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze->callback([&] { rc = run_analyze(a.config, a.out, a.grid, a.format); });

  struct {
    std::string config, out;
    long long grid = -1;
  } kk;
  CLI::App* kcmd = app.add_subcommand(
      "k", "Information-precision threshold for the configured distribution");
  kcmd->add_option("--config", kk.config, "config JSON (dist section)")->required();
  kcmd->add_option("--out", kk.out, "directory for k.json");
  kcmd->add_option("--grid", kk.grid, "scan resolution (default 100000)");
  kcmd->callback([&] { rc = run_k(kk.config, kk.out, kk.grid); });

  struct {
    std::string config, out, format = "csv";
    long long grid = -1, steps = -1, seed = -1;
    double tol = -1.0;
  } c;
  CLI::App* compare = app.add_subcommand(
      "compare", "Welfare along a seeded garbling chain with verdicts");
  compare->add_option("--config", c.config, "scenario config JSON")->required();
  compare->add_option("--out", c.out, "directory for compare.csv + compare.json");
  compare->add_option("--grid", c.grid, "condition-scan grid (default 1000)");
  compare->add_option("--steps", c.steps, "chain length (default atoms-1)");
  compare->add_option("--seed", c.seed, "chain seed (default 0)")
      ->check(CLI::NonNegativeNumber);
  compare->add_option("--tol", c.tol, "quadrature tolerance (default 1e-9)");
  compare->add_option("--format", c.format, "stdout format")
      ->check(CLI::IsMember({"json", "csv"}));
  compare->callback([&] {
    rc = run_compare(c.config, c.out, c.grid, c.steps, c.seed, c.tol, c.format);
  });

  struct {
    std::string config, out;
    long long steps = -1, seed = -1;
  } p;
  CLI::App* persuasion = app.add_subcommand(
      "persuasion", "Sampled contractions vs full revelation for the seller");
  persuasion->add_option("--config", p.config, "scenario config JSON")->required();
  persuasion->add_option("--out", p.out, "directory for persuasion.json");
  persuasion->add_option("--steps", p.steps, "sample count (default 64)");
  persuasion->add_option("--seed", p.seed, "sampling seed (default 0)")
      ->check(CLI::NonNegativeNumber);
  persuasion->callback(
      [&] { rc = run_persuasion(p.config, p.out, p.steps, p.seed); });

  struct {
    std::string config, out;
  } d;
  CLI::App* disclosure = app.add_subcommand(
      "disclosure", "Equilibria of the verifiable-disclosure game");
  disclosure->add_option("--config", d.config, "config JSON with info section")
      ->required();
  disclosure->add_option("--out", d.out, "directory for disclosure.json");
  disclosure->callback([&] { rc = run_disclosure(d.config, d.out); });

  struct {
    std::string out, format = "csv";
    long long grid = -1;
  } w;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Total-payoff-condition margins over a Beta shape grid");
  sweep->add_option("--out", w.out, "directory for sweep.csv + sweep.json");
  sweep->add_option("--grid", w.grid, "points scanned per shape (default 2000)");
  sweep->add_option("--format", w.format, "stdout format")
      ->check(CLI::IsMember({"json", "csv"}));
  sweep->callback([&] { rc = run_sweep(w.out, w.grid, w.format); });

  struct {
    std::string only;
    long long grid = -1;
  } r;
  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Re-run the headline numbers against pinned expectations");
  reproduce->add_option("--only", r.only, "one group: k, pbar, conditions, spot");
  reproduce->add_option("--grid", r.grid, "k scan resolution (default 100000)");
  reproduce->callback([&] { rc = run_reproduce(r.only, r.grid); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
