#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lemonlens/dist.hpp"
#include "lemonlens/info.hpp"
#include "lemonlens/posterior.hpp"
#include "lemonlens/pricing.hpp"
#include "lemonlens/welfare.hpp"

namespace lemonlens {

using ordered_json = nlohmann::ordered_json;

// Parsed scenario config. Strict: the version string is required, unknown
// keys are rejected, and every present key is type-checked here so the CLI
// can map all input problems to one exit code.
struct RunConfig {
  TypeDistribution dist = TypeDistribution::uniform();
  std::optional<double> q_lo;
  std::optional<double> q_hi;
  std::optional<double> cost;
  std::optional<std::vector<Atom>> prior;
  std::optional<InfoStructure> info;
  std::optional<long long> grid;
  std::optional<long long> resolution;
  std::optional<long long> steps;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

RunConfig parse_config(const ordered_json& doc);
RunConfig parse_config_file(const std::string& path);

// Builds the market from a config; q_lo/q_hi/cost are required, the prior
// defaults to half weight on each endpoint quality.
MarketScenario scenario_from(const RunConfig& c);

// '.' decimal, 17 significant digits: round-trips doubles exactly.
std::string format_double(double x);

std::string schedule_csv(const std::vector<PricePoint>& points);

struct ChainRow {
  int step;
  WelfareAverages w;
};
// Monotonicity verdict for one quantity read toward the spread (step 0):
// "constant" | "nondecreasing" | "nonincreasing" | "mixed", tolerance 1e-9.
std::string monotone_verdict(const std::vector<double>& toward_spread);
std::string chain_csv(const std::vector<ChainRow>& rows,
                      const ordered_json& verdicts);

struct SweepRow {
  double alpha;
  double beta;
  double max_margin;  // max over {psi>0} of (r r''+r') - (1+(1-r')^2)
  bool holds;
};
std::string sweep_csv(const std::vector<SweepRow>& rows);

ordered_json analyze_report(const MarketScenario& s, const ConditionReport& cond,
                            const KResult& k, bool sufficient,
                            const TailAdvisory& tail, long long grid);
ordered_json k_report(const TypeDistribution& d, const KResult& k);
ordered_json compare_report(const MarketScenario& s, std::uint64_t seed,
                            const std::vector<ChainRow>& rows,
                            const ordered_json& verdicts,
                            const ConditionReport& cond);
ordered_json persuasion_report(const MarketScenario& s, const PersuasionResult& r,
                               std::uint64_t seed);
ordered_json disclosure_report(const MarketScenario& s, const InfoStructure& is,
                               const std::vector<DisclosureEquilibrium>& eqs);
ordered_json sweep_report(const std::vector<SweepRow>& rows);

// Tiny JSON-schema checker covering the subset the shipped schema uses:
// $ref into #/definitions, oneOf, type (string or list), const, enum,
// required, properties, additionalProperties, items. Returns true and leaves
// *err empty on success.
bool validate_json(const ordered_json& doc, const ordered_json& schema,
                   std::string* err);

ordered_json load_json_file(const std::string& path);

}  // namespace lemonlens
