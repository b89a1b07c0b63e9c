#include "lemonlens/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lemonlens/error.hpp"

namespace lemonlens {

namespace {

using json = ordered_json;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const std::string& k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
  }
}

double need_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.at(key).is_number())
    throw ConfigError("config: '" + key + "' in " + where + " must be a number");
  return obj.at(key).get<double>();
}

long long need_integer(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.at(key).is_number_integer())
    throw ConfigError("config: '" + key + "' in " + where + " must be an integer");
  return obj.at(key).get<long long>();
}

TypeDistribution parse_dist(const json& d) {
  if (!d.is_object() || !d.contains("family"))
    throw ConfigError("config: 'dist' must be an object with a 'family'");
  if (!d.at("family").is_string())
    throw ConfigError("config: dist.family must be a string");
  const std::string family = d.at("family").get<std::string>();
  if (family == "uniform") {
    reject_unknown_keys(d, {"family"}, "dist");
    return TypeDistribution::uniform();
  }
  if (family == "beta" || family == "truncnorm") {
    reject_unknown_keys(d, {"family", "params"}, "dist");
    if (!d.contains("params") || !d.at("params").is_array() || d.at("params").size() != 2)
      throw ConfigError("config: dist.params must be an array of two numbers");
    const double p0 = d.at("params").at(0).get<double>();
    const double p1 = d.at("params").at(1).get<double>();
    return family == "beta" ? TypeDistribution::beta(p0, p1)
                            : TypeDistribution::truncnorm(p0, p1);
  }
  if (family == "tabulated") {
    reject_unknown_keys(d, {"family", "knots"}, "dist");
    if (!d.contains("knots") || !d.at("knots").is_array())
      throw ConfigError("config: dist.knots must be an array of [v,f] pairs");
    std::vector<std::array<double, 2>> knots;
    for (const auto& kn : d.at("knots")) {
      if (!kn.is_array() || kn.size() != 2)
        throw ConfigError("config: dist.knots entries must be [v,f] pairs");
      knots.push_back({kn.at(0).get<double>(), kn.at(1).get<double>()});
    }
    return TypeDistribution::tabulated(knots);
  }
  throw ConfigError("config: unknown dist.family '" + family + "'");
}

InfoStructure parse_info(const json& j) {
  if (!j.is_object()) throw ConfigError("config: 'info' must be an object");
  reject_unknown_keys(j, {"qualities", "prior", "signals", "channel"}, "info");
  for (const char* key : {"qualities", "prior", "signals", "channel"}) {
    if (!j.contains(key))
      throw ConfigError(std::string("config: info.") + key + " is required");
  }
  std::vector<double> qualities, prior;
  std::vector<std::string> signals;
  std::vector<std::vector<double>> channel;
  for (const auto& v : j.at("qualities")) qualities.push_back(v.get<double>());
  for (const auto& v : j.at("prior")) prior.push_back(v.get<double>());
  for (const auto& v : j.at("signals")) signals.push_back(v.get<std::string>());
  for (const auto& row : j.at("channel")) {
    channel.emplace_back();
    for (const auto& v : row) channel.back().push_back(v.get<double>());
  }
  return InfoStructure(std::move(qualities), std::move(prior), std::move(signals),
                       std::move(channel));
}

}  // namespace

RunConfig parse_config(const ordered_json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown_keys(doc,
                      {"schema", "dist", "q_lo", "q_hi", "cost", "prior", "info",
                       "grid", "resolution", "steps", "seed", "tol"},
                      "config");
  if (!doc.contains("schema") || !doc.at("schema").is_string() ||
      doc.at("schema").get<std::string>() != "lemonlens/v1")
    throw ConfigError("config: 'schema' must be the string \"lemonlens/v1\"");
  if (!doc.contains("dist")) throw ConfigError("config: 'dist' is required");

  RunConfig c;
  c.dist = parse_dist(doc.at("dist"));
  if (doc.contains("q_lo")) c.q_lo = need_number(doc, "q_lo", "config");
  if (doc.contains("q_hi")) c.q_hi = need_number(doc, "q_hi", "config");
  if (doc.contains("cost")) c.cost = need_number(doc, "cost", "config");
  if (doc.contains("prior")) {
    if (!doc.at("prior").is_array())
      throw ConfigError("config: 'prior' must be an array of [q,w] pairs");
    std::vector<Atom> atoms;
    for (const auto& a : doc.at("prior")) {
      if (!a.is_array() || a.size() != 2)
        throw ConfigError("config: 'prior' entries must be [q,w] pairs");
      atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    }
    c.prior = std::move(atoms);
  }
  if (doc.contains("info")) c.info = parse_info(doc.at("info"));
  if (doc.contains("grid")) c.grid = need_integer(doc, "grid", "config");
  if (doc.contains("resolution")) c.resolution = need_integer(doc, "resolution", "config");
  if (doc.contains("steps")) c.steps = need_integer(doc, "steps", "config");
  if (doc.contains("seed")) {
    const long long s = need_integer(doc, "seed", "config");
    if (s < 0) throw ConfigError("config: 'seed' must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("tol")) {
    c.tol = need_number(doc, "tol", "config");
    if (!(*c.tol > 0.0)) throw ConfigError("config: 'tol' must be positive");
  }
  return c;
}

ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: JSON parse error in " + path + ": " + e.what());
  }
}

RunConfig parse_config_file(const std::string& path) {
  return parse_config(load_json_file(path));
}

MarketScenario scenario_from(const RunConfig& c) {
  if (!c.q_lo || !c.q_hi || !c.cost)
    throw ConfigError("config: q_lo, q_hi and cost are required for this command");
  std::vector<Atom> atoms;
  if (c.prior) {
    atoms = *c.prior;
  } else {
    atoms = {{*c.q_lo, 0.5}, {*c.q_hi, 0.5}};
  }
  return MarketScenario(*c.q_lo, *c.q_hi, *c.cost,
                        PosteriorMeanDistribution(std::move(atoms)), c.dist);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string schedule_csv(const std::vector<PricePoint>& points) {
  std::ostringstream out;
  out << "q,p,pbar,pbar1,pbar2,p2,revenue\n";
  for (const PricePoint& pt : points) {
    out << format_double(pt.q) << ',' << format_double(pt.p) << ','
        << format_double(pt.pbar) << ',' << format_double(pt.pbar1) << ','
        << format_double(pt.pbar2) << ',' << format_double(pt.p2) << ','
        << format_double(pt.revenue) << '\n';
  }
  return out.str();
}

std::string monotone_verdict(const std::vector<double>& toward_spread) {
  constexpr double tol = 1e-9;
  bool up = false, down = false;
  for (std::size_t i = 0; i + 1 < toward_spread.size(); ++i) {
    const double d = toward_spread[i] - toward_spread[i + 1];  // gain from more info
    if (d > tol) up = true;
    if (d < -tol) down = true;
  }
  if (up && down) return "mixed";
  if (up) return "nondecreasing";
  if (down) return "nonincreasing";
  return "constant";
}

std::string chain_csv(const std::vector<ChainRow>& rows, const ordered_json& verdicts) {
  std::ostringstream out;
  out << "step,e_rev,e_cs,e_ts,e_price\n";
  for (const ChainRow& r : rows) {
    out << r.step << ',' << format_double(r.w.e_rev) << ','
        << format_double(r.w.e_cs) << ',' << format_double(r.w.e_ts) << ','
        << format_double(r.w.e_price) << '\n';
  }
  for (auto it = verdicts.begin(); it != verdicts.end(); ++it)
    out << "# verdict " << it.key() << " " << it.value().get<std::string>() << '\n';
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "alpha,beta,max_margin,holds\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.alpha) << ',' << format_double(r.beta) << ','
        << format_double(r.max_margin) << ',' << (r.holds ? "true" : "false") << '\n';
  }
  return out.str();
}

namespace {

ordered_json json_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

ordered_json violations_json(const ConditionReport& cond) {
  ordered_json arr = ordered_json::array();
  for (const ConditionViolation& v : cond.violations) {
    arr.push_back({{"v", v.v}, {"condition", v.condition}, {"margin", v.margin}});
  }
  return arr;
}

}  // namespace

ordered_json analyze_report(const MarketScenario& s, const ConditionReport& cond,
                            const KResult& k, bool sufficient,
                            const TailAdvisory& tail, long long grid) {
  ordered_json j;
  j["schema"] = "lemonlens/v1";
  j["kind"] = "analyze";
  j["dist"] = s.dist.name();
  j["q_lo"] = s.q_lo;
  j["q_hi"] = s.q_hi;
  j["cost"] = s.cost;
  j["k"] = json_or_null(k.k);
  j["v_dagger"] = json_or_null(k.v_dagger);
  j["resolution"] = k.resolution;
  j["infinite_up_to_resolution"] = k.infinite_up_to_resolution;
  j["sufficient"] = sufficient;
  j["buyer_holds"] = cond.buyer_holds;
  j["total_holds"] = cond.total_holds;
  j["price_direction"] = to_string(cond.price_direction);
  j["interval"] = {cond.interval_lo, cond.interval_hi};
  j["grid"] = grid;
  j["violations"] = violations_json(cond);
  j["tail_r2_bounded"] = tail.bounded;
  return j;
}

ordered_json k_report(const TypeDistribution& d, const KResult& k) {
  ordered_json j;
  j["schema"] = "lemonlens/v1";
  j["kind"] = "k";
  j["dist"] = d.name();
  j["k"] = json_or_null(k.k);
  j["v_dagger"] = json_or_null(k.v_dagger);
  j["resolution"] = k.resolution;
  j["infinite_up_to_resolution"] = k.infinite_up_to_resolution;
  return j;
}

ordered_json compare_report(const MarketScenario& s, std::uint64_t seed,
                            const std::vector<ChainRow>& rows,
                            const ordered_json& verdicts,
                            const ConditionReport& cond) {
  ordered_json chain = ordered_json::array();
  for (const ChainRow& r : rows) {
    chain.push_back({{"step", r.step},
                     {"e_rev", r.w.e_rev},
                     {"e_cs", r.w.e_cs},
                     {"e_ts", r.w.e_ts},
                     {"e_price", r.w.e_price}});
  }
  ordered_json j;
  j["schema"] = "lemonlens/v1";
  j["kind"] = "compare";
  j["dist"] = s.dist.name();
  j["seed"] = seed;
  j["buyer_holds"] = cond.buyer_holds;
  j["total_holds"] = cond.total_holds;
  j["price_direction"] = to_string(cond.price_direction);
  j["chain"] = std::move(chain);
  j["verdicts"] = verdicts;
  return j;
}

ordered_json persuasion_report(const MarketScenario& s, const PersuasionResult& r,
                               std::uint64_t seed) {
  ordered_json j;
  j["schema"] = "lemonlens/v1";
  j["kind"] = "persuasion";
  j["dist"] = s.dist.name();
  j["seed"] = seed;
  j["samples"] = r.samples;
  j["optimal_is_full"] = r.optimal_is_full;
  j["max_gap"] = r.max_gap;
  return j;
}

ordered_json disclosure_report(const MarketScenario& s, const InfoStructure& is,
                               const std::vector<DisclosureEquilibrium>& eqs) {
  const PosteriorMeanDistribution full = posterior_means(is);
  ordered_json full_atoms = ordered_json::array();
  for (const Atom& a : full.atoms()) full_atoms.push_back({a.q, a.w});

  ordered_json list = ordered_json::array();
  for (const DisclosureEquilibrium& eq : eqs) {
    ordered_json strategy;
    for (const auto& [label, disclose] : eq.strategy)
      strategy[label] = disclose ? "disclose" : "withhold";
    ordered_json means;
    for (const auto& [label, mean] : eq.message_means) means[label] = mean;
    ordered_json induced = ordered_json::array();
    for (const Atom& a : eq.induced.atoms()) induced.push_back({a.q, a.w});
    list.push_back({{"strategy", std::move(strategy)},
                    {"message_means", std::move(means)},
                    {"off_path_belief", eq.off_path_belief},
                    {"null_on_path", eq.null_on_path},
                    {"induced", std::move(induced)}});
  }
  ordered_json j;
  j["schema"] = "lemonlens/v1";
  j["kind"] = "disclosure";
  j["dist"] = s.dist.name();
  j["count"] = eqs.size();
  j["unraveling"] = true;  // enforced by disclosure_equilibria
  j["full_disclosure_means"] = std::move(full_atoms);
  j["equilibria"] = std::move(list);
  return j;
}

ordered_json sweep_report(const std::vector<SweepRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const SweepRow& r : rows) {
    arr.push_back({{"alpha", r.alpha},
                   {"beta", r.beta},
                   {"max_margin", r.max_margin},
                   {"holds", r.holds}});
  }
  ordered_json j;
  j["schema"] = "lemonlens/v1";
  j["kind"] = "sweep";
  j["rows"] = std::move(arr);
  return j;
}

namespace {

bool type_matches(const ordered_json& doc, const std::string& t) {
  if (t == "object") return doc.is_object();
  if (t == "array") return doc.is_array();
  if (t == "string") return doc.is_string();
  if (t == "number") return doc.is_number();
  if (t == "integer") return doc.is_number_integer();
  if (t == "boolean") return doc.is_boolean();
  if (t == "null") return doc.is_null();
  return false;
}

bool validate_node(const ordered_json& doc, const ordered_json& schema,
                   const ordered_json& root, std::string* err,
                   const std::string& path) {
  if (schema.contains("$ref")) {
    const std::string ref = schema.at("$ref").get<std::string>();
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0) {
      *err = path + ": unsupported $ref " + ref;
      return false;
    }
    return validate_node(doc, root.at("definitions").at(ref.substr(prefix.size())),
                         root, err, path);
  }
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const auto& sub : schema.at("oneOf")) {
      std::string ignored;
      if (validate_node(doc, sub, root, &ignored, path)) ++hits;
    }
    if (hits != 1) {
      *err = path + ": matched " + std::to_string(hits) + " oneOf branches";
      return false;
    }
    return true;
  }
  if (schema.contains("type")) {
    const auto& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(doc, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || type_matches(doc, alt.get<std::string>());
    }
    if (!ok) {
      *err = path + ": wrong type";
      return false;
    }
  }
  if (schema.contains("const") && doc != schema.at("const")) {
    *err = path + ": const mismatch";
    return false;
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema.at("enum")) ok = ok || doc == v;
    if (!ok) {
      *err = path + ": not in enum";
      return false;
    }
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const auto& k : schema.at("required")) {
        if (!doc.contains(k.get<std::string>())) {
          *err = path + ": missing required key '" + k.get<std::string>() + "'";
          return false;
        }
      }
    }
    const ordered_json props =
        schema.contains("properties") ? schema.at("properties") : ordered_json::object();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (props.contains(it.key())) {
        if (!validate_node(it.value(), props.at(it.key()), root, err,
                           path + "/" + it.key()))
          return false;
      } else if (schema.contains("additionalProperties")) {
        const auto& ap = schema.at("additionalProperties");
        if (ap.is_boolean()) {
          if (!ap.get<bool>()) {
            *err = path + ": unexpected key '" + it.key() + "'";
            return false;
          }
        } else if (!validate_node(it.value(), ap, root, err, path + "/" + it.key())) {
          return false;
        }
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    std::size_t i = 0;
    for (const auto& item : doc) {
      if (!validate_node(item, schema.at("items"), root, err,
                         path + "/" + std::to_string(i)))
        return false;
      ++i;
    }
  }
  return true;
}

}  // namespace

bool validate_json(const ordered_json& doc, const ordered_json& schema,
                   std::string* err) {
  std::string local;
  std::string* e = err ? err : &local;
  e->clear();
  return validate_node(doc, schema, schema, e, "$");
}

}  // namespace lemonlens
