#include "lemonlens/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lemonlens/error.hpp"
#include "lemonlens/rng.hpp"
#include "lemonlens/welfare.hpp"

namespace lemonlens {

InfoStructure::InfoStructure(std::vector<double> qualities_,
                             std::vector<double> prior_,
                             std::vector<std::string> signals_,
                             std::vector<std::vector<double>> channel_)
    : qualities(std::move(qualities_)), prior(std::move(prior_)),
      signals(std::move(signals_)), channel(std::move(channel_)) {
  const std::size_t nq = qualities.size();
  const std::size_t nx = signals.size();
  if (nq == 0 || nx == 0)
    throw ConfigError("info structure: need at least one quality and one signal");
  if (prior.size() != nq)
    throw ConfigError("info structure: prior length must match qualities");
  if (channel.size() != nq)
    throw ConfigError("info structure: channel needs one row per quality");
  double psum = 0.0;
  for (std::size_t i = 0; i < nq; ++i) {
    if (!std::isfinite(qualities[i])) throw ConfigError("info structure: bad quality");
    if (!(prior[i] >= 0.0)) throw ConfigError("info structure: prior weights must be >= 0");
    psum += prior[i];
    if (channel[i].size() != nx)
      throw ConfigError("info structure: channel rows must match signal count");
    double rsum = 0.0;
    for (double p : channel[i]) {
      if (!(p >= 0.0)) throw ConfigError("info structure: channel entries must be >= 0");
      rsum += p;
    }
    if (std::fabs(rsum - 1.0) > 1e-12)
      throw ConfigError("info structure: channel rows must sum to 1 (within 1e-12)");
  }
  if (std::fabs(psum - 1.0) > 1e-12)
    throw ConfigError("info structure: prior must sum to 1 (within 1e-12)");
}

namespace {

struct SignalPosterior {
  std::size_t index;  // into is.signals
  double prob;        // marginal P(x)
  double mean;        // E[q | x]
};

std::vector<SignalPosterior> live_signals(const InfoStructure& is) {
  std::vector<SignalPosterior> out;
  for (std::size_t j = 0; j < is.signals.size(); ++j) {
    double px = 0.0, qx = 0.0;
    for (std::size_t i = 0; i < is.qualities.size(); ++i) {
      px += is.prior[i] * is.channel[i][j];
      qx += is.prior[i] * is.channel[i][j] * is.qualities[i];
    }
    if (px > 0.0) out.push_back({j, px, qx / px});
  }
  if (out.empty())
    throw DegenerateError("info structure: every signal has zero probability");
  return out;
}

}  // namespace

PosteriorMeanDistribution posterior_means(const InfoStructure& is) {
  std::vector<Atom> atoms;
  for (const SignalPosterior& sp : live_signals(is))
    atoms.push_back({sp.mean, sp.prob});
  return PosteriorMeanDistribution(std::move(atoms));
}

WelfareAverages expected_welfare(const MarketScenario& s,
                                 const PosteriorMeanDistribution& mu,
                                 double quad_tol) {
  WelfareAverages out{0.0, 0.0, 0.0, 0.0};
  for (const Atom& a : mu.atoms()) {
    const PricePoint pt = solve_price(s, a.q);
    out.e_rev += a.w * pt.revenue;
    out.e_cs += a.w * consumer_surplus(s, a.q, quad_tol);
    out.e_ts += a.w * total_surplus(s, a.q, quad_tol);
    out.e_price += a.w * pt.p;
  }
  return out;
}

namespace {

// Revenue averaged over atoms with memoization; persuasion and disclosure
// evaluate many overlapping atom sets.
class RevenueCache {
 public:
  explicit RevenueCache(const MarketScenario& s) : s_(s) {}
  double at(double q) {
    auto it = memo_.find(q);
    if (it != memo_.end()) return it->second;
    const double r = revenue(s_, q);
    memo_.emplace(q, r);
    return r;
  }
  double average(const PosteriorMeanDistribution& mu) {
    double acc = 0.0;
    for (const Atom& a : mu.atoms()) acc += a.w * at(a.q);
    return acc;
  }

 private:
  const MarketScenario& s_;
  std::map<double, double> memo_;
};

}  // namespace

PersuasionResult persuasion_check(const MarketScenario& s,
                                  const PosteriorMeanDistribution& muS,
                                  int contractions, std::uint64_t seed) {
  if (contractions < 1) throw ConfigError("persuasion_check: contractions must be >= 1");
  if (muS.size() < 2) return {true, 0.0, 0};

  Rng rng(seed);
  RevenueCache cache(s);
  const double base = cache.average(muS);
  const std::size_t n = muS.size();

  PersuasionResult res{true, -std::numeric_limits<double>::infinity(), contractions};
  for (int sample = 0; sample < contractions; ++sample) {
    // Random contiguous partition with at least one non-singleton group:
    // cut[i] says "break between atom i and i+1".
    std::vector<unsigned char> cut(n - 1, 0);
    bool proper = false;
    do {
      proper = false;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        cut[i] = static_cast<unsigned char>(rng.next_below(2));
        if (!cut[i]) proper = true;
      }
    } while (!proper);
    const double lambda = 1.0 - rng.next_double();  // (0,1]: always moves off muS

    std::vector<Atom> mixed;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 == n || cut[i]) {
        double w = 0.0, qw = 0.0;
        for (std::size_t j = start; j <= i; ++j) {
          w += muS.atoms()[j].w;
          qw += muS.atoms()[j].w * muS.atoms()[j].q;
        }
        mixed.push_back({qw / w, lambda * w});
        start = i + 1;
      }
    }
    for (const Atom& a : muS.atoms()) mixed.push_back({a.q, (1.0 - lambda) * a.w});
    std::erase_if(mixed, [](const Atom& a) { return a.w <= 0.0; });
    const PosteriorMeanDistribution nu{std::move(mixed)};

    const double gap = cache.average(nu) - base;
    if (gap > res.max_gap) res.max_gap = gap;
    if (!(gap < -1e-12)) res.optimal_is_full = false;
  }
  return res;
}

std::vector<DisclosureEquilibrium> disclosure_equilibria(const MarketScenario& s,
                                                         const InfoStructure& is) {
  if (is.signals.size() > 12)
    throw ConfigError("disclosure_equilibria: more than 12 signals");
  const std::vector<SignalPosterior> live = live_signals(is);
  const std::size_t n = live.size();

  RevenueCache cache(s);
  std::vector<double> rev_disclose(n);
  for (std::size_t i = 0; i < n; ++i) rev_disclose[i] = cache.at(live[i].mean);
  constexpr double kTieTol = 1e-12;

  std::vector<DisclosureEquilibrium> found;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    // bit set => signal i discloses
    double wh_p = 0.0, wh_qw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) {
        wh_p += live[i].prob;
        wh_qw += live[i].prob * live[i].mean;
      }
    }
    const bool null_on_path = wh_p > 0.0;
    const double null_mean = null_on_path ? wh_qw / wh_p : s.q_lo;
    const double rev_null = cache.at(null_mean);

    bool equilibrium = true;
    for (std::size_t i = 0; i < n && equilibrium; ++i) {
      if (mask & (1u << i)) {
        if (rev_disclose[i] < rev_null - kTieTol) equilibrium = false;
      } else {
        if (rev_null < rev_disclose[i] - kTieTol) equilibrium = false;
      }
    }
    if (!equilibrium) continue;

    std::vector<std::pair<std::string, bool>> strategy;
    std::vector<std::pair<std::string, double>> message_means;
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < n; ++i) {
      const bool disclose = (mask & (1u << i)) != 0;
      strategy.emplace_back(is.signals[live[i].index], disclose);
      message_means.emplace_back(is.signals[live[i].index], live[i].mean);
      if (disclose) atoms.push_back({live[i].mean, live[i].prob});
    }
    message_means.emplace_back("(none)", null_mean);
    if (null_on_path) atoms.push_back({null_mean, wh_p});
    found.push_back(DisclosureEquilibrium{
        std::move(strategy), std::move(message_means), s.q_lo, null_on_path,
        PosteriorMeanDistribution(std::move(atoms))});
  }

  // Unraveling guarantee: non-empty, and every equilibrium induces the same
  // posterior-mean distribution as full disclosure.
  if (found.empty())
    throw NumericalError("disclosure_equilibria: no equilibrium found");
  const PosteriorMeanDistribution full = posterior_means(is);
  for (const DisclosureEquilibrium& eq : found) {
    if (eq.induced.size() != full.size())
      throw NumericalError("disclosure_equilibria: equilibrium does not unravel");
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (std::fabs(eq.induced.atoms()[i].q - full.atoms()[i].q) > 1e-9 ||
          std::fabs(eq.induced.atoms()[i].w - full.atoms()[i].w) > 1e-9)
        throw NumericalError("disclosure_equilibria: equilibrium does not unravel");
    }
  }
  return found;
}

}  // namespace lemonlens
