#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lemonlens/posterior.hpp"
#include "lemonlens/pricing.hpp"

namespace lemonlens {

// A discrete information structure: finite quality grid with prior weights,
// a finite signal alphabet, and the conditional law channel[i][j] =
// P(signal j | quality i). Rows must sum to 1 within 1e-12.
struct InfoStructure {
  std::vector<double> qualities;
  std::vector<double> prior;
  std::vector<std::string> signals;
  std::vector<std::vector<double>> channel;

  InfoStructure(std::vector<double> qualities_, std::vector<double> prior_,
                std::vector<std::string> signals_,
                std::vector<std::vector<double>> channel_);
};

// Bayes posterior mean per signal; zero-probability signals are dropped and
// atoms with equal means merge. The result's mean equals the prior mean.
// Throws DegenerateError if every signal has zero probability.
PosteriorMeanDistribution posterior_means(const InfoStructure& is);

struct WelfareAverages {
  double e_rev;
  double e_cs;
  double e_ts;
  double e_price;
};

// Prior-weighted averages of revenue, buyer surplus, total surplus, and the
// posted price over the atoms of mu. e_ts = e_rev + e_cs within 1e-9.
WelfareAverages expected_welfare(const MarketScenario& s,
                                 const PosteriorMeanDistribution& mu,
                                 double quad_tol = 1e-9);

struct PersuasionResult {
  bool optimal_is_full;  // no sampled coarsening ever weakly beat muS
  double max_gap;        // max over samples of e_rev(sample) - e_rev(muS)
  int samples;
};

// Samples `contractions` random mean-preserving coarsenings of muS (pool a
// random contiguous partition at conditional means, then mix back toward muS
// with a random weight) and compares seller revenue. Strict convexity of
// revenue in q makes every proper coarsening strictly worse, so
// optimal_is_full should come back true with max_gap < 0. A single-atom muS
// has no proper coarsening: returns {true, 0, 0}.
PersuasionResult persuasion_check(const MarketScenario& s,
                                  const PosteriorMeanDistribution& muS,
                                  int contractions, std::uint64_t seed);

struct DisclosureEquilibrium {
  // strategy[i] pairs the i-th live signal's label with true=disclose.
  std::vector<std::pair<std::string, bool>> strategy;
  // Buyer's posterior mean per message: every live signal label, plus the
  // null message "(none)" for non-disclosure.
  std::vector<std::pair<std::string, double>> message_means;
  double off_path_belief;  // belief at "(none)" when everyone disclosed: q_lo
  bool null_on_path;       // some signal actually withholds
  PosteriorMeanDistribution induced;
};

// Enumerates all 2^|signals| disclose/withhold strategies (signal count
// <= 12), keeping those where every signal's message choice maximizes the
// seller's revenue given Bayes-consistent beliefs; non-disclosure when
// nobody withholds is met with the worst-case belief q_lo. Verifies the
// unraveling guarantee: the list is nonempty and every equilibrium induces
// the same posterior-mean distribution as full disclosure.
std::vector<DisclosureEquilibrium> disclosure_equilibria(const MarketScenario& s,
                                                         const InfoStructure& is);

}  // namespace lemonlens
