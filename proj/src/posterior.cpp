#include "lemonlens/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "lemonlens/error.hpp"
#include "lemonlens/rng.hpp"

namespace lemonlens {

PosteriorMeanDistribution::PosteriorMeanDistribution(std::vector<Atom> atoms) {
  if (atoms.empty())
    throw ConfigError("posterior-mean distribution needs at least one atom");
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.q)) throw ConfigError("atom position must be finite");
    if (!(a.w > 0.0) || !std::isfinite(a.w))
      throw ConfigError("atom weights must be positive");
    sum += a.w;
  }
  if (std::fabs(sum - 1.0) > kSumTol)
    throw ConfigError("atom weights must sum to 1 (within 1e-12)");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.q < b.q; });
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && a.q - atoms_.back().q <= kMergeTol) {
      Atom& last = atoms_.back();
      const double w = last.w + a.w;
      last.q = (last.q * last.w + a.q * a.w) / w;
      last.w = w;
    } else {
      atoms_.push_back(a);
    }
  }
  mean_ = 0.0;
  for (Atom& a : atoms_) {
    a.w /= sum;
    mean_ += a.w * a.q;
  }
}

namespace {

// Integrated CDF of a sorted atom list at t: sum_i w_i * max(0, t - q_i).
double integrated_cdf(const std::vector<Atom>& atoms, double t) {
  double acc = 0.0;
  for (const Atom& a : atoms) {
    if (a.q >= t) break;
    acc += a.w * (t - a.q);
  }
  return acc;
}

}  // namespace

bool is_mps(const PosteriorMeanDistribution& spread,
            const PosteriorMeanDistribution& contraction) {
  if (std::fabs(spread.mean() - contraction.mean()) > 1e-9) return false;
  for (const auto& list : {spread.atoms(), contraction.atoms()}) {
    for (const Atom& a : list) {
      if (integrated_cdf(spread.atoms(), a.q) <
          integrated_cdf(contraction.atoms(), a.q) - 1e-12)
        return false;
    }
  }
  return true;
}

std::vector<PosteriorMeanDistribution> garble_chain(
    const PosteriorMeanDistribution& prior, int steps, std::uint64_t seed) {
  if (prior.size() < 2) throw ConfigError("garble_chain: prior needs >= 2 atoms");
  if (steps < 1) throw ConfigError("garble_chain: steps must be >= 1");
  if (static_cast<std::size_t>(steps) > prior.size() - 1)
    throw ConfigError("garble_chain: steps exceeds atoms-1");
  Rng rng(seed);
  std::vector<PosteriorMeanDistribution> chain;
  chain.reserve(static_cast<std::size_t>(steps) + 1);
  chain.push_back(prior);
  for (int k = 0; k < steps; ++k) {
    const auto& cur = chain.back().atoms();
    if (cur.size() < 2) {
      chain.push_back(chain.back());  // already degenerate (merges collapsed it)
      continue;
    }
    const std::size_t i = rng.next_below(cur.size() - 1);
    std::vector<Atom> next;
    next.reserve(cur.size() - 1);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (j == i) {
        const double w = cur[j].w + cur[j + 1].w;
        next.push_back({(cur[j].q * cur[j].w + cur[j + 1].q * cur[j + 1].w) / w, w});
        ++j;
      } else {
        next.push_back(cur[j]);
      }
    }
    chain.emplace_back(std::move(next));
  }
  return chain;
}

}  // namespace lemonlens
