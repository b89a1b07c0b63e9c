#pragma once

#include <cstdint>
#include <vector>

namespace lemonlens {

struct Atom {
  double q;  // posterior-mean quality
  double w;  // probability weight
};

// Finite distribution of posterior-mean qualities. Atoms are kept sorted by
// position; positions closer than kMergeTol are merged (Bayes updates produce
// near-duplicates). Weights must be positive and sum to 1 within kSumTol;
// after validation they are renormalized exactly.
class PosteriorMeanDistribution {
 public:
  static constexpr double kMergeTol = 1e-9;
  static constexpr double kSumTol = 1e-12;

  explicit PosteriorMeanDistribution(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double mean() const { return mean_; }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::vector<Atom> atoms_;
  double mean_ = 0.0;
};

// True iff `spread` and `contraction` share a mean (within 1e-9) and the
// integrated CDF of `spread` weakly dominates that of `contraction`
// (slack >= -1e-12) at every atom position. For finite distributions the
// integrated CDF is piecewise linear with kinks only at atoms, so checking
// the union of atom positions is an exact comparison.
bool is_mps(const PosteriorMeanDistribution& spread,
            const PosteriorMeanDistribution& contraction);

// c0 = prior, then each step pools a uniformly chosen adjacent atom pair at
// its conditional mean, producing a chain ordered from most to least
// informative: is_mps(c[i], c[i+1]) holds for every consecutive pair.
// steps must be in [1, atoms-1]; the final element is degenerate at the
// prior mean when steps == atoms-1 (possibly sooner if pooled atoms merge).
std::vector<PosteriorMeanDistribution> garble_chain(
    const PosteriorMeanDistribution& prior, int steps, std::uint64_t seed);

}  // namespace lemonlens
