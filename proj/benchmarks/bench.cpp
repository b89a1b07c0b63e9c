// Times the OpenMP kernels against the serial reference paths and verifies
// that both produce bitwise-identical results. Run manually:
//   LEMONLENS_THREADS=8 ./build/benchmarks/lemonlens_bench
#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "lemonlens/dist.hpp"
#include "lemonlens/parallel.hpp"
#include "lemonlens/posterior.hpp"
#include "lemonlens/pricing.hpp"
#include "lemonlens/welfare.hpp"

namespace {

using namespace lemonlens;
using clock_type = std::chrono::steady_clock;

template <typename Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock_type::now();
    fn();
    const std::chrono::duration<double, std::milli> dt = clock_type::now() - t0;
    if (dt.count() < best) best = dt.count();
  }
  return best;
}

bool identical(const std::vector<PricePoint>& a, const std::vector<PricePoint>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(PricePoint)) == 0;
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              match ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", resolve_threads());

  {
    const TypeDistribution d = TypeDistribution::beta(3, 3);
    KResult rs{}, rp{};
    const double ts = best_of(3, [&] { rs = compute_k(d, 2000000, ExecPolicy::Serial); });
    const double tp = best_of(3, [&] { rp = compute_k(d, 2000000, ExecPolicy::Parallel); });
    report("compute_k beta(3,3) 2e6", ts, tp,
           rs.k == rp.k && rs.v_dagger == rp.v_dagger &&
               rs.infinite_up_to_resolution == rp.infinite_up_to_resolution);
  }
  {
    const TypeDistribution d = TypeDistribution::truncnorm(0.5, 0.1);
    KResult rs{}, rp{};
    const double ts = best_of(3, [&] { rs = compute_k(d, 2000000, ExecPolicy::Serial); });
    const double tp = best_of(3, [&] { rp = compute_k(d, 2000000, ExecPolicy::Parallel); });
    report("compute_k truncnorm 2e6", ts, tp,
           rs.k == rp.k && rs.v_dagger == rp.v_dagger &&
               rs.infinite_up_to_resolution == rp.infinite_up_to_resolution);
  }
  {
    const MarketScenario s(1.5, 9.0, 1.0,
                           PosteriorMeanDistribution({{1.5, 0.5}, {9.0, 0.5}}),
                           TypeDistribution::beta(3, 3));
    std::vector<PricePoint> ps, pp;
    const double ts = best_of(3, [&] { ps = price_schedule(s, 200000, ExecPolicy::Serial); });
    const double tp = best_of(3, [&] { pp = price_schedule(s, 200000, ExecPolicy::Parallel); });
    report("price_schedule 2e5", ts, tp, identical(ps, pp));
  }
  {
    const MarketScenario s(5.0, 20.0, 1.0,
                           PosteriorMeanDistribution({{5.0, 0.5}, {20.0, 0.5}}),
                           TypeDistribution::truncnorm(0.5, 0.0316227766016838));
    ConditionReport cs{}, cp{};
    const double ts = best_of(3, [&] { cs = check_conditions(s, 500000, ExecPolicy::Serial); });
    const double tp = best_of(3, [&] { cp = check_conditions(s, 500000, ExecPolicy::Parallel); });
    report("check_conditions 5e5", ts, tp,
           cs.buyer_holds == cp.buyer_holds && cs.total_holds == cp.total_holds &&
               cs.violations.size() == cp.violations.size());
  }
  return 0;
}
