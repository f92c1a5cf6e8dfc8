// Benchmarks the OpenMP enumeration kernels against their serial references
// and meet-in-the-middle decoding against exhaustive search.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "subsetsum/codec.hpp"
#include "subsetsum/counting.hpp"
#include "subsetsum/experiments.hpp"
#include "subsetsum/instance.hpp"

using namespace subsetsum;

namespace {

double seconds(auto fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

SourceSequence half_ones(std::int64_t n) {
  std::vector<int> spins(static_cast<std::size_t>(n), -1);
  for (std::int64_t i = 0; i < n / 2; ++i) spins[static_cast<std::size_t>(i)] = +1;
  return SourceSequence::binary(std::move(spins));
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  std::printf("brute-force constrained counter, serial vs OpenMP\n");
  for (std::int64_t n : {24, 26, 28}) {
    const auto weights = WeightSet::sample(n, 1 << 12, seed + static_cast<std::uint64_t>(n));
    const auto seq = half_ones(n);
    std::int64_t serial_count = 0, parallel_count = 0;
    const double ts = seconds([&] { serial_count = brute_force_omega_constrained_serial(weights, seq); });
    const double tp = seconds([&] { parallel_count = brute_force_omega_constrained(weights, seq); });
    std::printf("  N=%2lld  serial %.3fs  omp %.3fs  speedup %.2fx  %s\n",
                static_cast<long long>(n), ts, tp, ts / tp,
                serial_count == parallel_count ? "counts match" : "MISMATCH");
  }

  std::printf("\nbrute-force unconstrained counter, serial vs OpenMP\n");
  for (std::int64_t n : {20, 24, 26}) {
    const auto weights = WeightSet::sample(n, 1 << 16, seed + static_cast<std::uint64_t>(n));
    const auto seq = half_ones(n);
    std::int64_t serial_count = 0, parallel_count = 0;
    const double ts = seconds([&] { serial_count = brute_force_omega_unconstrained_serial(weights, seq); });
    const double tp = seconds([&] { parallel_count = brute_force_omega_unconstrained(weights, seq); });
    std::printf("  N=%2lld  2^N=%.3g  serial %.3fs  omp %.3fs  speedup %.2fx  %s\n",
                static_cast<long long>(n), std::exp2(static_cast<double>(n)), ts, tp,
                ts / tp, serial_count == parallel_count ? "counts match" : "MISMATCH");
  }

  std::printf("\nconstrained decode, exhaustive vs meet-in-the-middle\n");
  for (std::int64_t n : {24, 28, 32}) {
    const std::int64_t level = level_from_rate(n, 1.0);
    const auto weights = WeightSet::sample(n, level, seed ^ static_cast<std::uint64_t>(n));
    const auto seq = half_ones(n);
    const auto msg = encode_constrained(seq, weights);
    DecodeOutcome ex, mm;
    double te = -1.0;
    if (n <= 28)
      te = seconds([&] { ex = decode_constrained(msg, weights, DecodeStrategy::Exhaustive); });
    const double tm =
        seconds([&] { mm = decode_constrained(msg, weights, DecodeStrategy::MeetInMiddle); });
    if (te >= 0.0)
      std::printf("  N=%2lld  exhaustive %.3fs  mitm %.4fs  speedup %.0fx  %s\n",
                  static_cast<long long>(n), te, tm, te / tm,
                  ex.count == mm.count ? "counts match" : "MISMATCH");
    else
      std::printf("  N=%2lld  exhaustive skipped  mitm %.4fs  count=%llu\n",
                  static_cast<long long>(n), tm,
                  static_cast<unsigned long long>(mm.count));
  }

  std::printf("\nsweep throughput (constrained N=16, MITM, 2000 trials/point)\n");
  SweepConfig cfg;
  cfg.scheme = Scheme::Constrained;
  cfg.n = 16;
  cfg.p = 0.5;
  cfg.rate_grid = {{0.6}, {0.8}, {1.0}, {1.2}};
  cfg.trials = 2000;
  cfg.seed = seed;
  const double tsweep = seconds([&] { run_ambiguity_sweep(cfg); });
  std::printf("  %zu points in %.3fs (%.0f decodes/s)\n", cfg.rate_grid.size(), tsweep,
              static_cast<double>(cfg.trials) * cfg.rate_grid.size() / tsweep);
  return 0;
}
