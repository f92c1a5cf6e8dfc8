#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subsetsum/codec.hpp"

namespace subsetsum {

// L = max(1, round(2^{nR})). Rejects rates that would overflow the 64-bit
// subset-sum guard.
std::int64_t level_from_rate(std::int64_t n, double rate);

// Binary joint with P(sigma=+1) = p_plus and crossover probability to the
// side symbol; epsilon <= 0 leaves the decoder default (2/N) in place.
JointDistribution binary_symmetric_joint(double p_plus, double crossover,
                                         double epsilon = -1.0);

struct SweepConfig {
  Scheme scheme = Scheme::Constrained;
  std::int64_t n = 16;
  double p = 0.5;                    // binary source parameter
  std::vector<double> probs;         // K-ary source distribution (K entries)
  double crossover = 0.1;            // side-info joint crossover
  double epsilon = 0.0;              // side-info typicality; <= 0 -> 2/N
  // One entry per grid point; each entry lists the rate of every transmitted
  // sum (1 for constrained/unconstrained/side-info, m for multi, K-1 for
  // K-ary).
  std::vector<std::vector<double>> rate_grid;
  std::int64_t trials = 1000;
  std::optional<std::uint64_t> seed;  // required; sweeps are never implicitly seeded
  DecodeStrategy strategy = DecodeStrategy::MeetInMiddle;
  std::string out_path;
  int threads = 0;  // 0 = all available

  void validate() const;
  nlohmann::json to_json() const;
  static SweepConfig from_json(const nlohmann::json& j);
};

struct SweepPoint {
  std::vector<double> rates;
  double rate_total = 0.0;
  std::vector<std::int64_t> levels;
  std::int64_t trials = 0;
  double mean_omega = 0.0;
  double se_omega = 0.0;
  double frac_ambiguous = 0.0;
  double frac_unique = 0.0;
  std::int64_t notfound = 0;
  double mean_decode_ns = 0.0;
  std::string infeasible;  // nonempty: point skipped, reason recorded
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepPoint> points;

  // Pinned header:
  // scheme,N,R,L,trials,mean_omega,se_omega,frac_ambiguous,frac_unique,mean_decode_ns
  // All columns are deterministic under the seed except mean_decode_ns,
  // which is measured wall time.
  std::string csv() const;
  nlohmann::json metadata() const;
};

// Per grid point: fresh weights per trial from a derived stream, encode a
// source sequence, decode, record the solution count (exact when Exhaustive,
// clamped to {1, >=2} when MeetInMiddle). Deterministic given the master
// seed, independent of scheduling.
SweepResult run_ambiguity_sweep(const SweepConfig& config);

// Unbiased mean and standard error of the brute-force solution count over
// independent weight draws.
std::pair<double, double> estimate_expected_omega(Scheme scheme, std::int64_t n, double p,
                                                  double rate, std::int64_t trials,
                                                  std::uint64_t seed);
std::pair<double, double> estimate_expected_omega_level(Scheme scheme, std::int64_t n,
                                                        double p, std::int64_t level,
                                                        std::int64_t trials,
                                                        std::uint64_t seed);

struct TransitionEstimate {
  double r_star = 0.0;
  double uncertainty = 0.0;  // spacing of the bracketing grid cell
};

// Linear interpolation of the frac_ambiguous = 1/2 crossing. Throws when the
// sweep does not straddle both phases.
TransitionEstimate locate_transition(const SweepResult& sweep);

}  // namespace subsetsum
