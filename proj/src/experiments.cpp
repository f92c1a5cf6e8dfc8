#include "subsetsum/experiments.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "subsetsum/counting.hpp"
#include "subsetsum/rng.hpp"

namespace subsetsum {

namespace {

constexpr const char* kCsvHeader =
    "scheme,N,R,L,trials,mean_omega,se_omega,frac_ambiguous,frac_unique,mean_decode_ns";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::size_t expected_rate_count(Scheme scheme, const SweepConfig& cfg) {
  switch (scheme) {
    case Scheme::Multi: return 0;  // any m >= 1, checked per point
    case Scheme::KAry: return cfg.probs.size() - 1;
    default: return 1;
  }
}

SourceSequence canonical_binary(std::int64_t n, std::int64_t n_plus) {
  std::vector<int> spins(static_cast<std::size_t>(n), -1);
  for (std::int64_t i = 0; i < n_plus; ++i) spins[static_cast<std::size_t>(i)] = +1;
  return SourceSequence::binary(std::move(spins));
}

SourceSequence canonical_kary(std::int64_t n, const std::vector<std::int64_t>& counts,
                              int k_alpha) {
  std::vector<int> symbols;
  symbols.reserve(static_cast<std::size_t>(n));
  for (int s = 1; s < k_alpha; ++s)
    for (std::int64_t c = 0; c < counts[static_cast<std::size_t>(s - 1)]; ++c)
      symbols.push_back(s);
  while (static_cast<std::int64_t>(symbols.size()) < n) symbols.push_back(k_alpha);
  return SourceSequence::kary(k_alpha, std::move(symbols));
}

struct TrialRecord {
  std::uint64_t omega = 1;
  bool ambiguous = false;
  bool notfound = false;
  double decode_ns = 0.0;
  std::string error;
};

}  // namespace

std::int64_t level_from_rate(std::int64_t n, double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("rates must be nonnegative");
  const double bits = static_cast<double>(n) * rate;
  if (bits > 56.0) throw std::length_error("rate too large: L would overflow 64-bit sums");
  return std::max<std::int64_t>(1, std::llround(std::exp2(bits)));
}

JointDistribution binary_symmetric_joint(double p_plus, double crossover, double epsilon) {
  if (!(p_plus >= 0.0 && p_plus <= 1.0) || !(crossover >= 0.0 && crossover <= 1.0))
    throw std::invalid_argument("joint parameters must lie in [0,1]");
  JointDistribution joint;
  joint.p = {{p_plus * (1.0 - crossover), p_plus * crossover},
             {(1.0 - p_plus) * crossover, (1.0 - p_plus) * (1.0 - crossover)}};
  joint.epsilon = epsilon;
  return joint;
}

void SweepConfig::validate() const {
  if (n < 1) throw std::invalid_argument("sweep: n must be >= 1");
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (rate_grid.empty()) throw std::invalid_argument("sweep: rate grid is empty");
  if (!seed) throw std::invalid_argument("sweep: a seed is required");
  if (scheme == Scheme::KAry) {
    if (probs.size() < 2) throw std::invalid_argument("sweep: K-ary needs a probability vector");
    double sum = 0.0;
    for (double q : probs) {
      if (!(q >= 0.0)) throw std::invalid_argument("sweep: negative probability");
      sum += q;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("sweep: probabilities must sum to 1");
  } else if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sweep: p must lie in [0,1]");
  }
  const std::size_t want = expected_rate_count(scheme, *this);
  for (const auto& rates : rate_grid) {
    if (rates.empty()) throw std::invalid_argument("sweep: empty rate entry");
    if (want != 0 && rates.size() != want)
      throw std::invalid_argument("sweep: rate entry size does not match the scheme");
    if (scheme == Scheme::Multi && rates.empty())
      throw std::invalid_argument("sweep: multi needs at least one rate per point");
  }
}

nlohmann::json SweepConfig::to_json() const {
  nlohmann::json j;
  j["scheme"] = scheme_name(scheme);
  j["n"] = n;
  j["p"] = p;
  if (!probs.empty()) j["probs"] = probs;
  if (scheme == Scheme::SideInfo) {
    j["crossover"] = crossover;
    j["epsilon"] = epsilon > 0.0 ? epsilon : 2.0 / static_cast<double>(n);
  }
  j["rate_grid"] = rate_grid;
  j["trials"] = trials;
  if (seed) j["seed"] = *seed;
  j["strategy"] = strategy == DecodeStrategy::Exhaustive ? "exhaustive" : "mitm";
  j["out"] = out_path;
  j["threads"] = threads;
  return j;
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  cfg.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  cfg.n = j.at("n").get<std::int64_t>();
  cfg.p = j.value("p", 0.5);
  if (j.contains("probs")) cfg.probs = j.at("probs").get<std::vector<double>>();
  cfg.crossover = j.value("crossover", 0.1);
  cfg.epsilon = j.value("epsilon", 0.0);
  if (j.contains("rate_grid")) {
    const auto& grid = j.at("rate_grid");
    for (const auto& entry : grid) {
      if (entry.is_array())
        cfg.rate_grid.push_back(entry.get<std::vector<double>>());
      else
        cfg.rate_grid.push_back({entry.get<double>()});
    }
  }
  cfg.trials = j.value("trials", std::int64_t{1000});
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  const std::string strat = j.value("strategy", std::string("mitm"));
  if (strat == "exhaustive")
    cfg.strategy = DecodeStrategy::Exhaustive;
  else if (strat == "mitm")
    cfg.strategy = DecodeStrategy::MeetInMiddle;
  else
    throw std::invalid_argument("sweep: strategy must be exhaustive or mitm");
  cfg.out_path = j.value("out", std::string());
  cfg.threads = j.value("threads", 0);
  return cfg;
}

namespace {

TrialRecord run_trial(const SweepConfig& cfg, const std::vector<std::int64_t>& levels,
                      const SourceSequence* canonical, const JointDistribution* joint,
                      std::size_t point_index, std::int64_t trial_index) {
  TrialRecord rec;
  Rng stream = derive_stream(*cfg.seed, point_index, static_cast<std::uint64_t>(trial_index));
  const std::uint64_t weight_seed = stream.next_u64();

  WeightSet weights = levels.size() == 1
                          ? WeightSet::sample(cfg.n, levels[0], weight_seed)
                          : WeightSet::sample_multi(cfg.n, levels, weight_seed);

  EncodedMessage msg;
  SourceSequence source = canonical ? *canonical : canonical_binary(cfg.n, 0);
  SourceSequence tau = source;
  switch (cfg.scheme) {
    case Scheme::Constrained:
      msg = encode_constrained(source, weights);
      break;
    case Scheme::Multi:
      msg = encode_multi(source, weights);
      break;
    case Scheme::KAry:
      msg = encode_kary(source, weights);
      break;
    case Scheme::Unconstrained: {
      std::vector<int> spins(static_cast<std::size_t>(cfg.n));
      for (auto& s : spins) s = stream.next_bernoulli(cfg.p) ? +1 : -1;
      source = SourceSequence::binary(std::move(spins));
      msg = encode_unconstrained(source, weights);
      break;
    }
    case Scheme::SideInfo: {
      // Draw (sigma, tau) i.i.d. from the joint, conditioned on joint
      // typicality so every message is decodable by construction.
      const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : 2.0 / static_cast<double>(cfg.n);
      bool ok = false;
      for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
        std::vector<int> sig(static_cast<std::size_t>(cfg.n));
        std::vector<int> side(static_cast<std::size_t>(cfg.n));
        std::int64_t cell[2][2] = {{0, 0}, {0, 0}};
        for (std::int64_t i = 0; i < cfg.n; ++i) {
          const bool plus = stream.next_bernoulli(cfg.p);
          const bool flip = stream.next_bernoulli(cfg.crossover);
          sig[static_cast<std::size_t>(i)] = plus ? +1 : -1;
          side[static_cast<std::size_t>(i)] = (plus != flip) ? +1 : -1;
          ++cell[plus ? 0 : 1][(plus != flip) ? 0 : 1];
        }
        ok = true;
        for (int r = 0; r < 2 && ok; ++r)
          for (int c = 0; c < 2 && ok; ++c) {
            const double freq =
                static_cast<double>(cell[r][c]) / static_cast<double>(cfg.n);
            ok = std::abs(freq - joint->p[static_cast<std::size_t>(r)]
                                          [static_cast<std::size_t>(c)]) <= eps + 1e-12;
          }
        if (ok) {
          source = SourceSequence::binary(std::move(sig));
          tau = SourceSequence::binary(std::move(side));
        }
      }
      if (!ok) throw std::runtime_error("side-info: no jointly typical pair found");
      msg = encode_side_info(source, weights);
      break;
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  DecodeOutcome outcome;
  if (cfg.scheme == Scheme::SideInfo)
    outcome = decode_side_info(msg, weights, tau, *joint);
  else if (cfg.scheme == Scheme::Constrained)
    outcome = decode_constrained(msg, weights, cfg.strategy);
  else if (cfg.scheme == Scheme::Unconstrained)
    outcome = decode_unconstrained(msg, weights, cfg.strategy);
  else if (cfg.scheme == Scheme::Multi)
    outcome = decode_multi(msg, weights, cfg.strategy);
  else
    outcome = decode_kary(msg, weights, cfg.strategy);
  const auto t1 = std::chrono::steady_clock::now();

  rec.decode_ns =
      std::chrono::duration_cast<std::chrono::duration<double, std::nano>>(t1 - t0).count();
  rec.ambiguous = outcome.kind == DecodeOutcome::Kind::Ambiguous;
  rec.notfound = outcome.kind == DecodeOutcome::Kind::NotFound;
  rec.omega = cfg.strategy == DecodeStrategy::Exhaustive
                  ? outcome.count
                  : std::min<std::uint64_t>(outcome.count, 2);
  if (rec.notfound) rec.omega = 0;
  return rec;
}

}  // namespace

SweepResult run_ambiguity_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;

  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
  const int k_alpha = static_cast<int>(config.probs.size());

  for (std::size_t g = 0; g < config.rate_grid.size(); ++g) {
    SweepPoint pt;
    pt.rates = config.rate_grid[g];
    for (double r : pt.rates) pt.rate_total += r;
    pt.trials = config.trials;
    try {
      for (double r : pt.rates) pt.levels.push_back(level_from_rate(config.n, r));

      SourceSequence canonical = canonical_binary(config.n, config.n);
      JointDistribution joint;
      bool use_canonical = false;
      if (config.scheme == Scheme::Constrained || config.scheme == Scheme::Multi) {
        canonical = canonical_binary(config.n, std::llround(config.p * config.n));
        use_canonical = true;
      } else if (config.scheme == Scheme::KAry) {
        std::vector<std::int64_t> counts;
        std::int64_t used = 0;
        for (int s = 0; s + 1 < k_alpha; ++s) {
          counts.push_back(std::llround(config.probs[static_cast<std::size_t>(s)] *
                                        static_cast<double>(config.n)));
          used += counts.back();
        }
        if (used > config.n)
          throw std::invalid_argument("K-ary composition exceeds N after rounding");
        canonical = canonical_kary(config.n, counts, k_alpha);
        use_canonical = true;
      } else if (config.scheme == Scheme::SideInfo) {
        joint = binary_symmetric_joint(config.p, config.crossover, config.epsilon);
      }

      std::vector<TrialRecord> recs(static_cast<std::size_t>(config.trials));
      // Trial 0 runs first so size guards surface as a per-point infeasibility.
      recs[0] = run_trial(config, pt.levels, use_canonical ? &canonical : nullptr,
                          &joint, g, 0);
      if (!recs[0].error.empty()) throw std::runtime_error(recs[0].error);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
      for (std::int64_t t = 1; t < config.trials; ++t) {
        try {
          recs[static_cast<std::size_t>(t)] =
              run_trial(config, pt.levels, use_canonical ? &canonical : nullptr, &joint,
                        g, t);
        } catch (const std::exception& e) {
          recs[static_cast<std::size_t>(t)].error = e.what();
        }
      }
      for (const auto& rec : recs)
        if (!rec.error.empty()) throw std::runtime_error(rec.error);

      unsigned __int128 sum = 0, sum_sq = 0;
      std::int64_t ambiguous = 0;
      double ns_total = 0.0;
      for (const auto& rec : recs) {
        sum += rec.omega;
        sum_sq += static_cast<unsigned __int128>(rec.omega) * rec.omega;
        ambiguous += rec.ambiguous ? 1 : 0;
        pt.notfound += rec.notfound ? 1 : 0;
        ns_total += rec.decode_ns;
      }
      const double t = static_cast<double>(config.trials);
      pt.mean_omega = static_cast<double>(static_cast<long double>(sum) / t);
      if (config.trials > 1) {
        const long double mean = static_cast<long double>(sum) / t;
        const long double var =
            (static_cast<long double>(sum_sq) - t * mean * mean) / (t - 1.0);
        pt.se_omega = static_cast<double>(std::sqrt(std::max(0.0L, var) / t));
      }
      pt.frac_ambiguous = static_cast<double>(ambiguous) / t;
      pt.frac_unique =
          static_cast<double>(config.trials - ambiguous - pt.notfound) / t;
      pt.mean_decode_ns = ns_total / t;
    } catch (const std::exception& e) {
      pt.infeasible = e.what();
    }
    result.points.push_back(std::move(pt));
  }
  return result;
}

std::string SweepResult::csv() const {
  std::string out = kCsvHeader;
  out.push_back('\n');
  for (const auto& pt : points) {
    if (!pt.infeasible.empty()) continue;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%lld,%s,%lld,%lld,%s,%s,%s,%s,%s\n",
                  scheme_name(config.scheme), static_cast<long long>(config.n),
                  format_double(pt.rate_total).c_str(),
                  static_cast<long long>(pt.levels.at(0)),
                  static_cast<long long>(pt.trials), format_double(pt.mean_omega).c_str(),
                  format_double(pt.se_omega).c_str(),
                  format_double(pt.frac_ambiguous).c_str(),
                  format_double(pt.frac_unique).c_str(),
                  format_double(pt.mean_decode_ns).c_str());
    out += buf;
  }
  return out;
}

nlohmann::json SweepResult::metadata() const {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["code_version"] = "subsetsum 0.1.0";
  auto pts = nlohmann::json::array();
  for (const auto& pt : points) {
    nlohmann::json pj;
    pj["rates"] = pt.rates;
    pj["rate_total"] = pt.rate_total;
    pj["levels"] = pt.levels;
    pj["notfound"] = pt.notfound;
    if (!pt.infeasible.empty()) pj["infeasible"] = pt.infeasible;
    pts.push_back(pj);
  }
  j["points"] = pts;
  return j;
}

std::pair<double, double> estimate_expected_omega_level(Scheme scheme, std::int64_t n,
                                                        double p, std::int64_t level,
                                                        std::int64_t trials,
                                                        std::uint64_t seed) {
  if (scheme != Scheme::Constrained && scheme != Scheme::Unconstrained)
    throw std::invalid_argument("estimate_expected_omega handles the binary schemes");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  const SourceSequence canonical = canonical_binary(n, std::llround(p * static_cast<double>(n)));
  std::vector<std::int64_t> omegas(static_cast<std::size_t>(trials), 0);
  std::vector<std::string> errors(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 0; t < trials; ++t) {
    try {
      Rng stream = derive_stream(seed, 0, static_cast<std::uint64_t>(t));
      const std::uint64_t wseed = stream.next_u64();
      WeightSet weights = WeightSet::sample(n, level, wseed);
      if (scheme == Scheme::Constrained) {
        omegas[static_cast<std::size_t>(t)] =
            brute_force_omega_constrained_serial(weights, canonical);
      } else {
        std::vector<int> spins(static_cast<std::size_t>(n));
        for (auto& s : spins) s = stream.next_bernoulli(p) ? +1 : -1;
        omegas[static_cast<std::size_t>(t)] = brute_force_omega_unconstrained_serial(
            weights, SourceSequence::binary(std::move(spins)));
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(t)] = e.what();
    }
  }
  for (const auto& err : errors)
    if (!err.empty()) throw std::runtime_error(err);

  unsigned __int128 sum = 0, sum_sq = 0;
  for (std::int64_t v : omegas) {
    sum += static_cast<unsigned __int128>(v);
    sum_sq += static_cast<unsigned __int128>(v) * static_cast<unsigned __int128>(v);
  }
  const double t = static_cast<double>(trials);
  const long double mean = static_cast<long double>(sum) / t;
  double se = 0.0;
  if (trials > 1) {
    const long double var = (static_cast<long double>(sum_sq) - t * mean * mean) / (t - 1.0);
    se = static_cast<double>(std::sqrt(std::max(0.0L, var) / t));
  }
  return {static_cast<double>(mean), se};
}

std::pair<double, double> estimate_expected_omega(Scheme scheme, std::int64_t n, double p,
                                                  double rate, std::int64_t trials,
                                                  std::uint64_t seed) {
  return estimate_expected_omega_level(scheme, n, p, level_from_rate(n, rate), trials, seed);
}

TransitionEstimate locate_transition(const SweepResult& sweep) {
  std::vector<std::pair<double, double>> pts;  // (rate, frac_ambiguous)
  for (const auto& pt : sweep.points)
    if (pt.infeasible.empty()) pts.emplace_back(pt.rate_total, pt.frac_ambiguous);
  if (pts.size() < 2) throw std::runtime_error("locate_transition: too few points");

  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto [r0, f0] = pts[i];
    const auto [r1, f1] = pts[i + 1];
    if (f0 >= 0.5 && f1 < 0.5) {
      TransitionEstimate est;
      est.uncertainty = r1 - r0;
      est.r_star = f0 == f1 ? 0.5 * (r0 + r1) : r0 + (f0 - 0.5) * (r1 - r0) / (f0 - f1);
      return est;
    }
    if (f0 == 0.5) return {r0, i > 0 ? r0 - pts[i - 1].first : r1 - r0};
  }
  throw std::runtime_error("locate_transition: no crossing of 1/2 in range");
}

}  // namespace subsetsum
