#include "subsetsum/ratefuncs.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace subsetsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0,1]");
}

// g(t) = 1/t - 1/(e^t - 1), decreasing from 1/2 (t -> 0+) to 0. The series
// below t = 1e-4 avoids the cancellation between the two reciprocals.
double stationarity_lhs(double t) {
  if (t < 1e-4) return 0.5 - t / 12.0 + t * t * t / 720.0;
  return 1.0 / t - 1.0 / std::expm1(t);
}

// ln t - ln(1 - e^{-t}) - zeta t, stable down to t = 0 where it vanishes.
double phi_objective(double t, double zeta) {
  if (t == 0.0) return 0.0;
  double u;  // (1 - e^{-t}) / t
  if (t < 1e-5) {
    u = 1.0 - t / 2.0 + t * t / 6.0 - t * t * t / 24.0;
  } else {
    u = -std::expm1(-t) / t;
  }
  return -std::log(u) - zeta * t;
}

}  // namespace

double binary_entropy(double p) {
  require_probability(p, "p");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double relative_entropy(double beta, double p) {
  require_probability(beta, "beta");
  require_probability(p, "p");
  if (p == 0.0) return beta == 0.0 ? 0.0 : kInf;
  if (p == 1.0) return beta == 1.0 ? 0.0 : kInf;
  double d = 0.0;
  if (beta > 0.0) d += beta * std::log(beta / p);
  if (beta < 1.0) d += (1.0 - beta) * std::log((1.0 - beta) / (1.0 - p));
  return d;
}

SaddleSolution phi(double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0))
    throw std::domain_error("phi requires zeta in (0,1)");
  const double z = zeta <= 0.5 ? zeta : 1.0 - zeta;
  if (z == 0.5) return {zeta, 0.0, 0.0};

  // Bisection on the monotone map g(t); bracket [0, hi] with g(hi) < z.
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 / z);
  while (stationarity_lhs(hi) >= z) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (stationarity_lhs(mid) > z)
      lo = mid;
    else
      hi = mid;
  }
  const double t = 0.5 * (lo + hi);
  const double value = std::max(phi_objective(t, z), 0.0);
  return {zeta, t, value};
}

double psi(double beta) {
  require_probability(beta, "beta");
  if (beta == 0.0 || beta == 1.0) return kInf;
  const double m = std::min(beta, 1.0 - beta);
  auto objective = [&](double x) {
    return beta * phi(x / beta).phi_value +
           (1.0 - beta) * phi(x / (1.0 - beta)).phi_value;
  };
  // Ternary search on the convex mixture; both interval ends diverge.
  double lo = m * 1e-9, hi = m * (1.0 - 1e-9);
  while (hi - lo > 1e-12) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) <= objective(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::max(objective(0.5 * (lo + hi)), 0.0);
}

double xi(double p) {
  require_probability(p, "p");
  if (p == 0.0 || p == 1.0) return kInf;
  auto objective = [&](double beta) { return relative_entropy(beta, p) + psi(beta); };

  // The outer minimization is not known to be unimodal: coarse grid first,
  // then a local ternary refinement around the best cell.
  double best_beta = 0.5, best = objective(0.5);
  const int grid = 1000;
  for (int k = 1; k < grid; ++k) {
    const double beta = static_cast<double>(k) / grid;
    const double v = objective(beta);
    if (v < best) {
      best = v;
      best_beta = beta;
    }
  }
  double lo = std::max(1e-12, best_beta - 1.0 / grid);
  double hi = std::min(1.0 - 1e-12, best_beta + 1.0 / grid);
  while (hi - lo > 1e-10) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) <= objective(m2))
      hi = m2;
    else
      lo = m1;
  }
  best = std::min(best, objective(0.5 * (lo + hi)));
  return std::max(best, 0.0);
}

double critical_rate_unconstrained(double p) {
  require_probability(p, "p");
  const double x = xi(p);
  if (std::isinf(x)) return -kInf;
  return std::log1p(std::exp(-x)) / std::numbers::ln2;
}

double composition_growth_exponent(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("composition growth exponent needs p in (0,1)");
  const double q = 1.0 - p;
  const double m = std::min(p, q);
  auto objective = [&](double alpha) {
    return p * binary_entropy(alpha / p) + q * binary_entropy(alpha / q);
  };
  double lo = m * 1e-12, hi = m * (1.0 - 1e-12);
  while (hi - lo > 1e-12) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) >= objective(m2))
      hi = m2;
    else
      lo = m1;
  }
  return objective(0.5 * (lo + hi));
}

RateAllocation kary_rate_allocation(const std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("probability vector is empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("probabilities must sum to 1");

  RateAllocation alloc;
  double prefix = 0.0;
  for (std::size_t s = 0; s + 1 < probs.size(); ++s) {
    const double tail = 1.0 - prefix;
    double rate = 0.0;
    if (tail > 0.0) {
      const double ratio = std::min(1.0, std::max(0.0, probs[s] / tail));
      rate = tail * binary_entropy(ratio);
    }
    alloc.stage_rates.push_back(rate);
    alloc.total += rate;
    prefix += probs[s];
  }
  return alloc;
}

}  // namespace subsetsum
