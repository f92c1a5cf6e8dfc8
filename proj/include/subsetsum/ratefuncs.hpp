#pragma once

#include <vector>

namespace subsetsum {

// Closed-form rate functions. Units follow the source material's split
// conventions: h and the critical rates are in bits, Phi / psi / xi / D are in
// nats. Infinite results are IEEE infinities, never sentinels.

// h(p) = -p log2 p - (1-p) log2(1-p), bits.
double binary_entropy(double p);

// D(beta || p) in nats; +inf when p is degenerate and beta != p.
double relative_entropy(double beta, double p);

// Large-deviations rate of the mean of i.i.d. uniform [0,1] variables,
// evaluated by solving the stationarity condition 1/t - 1/(e^t - 1) = zeta.
struct SaddleSolution {
  double zeta = 0;
  double t_star = 0;     // optimizer of the objective (0 at zeta = 1/2)
  double phi_value = 0;  // nats
};
SaddleSolution phi(double zeta);  // zeta in (0,1); phi(zeta) == phi(1-zeta)

// Pair-collision exponent: min over x of beta*Phi(x/beta) +
// (1-beta)*Phi(x/(1-beta)); +inf at beta in {0,1}. Nats.
double psi(double beta);

// xi(p) = min over beta of D(beta||p) + psi(beta); +inf at p in {0,1}. Nats.
double xi(double p);

// R_c = log2(1 + e^{-xi(p)}) bits; -inf when xi(p) = +inf.
double critical_rate_unconstrained(double p);

// sup over alpha in (0, min{p,q}) of p h(alpha/p) + q h(alpha/q), bits.
// Equals h(p); the search maximizer is alpha = p(1-p).
double composition_growth_exponent(double p);

// Per-stage rates of the K-ary staged scheme; the total telescopes to the
// Shannon entropy of the distribution.
struct RateAllocation {
  std::vector<double> stage_rates;  // K-1 entries, bits/symbol
  double total = 0;
};
RateAllocation kary_rate_allocation(const std::vector<double>& probs);

}  // namespace subsetsum
