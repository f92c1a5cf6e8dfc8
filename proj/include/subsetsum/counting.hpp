#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "subsetsum/instance.hpp"

namespace subsetsum {

// Exact table of Lambda_s^n = #{alpha in {1..L}^n : sum alpha_i = s} for
// s in [n, nL], as arbitrary-precision integers.
struct CountTable {
  std::int64_t n = 0;
  std::int64_t level = 0;
  std::vector<mpz_class> counts;  // index s - n

  const mpz_class& at(std::int64_t s) const;
  // Zero outside the feasible range [n, nL].
  mpz_class value_or_zero(std::int64_t s) const;
  std::int64_t s_min() const { return n; }
  std::int64_t s_max() const { return n * level; }
  mpz_class total() const;
};

// Dynamic program with the sliding-window recurrence; guard n*n*L <= 1e8.
CountTable lambda_table(std::int64_t n, std::int64_t L);

// Alternating-sign bounded-composition count:
//   Lambda_s^n = sum_j (-1)^j C(n,j) C(s - jL - 1, n - 1).
// Independent of the DP route; single values at any L.
mpz_class lambda_inclusion_exclusion(std::int64_t n, std::int64_t L, std::int64_t s);

// Volume of {a <= sum y_i <= b} inside [0,1]^m via the uniform-sum CDF.
double slab_volume(int m, double a, double b);

// Voronoi-padded slab bounds on Lambda at s = round(zeta * n * L).
struct SlabBoundsReport {
  bool all_hold = true;
  double worst_log_ratio = 0.0;  // max |ln(Lambda / (L^{n-1} * slab))| seen
  double worst_zeta = 0.0;
  std::vector<std::string> lines;
};
SlabBoundsReport lattice_volume_bounds_check(std::int64_t n, std::int64_t L,
                                             std::span<const double> zetas);

// Exact expected solution counts, held as rationals.
struct ExpectedOmega {
  mpq_class exact;
  std::string scheme;  // "constrained" | "unconstrained"
  std::int64_t n = 0, n_plus = 0, n_minus = 0, level = 0;
  double p = 0.0;
  double value() const { return exact.get_d(); }
};

// 1 + sum_n C(N+,n) C(N-,n) L^{-2n} sum_s (Lambda_s^n)^2, with the inner sum
// collapsed to the single value Lambda_{n(L+1)}^{2n}.
ExpectedOmega expected_omega_constrained(std::int64_t n_plus, std::int64_t n_minus,
                                         std::int64_t L);

// 1 + sum_k C(N,k) L^{-k} sum_r C(k,r) p^r q^{k-r} * Lambda_{r(L+1)}^k, the
// source-averaged count for the unconstrained scheme. p is taken at its exact
// binary-float value.
ExpectedOmega expected_omega_unconstrained(std::int64_t n, double p, std::int64_t L);

// Exact number of sequences sharing seq's composition and subset sum.
// Guard: C(N, N_+) <= 1e8. The default entry point may parallelize; the
// serial variant is the reference both must match.
std::int64_t brute_force_omega_constrained(const WeightSet& weights,
                                           const SourceSequence& seq);
std::int64_t brute_force_omega_constrained_serial(const WeightSet& weights,
                                                  const SourceSequence& seq);

// Exact number of sign vectors with the same subset sum; guard 2^N <= 2^26.
std::int64_t brute_force_omega_unconstrained(const WeightSet& weights,
                                             const SourceSequence& seq);
std::int64_t brute_force_omega_unconstrained_serial(const WeightSet& weights,
                                                    const SourceSequence& seq);

// Integrand-modulus dominance on the vertical contour: verifies
//   (1-e^{-r})^2 / r^2 >= (1 + e^{-2r} - 2 e^{-r} cos w) / (r^2 + w^2)
// on a grid, strict except at w = 0.
struct DominanceReport {
  double r = 0.0;
  bool ok = true;
  double gap_at_zero = 0.0;     // |lhs - rhs| at the grid point w = 0, if any
  double min_positive_gap = 0.0;
  double argmin_omega = 0.0;
};
DominanceReport saddle_dominance_check(double r, std::span<const double> omegas);

}  // namespace subsetsum
