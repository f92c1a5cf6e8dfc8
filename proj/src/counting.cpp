#include "subsetsum/counting.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "enumeration.hpp"

namespace subsetsum {

namespace {

mpz_class mpz_binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

const mpz_class& CountTable::at(std::int64_t s) const {
  if (s < s_min() || s > s_max())
    throw std::out_of_range("CountTable::at: s outside [n, nL]");
  return counts[static_cast<std::size_t>(s - n)];
}

mpz_class CountTable::value_or_zero(std::int64_t s) const {
  if (s < s_min() || s > s_max()) return 0;
  return counts[static_cast<std::size_t>(s - n)];
}

mpz_class CountTable::total() const {
  mpz_class t = 0;
  for (const auto& c : counts) t += c;
  return t;
}

CountTable lambda_table(std::int64_t n, std::int64_t L) {
  if (n < 1 || L < 1) throw std::invalid_argument("lambda_table needs n,L >= 1");
  if (n * n * L > 100'000'000)
    throw std::length_error("lambda_table: n*n*L exceeds the 1e8-cell guard");

  // Row m holds Lambda_s^m for s in [m, mL]. Sliding-window recurrence:
  // Lambda_s^m = Lambda_{s-1}^m + Lambda_{s-1}^{m-1} - Lambda_{s-L-1}^{m-1}.
  std::vector<mpz_class> prev(static_cast<std::size_t>(L), 1);  // m = 1
  for (std::int64_t m = 2; m <= n; ++m) {
    const std::int64_t width = m * (L - 1) + 1;
    std::vector<mpz_class> cur(static_cast<std::size_t>(width));
    const std::int64_t prev_min = m - 1, prev_max = (m - 1) * L;
    auto prev_at = [&](std::int64_t s) -> const mpz_class& {
      static const mpz_class zero = 0;
      if (s < prev_min || s > prev_max) return zero;
      return prev[static_cast<std::size_t>(s - prev_min)];
    };
    cur[0] = 1;  // s = m: all parts equal 1
    for (std::int64_t s = m + 1; s <= m * L; ++s) {
      cur[static_cast<std::size_t>(s - m)] = cur[static_cast<std::size_t>(s - m - 1)] +
                                             prev_at(s - 1) - prev_at(s - L - 1);
    }
    prev = std::move(cur);
  }

  CountTable table;
  table.n = n;
  table.level = L;
  table.counts = std::move(prev);
  return table;
}

mpz_class lambda_inclusion_exclusion(std::int64_t n, std::int64_t L, std::int64_t s) {
  if (n < 1 || L < 1) throw std::invalid_argument("lambda needs n,L >= 1");
  if (s < n || s > n * L)
    throw std::out_of_range("lambda_inclusion_exclusion: s outside [n, nL]");
  mpz_class acc = 0;
  for (std::int64_t j = 0; ; ++j) {
    const std::int64_t top = s - j * L - 1;
    if (j > n || top < n - 1) break;
    mpz_class term = mpz_binomial(static_cast<unsigned long>(n),
                                  static_cast<unsigned long>(j)) *
                     mpz_binomial(static_cast<unsigned long>(top),
                                  static_cast<unsigned long>(n - 1));
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

double slab_volume(int m, double a, double b) {
  if (m < 1) throw std::invalid_argument("slab_volume needs m >= 1");
  if (a > b) throw std::invalid_argument("slab_volume needs a <= b");
  const double md = static_cast<double>(m);
  auto cdf = [&](double x) -> double {
    if (x <= 0.0) return 0.0;
    if (x >= md) return 1.0;
    // Irwin-Hall CDF: (1/m!) sum_j (-1)^j C(m,j) (x-j)^m.
    long double acc = 0.0L;
    long double binom = 1.0L;  // C(m, j)
    for (int j = 0; j <= static_cast<int>(x); ++j) {
      long double term = binom * std::pow(static_cast<long double>(x - j),
                                          static_cast<long double>(m));
      acc += (j % 2 == 0) ? term : -term;
      binom = binom * (m - j) / (j + 1);
    }
    for (int j = 2; j <= m; ++j) acc /= j;
    return std::clamp(static_cast<double>(acc), 0.0, 1.0);
  };
  return std::clamp(cdf(b) - cdf(a), 0.0, 1.0);
}

SlabBoundsReport lattice_volume_bounds_check(std::int64_t n, std::int64_t L,
                                             std::span<const double> zetas) {
  SlabBoundsReport report;
  if (n == 1) {
    report.lines.push_back("n=1: degenerate lattice, bounds trivial");
    return report;
  }
  const double cells = std::pow(static_cast<double>(L), static_cast<double>(n - 1));
  for (double zeta : zetas) {
    const std::int64_t s =
        std::llround(zeta * static_cast<double>(n) * static_cast<double>(L));
    if (s < n || s > n * L) continue;
    const mpz_class lam = lambda_inclusion_exclusion(n, L, s);
    const double lam_d = lam.get_d();
    const double nz = static_cast<double>(s) / static_cast<double>(L);
    const double pad = static_cast<double>(n) / static_cast<double>(L);

    const double upper = cells * slab_volume(static_cast<int>(n - 1),
                                             nz - 1.0 - pad, nz + pad);
    double lower = 0.0;
    if (nz - 1.0 + pad <= nz - pad)
      lower = cells * slab_volume(static_cast<int>(n - 1), nz - 1.0 + pad, nz - pad);
    const double estimate = cells * slab_volume(static_cast<int>(n - 1), nz - 1.0, nz);

    const bool ok = lam_d >= lower * (1.0 - 1e-12) && lam_d <= upper * (1.0 + 1e-12);
    report.all_hold = report.all_hold && ok;
    double log_ratio = 0.0;
    if (estimate > 0.0 && lam_d > 0.0) log_ratio = std::log(lam_d / estimate);
    if (std::abs(log_ratio) > std::abs(report.worst_log_ratio)) {
      report.worst_log_ratio = log_ratio;
      report.worst_zeta = zeta;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "zeta=%.4f s=%lld lambda=%.6g bounds=[%.6g, %.6g] %s",
                  zeta, static_cast<long long>(s), lam_d, lower, upper,
                  ok ? "ok" : "VIOLATED");
    report.lines.emplace_back(buf);
  }
  return report;
}

ExpectedOmega expected_omega_constrained(std::int64_t n_plus, std::int64_t n_minus,
                                         std::int64_t L) {
  if (n_plus < 0 || n_minus < 0 || n_plus + n_minus < 1 || L < 1)
    throw std::invalid_argument("expected_omega_constrained: bad parameters");
  const std::int64_t kmax = std::min(n_plus, n_minus);
  if (kmax > 64)
    throw std::length_error("expected_omega_constrained: composition too large");

  // sum_s (Lambda_s^k)^2 counts pairs of equal k-part sums; reflecting the
  // second tuple turns it into the single value Lambda_{k(L+1)}^{2k}.
  mpq_class total = 1;
  const mpz_class level(static_cast<long>(L));
  mpz_class level_sq_pow = 1;  // L^{2k}
  for (std::int64_t k = 1; k <= kmax; ++k) {
    level_sq_pow *= level * level;
    mpz_class pairs = lambda_inclusion_exclusion(2 * k, L, k * (L + 1));
    mpz_class combos = mpz_binomial(static_cast<unsigned long>(n_plus),
                                    static_cast<unsigned long>(k)) *
                       mpz_binomial(static_cast<unsigned long>(n_minus),
                                    static_cast<unsigned long>(k));
    total += mpq_class(combos * pairs, level_sq_pow);
  }
  total.canonicalize();

  ExpectedOmega out;
  out.exact = total;
  out.scheme = "constrained";
  out.n = n_plus + n_minus;
  out.n_plus = n_plus;
  out.n_minus = n_minus;
  out.level = L;
  return out;
}

ExpectedOmega expected_omega_unconstrained(std::int64_t n, double p, std::int64_t L) {
  if (n < 1 || L < 1) throw std::invalid_argument("expected_omega_unconstrained: bad n or L");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0,1]");
  if (n > 64) throw std::length_error("expected_omega_unconstrained: n too large");

  const mpq_class pq(p);      // exact binary-float value
  const mpq_class qq = 1 - pq;
  const mpz_class level(static_cast<long>(L));

  mpq_class total = 1;
  mpz_class level_pow = 1;  // L^k
  for (std::int64_t k = 1; k <= n; ++k) {
    level_pow *= level;
    mpq_class inner = 0;
    for (std::int64_t r = 1; r < k; ++r) {
      // sum_l Lambda_l^r Lambda_l^{k-r} = Lambda_{r(L+1)}^k; empty when the
      // smaller side has no parts (r = 0 or r = k).
      mpz_class pairs = lambda_inclusion_exclusion(k, L, r * (L + 1));
      if (pairs == 0) continue;
      mpq_class pr = 1, qr = 1;
      for (std::int64_t i = 0; i < r; ++i) pr *= pq;
      for (std::int64_t i = 0; i < k - r; ++i) qr *= qq;
      inner += mpq_class(mpz_binomial(static_cast<unsigned long>(k),
                                      static_cast<unsigned long>(r))) *
               pr * qr * mpq_class(pairs);
    }
    total += mpq_class(mpz_binomial(static_cast<unsigned long>(n),
                                    static_cast<unsigned long>(k))) *
             inner / mpq_class(level_pow);
  }
  total.canonicalize();

  ExpectedOmega out;
  out.exact = total;
  out.scheme = "unconstrained";
  out.n = n;
  out.level = L;
  out.p = p;
  return out;
}

namespace {

// Counts size-k index subsets of a with element sum equal to target,
// scanning lexicographic ranks [begin, end).
std::int64_t count_combinations_matching(std::span<const std::int64_t> a, int k,
                                         std::int64_t target, std::uint64_t begin,
                                         std::uint64_t end) {
  const int n = static_cast<int>(a.size());
  if (begin >= end) return 0;
  std::vector<int> c = detail::unrank_combination(n, k, begin);
  std::int64_t hits = 0;
  for (std::uint64_t r = begin; r < end; ++r) {
    std::int64_t sum = 0;
    for (int i : c) sum += a[static_cast<std::size_t>(i)];
    if (sum == target) ++hits;
    if (r + 1 < end) detail::next_combination(c, n);
  }
  return hits;
}

struct ConstrainedTarget {
  std::int64_t subset_sum;  // required sum over the +1 positions
  int k;                    // required cardinality
};

ConstrainedTarget constrained_target(const WeightSet& weights, const SourceSequence& seq) {
  const std::int64_t e = subset_sum_value(seq, weights);
  std::int64_t total = 0;
  for (std::int64_t w : weights.row()) total += w;
  return {(e + total) / 2, static_cast<int>(composition_of(seq).n_plus())};
}

}  // namespace

std::int64_t brute_force_omega_constrained_serial(const WeightSet& weights,
                                                  const SourceSequence& seq) {
  const auto [target, k] = constrained_target(weights, seq);
  const std::uint64_t total = detail::comb_u64(weights.size(), k);
  if (total > 100'000'000ull)
    throw std::length_error("brute_force_omega_constrained: C(N,N+) exceeds 1e8");
  return count_combinations_matching(weights.row(), k, target, 0, total);
}

std::int64_t brute_force_omega_constrained(const WeightSet& weights,
                                           const SourceSequence& seq) {
  const auto [target, k] = constrained_target(weights, seq);
  const std::uint64_t total = detail::comb_u64(weights.size(), k);
  if (total > 100'000'000ull)
    throw std::length_error("brute_force_omega_constrained: C(N,N+) exceeds 1e8");
  if (total < 4096) return count_combinations_matching(weights.row(), k, target, 0, total);

  const int chunks = std::max(1, omp_get_max_threads() * 4);
  const std::uint64_t step = (total + chunks - 1) / chunks;
  std::int64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(dynamic)
  for (int c = 0; c < chunks; ++c) {
    const std::uint64_t begin = step * static_cast<std::uint64_t>(c);
    const std::uint64_t end = std::min(total, begin + step);
    hits += count_combinations_matching(weights.row(), k, target, begin, end);
  }
  return hits;
}

std::int64_t brute_force_omega_unconstrained_serial(const WeightSet& weights,
                                                    const SourceSequence& seq) {
  const std::int64_t n = weights.size();
  if (n > 26) throw std::length_error("brute_force_omega_unconstrained: 2^N exceeds 2^26");
  const auto [target, k_unused] = constrained_target(weights, seq);
  (void)k_unused;
  const auto a = weights.row();
  std::int64_t hits = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < n; ++i)
      if (mask >> i & 1) sum += a[static_cast<std::size_t>(i)];
    if (sum == target) ++hits;
  }
  return hits;
}

std::int64_t brute_force_omega_unconstrained(const WeightSet& weights,
                                             const SourceSequence& seq) {
  const std::int64_t n = weights.size();
  if (n > 26) throw std::length_error("brute_force_omega_unconstrained: 2^N exceeds 2^26");
  if (n <= 14) return brute_force_omega_unconstrained_serial(weights, seq);
  const auto [target, k_unused] = constrained_target(weights, seq);
  (void)k_unused;
  const auto a = weights.row();
  const std::int64_t total = std::int64_t{1} << n;
  std::int64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
  for (std::int64_t mask = 0; mask < total; ++mask) {
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < n; ++i)
      if (static_cast<std::uint64_t>(mask) >> i & 1)
        sum += a[static_cast<std::size_t>(i)];
    if (sum == target) ++hits;
  }
  return hits;
}

DominanceReport saddle_dominance_check(double r, std::span<const double> omegas) {
  if (!(r > 0.0)) throw std::domain_error("saddle_dominance_check needs r > 0");
  DominanceReport report;
  report.r = r;
  const double lhs = std::pow(-std::expm1(-r), 2) / (r * r);
  bool have_positive = false;
  for (double w : omegas) {
    const double rhs =
        (1.0 + std::exp(-2.0 * r) - 2.0 * std::exp(-r) * std::cos(w)) / (r * r + w * w);
    const double gap = lhs - rhs;
    if (w == 0.0) {
      report.gap_at_zero = std::abs(gap);
      if (report.gap_at_zero > 1e-12) report.ok = false;
      continue;
    }
    if (gap <= 0.0) report.ok = false;
    if (!have_positive || gap < report.min_positive_gap) {
      report.min_positive_gap = gap;
      report.argmin_omega = w;
      have_positive = true;
    }
  }
  return report;
}

}  // namespace subsetsum
