#include "subsetsum/verify.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>

#include "subsetsum/counting.hpp"
#include "subsetsum/experiments.hpp"
#include "subsetsum/ratefuncs.hpp"

namespace subsetsum {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

double ln_of_mpz(const mpz_class& v) {
  signed long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

}  // namespace

SuiteReport verify_lambda() {
  SuiteReport report{"lambda", {}};
  constexpr std::int64_t kMaxN = 12, kMaxL = 64;
  bool equal = true, sums = true, reflect = true;
#pragma omp parallel for collapse(2) schedule(dynamic) \
    reduction(&& : equal, sums, reflect)
  for (std::int64_t n = 1; n <= kMaxN; ++n) {
    for (std::int64_t L = 1; L <= kMaxL; ++L) {
      const CountTable table = lambda_table(n, L);
      mpz_class total = 0;
      for (std::int64_t s = n; s <= n * L; ++s) {
        const mpz_class& dp = table.at(s);
        total += dp;
        if (dp != lambda_inclusion_exclusion(n, L, s)) equal = false;
        if (dp != table.at(n * (L + 1) - s)) reflect = false;
      }
      mpz_class pow_ln;
      mpz_ui_pow_ui(pow_ln.get_mpz_t(), static_cast<unsigned long>(L),
                    static_cast<unsigned long>(n));
      if (total != pow_ln) sums = false;
    }
  }
  report.lines.push_back({"dp == inclusion-exclusion on all (n<=12, L<=64, s)", equal,
                          equal ? "exact integer equality" : "mismatch found"});
  report.lines.push_back({"sum_s Lambda = L^n", sums, ""});
  report.lines.push_back({"Lambda_s = Lambda_{n(L+1)-s}", reflect, ""});
  return report;
}

SuiteReport verify_appendix_a() {
  SuiteReport report{"appendixA", {}};
  {
    std::vector<double> zetas;
    for (double z = 0.2; z < 0.8001; z += 0.1) zetas.push_back(z);
    const auto rep = lattice_volume_bounds_check(4, 50, zetas);
    report.lines.push_back({"slab bounds hold at n=4, L=50", rep.all_hold,
                            fmt("worst |log ratio| %.3g at zeta %.2f",
                                std::abs(rep.worst_log_ratio), rep.worst_zeta)});
  }
  {
    const std::vector<double> zetas{0.5};
    const auto rep = lattice_volume_bounds_check(2, 1000, zetas);
    const double ratio = std::exp(rep.worst_log_ratio);
    const bool tight = rep.all_hold && ratio >= 0.99 && ratio <= 1.01;
    report.lines.push_back(
        {"high-L ratio within 1% at n=2, L=1000", tight, fmt("ratio %.6f", ratio)});
  }
  {
    const std::vector<double> zetas{0.3, 0.7};
    const auto rep = lattice_volume_bounds_check(1, 100, zetas);
    report.lines.push_back({"n=1 degenerate case trivially holds", rep.all_hold, ""});
  }
  return report;
}

SuiteReport verify_appendix_b() {
  SuiteReport report{"appendixB", {}};
  constexpr double kPi = 3.14159265358979323846;
  std::vector<double> omegas;
  const int points = 10001;  // odd count so omega = 0 lands exactly on the grid
  const double step = 2.0 * kPi / (points - 1);
  omegas.reserve(points);
  for (int i = 0; i < points; ++i)
    omegas.push_back(static_cast<double>(i - (points - 1) / 2) * step);
  for (double r : {0.01, 0.1, 1.0, 10.0}) {
    const auto rep = saddle_dominance_check(r, omegas);
    report.lines.push_back(
        {fmt("dominance at r=%g", r), rep.ok,
         fmt("gap(0)=%.3g, min gap %.3g at omega=%.4g", rep.gap_at_zero,
             rep.min_positive_gap, rep.argmin_omega)});
  }
  return report;
}

SuiteReport verify_omega(std::uint64_t seed) {
  SuiteReport report{"omega", {}};
  {
    const auto closed = expected_omega_constrained(1, 1, 1);
    report.lines.push_back({"<Omega>(N+=N-=1, L=1) == 2 exactly",
                            closed.exact == mpq_class(2),
                            closed.exact.get_str()});
    const auto closed2 = expected_omega_constrained(1, 1, 2);
    report.lines.push_back({"<Omega>(N+=N-=1, L=2) == 3/2 exactly",
                            closed2.exact == mpq_class(3, 2),
                            closed2.exact.get_str()});
  }
  std::uint64_t salt = 0;
  for (std::int64_t L : {4, 16, 64}) {
    const auto exact = expected_omega_constrained(4, 4, L);
    const auto [mean, se] =
        estimate_expected_omega_level(Scheme::Constrained, 8, 0.5, L, 100000, seed + salt++);
    const double diff = std::abs(mean - exact.value());
    const bool ok = diff <= 4.0 * se;
    report.lines.push_back(
        {fmt("constrained exact vs MC at N=8, L=%g", static_cast<double>(L)), ok,
         fmt("exact %.6f, mc %.6f +- %.2g", exact.value(), mean, se)});
  }
  {
    const auto exact = expected_omega_unconstrained(6, 0.5, 8);
    const auto [mean, se] =
        estimate_expected_omega_level(Scheme::Unconstrained, 6, 0.5, 8, 100000, seed + 17);
    const bool ok = std::abs(mean - exact.value()) <= 4.0 * se;
    report.lines.push_back({"unconstrained exact vs MC at N=6, L=8", ok,
                            fmt("exact %.6f, mc %.6f +- %.2g", exact.value(), mean, se)});
  }
  return report;
}

SuiteReport verify_ratefuncs() {
  SuiteReport report{"ratefuncs", {}};
  {
    const double rc = critical_rate_unconstrained(0.5);
    report.lines.push_back({"R_c(1/2) = 1", std::abs(rc - 1.0) < 1e-6, fmt("%.9f", rc)});
  }
  {
    bool ok = std::isinf(critical_rate_unconstrained(0.0)) &&
              critical_rate_unconstrained(0.0) < 0 &&
              std::isinf(critical_rate_unconstrained(1.0)) &&
              critical_rate_unconstrained(1.0) < 0;
    report.lines.push_back({"R_c(0) = R_c(1) = -inf", ok, ""});
  }
  {
    bool band = true, symmetric = true;
    double worst_sym = 0.0;
    for (int k = 1; k <= 9; ++k) {
      const double p = 0.1 * k;
      const double rc = critical_rate_unconstrained(p);
      if (!(rc >= binary_entropy(p) - 1e-9 && rc < 1.0 + 1e-12)) band = false;
      const double gap = std::abs(rc - critical_rate_unconstrained(1.0 - p));
      worst_sym = std::max(worst_sym, gap);
      if (gap > 1e-8) symmetric = false;
    }
    report.lines.push_back({"h(p) <= R_c(p) <= 1 on p = 0.1..0.9", band, ""});
    report.lines.push_back(
        {"R_c symmetric in p <-> 1-p", symmetric, fmt("worst gap %.3g", worst_sym)});
  }
  {
    bool ok = true;
    double worst = 0.0;
    for (int k = 1; k <= 9; ++k) {
      const double p = 0.1 * k;
      const double gap = std::abs(composition_growth_exponent(p) - binary_entropy(p));
      worst = std::max(worst, gap);
      if (gap > 1e-8) ok = false;
    }
    report.lines.push_back(
        {"sup_alpha [p h(a/p) + q h(a/q)] = h(p)", ok, fmt("worst gap %.3g", worst)});
  }
  {
    // Legendre-Fenchel route: sup_s [s z - ln((e^s - 1)/s)] over all real s.
    auto legendre = [](double z) {
      auto cgf = [](double s) {  // ln((e^s - 1)/s), valid for either sign
        const double as = std::abs(s);
        if (as < 1e-8) return s / 2.0;
        return std::log(std::abs(std::expm1(s)) / as);
      };
      double lo = -300.0, hi = 300.0;
      auto objective = [&](double s) { return s * z - cgf(s); };
      while (hi - lo > 1e-10) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) >= objective(m2))
          hi = m2;
        else
          lo = m1;
      }
      return objective(0.5 * (lo + hi));
    };
    bool ok = true;
    double worst = 0.0;
    for (double z = 0.05; z < 0.951; z += 0.05) {
      const double gap = std::abs(phi(z).phi_value - legendre(z));
      worst = std::max(worst, gap);
      if (gap > 1e-8) ok = false;
    }
    report.lines.push_back(
        {"Phi matches the Legendre transform route", ok, fmt("worst gap %.3g", worst)});
  }
  {
    // Lambda-based route: Phi(zeta) ~ (1/n) ln(L^{n-1} / Lambda_s^n).
    const std::int64_t L = 64, n = 40;
    bool ok = true;
    for (double zeta : {0.25, 0.4, 0.5}) {
      const std::int64_t s = std::llround(zeta * static_cast<double>(n * L));
      const double lhs = (static_cast<double>(n - 1) * std::log(static_cast<double>(L)) -
                          ln_of_mpz(lambda_inclusion_exclusion(n, L, s))) /
                         static_cast<double>(n);
      if (std::abs(lhs - phi(zeta).phi_value) > 2.0 * std::log(static_cast<double>(n)) /
                                                    static_cast<double>(n))
        ok = false;
    }
    report.lines.push_back({"Phi matches the exact-count route at n=40, L=64", ok, ""});
  }
  return report;
}

std::vector<SuiteReport> verify_all(std::uint64_t seed) {
  return {verify_lambda(), verify_appendix_a(), verify_appendix_b(), verify_omega(seed),
          verify_ratefuncs()};
}

}  // namespace subsetsum
