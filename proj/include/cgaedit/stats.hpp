#pragma once

#include <cstdint>
#include <utility>

#include "cgaedit/errors.hpp"

namespace cgaedit::stats {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Arm A: successes_a of n_a; arm B: successes_b of n_b.
struct ContingencySummary {
  std::int64_t successes_a = 0;
  std::int64_t n_a = 0;
  std::int64_t successes_b = 0;
  std::int64_t n_b = 0;
};

// Throws StatsError unless 0 <= successes <= n and n > 0 in both arms.
void validate(const ContingencySummary &c);

double normal_cdf(double z);
double normal_quantile(double p);

// Wilson score interval. Throws StatsError when n == 0 or successes > n.
Interval wilson_ci(std::int64_t successes, std::int64_t n, double confidence = 0.95);

// Two-sided Fisher exact p: total probability of every table with the same
// margins whose point probability does not exceed the observed one.
double fisher_exact_two_sided(const ContingencySummary &c);

// Point probability of the table with `a` successes in arm A under fixed
// margins.
double hypergeometric_pmf(std::int64_t a, const ContingencySummary &margins);

struct ZTest {
  double z = 0.0;
  double p_two_sided = 1.0;
  double diff_pp = 0.0;
  Interval ci_pp;
};

// z from the pooled standard error, CI from the unpooled one. Throws
// StatsError when both arms are all-success or all-failure.
ZTest two_prop_ztest(const ContingencySummary &c, double confidence = 0.95);

struct EffectSizes {
  double risk_diff_pp = 0.0;
  Interval risk_diff_ci_pp;
  double relative_risk = 1.0;
  Interval relative_risk_ci;
  double odds_ratio = 1.0;
  double p_fisher = 1.0;
};

struct EffectSizeOptions {
  double confidence = 0.95;
  // Add 0.5 to every cell before the relative risk even without zero cells.
  bool always_correct_relative_risk = false;
};

// Wald risk difference, log-scale relative risk (0.5 added to every cell when
// any cell is zero), odds ratio with 0.5 added to every cell.
EffectSizes effect_sizes(const ContingencySummary &c, const EffectSizeOptions &options = {});

// Normal approximation with pooled variance under the null and unpooled
// variance under the alternative. Throws StatsError on invalid rates.
double achieved_power(double p1, double p2, double alpha, std::int64_t n_per_arm);
std::int64_t power_two_prop(double p1, double p2, double alpha, double target_power);

// Paired sign test: ties dropped, exact two-sided binomial on the rest.
double sign_test(std::int64_t wins_a, std::int64_t wins_b);

}  // namespace cgaedit::stats
