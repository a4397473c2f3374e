#include "cgaedit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "cgaedit/errors.hpp"

namespace cgaedit::stats {

namespace {

const boost::math::normal_distribution<double> kStandardNormal(0.0, 1.0);

// log(k!) as a running sum of logs.
double log_factorial(std::int64_t k) {
  static thread_local std::vector<double> table{0.0};
  while (static_cast<std::int64_t>(table.size()) <= k)
    table.push_back(table.back() + std::log(static_cast<double>(table.size())));
  return table[static_cast<std::size_t>(k)];
}

double log_choose(std::int64_t n, std::int64_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double z_for(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw StatsError("confidence must lie in (0, 1)");
  return normal_quantile(0.5 + confidence / 2.0);
}

void check_rate(double p) {
  if (!(p > 0.0 && p < 1.0)) throw StatsError("rates must lie strictly between 0 and 1");
}

}  // namespace

void validate(const ContingencySummary &c) {
  if (c.n_a <= 0 || c.n_b <= 0) throw StatsError("arm sizes must be positive");
  if (c.successes_a < 0 || c.successes_b < 0 || c.successes_a > c.n_a || c.successes_b > c.n_b)
    throw StatsError("successes must lie in [0, n]");
}

double normal_cdf(double z) { return boost::math::cdf(kStandardNormal, z); }

double normal_quantile(double p) { return boost::math::quantile(kStandardNormal, p); }

Interval wilson_ci(std::int64_t successes, std::int64_t n, double confidence) {
  if (n <= 0) throw StatsError("Wilson interval needs n > 0");
  if (successes < 0 || successes > n) throw StatsError("successes must lie in [0, n]");
  const double z = z_for(confidence);
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) ci.lo = 0.0;
  if (successes == n) ci.hi = 1.0;
  return ci;
}

double hypergeometric_pmf(std::int64_t a, const ContingencySummary &m) {
  const std::int64_t k = m.successes_a + m.successes_b;
  const std::int64_t n = m.n_a + m.n_b;
  if (a < 0 || a > m.n_a || k - a < 0 || k - a > m.n_b) return 0.0;
  return std::exp(log_choose(m.n_a, a) + log_choose(m.n_b, k - a) - log_choose(n, k));
}

double fisher_exact_two_sided(const ContingencySummary &c) {
  validate(c);
  const std::int64_t k = c.successes_a + c.successes_b;
  const std::int64_t lo = std::max<std::int64_t>(0, k - c.n_b);
  const std::int64_t hi = std::min(c.n_a, k);
  const double observed = hypergeometric_pmf(c.successes_a, c);
  const double cutoff = observed * (1.0 + 1e-7);
  double p = 0.0;
  for (std::int64_t a = lo; a <= hi; ++a) {
    const double pa = hypergeometric_pmf(a, c);
    if (pa <= cutoff) p += pa;
  }
  return std::min(1.0, p);
}

ZTest two_prop_ztest(const ContingencySummary &c, double confidence) {
  validate(c);
  const double na = static_cast<double>(c.n_a);
  const double nb = static_cast<double>(c.n_b);
  const double pa = static_cast<double>(c.successes_a) / na;
  const double pb = static_cast<double>(c.successes_b) / nb;
  const double pooled = static_cast<double>(c.successes_a + c.successes_b) / (na + nb);
  const double se0 = std::sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb));
  if (se0 == 0.0) throw StatsError("z undefined: both arms are all-success or all-failure");
  ZTest t;
  t.z = (pa - pb) / se0;
  t.p_two_sided = std::min(1.0, 2.0 * normal_cdf(-std::abs(t.z)));
  t.diff_pp = 100.0 * (pa - pb);
  const double se1 = std::sqrt(pa * (1.0 - pa) / na + pb * (1.0 - pb) / nb);
  const double zc = z_for(confidence);
  t.ci_pp = {100.0 * (pa - pb - zc * se1), 100.0 * (pa - pb + zc * se1)};
  return t;
}

EffectSizes effect_sizes(const ContingencySummary &c, const EffectSizeOptions &options) {
  validate(c);
  const double zc = z_for(options.confidence);
  const double a = static_cast<double>(c.successes_a);
  const double b = static_cast<double>(c.n_a - c.successes_a);
  const double cc = static_cast<double>(c.successes_b);
  const double d = static_cast<double>(c.n_b - c.successes_b);
  const double na = static_cast<double>(c.n_a);
  const double nb = static_cast<double>(c.n_b);
  const double pa = a / na;
  const double pb = cc / nb;

  EffectSizes e;
  e.risk_diff_pp = 100.0 * (pa - pb);
  const double se_rd = std::sqrt(pa * (1.0 - pa) / na + pb * (1.0 - pb) / nb);
  e.risk_diff_ci_pp = {e.risk_diff_pp - 100.0 * zc * se_rd, e.risk_diff_pp + 100.0 * zc * se_rd};

  const bool zero_cell = a == 0 || b == 0 || cc == 0 || d == 0;
  const double rr_shift = (zero_cell || options.always_correct_relative_risk) ? 0.5 : 0.0;
  const double ra = a + rr_shift;
  const double rc = cc + rr_shift;
  const double rna = na + 2.0 * rr_shift;
  const double rnb = nb + 2.0 * rr_shift;
  e.relative_risk = (ra / rna) / (rc / rnb);
  const double se_log_rr = std::sqrt(std::max(0.0, 1.0 / ra - 1.0 / rna + 1.0 / rc - 1.0 / rnb));
  e.relative_risk_ci = {e.relative_risk * std::exp(-zc * se_log_rr), e.relative_risk * std::exp(zc * se_log_rr)};

  e.odds_ratio = ((a + 0.5) * (d + 0.5)) / ((b + 0.5) * (cc + 0.5));
  e.p_fisher = fisher_exact_two_sided(c);
  return e;
}

double achieved_power(double p1, double p2, double alpha, std::int64_t n) {
  check_rate(p1);
  check_rate(p2);
  if (p1 == p2) throw StatsError("power undefined for equal rates");
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatsError("alpha must lie in (0, 1)");
  if (n <= 0) throw StatsError("n must be positive");
  const double nn = static_cast<double>(n);
  const double za = normal_quantile(1.0 - alpha / 2.0);
  const double pbar = (p1 + p2) / 2.0;
  const double se0 = std::sqrt(2.0 * pbar * (1.0 - pbar) / nn);
  const double se1 = std::sqrt((p1 * (1.0 - p1) + p2 * (1.0 - p2)) / nn);
  const double delta = std::abs(p1 - p2);
  return normal_cdf((delta - za * se0) / se1) + normal_cdf((-delta - za * se0) / se1);
}

std::int64_t power_two_prop(double p1, double p2, double alpha, double target_power) {
  check_rate(p1);
  check_rate(p2);
  if (p1 == p2) throw StatsError("sample size undefined for equal rates");
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatsError("alpha must lie in (0, 1)");
  if (!(target_power > 0.0 && target_power < 1.0)) throw StatsError("power must lie in (0, 1)");
  const double za = normal_quantile(1.0 - alpha / 2.0);
  const double zb = normal_quantile(target_power);
  const double pbar = (p1 + p2) / 2.0;
  const double num = za * std::sqrt(2.0 * pbar * (1.0 - pbar)) + zb * std::sqrt(p1 * (1.0 - p1) + p2 * (1.0 - p2));
  const double n = std::pow(num / (p1 - p2), 2.0);
  return static_cast<std::int64_t>(std::ceil(n - 1e-9));
}

double sign_test(std::int64_t wins_a, std::int64_t wins_b) {
  if (wins_a < 0 || wins_b < 0) throw StatsError("win counts must be non-negative");
  const std::int64_t n = wins_a + wins_b;
  if (n == 0) return 1.0;
  const std::int64_t k = std::min(wins_a, wins_b);
  double tail = 0.0;
  for (std::int64_t i = 0; i <= k; ++i) tail += std::exp(log_choose(n, i) - static_cast<double>(n) * std::log(2.0));
  return std::min(1.0, 2.0 * tail);
}

}  // namespace cgaedit::stats
