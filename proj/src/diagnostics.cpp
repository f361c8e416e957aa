#include "bbtf/diagnostics.hpp"

#include "bbtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bbtf {

double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty())
    throw DimensionError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError("quantile level must lie in [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

PosteriorSummary summarize(const PosteriorDraws &draws, double level) {
  if (draws.m < 2)
    throw DimensionError("summarize needs at least two retained draws");
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("credible level must lie in (0, 1)");
  PosteriorSummary s;
  s.level = level;
  s.mean.resize(draws.n);
  s.lower.resize(draws.n);
  s.upper.resize(draws.n);
  s.ess.resize(draws.n);
  const double tail = 0.5 * (1.0 - level);
  for (std::size_t i = 0; i < draws.n; ++i) {
    std::vector<double> col = draws.coordinate(i);
    s.mean[i] = std::accumulate(col.begin(), col.end(), 0.0) /
                static_cast<double>(col.size());
    try {
      s.ess[i] = effective_sample_size(col);
    } catch (const DomainError &) {
      s.ess[i] = std::numeric_limits<double>::quiet_NaN();
    } catch (const DimensionError &) {
      s.ess[i] = std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(col.begin(), col.end());
    s.lower[i] = empirical_quantile(col, tail);
    s.upper[i] = empirical_quantile(col, 1.0 - tail);
  }
  return s;
}

MetricReport compute_metrics(const PosteriorSummary &summary,
                             std::span<const double> truth) {
  const std::size_t n = truth.size();
  if (summary.mean.size() != n || n == 0)
    throw DimensionError("summary and truth lengths differ");
  double se = 0.0, len = 0.0, hit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = truth[i] - summary.mean[i];
    se += d * d;
    len += summary.upper[i] - summary.lower[i];
    if (summary.lower[i] <= truth[i] && truth[i] <= summary.upper[i])
      hit += 1.0;
  }
  const double dn = static_cast<double>(n);
  MetricReport r;
  r.rmse = std::sqrt(se / dn);
  r.al = len / dn;
  r.cp = hit / dn;
  return r;
}

double effective_sample_size(std::span<const double> series) {
  const std::size_t m = series.size();
  if (m < 10)
    throw DomainError("ESS needs at least 10 values");
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(m);
  std::vector<double> c(series.size());
  for (std::size_t i = 0; i < m; ++i)
    c[i] = series[i] - mean;
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < m; ++i)
      s += c[i] * c[i + lag];
    return s / static_cast<double>(m);
  };
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (*lo == *hi)
    throw DomainError("ESS undefined for a constant series");
  const double gamma0 = autocov(0);

  // Pair sums Gamma_j = rho_{2j} + rho_{2j+1}; keep them while positive and
  // force them non-increasing.
  double tau = -1.0; // tau = -1 + 2 sum_j Gamma_j  ==  1 + 2 sum_{t>=1} rho_t
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; 2 * j + 1 < m; ++j) {
    const double rho_even = j == 0 ? 1.0 : autocov(2 * j) / gamma0;
    const double rho_odd = autocov(2 * j + 1) / gamma0;
    double pair = rho_even + rho_odd;
    if (pair <= 0.0)
      break;
    pair = std::min(pair, prev);
    prev = pair;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1.0 / static_cast<double>(m));
  return static_cast<double>(m) / tau;
}

std::vector<double> autocorrelation(std::span<const double> series,
                                    std::size_t max_lag) {
  const std::size_t m = series.size();
  if (m < 2)
    throw DimensionError("autocorrelation needs at least two values");
  max_lag = std::min(max_lag, m - 1);
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(m);
  std::vector<double> acf(max_lag + 1, 0.0);
  double c0 = 0.0;
  for (double x : series)
    c0 += (x - mean) * (x - mean);
  if (!(c0 > 0.0))
    throw DomainError("autocorrelation undefined for a constant series");
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < m; ++i)
      s += (series[i] - mean) * (series[i + lag] - mean);
    acf[lag] = s / c0;
  }
  return acf;
}

double mcse_mean(std::span<const double> series) {
  const std::size_t m = series.size();
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(m);
  double var = 0.0;
  for (double x : series)
    var += (x - mean) * (x - mean);
  var /= static_cast<double>(m - 1);
  return std::sqrt(var / effective_sample_size(series));
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw DimensionError("KS test needs non-empty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v)
      ++i;
    while (j < y.size() && y[j] == v)
      ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

double ks_pvalue(double statistic, std::size_t n1, std::size_t n2) {
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                    static_cast<double>(n1 + n2);
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * statistic;
  if (lambda < 0.2)
    return 1.0;
  // Kolmogorov survival function 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::fabs(sum))
      break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  const double d = ks_statistic(a, b);
  return {d, ks_pvalue(d, a.size(), b.size())};
}

} // namespace bbtf
