#pragma once

#include "bbtf/gibbs.hpp"

#include <span>
#include <string>
#include <vector>

namespace bbtf {

struct PosteriorSummary {
  double level = 0.95;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  // NaN where a coordinate's draws are constant.
  std::vector<double> ess;
};

struct MetricReport {
  double rmse = 0.0;
  double al = 0.0; // average credible-interval length
  double cp = 0.0; // fraction of truth values inside their interval
  int replications = 1;
  std::string scenario;
  std::string noise;
};

// Quantile with linear interpolation between order statistics:
// position (m - 1) p in the sorted sample.
double empirical_quantile(std::span<const double> sorted, double p);

// Pointwise mean and the central `level` credible interval. Requires m >= 2.
PosteriorSummary summarize(const PosteriorDraws &draws, double level = 0.95);

MetricReport compute_metrics(const PosteriorSummary &summary,
                             std::span<const double> truth);

// m / (1 + 2 sum_t rho_t), with the autocorrelation sum truncated by the
// initial monotone positive-pair-sum rule. Throws DomainError on constant
// input or fewer than 10 values.
double effective_sample_size(std::span<const double> series);

// Sample autocorrelations at lags 0..max_lag (clamped to m - 1).
std::vector<double> autocorrelation(std::span<const double> series,
                                    std::size_t max_lag);

// Monte Carlo standard error of the mean of a correlated series.
double mcse_mean(std::span<const double> series);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
double ks_statistic(std::span<const double> a, std::span<const double> b);
double ks_pvalue(double statistic, std::size_t n1, std::size_t n2);

struct KsResult {
  double statistic;
  double pvalue;
};
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

} // namespace bbtf
