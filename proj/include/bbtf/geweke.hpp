#pragma once

#include "bbtf/gibbs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bbtf {

// Joint-distribution ("getting it right") check of the Gibbs transition.
//
// The marginal-conditional simulator draws hyperparameters from their priors,
// theta from its conditional prior (with the shape penalty applied by
// rejection, since exp(-penalty) <= 1) and y from the likelihood. The
// successive-conditional simulator alternates one Gibbs sweep with a redraw
// of y given the current state. Both must produce the same joint law, so any
// wrong full conditional shows up as a KS mismatch on the test statistics.
struct GewekeOptions {
  std::size_t n = 10;
  std::size_t draws = 50000;
  // Gibbs sweeps (each followed by a y redraw) between recorded draws.
  int thin = 5;
  ThetaEngine engine = ThetaEngine::polya_gamma;
  SweepHooks hooks;
};

struct GewekeStatistic {
  std::string name;
  double ks_statistic;
  double pvalue;
  // Effective size of the successive-conditional series used for the p-value.
  double ess;
};

struct GewekeReport {
  std::vector<GewekeStatistic> statistics;
  double seconds = 0.0;

  double min_pvalue() const;
  // Smallest effective size over the statistics. A p-value backed by only a
  // few effective draws has no power and should not count as a pass.
  double min_ess() const;
};

// Hyperparameters used by the harness: proper and light enough in the tails
// that the successive-conditional chain mixes within the draw budget.
Hyperparameters geweke_hyperparameters();

// One marginal-conditional draw: fills theta, sigma2 and the prior-specific
// scales of `state`, and returns the simulated responses.
std::vector<double> simulate_joint_prior(ChainState &state,
                                         const ModelDesign &design,
                                         const FitConfig &config,
                                         ThetaEngine engine, RngStream &rng);

// Redraws y given theta and sigma2 under the engine's likelihood: the soft
// truncated law for Polya-Gamma sweeps, the exact half-normal otherwise.
std::vector<double> simulate_responses(const ChainState &state,
                                       const FitConfig &config,
                                       ThetaEngine engine, RngStream &rng);

// Runs both simulators and returns one KS p-value per statistic, with the
// successive-conditional sample counted at its effective sample size:
// mean(theta), theta_1, sigma^2, tau^2 or gamma^2, and rho^2 when constrained.
// n must not exceed 15.
GewekeReport geweke_test(const FitConfig &config, const GewekeOptions &options);

} // namespace bbtf
