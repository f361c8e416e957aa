#pragma once

#include "bbtf/model.hpp"
#include "bbtf/random.hpp"

#include <cstdint>
#include <vector>

namespace bbtf {

// Thinned draws retained after burn-in, already mapped back to the caller's
// side (lower-boundary fits are negated back).
struct PosteriorDraws {
  std::size_t n = 0; // grid size
  std::size_t m = 0; // retained draws
  std::vector<double> theta; // m x n, row-major
  std::vector<double> sigma2;
  std::vector<double> tau2;   // horseshoe and normal priors
  std::vector<double> gamma2; // Laplace prior
  std::vector<double> rho2;   // shape-constrained fits
  double seconds = 0.0;
  FitConfig config;

  double theta_at(std::size_t draw, std::size_t i) const {
    return theta[draw * n + i];
  }
  std::vector<double> coordinate(std::size_t i) const;
};

struct InverseGammaParams {
  double shape;
  double rate;
};

// Full-conditional parameters, exposed for tests and the validation harness.
InverseGammaParams sigma2_conditional(const ChainState &state,
                                      const ModelDesign &design,
                                      const FitConfig &config);
InverseGammaParams tau2_conditional(const ChainState &state,
                                    const ModelDesign &design,
                                    const FitConfig &config);
InverseGammaParams rho2_conditional(const ChainState &state,
                                    const ModelDesign &design,
                                    const FitConfig &config);

// xi ~ N((eta^2 Omega + A)^{-1} (eta kappa + b), (eta^2 Omega + A)^{-1}) after
// omega_i ~ PG(1, eta xi_i); then theta = xi + y.
void step_theta_pg(ChainState &state, const ModelDesign &design,
                   const FitConfig &config, RngStream &rng);

// One left-to-right pass of exact univariate truncated-normal updates under
// the hard constraint theta >= y.
void step_theta_coordinatewise(ChainState &state, const ModelDesign &design,
                               const FitConfig &config, RngStream &rng);

void step_sigma2(ChainState &state, const ModelDesign &design,
                 const FitConfig &config, RngStream &rng);

void step_horseshoe_hyper(ChainState &state, const ModelDesign &design,
                          const FitConfig &config, RngStream &rng);
void step_laplace_hyper(ChainState &state, const ModelDesign &design,
                        const FitConfig &config, RngStream &rng);
void step_normal_hyper(ChainState &state, const ModelDesign &design,
                       const FitConfig &config, RngStream &rng);
// Dispatches on config.prior.
void step_prior_hyper(ChainState &state, const ModelDesign &design,
                      const FitConfig &config, RngStream &rng);

// v_i and rho^2 of the shape constraint. No-op when unconstrained.
void step_ni_latents(ChainState &state, const ModelDesign &design,
                     const FitConfig &config, RngStream &rng);

enum class ThetaEngine { polya_gamma, coordinatewise };

// Test hooks for the validation harness; a broken sampler must be detected.
struct SweepHooks {
  bool skip_sigma2 = false;
};

// theta, sigma^2, prior hyperparameters, shape latents, in that order.
void gibbs_sweep(ChainState &state, const ModelDesign &design,
                 const FitConfig &config, RngStream &rng,
                 ThetaEngine engine = ThetaEngine::polya_gamma,
                 const SweepHooks &hooks = {});

// Full chain with the soft likelihood and Polya-Gamma theta updates.
PosteriorDraws run_chain(const Dataset &data, const FitConfig &config);
// Full chain with the exact indicator likelihood and coordinate-wise theta.
PosteriorDraws run_chain_coordinatewise(const Dataset &data,
                                        const FitConfig &config);
PosteriorDraws run_chain(const Dataset &data, const FitConfig &config,
                         ThetaEngine engine);

} // namespace bbtf
