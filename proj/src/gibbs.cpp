#include "bbtf/gibbs.hpp"

#include "bbtf/distributions.hpp"
#include "bbtf/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace bbtf {

namespace {

constexpr double kDifferenceFloor = 1e-12;
constexpr double kChiFloor = 1e-12;

double sum_sq(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// sum ((P theta)_i + v_i)^2 / v_i over shape rows
double shape_quadratic(const ChainState &state, const ModelDesign &design) {
  if (!design.shape)
    return 0.0;
  const std::vector<double> pt = design.shape->apply(state.theta);
  double s = 0.0;
  for (std::size_t i = 0; i < pt.size(); ++i) {
    const double r = pt[i] + state.v[i];
    s += r * r / state.v[i];
  }
  return s;
}

// u_i^2 for the unpenalized rows: IG(a_u + 1/2, (D theta)_i^2 / (2 sigma^2) + b_u)
void step_unpenalized_scales(ChainState &state, const ModelDesign &design,
                             const std::vector<double> &dt,
                             const FitConfig &config, RngStream &rng) {
  const auto &h = config.hyper;
  for (std::size_t i = 0; i < design.penalized_begin(); ++i)
    state.u2[i] = sample_inverse_gamma(
        h.a_u + 0.5, dt[i] * dt[i] / (2.0 * state.sigma2) + h.b_u, rng);
}

void sync_xi(ChainState &state, const ModelDesign &design) {
  const auto &y = design.data.y();
  for (std::size_t i = 0; i < y.size(); ++i)
    state.xi[i] = state.theta[i] - y[i];
}

} // namespace

std::vector<double> PosteriorDraws::coordinate(std::size_t i) const {
  std::vector<double> out(m);
  for (std::size_t d = 0; d < m; ++d)
    out[d] = theta[d * n + i];
  return out;
}

InverseGammaParams sigma2_conditional(const ChainState &state,
                                      const ModelDesign &design,
                                      const FitConfig &config) {
  const std::size_t n = design.size();
  const std::vector<double> dt = design.diff.full.apply(state.theta);
  const std::vector<double> scale = prior_scales(state, design, config);
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    quad += dt[i] * dt[i] / scale[i];

  double shape = static_cast<double>(n) + config.hyper.a_sigma;
  double rate =
      0.5 * sum_sq(design.data.y(), state.theta) + 0.5 * quad + config.hyper.b_sigma;
  if (design.shape) {
    shape += 0.5 * static_cast<double>(design.shape->rows());
    rate += shape_quadratic(state, design) / (4.0 * state.rho2);
  }
  return {shape, rate};
}

InverseGammaParams tau2_conditional(const ChainState &state,
                                    const ModelDesign &design,
                                    const FitConfig &config) {
  const std::size_t n = design.size();
  const std::size_t k1 = design.penalized_begin();
  const std::vector<double> dt = design.diff.full.apply(state.theta);
  const double m = static_cast<double>(n - k1);
  double ss = 0.0;
  if (config.prior == PriorKind::horseshoe) {
    for (std::size_t i = k1; i < n; ++i)
      ss += dt[i] * dt[i] / state.u2[i];
    return {0.5 * (m + 1.0), ss / (2.0 * state.sigma2) + 1.0 / state.psi};
  }
  if (config.prior == PriorKind::normal) {
    for (std::size_t i = k1; i < n; ++i)
      ss += dt[i] * dt[i];
    return {config.hyper.a_tau + 0.5 * m,
            ss / (2.0 * state.sigma2) + config.hyper.b_tau};
  }
  throw DomainError("tau^2 is not part of the Laplace prior");
}

InverseGammaParams rho2_conditional(const ChainState &state,
                                    const ModelDesign &design,
                                    const FitConfig &config) {
  if (!design.shape)
    throw DomainError("rho^2 exists only under a shape constraint");
  return {0.5 * static_cast<double>(design.shape->rows()) + config.hyper.a_rho,
          shape_quadratic(state, design) / (4.0 * state.sigma2) +
              config.hyper.b_rho};
}

void step_theta_pg(ChainState &state, const ModelDesign &design,
                   const FitConfig &config, RngStream &rng) {
  const std::size_t n = design.size();
  const double eta = config.eta;
  for (std::size_t i = 0; i < n; ++i)
    state.omega[i] = sample_polya_gamma(eta * state.xi[i], rng);

  PrecisionSystem sys = assemble_precision(state, design, config);
  std::vector<double> tilt(n);
  for (std::size_t i = 0; i < n; ++i) {
    tilt[i] = eta * eta * state.omega[i];
    sys.b[i] += 0.5 * eta; // eta * kappa_i, kappa_i = 1/2
  }
  sys.a.add_diagonal(tilt);
  state.xi = sample_gaussian_banded_precision(sys.a, sys.b, rng);
  const auto &y = design.data.y();
  for (std::size_t i = 0; i < n; ++i)
    state.theta[i] = state.xi[i] + y[i];
  sync_xi(state, design);
}

void step_theta_coordinatewise(ChainState &state, const ModelDesign &design,
                               const FitConfig &config, RngStream &rng) {
  const std::size_t n = design.size();
  const auto &y = design.data.y();
  const PrecisionSystem sys = assemble_precision(state, design, config);
  // theta-space linear term c = A y + b
  std::vector<double> c = sys.a.multiply(y);
  for (std::size_t i = 0; i < n; ++i)
    c[i] += sys.b[i];

  const std::size_t h = sys.a.half_bandwidth();
  for (std::size_t i = 0; i < n; ++i) {
    double r = c[i];
    const std::size_t lo = i >= h ? i - h : 0;
    const std::size_t hi = std::min(n - 1, i + h);
    for (std::size_t j = lo; j <= hi; ++j)
      if (j != i)
        r -= sys.a(i, j) * state.theta[j];
    const double q = sys.a(i, i);
    state.theta[i] = sample_truncnorm_lower(r / q, 1.0 / q, y[i], rng);
  }
  sync_xi(state, design);
}

void step_sigma2(ChainState &state, const ModelDesign &design,
                 const FitConfig &config, RngStream &rng) {
  const InverseGammaParams p = sigma2_conditional(state, design, config);
  state.sigma2 = sample_inverse_gamma(p.shape, p.rate, rng);
}

void step_horseshoe_hyper(ChainState &state, const ModelDesign &design,
                          const FitConfig &config, RngStream &rng) {
  const std::size_t n = design.size();
  const std::size_t k1 = design.penalized_begin();
  const std::vector<double> dt = design.diff.full.apply(state.theta);

  // Half-Cauchy global scale through its inverse-gamma mixture.
  state.psi = sample_inverse_gamma(1.0, 1.0 + 1.0 / state.tau2, rng);
  const InverseGammaParams t = tau2_conditional(state, design, config);
  state.tau2 = sample_inverse_gamma(t.shape, t.rate, rng);

  step_unpenalized_scales(state, design, dt, config, rng);
  for (std::size_t i = k1; i < n; ++i) {
    double &nu = state.nu[i - k1];
    nu = sample_inverse_gamma(1.0, 1.0 + 1.0 / state.u2[i], rng);
    state.u2[i] = sample_inverse_gamma(
        1.0, dt[i] * dt[i] / (2.0 * state.sigma2 * state.tau2) + 1.0 / nu, rng);
  }
}

void step_laplace_hyper(ChainState &state, const ModelDesign &design,
                        const FitConfig &config, RngStream &rng) {
  const std::size_t n = design.size();
  const std::size_t k1 = design.penalized_begin();
  const auto &h = config.hyper;
  const std::vector<double> dt = design.diff.full.apply(state.theta);

  step_unpenalized_scales(state, design, dt, config, rng);
  double sum_u2 = 0.0;
  for (std::size_t i = k1; i < n; ++i) {
    const double d = std::max(std::fabs(dt[i]), kDifferenceFloor);
    const double mean = std::sqrt(state.gamma2 * state.sigma2) / d;
    state.u2[i] = 1.0 / sample_inverse_gaussian(mean, state.gamma2, rng);
    sum_u2 += state.u2[i];
  }
  const double m = static_cast<double>(n - k1);
  state.gamma2 = sample_gig(m - h.a_gamma, 2.0 * h.b_gamma, sum_u2, rng);
}

void step_normal_hyper(ChainState &state, const ModelDesign &design,
                       const FitConfig &config, RngStream &rng) {
  const std::vector<double> dt = design.diff.full.apply(state.theta);
  step_unpenalized_scales(state, design, dt, config, rng);
  const InverseGammaParams t = tau2_conditional(state, design, config);
  state.tau2 = sample_inverse_gamma(t.shape, t.rate, rng);
}

void step_prior_hyper(ChainState &state, const ModelDesign &design,
                      const FitConfig &config, RngStream &rng) {
  switch (config.prior) {
  case PriorKind::horseshoe:
    step_horseshoe_hyper(state, design, config, rng);
    break;
  case PriorKind::laplace:
    step_laplace_hyper(state, design, config, rng);
    break;
  case PriorKind::normal:
    step_normal_hyper(state, design, config, rng);
    break;
  }
}

void step_ni_latents(ChainState &state, const ModelDesign &design,
                     const FitConfig &config, RngStream &rng) {
  if (!design.shape)
    return;
  const std::vector<double> pt = design.shape->apply(state.theta);
  const double c = 2.0 * state.rho2 * state.sigma2;
  for (std::size_t i = 0; i < pt.size(); ++i) {
    const double chi = std::max(pt[i] * pt[i] / c, kChiFloor);
    state.v[i] = sample_gig(0.5, chi, 1.0 / c, rng);
  }
  const InverseGammaParams r = rho2_conditional(state, design, config);
  state.rho2 = sample_inverse_gamma(r.shape, r.rate, rng);
}

void gibbs_sweep(ChainState &state, const ModelDesign &design,
                 const FitConfig &config, RngStream &rng, ThetaEngine engine,
                 const SweepHooks &hooks) {
  if (engine == ThetaEngine::polya_gamma)
    step_theta_pg(state, design, config, rng);
  else
    step_theta_coordinatewise(state, design, config, rng);
  if (!hooks.skip_sigma2)
    step_sigma2(state, design, config, rng);
  step_prior_hyper(state, design, config, rng);
  step_ni_latents(state, design, config, rng);
}

PosteriorDraws run_chain(const Dataset &data, const FitConfig &config,
                         ThetaEngine engine) {
  config.validate();
  FitConfig internal = config;
  internal.side = Side::upper;
  internal.constraint = orient_constraint(config.constraint, config.side);
  const ModelDesign design =
      make_design(orient_for_side(data, config.side), internal);

  const auto start = std::chrono::steady_clock::now();
  RngStream rng(config.seed, 0);
  ChainState state = init_chain(design, internal, rng);

  const std::size_t n = design.size();
  const McmcSchedule &sched = config.schedule;
  PosteriorDraws out;
  out.n = n;
  out.m = static_cast<std::size_t>(sched.retained());
  out.config = config;
  out.theta.reserve(out.m * n);
  const double sign = config.side == Side::upper ? 1.0 : -1.0;

  for (int it = 0; it < sched.iterations; ++it) {
    try {
      gibbs_sweep(state, design, internal, rng, engine);
    } catch (const ConditioningError &e) {
      throw ConditioningError(e.pivot(), "sweep " + std::to_string(it) + ": " +
                                             e.what());
    }
    if (it < sched.burn_in || (it - sched.burn_in + 1) % sched.thin != 0)
      continue;
    for (double t : state.theta)
      out.theta.push_back(sign * t);
    out.sigma2.push_back(state.sigma2);
    if (config.prior != PriorKind::laplace)
      out.tau2.push_back(state.tau2);
    else
      out.gamma2.push_back(state.gamma2);
    if (design.shape)
      out.rho2.push_back(state.rho2);
  }
  out.m = out.sigma2.size();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  return out;
}

PosteriorDraws run_chain(const Dataset &data, const FitConfig &config) {
  return run_chain(data, config, ThetaEngine::polya_gamma);
}

PosteriorDraws run_chain_coordinatewise(const Dataset &data,
                                        const FitConfig &config) {
  return run_chain(data, config, ThetaEngine::coordinatewise);
}

} // namespace bbtf
