#include "bbtf/model.hpp"

#include "bbtf/distributions.hpp"
#include "bbtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bbtf {

std::string to_string(PriorKind kind) {
  switch (kind) {
  case PriorKind::horseshoe:
    return "horseshoe";
  case PriorKind::laplace:
    return "laplace";
  case PriorKind::normal:
    return "normal";
  }
  return "unknown";
}

std::string to_string(ShapeConstraint constraint) {
  switch (constraint) {
  case ShapeConstraint::none:
    return "none";
  case ShapeConstraint::increasing:
    return "nearly-isotonic-increasing";
  case ShapeConstraint::decreasing:
    return "nearly-isotonic-decreasing";
  case ShapeConstraint::convex:
    return "nearly-convex";
  case ShapeConstraint::concave:
    return "nearly-concave";
  }
  return "unknown";
}

std::string to_string(Side side) {
  return side == Side::upper ? "upper" : "lower";
}

void FitConfig::validate() const {
  if (order < 0 || order > kMaxOrder)
    throw DomainError("order must lie in [0, " + std::to_string(kMaxOrder) +
                      "]");
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw DomainError("eta must be positive");
  if (schedule.thin < 1)
    throw DomainError("thin must be at least 1");
  if (schedule.burn_in < 0 || schedule.burn_in >= schedule.iterations)
    throw DomainError("burn-in must be non-negative and below iterations");
  if (!(grid_scale > 0.0) || !std::isfinite(grid_scale))
    throw DomainError("grid scale must be positive");
  const double hp[] = {hyper.a_sigma, hyper.b_sigma, hyper.a_rho, hyper.b_rho,
                       hyper.a_u,     hyper.b_u,     hyper.a_gamma,
                       hyper.b_gamma, hyper.a_tau,   hyper.b_tau};
  for (double h : hp)
    if (!(h > 0.0) || !std::isfinite(h))
      throw DomainError("hyperparameters must be positive");
}

std::optional<BandedRowMatrix> build_shape_operator(std::size_t n,
                                                    ShapeConstraint constraint) {
  if (constraint == ShapeConstraint::none)
    return std::nullopt;
  const bool second = constraint == ShapeConstraint::convex ||
                      constraint == ShapeConstraint::concave;
  const double sign = (constraint == ShapeConstraint::decreasing ||
                       constraint == ShapeConstraint::convex)
                          ? -1.0
                          : 1.0;
  DifferenceOperator d = build_difference_matrix(n, second ? 1 : 0);
  BandedRowMatrix p(d.reduced.rows(), n, d.reduced.width());
  std::vector<double> row;
  for (std::size_t r = 0; r < p.rows(); ++r) {
    const auto c = d.reduced.row(r);
    row.assign(c.begin(), c.end());
    for (double &x : row)
      x *= sign;
    p.set_row(r, d.reduced.first(r), row);
  }
  return p;
}

ModelDesign make_design(const Dataset &data, const FitConfig &config) {
  ModelDesign design;
  design.data = config.grid_scale == 1.0
                    ? data
                    : data.with_scaled_grid(config.grid_scale);
  design.order = config.order;
  design.diff = build_adjusted_difference_matrix(design.data.x(), config.order);
  design.shape = build_shape_operator(data.size(), config.constraint);
  return design;
}

std::vector<double> prior_scales(const ChainState &state,
                                 const ModelDesign &design,
                                 const FitConfig &config) {
  const std::size_t n = design.size();
  const std::size_t k1 = design.penalized_begin();
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < k1; ++i)
    scale[i] = state.u2[i];
  for (std::size_t i = k1; i < n; ++i) {
    switch (config.prior) {
    case PriorKind::horseshoe:
      scale[i] = state.tau2 * state.u2[i];
      break;
    case PriorKind::laplace:
      scale[i] = state.u2[i];
      break;
    case PriorKind::normal:
      scale[i] = state.tau2;
      break;
    }
  }
  return scale;
}

PrecisionSystem assemble_precision(const ChainState &state,
                                   const ModelDesign &design,
                                   const FitConfig &config) {
  const std::size_t n = design.size();
  const auto &y = design.data.y();

  std::vector<double> w = prior_scales(state, design, config);
  for (double &x : w)
    x = std::min(1.0 / x, kMaxPenaltyWeight);

  std::size_t band = design.diff.full.row_span();
  if (design.shape)
    band = std::max(band, design.shape->row_span());

  PrecisionSystem sys{BandedSpd(n, band), std::vector<double>(n, 0.0)};
  sys.a.add_weighted_gram(design.diff.full, w);

  std::vector<double> dy = design.diff.full.apply(y);
  for (std::size_t i = 0; i < n; ++i)
    dy[i] *= w[i];
  std::vector<double> lin = design.diff.full.apply_transpose(dy);

  if (design.shape) {
    const BandedRowMatrix &p = *design.shape;
    std::vector<double> wp(p.rows());
    for (std::size_t i = 0; i < p.rows(); ++i)
      wp[i] = std::min(1.0 / (2.0 * state.rho2 * state.v[i]), kMaxPenaltyWeight);
    sys.a.add_weighted_gram(p, wp);
    std::vector<double> py = p.apply(y);
    for (std::size_t i = 0; i < p.rows(); ++i)
      py[i] = wp[i] * (py[i] + state.v[i]);
    const std::vector<double> shape_lin = p.apply_transpose(py);
    for (std::size_t i = 0; i < n; ++i)
      lin[i] += shape_lin[i];
  }

  sys.a.add_diagonal(1.0);
  const double inv_s2 = 1.0 / state.sigma2;
  sys.a.scale(inv_s2);
  for (std::size_t i = 0; i < n; ++i)
    sys.b[i] = -lin[i] * inv_s2;
  return sys;
}

double log_soft_likelihood(std::span<const double> theta, const Dataset &data,
                           double sigma2, double eta) {
  const auto &y = data.y();
  if (theta.size() != y.size())
    throw DimensionError("theta and y lengths differ");
  if (!(sigma2 > 0.0))
    throw DomainError("sigma2 must be positive");
  double ss = 0.0, sig = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = theta[i] - y[i];
    ss += r * r;
    sig += log_sigmoid(r, eta);
  }
  return -0.5 * static_cast<double>(y.size()) * std::log(sigma2) -
         ss / (2.0 * sigma2) + sig;
}

Dataset orient_for_side(const Dataset &data, Side side) {
  if (side == Side::upper)
    return data;
  std::vector<double> y = data.y();
  for (double &v : y)
    v = -v;
  return data.with_responses(std::move(y));
}

ShapeConstraint orient_constraint(ShapeConstraint constraint, Side side) {
  if (side == Side::upper)
    return constraint;
  switch (constraint) {
  case ShapeConstraint::increasing:
    return ShapeConstraint::decreasing;
  case ShapeConstraint::decreasing:
    return ShapeConstraint::increasing;
  case ShapeConstraint::convex:
    return ShapeConstraint::concave;
  case ShapeConstraint::concave:
    return ShapeConstraint::convex;
  case ShapeConstraint::none:
    break;
  }
  return constraint;
}

ChainState init_chain(const ModelDesign &design, const FitConfig & /*config*/,
                      RngStream &rng) {
  const std::size_t n = design.size();
  const std::size_t k1 = design.penalized_begin();
  if (n < k1 + 1)
    throw DimensionError("need n >= k + 2 points");
  const auto &y = design.data.y();

  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double var = 0.0;
  for (double v : y)
    var += (v - mean) * (v - mean);
  const double sd = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;

  ChainState s;
  s.theta.resize(n);
  double running = y[0];
  for (std::size_t i = 0; i < n; ++i) {
    running = std::max(running, y[i]);
    s.theta[i] = running + sd;
  }
  s.xi.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.xi[i] = s.theta[i] - y[i];

  double dmean = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    dmean += y[i] - y[i - 1];
  dmean /= static_cast<double>(n - 1);
  double dvar = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = y[i] - y[i - 1] - dmean;
    dvar += d * d;
  }
  dvar = n > 2 ? dvar / static_cast<double>(n - 2) : dvar;
  const double floor = 1e-6 * (1.0 + std::fabs(y[0])) * (1.0 + std::fabs(y[0]));
  s.sigma2 = std::max(dvar, floor);

  s.u2.assign(n, 1.0);
  s.nu.assign(n - k1, 1.0);
  s.omega.resize(n);
  for (double &w : s.omega)
    w = sample_polya_gamma(0.0, rng);
  s.v.assign(design.shape ? design.shape->rows() : 0, 1.0);
  s.tau2 = s.psi = s.gamma2 = s.rho2 = 1.0;
  return s;
}

} // namespace bbtf
