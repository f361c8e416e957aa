#pragma once

#include "bbtf/banded.hpp"
#include "bbtf/grid_diff.hpp"
#include "bbtf/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bbtf {

enum class PriorKind { horseshoe, laplace, normal };

// `concave` is not offered on the command line; it arises when a nearly-convex
// lower-boundary fit is flipped onto the upper side.
enum class ShapeConstraint { none, increasing, decreasing, convex, concave };

enum class Side { upper, lower };

std::string to_string(PriorKind kind);
std::string to_string(ShapeConstraint constraint);
std::string to_string(Side side);

// Inverse-gamma hyperparameters (shape a, rate b) of every prior block.
struct Hyperparameters {
  double a_sigma = 0.1, b_sigma = 0.1; // sigma^2
  double a_rho = 1.0, b_rho = 1.0;     // rho^2, shape-constraint scale
  double a_u = 1.0, b_u = 1.0;         // u_i^2 of the k+1 unpenalized rows
  double a_gamma = 1.0, b_gamma = 1.0; // gamma^2, Laplace rate
  double a_tau = 1.0, b_tau = 1.0;     // tau^2 under the normal prior
};

struct McmcSchedule {
  int iterations = 10500;
  int burn_in = 500;
  int thin = 5;

  // floor((iterations - burn_in) / thin)
  int retained() const { return (iterations - burn_in) / thin; }
};

struct FitConfig {
  int order = 1;
  PriorKind prior = PriorKind::horseshoe;
  ShapeConstraint constraint = ShapeConstraint::none;
  double eta = 500.0;
  Side side = Side::upper;
  McmcSchedule schedule;
  Hyperparameters hyper;
  std::uint64_t seed = 1;
  // Multiplies x before building the adjusted difference operator. Irregular
  // grids with small spacings give a badly conditioned D^T U^{-1} D; a factor
  // such as 1000 brings the spacings back to order one.
  double grid_scale = 1.0;

  // Throws DomainError describing the first violated invariant.
  void validate() const;
};

// Data plus the operators every sweep needs, built once per fit.
struct ModelDesign {
  Dataset data;
  int order = 0;
  DifferenceOperator diff;
  // Shape-constraint operator P; empty when unconstrained.
  std::optional<BandedRowMatrix> shape;

  std::size_t size() const { return data.size(); }
  std::size_t penalized_begin() const {
    return static_cast<std::size_t>(order) + 1;
  }
};

ModelDesign make_design(const Dataset &data, const FitConfig &config);

// Rows of P for a constraint: increasing uses D^(1) (rows theta_i -
// theta_{i+1}), decreasing -D^(1), convex -D^(2), concave D^(2). The penalty
// acts on the positive part of P theta.
std::optional<BandedRowMatrix> build_shape_operator(std::size_t n,
                                                    ShapeConstraint constraint);

// Every latent quantity of one Gibbs sweep. Vectors are indexed from 0; the
// first k+1 entries of u2 belong to the unpenalized identity rows of D, nu is
// indexed by the penalized rows only (size n-k-1), v by rows of P.
struct ChainState {
  std::vector<double> theta;
  std::vector<double> xi;
  std::vector<double> u2;
  std::vector<double> nu;
  std::vector<double> omega;
  std::vector<double> v;
  double sigma2 = 1.0;
  double tau2 = 1.0;
  double psi = 1.0;
  double gamma2 = 1.0;
  double rho2 = 1.0;
};

// Prior variances U_i / sigma^2 of the rows of D: u_i^2 on the unpenalized
// block; tau^2 u_i^2 (horseshoe), u_i^2 (Laplace) or tau^2 (normal) beyond.
std::vector<double> prior_scales(const ChainState &state,
                                 const ModelDesign &design,
                                 const FitConfig &config);

struct PrecisionSystem {
  BandedSpd a;
  std::vector<double> b;
};

// Precision A and linear term b of the Gaussian part of xi = theta - y:
//   A = (I + D^T U^{-1} D + P^T W P) / sigma^2
//   b = -(D^T U^{-1} D y + P^T W (P y + v)) / sigma^2,   W = diag(1/(2 rho^2 v))
// The P terms are present only under a shape constraint. Each penalty weight
// is capped at kMaxPenaltyWeight (relative to the unit likelihood diagonal);
// past that the factorization loses the identity term to rounding.
inline constexpr double kMaxPenaltyWeight = 1e12;
PrecisionSystem assemble_precision(const ChainState &state,
                                   const ModelDesign &design,
                                   const FitConfig &config);

// Soft truncated-normal log-likelihood, up to an additive constant:
//   -n/2 log sigma2 - |y - theta|^2 / (2 sigma2) + sum log sigmoid_eta(theta - y)
double log_soft_likelihood(std::span<const double> theta, const Dataset &data,
                           double sigma2, double eta);

// Upper fits use the data as given; lower fits negate y, and every
// constraint direction flips with it. Applying it twice restores the input.
Dataset orient_for_side(const Dataset &data, Side side);
ShapeConstraint orient_constraint(ShapeConstraint constraint, Side side);

ChainState init_chain(const ModelDesign &design, const FitConfig &config,
                      RngStream &rng);

} // namespace bbtf
