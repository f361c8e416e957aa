#pragma once

#include "bbtf/banded.hpp"
#include "bbtf/random.hpp"

#include <span>
#include <vector>

namespace bbtf {

// Exact draw from the Polya-Gamma PG(1, c) distribution (Devroye-type
// alternating-series sampler on the tilted Jacobi density). Symmetric in c.
double sample_polya_gamma(double c, RngStream &rng);

// Generalized inverse Gaussian with density proportional to
//   x^(p-1) exp(-(chi / x + psi * x) / 2),   chi > 0, psi > 0.
// Boundary cases (chi = 0 or psi = 0) are refused with DomainError; callers
// use the gamma / inverse-gamma samplers for those.
double sample_gig(double p, double chi, double psi, RngStream &rng);

// Inverse gamma with the given shape and rate: 1 / Gamma(shape, rate).
double sample_inverse_gamma(double shape, double rate, RngStream &rng);

// Gamma with the given shape and rate.
double sample_gamma(double shape, double rate, RngStream &rng);

// Inverse Gaussian with the given mean and shape (Michael-Schucany-Haas).
double sample_inverse_gaussian(double mean, double shape, RngStream &rng);

// N(mu, var) conditioned on x >= lower.
double sample_truncnorm_lower(double mu, double var, double lower,
                              RngStream &rng);

// Draw from N(A^{-1} b, A^{-1}) given the banded precision A.
std::vector<double> sample_gaussian_banded_precision(const BandedSpd &a,
                                                     std::span<const double> b,
                                                     RngStream &rng);

// Logistic sigmoid exp(eta t) / (1 + exp(eta t)).
double sigmoid(double t, double eta);
// log of sigmoid(t, eta) without overflow.
double log_sigmoid(double t, double eta);

// One response from the density proportional to
//   phi(y; theta, sigma2) * sigmoid(theta - y, eta)
// by rejection from N(theta, sigma2). `proposals`, when given, is incremented
// by the number of proposals used.
double sample_soft_truncated_response(double theta, double sigma2, double eta,
                                      RngStream &rng,
                                      long *proposals = nullptr);

// -|z| with z ~ N(0, sigma^2).
double sample_half_normal_noise(double sigma, RngStream &rng);

} // namespace bbtf
