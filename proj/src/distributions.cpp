#include "bbtf/distributions.hpp"

#include "bbtf/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace bbtf {

namespace {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Polya-Gamma PG(1, c) = J*(1, c/2) / 4. The J* sampler mixes a truncated
// exponential proposal on [t, inf) with a truncated inverse Gaussian on
// (0, t), then accepts through the alternating series of coefficients a_n.

constexpr double kPgTruncation = 0.64;

double log_normal_cdf(double x) {
  if (x < -30.0)
    return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * pi);
  return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

double pg_coefficient(int n, double x) {
  const double k = (n + 0.5) * pi;
  if (x > kPgTruncation)
    return k * std::exp(-0.5 * k * k * x);
  if (x <= 0.0)
    return 0.0;
  const double expnt = -1.5 * (std::log(0.5 * pi) + std::log(x)) + std::log(k) -
                       2.0 * (n + 0.5) * (n + 0.5) / x;
  return std::exp(expnt);
}

// Probability of drawing from the exponential piece of the proposal.
double pg_exponential_mass(double z) {
  const double t = kPgTruncation;
  const double fz = 0.125 * pi * pi + 0.5 * z * z;
  const double b = std::sqrt(1.0 / t) * (t * z - 1.0);
  const double a = -std::sqrt(1.0 / t) * (t * z + 1.0);
  const double x0 = std::log(fz) + fz * t;
  const double xb = x0 - z + log_normal_cdf(b);
  const double xa = x0 + z + log_normal_cdf(a);
  const double q_over_p = 4.0 / pi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + q_over_p);
}

// Inverse Gaussian IG(1/z, 1) truncated to (0, t).
double pg_truncated_inverse_gaussian(double z, RngStream &rng) {
  const double t = kPgTruncation;
  double x = t + 1.0;
  if (1.0 / t > z) {
    // Mean beyond t: propose from the z = 0 law (a scaled 1/chi^2_1 truncated
    // to (0, t)) and thin by exp(-z^2 x / 2).
    double alpha = 0.0;
    while (rng.uniform() > alpha) {
      double e1 = rng.exponential();
      double e2 = rng.exponential();
      while (e1 * e1 > 2.0 * e2 / t) {
        e1 = rng.exponential();
        e2 = rng.exponential();
      }
      x = 1.0 + e1 * t;
      x = t / (x * x);
      alpha = std::exp(-0.5 * z * z * x);
    }
  } else {
    const double mu = 1.0 / z;
    while (x > t)
      x = sample_inverse_gaussian(mu, 1.0, rng);
  }
  return x;
}

// ---------------------------------------------------------------------------
// GIG(lambda, omega, omega) on the standardized scale, lambda >= 0:
//   f(x) ~ x^(lambda-1) exp(-omega/2 (x + 1/x)).
// Three regimes following Hormann and Leydold (2014).

double gig_mode(double lambda, double omega) {
  if (lambda >= 1.0)
    return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) +
            (lambda - 1.0)) /
           omega;
  return omega /
         (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) +
          (1.0 - lambda));
}

// Ratio-of-uniforms with the mode shifted to the origin; bounding rectangle
// from the roots of the cubic that locates the extrema of (x - m) sqrt(f(x)).
double gig_rou_shift(double lambda, double omega, RngStream &rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * pi) - a / 3.0;

  const double uplus =
      (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus =
      (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

  for (;;) {
    const double u = uminus + rng.uniform() * (uplus - uminus);
    const double v = rng.uniform();
    const double x = u / v + xm;
    if (x <= 0.0)
      continue;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc)
      return x;
  }
}

// Ratio-of-uniforms without shift.
double gig_rou_noshift(double lambda, double omega, RngStream &rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  // maximizer of x sqrt(f(x))
  const double ym =
      ((lambda + 1.0) +
       std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) /
      omega;
  const double um =
      std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
  for (;;) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc)
      return x;
  }
}

// Rejection from a three-piece hat for 0 <= lambda < 1 and small omega:
// constant on (0, x0), k1 x^(lambda-1) on (x0, 2/omega), exponential beyond.
double gig_small_omega(double lambda, double omega, RngStream &rng) {
  const double xm = gig_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);
  const double k0 =
      std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  double area[3];
  area[0] = k0 * x0;
  double k1, k2;
  if (x0 >= 2.0 / omega) {
    k1 = 0.0;
    area[1] = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    area[1] = lambda == 0.0
                  ? k1 * std::log(2.0 / (omega * omega))
                  : k1 / lambda *
                        (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area[0] + area[1] + area[2];
  const double tail_start = x0 > 2.0 / omega ? x0 : 2.0 / omega;

  for (;;) {
    double v = total * rng.uniform();
    double x, hat;
    if (v <= area[0]) {
      x = x0 * v / area[0];
      hat = k0;
    } else if ((v -= area[0]) <= area[1]) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hat = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + lambda / k1 * v, 1.0 / lambda);
        hat = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= area[1];
      x = -2.0 / omega *
          std::log(std::exp(-omega / 2.0 * tail_start) -
                   omega / (2.0 * k2) * v);
      hat = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = rng.uniform() * hat;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x))
      return x;
  }
}

} // namespace

double sample_polya_gamma(double c, RngStream &rng) {
  const double z = 0.5 * std::fabs(c);
  const double fz = 0.125 * pi * pi + 0.5 * z * z;
  const double exp_mass = pg_exponential_mass(z);
  for (;;) {
    double x;
    if (rng.uniform() < exp_mass)
      x = kPgTruncation + rng.exponential() / fz;
    else
      x = pg_truncated_inverse_gaussian(z, rng);

    double s = pg_coefficient(0, x);
    const double y = rng.uniform() * s;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        s -= pg_coefficient(n, x);
        if (y <= s)
          return 0.25 * x;
      } else {
        s += pg_coefficient(n, x);
        if (y > s)
          break;
      }
    }
  }
}

double sample_gig(double p, double chi, double psi, RngStream &rng) {
  if (!(chi > 0.0) || !(psi > 0.0) || !std::isfinite(chi) ||
      !std::isfinite(psi) || !std::isfinite(p))
    throw DomainError("GIG requires chi > 0 and psi > 0 (got chi = " +
                      std::to_string(chi) + ", psi = " + std::to_string(psi) +
                      ")");
  const double lambda = std::fabs(p);
  const double omega = std::sqrt(chi * psi);
  const double alpha = std::sqrt(chi / psi);

  double x;
  if (lambda > 2.0 || omega > 3.0)
    x = gig_rou_shift(lambda, omega, rng);
  else if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2)
    x = gig_rou_noshift(lambda, omega, rng);
  else
    x = gig_small_omega(lambda, omega, rng);
  return p < 0.0 ? alpha / x : alpha * x;
}

double sample_gamma(double shape, double rate, RngStream &rng) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw DomainError("gamma requires shape > 0 and rate > 0");
  return rng.gamma(shape) / rate;
}

double sample_inverse_gamma(double shape, double rate, RngStream &rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(rate))
    throw DomainError("inverse gamma requires shape > 0 and rate > 0 (got " +
                      std::to_string(shape) + ", " + std::to_string(rate) + ")");
  return std::exp(std::log(rate) - rng.log_gamma(shape));
}

double sample_inverse_gaussian(double mean, double shape, RngStream &rng) {
  if (!(mean > 0.0) || !(shape > 0.0))
    throw DomainError("inverse Gaussian requires mean > 0 and shape > 0");
  const double z = rng.normal();
  const double r = mean * z * z / (2.0 * shape);
  // mean * (1 + r - sqrt(r^2 + 2r)), written without cancellation
  const double x = mean / (1.0 + r + std::sqrt(r * r + 2.0 * r));
  if (rng.uniform() * (mean + x) > mean)
    return mean * mean / x;
  return x;
}

double sample_truncnorm_lower(double mu, double var, double lower,
                              RngStream &rng) {
  if (!(var > 0.0))
    throw DomainError("truncated normal requires var > 0");
  const double sd = std::sqrt(var);
  const double alpha = (lower - mu) / sd;
  double z;
  if (alpha < 1.0) {
    // inverse CDF on the upper tail
    const double tail = 0.5 * std::erfc(alpha / std::numbers::sqrt2);
    const double u = rng.uniform() * tail;
    z = std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
    if (z < alpha)
      z = alpha;
  } else {
    // Robert (1995): translated exponential proposal with the optimal rate.
    const double rate = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
    for (;;) {
      z = alpha + rng.exponential() / rate;
      const double d = z - rate;
      if (rng.uniform() <= std::exp(-0.5 * d * d))
        break;
    }
  }
  return mu + sd * z;
}

std::vector<double> sample_gaussian_banded_precision(const BandedSpd &a,
                                                     std::span<const double> b,
                                                     RngStream &rng) {
  if (b.size() != a.size())
    throw DimensionError("precision and mean vector sizes differ");
  const BandedCholesky chol = a.cholesky();
  std::vector<double> x(b.begin(), b.end());
  chol.solve_lower(x);
  for (double &xi : x)
    xi += rng.normal();
  chol.solve_upper(x);
  return x;
}

double sigmoid(double t, double eta) {
  const double s = eta * t;
  if (s >= 0.0)
    return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double log_sigmoid(double t, double eta) {
  const double s = eta * t;
  if (s >= 0.0)
    return -std::log1p(std::exp(-s));
  return s - std::log1p(std::exp(s));
}

double sample_soft_truncated_response(double theta, double sigma2, double eta,
                                      RngStream &rng, long *proposals) {
  if (!(sigma2 > 0.0) || !(eta > 0.0))
    throw DomainError("soft truncated response requires sigma2 > 0, eta > 0");
  const double sd = std::sqrt(sigma2);
  for (;;) {
    const double y = theta + sd * rng.normal();
    if (proposals)
      ++*proposals;
    if (rng.uniform() <= sigmoid(theta - y, eta))
      return y;
  }
}

double sample_half_normal_noise(double sigma, RngStream &rng) {
  if (!(sigma > 0.0))
    throw DomainError("half-normal noise requires sigma > 0");
  return -std::fabs(sigma * rng.normal());
}

} // namespace bbtf
