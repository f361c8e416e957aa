#pragma once

// Slow, independent reference implementations used to check the library.

#include "bbtf/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Dense {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Dense() = default;
  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double &operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }
};

inline Dense from_rows(std::size_t r, std::size_t c, std::vector<double> v) {
  Dense m(r, c);
  m.a = std::move(v);
  return m;
}

inline Dense identity(std::size_t n) {
  Dense m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

inline Dense transpose(const Dense &m) {
  Dense t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      t(j, i) = m(i, j);
  return t;
}

inline Dense multiply(const Dense &x, const Dense &y) {
  if (x.cols != y.rows)
    throw std::invalid_argument("multiply: shape");
  Dense z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t l = 0; l < x.cols; ++l)
      for (std::size_t j = 0; j < y.cols; ++j)
        z(i, j) += x(i, l) * y(l, j);
  return z;
}

inline std::vector<double> multiply(const Dense &x, std::span<const double> v) {
  std::vector<double> z(x.rows, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j)
      z[i] += x(i, j) * v[j];
  return z;
}

inline Dense add(const Dense &x, const Dense &y) {
  Dense z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i)
    z.a[i] += y.a[i];
  return z;
}

// diag(w) * m
inline Dense scale_rows(const Dense &m, std::span<const double> w) {
  Dense z = m;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      z(i, j) *= w[i];
  return z;
}

// Gauss-Jordan with partial pivoting.
inline Dense inverse(Dense m) {
  const std::size_t n = m.rows;
  Dense inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(p, c)))
        p = r;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(m(c, j), m(p, j));
      std::swap(inv(c, j), inv(p, j));
    }
    const double d = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c)
        continue;
      const double f = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

inline double max_abs(std::span<const double> x) {
  double d = 0.0;
  for (double v : x)
    d = std::max(d, std::abs(v));
  return d;
}

// ||x - y||_max / max(1, ||y||_max)
inline double relative_error(std::span<const double> x, std::span<const double> y) {
  return max_abs_diff(x, y) / std::max(1.0, max_abs(y));
}

// First differences theta_i - theta_{i+1}, (m-1) x m.
inline Dense first_difference(std::size_t m) {
  Dense d(m - 1, m);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    d(i, i) = 1.0;
    d(i, i + 1) = -1.0;
  }
  return d;
}

// (k+1)-th differences on the unit grid by repeated products.
inline Dense difference(std::size_t n, int k) {
  Dense d = first_difference(n);
  for (int j = 1; j <= k; ++j)
    d = multiply(first_difference(n - static_cast<std::size_t>(j)), d);
  return d;
}

// Spacing-adjusted differences: each step rescales by k / (x_{i+k} - x_i).
inline Dense adjusted_difference(std::span<const double> x, int k) {
  const std::size_t n = x.size();
  Dense d = first_difference(n);
  for (int j = 1; j <= k; ++j) {
    const std::size_t sj = static_cast<std::size_t>(j);
    std::vector<double> w(n - sj);
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] = j / (x[i + sj] - x[i]);
    d = multiply(first_difference(n - sj), scale_rows(d, w));
  }
  return d;
}

// I_{k+1} stacked on top of the (n-k-1) x n reduced operator.
inline Dense full_operator(const Dense &reduced, int k) {
  const std::size_t n = reduced.cols;
  const std::size_t k1 = static_cast<std::size_t>(k) + 1;
  Dense f(n, n);
  for (std::size_t i = 0; i < k1; ++i)
    f(i, i) = 1.0;
  for (std::size_t i = 0; i < reduced.rows; ++i)
    for (std::size_t j = 0; j < n; ++j)
      f(i + k1, j) = reduced(i, j);
  return f;
}

inline double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x)
    s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double std_error(std::span<const double> x) {
  return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

// PG(1, c) by the truncated sum of gammas, with the expected tail added back.
inline double polya_gamma_series(double c, bbtf::RngStream &rng, int terms = 200) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double c2 = c * c / (4.0 * pi2);
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) {
    const double h = (k - 0.5) * (k - 0.5) + c2;
    s += rng.exponential() / h;
  }
  // Expected value of the omitted terms; the tail's spread is negligible.
  s += 1.0 / terms;
  return s / (2.0 * pi2);
}

// Inverse-CDF sampler for GIG(p, chi, psi) tabulated on a log-x grid.
class GigTable {
public:
  GigTable(double p, double chi, double psi, std::size_t points = 40000) {
    const double lo = -25.0, hi = 15.0;
    s_.resize(points);
    cdf_.resize(points);
    std::vector<double> logf(points);
    for (std::size_t i = 0; i < points; ++i) {
      s_[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
      const double x = std::exp(s_[i]);
      // density in s = log x picks up the Jacobian x
      logf[i] = p * s_[i] - 0.5 * (chi / x + psi * x);
    }
    const double peak = *std::max_element(logf.begin(), logf.end());
    cdf_[0] = 0.0;
    for (std::size_t i = 1; i < points; ++i)
      cdf_[i] = cdf_[i - 1] + 0.5 * (std::exp(logf[i] - peak) + std::exp(logf[i - 1] - peak)) *
                                  (s_[i] - s_[i - 1]);
    for (double &c : cdf_)
      c /= cdf_.back();
  }

  double draw(bbtf::RngStream &rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t j = std::clamp<std::size_t>(
        static_cast<std::size_t>(it - cdf_.begin()), 1, cdf_.size() - 1);
    const double t = (u - cdf_[j - 1]) / std::max(cdf_[j] - cdf_[j - 1], 1e-300);
    return std::exp(s_[j - 1] + t * (s_[j] - s_[j - 1]));
  }

private:
  std::vector<double> s_, cdf_;
};

inline double truncnorm_naive(double mu, double var, double lower,
                              bbtf::RngStream &rng) {
  const double sd = std::sqrt(var);
  for (;;) {
    const double x = mu + sd * rng.normal();
    if (x >= lower)
      return x;
  }
}

inline double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double std_normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace oracle
