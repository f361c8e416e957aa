#include "bbtf/banded.hpp"

#include "bbtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bbtf {

BandedRowMatrix::BandedRowMatrix(std::size_t rows, std::size_t cols,
                                 std::size_t width)
    : rows_(rows), cols_(cols), width_(width), first_(rows, 0),
      length_(rows, 0), coef_(rows * width, 0.0) {}

void BandedRowMatrix::set_row(std::size_t r, std::size_t first,
                              std::span<const double> coefficients) {
  if (r >= rows_ || coefficients.size() > width_ ||
      first + coefficients.size() > cols_)
    throw DimensionError("banded row does not fit the matrix");
  first_[r] = first;
  length_[r] = coefficients.size();
  std::copy(coefficients.begin(), coefficients.end(),
            coef_.begin() + static_cast<std::ptrdiff_t>(r * width_));
}

std::size_t BandedRowMatrix::row_span() const {
  std::size_t span = 0;
  for (std::size_t r = 0; r < rows_; ++r)
    if (length_[r] > 0)
      span = std::max(span, length_[r] - 1);
  return span;
}

double BandedRowMatrix::operator()(std::size_t r, std::size_t c) const {
  if (c < first_[r] || c >= first_[r] + length_[r])
    return 0.0;
  return coef_[r * width_ + (c - first_[r])];
}

std::vector<double> BandedRowMatrix::apply(std::span<const double> x) const {
  if (x.size() != cols_)
    throw DimensionError("apply: vector length does not match columns");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double *c = coef_.data() + r * width_;
    const double *xr = x.data() + first_[r];
    double acc = 0.0;
    for (std::size_t j = 0; j < length_[r]; ++j)
      acc += c[j] * xr[j];
    y[r] = acc;
  }
  return y;
}

std::vector<double>
BandedRowMatrix::apply_transpose(std::span<const double> y) const {
  if (y.size() != rows_)
    throw DimensionError("apply_transpose: vector length does not match rows");
  std::vector<double> x(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double *c = coef_.data() + r * width_;
    for (std::size_t j = 0; j < length_[r]; ++j)
      x[first_[r] + j] += c[j] * y[r];
  }
  return x;
}

std::vector<double> BandedRowMatrix::dense() const {
  std::vector<double> out(rows_ * cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < length_[r]; ++j)
      out[r * cols_ + first_[r] + j] = coef_[r * width_ + j];
  return out;
}

BandedSpd::BandedSpd(std::size_t n, std::size_t half_bandwidth)
    : n_(n), h_(half_bandwidth), data_(n * (half_bandwidth + 1), 0.0) {}

double BandedSpd::operator()(std::size_t i, std::size_t j) const {
  if (i < j)
    std::swap(i, j);
  const std::size_t d = i - j;
  return d > h_ ? 0.0 : band(i, d);
}

void BandedSpd::add(std::size_t i, std::size_t j, double value) {
  if (i < j)
    std::swap(i, j);
  if (i - j > h_ || i >= n_)
    throw DimensionError("BandedSpd::add outside the band");
  band(i, i - j) += value;
}

void BandedSpd::add_diagonal(std::span<const double> d) {
  if (d.size() != n_)
    throw DimensionError("add_diagonal: length mismatch");
  for (std::size_t i = 0; i < n_; ++i)
    band(i, 0) += d[i];
}

void BandedSpd::add_diagonal(double value) {
  for (std::size_t i = 0; i < n_; ++i)
    band(i, 0) += value;
}

void BandedSpd::scale(double factor) {
  for (double &a : data_)
    a *= factor;
}

void BandedSpd::add_weighted_gram(const BandedRowMatrix &r,
                                  std::span<const double> w, double factor) {
  if (r.cols() != n_ || w.size() != r.rows())
    throw DimensionError("add_weighted_gram: shape mismatch");
  if (r.row_span() > h_)
    throw DimensionError("add_weighted_gram: operator exceeds the band");
  for (std::size_t row = 0; row < r.rows(); ++row) {
    const auto c = r.row(row);
    const std::size_t f = r.first(row);
    const double wr = factor * w[row];
    for (std::size_t a = 0; a < c.size(); ++a) {
      const double ca = wr * c[a];
      for (std::size_t b = 0; b <= a; ++b)
        band(f + a, a - b) += ca * c[b];
    }
  }
}

std::vector<double> BandedSpd::multiply(std::span<const double> x) const {
  if (x.size() != n_)
    throw DimensionError("BandedSpd::multiply: length mismatch");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    y[i] += band(i, 0) * x[i];
    const std::size_t dmax = std::min(h_, i);
    for (std::size_t d = 1; d <= dmax; ++d) {
      const double a = band(i, d);
      y[i] += a * x[i - d];
      y[i - d] += a * x[i];
    }
  }
  return y;
}

BandedCholesky BandedSpd::cholesky() const {
  BandedSpd l(n_, h_);
  for (std::size_t j = 0; j < n_; ++j) {
    // Off-diagonal entries of row j: L(j, j-d) for d = h..1.
    const std::size_t dmax = std::min(h_, j);
    for (std::size_t d = dmax; d >= 1; --d) {
      const std::size_t c = j - d;
      double s = band(j, d);
      // sum_k L(j,k) L(c,k) over k < c within both bands
      const std::size_t kmin = j >= h_ ? j - h_ : 0;
      for (std::size_t k = kmin; k < c; ++k)
        s -= l.band(j, j - k) * l.band(c, c - k);
      l.band(j, d) = s / l.band(c, 0);
    }
    double diag = band(j, 0);
    for (std::size_t d = 1; d <= dmax; ++d)
      diag -= l.band(j, d) * l.band(j, d);
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw ConditioningError(j, "banded Cholesky failed: non-positive pivot " +
                                     std::to_string(j));
    l.band(j, 0) = std::sqrt(diag);
  }
  return BandedCholesky(std::move(l));
}

std::vector<double> BandedSpd::dense() const {
  std::vector<double> out(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      out[i * n_ + j] = (*this)(i, j);
  return out;
}

void BandedCholesky::solve_lower(std::span<double> b) const {
  const std::size_t n = factor_.n_, h = factor_.h_;
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    const std::size_t dmax = std::min(h, i);
    for (std::size_t d = 1; d <= dmax; ++d)
      s -= factor_.band(i, d) * b[i - d];
    b[i] = s / factor_.band(i, 0);
  }
}

void BandedCholesky::solve_upper(std::span<double> y) const {
  const std::size_t n = factor_.n_, h = factor_.h_;
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    const std::size_t dmax = std::min(h, n - 1 - i);
    for (std::size_t d = 1; d <= dmax; ++d)
      s -= factor_.band(i + d, d) * y[i + d];
    y[i] = s / factor_.band(i, 0);
  }
}

std::vector<double> BandedCholesky::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_lower(x);
  solve_upper(x);
  return x;
}

double BandedCholesky::log_determinant() const {
  double s = 0.0;
  for (std::size_t i = 0; i < factor_.n_; ++i)
    s += std::log(factor_.band(i, 0));
  return 2.0 * s;
}

} // namespace bbtf
