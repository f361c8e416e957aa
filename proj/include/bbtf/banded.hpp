#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bbtf {

// Rectangular matrix whose nonzeros in each row occupy one contiguous run of
// columns. Difference operators and shape-constraint operators are stored this
// way; row r holds length(r) coefficients starting at column first(r).
class BandedRowMatrix {
public:
  BandedRowMatrix() = default;
  BandedRowMatrix(std::size_t rows, std::size_t cols, std::size_t width);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t width() const noexcept { return width_; }

  std::size_t first(std::size_t r) const { return first_[r]; }
  std::size_t length(std::size_t r) const { return length_[r]; }
  std::span<const double> row(std::size_t r) const {
    return {coef_.data() + r * width_, length_[r]};
  }

  // Replaces row r; coefficients.size() must not exceed width().
  void set_row(std::size_t r, std::size_t first,
               std::span<const double> coefficients);

  // Largest column distance between the first and last stored entry of a row.
  std::size_t row_span() const;

  double operator()(std::size_t r, std::size_t c) const;

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> y) const;

  // Row-major dense copy; used by tests and small diagnostics.
  std::vector<double> dense() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t width_ = 0;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> length_;
  std::vector<double> coef_;
};

class BandedCholesky;

// Symmetric matrix with half-bandwidth h. Only the lower band is stored:
// band(i, d) = A(i, i - d) for d = 0..h.
class BandedSpd {
public:
  BandedSpd() = default;
  BandedSpd(std::size_t n, std::size_t half_bandwidth);

  std::size_t size() const noexcept { return n_; }
  std::size_t half_bandwidth() const noexcept { return h_; }

  // Symmetric access; zero outside the band.
  double operator()(std::size_t i, std::size_t j) const;

  // Adds value to A(i, j) and, implicitly, A(j, i). |i - j| must be <= h.
  void add(std::size_t i, std::size_t j, double value);
  void add_diagonal(std::span<const double> d);
  void add_diagonal(double value);
  void scale(double factor);

  // Adds factor * R^T diag(w) R. R's row spans must fit in the band.
  void add_weighted_gram(const BandedRowMatrix &r, std::span<const double> w,
                         double factor = 1.0);

  std::vector<double> multiply(std::span<const double> x) const;

  // Throws ConditioningError with the zero-based pivot index on failure.
  BandedCholesky cholesky() const;

  std::vector<double> dense() const;

private:
  double &band(std::size_t i, std::size_t d) { return data_[i * (h_ + 1) + d]; }
  double band(std::size_t i, std::size_t d) const {
    return data_[i * (h_ + 1) + d];
  }

  std::size_t n_ = 0;
  std::size_t h_ = 0;
  std::vector<double> data_;

  friend class BandedCholesky;
};

// Lower-triangular banded factor L with A = L L^T.
class BandedCholesky {
public:
  std::size_t size() const noexcept { return factor_.size(); }

  // Solves L y = b in place.
  void solve_lower(std::span<double> b) const;
  // Solves L^T x = y in place.
  void solve_upper(std::span<double> y) const;
  // Solves A x = b.
  std::vector<double> solve(std::span<const double> b) const;

  double log_determinant() const;

private:
  explicit BandedCholesky(BandedSpd factor) : factor_(std::move(factor)) {}

  BandedSpd factor_;

  friend class BandedSpd;
};

} // namespace bbtf
