#pragma once

#include "bbtf/banded.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bbtf {

// Highest supported difference order k (the operator takes k+1 differences).
inline constexpr int kMaxOrder = 3;

// Ordered input grid and responses. Construction validates that x is strictly
// increasing, that x and y have the same length, and that every entry is
// finite.
class Dataset {
public:
  Dataset() = default;
  Dataset(std::vector<double> x, std::vector<double> y);

  std::size_t size() const noexcept { return x_.size(); }
  const std::vector<double> &x() const noexcept { return x_; }
  const std::vector<double> &y() const noexcept { return y_; }

  // Same grid, different responses (used for sign flips and redraws).
  Dataset with_responses(std::vector<double> y) const;
  // Grid multiplied by a positive factor.
  Dataset with_scaled_grid(double factor) const;

private:
  std::vector<double> x_;
  std::vector<double> y_;
};

struct DifferenceOperator {
  int order = 0;
  // (n-k-1) x n matrix of (k+1)-th differences, bandwidth k+2 per row.
  BandedRowMatrix reduced;
  // n x n lower-triangular matrix: I_{k+1} stacked above `reduced`.
  BandedRowMatrix full;
};

// Differences on the unit grid 1..n. Row i of the k = 0 operator is
// theta_i - theta_{i+1}. Requires n >= k + 2.
DifferenceOperator build_difference_matrix(std::size_t n, int k);

// Differences adjusted for grid spacing: for k >= 1 each recursion step
// divides the lower-order differences by (x_{i+k} - x_i) / k before
// differencing again. Equals build_difference_matrix on x = 1..n.
DifferenceOperator build_adjusted_difference_matrix(std::span<const double> x,
                                                    int k);

// D^T diag(w) D for positive weights w (one per row of D).
BandedSpd weighted_gram(const BandedRowMatrix &d, std::span<const double> w);
BandedSpd weighted_gram(const DifferenceOperator &d,
                        std::span<const double> w);

} // namespace bbtf
