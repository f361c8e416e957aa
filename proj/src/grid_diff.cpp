#include "bbtf/grid_diff.hpp"

#include "bbtf/errors.hpp"

#include <cmath>
#include <string>

namespace bbtf {

namespace {

void check_order(std::size_t n, int k) {
  if (k < 0 || k > kMaxOrder)
    throw DimensionError("difference order k must lie in [0, " +
                         std::to_string(kMaxOrder) + "], got " +
                         std::to_string(k));
  if (n < static_cast<std::size_t>(k) + 2)
    throw DimensionError("need n >= k + 2 points, got n = " +
                         std::to_string(n) + " for k = " + std::to_string(k));
}

BandedRowMatrix prepend_identity(const BandedRowMatrix &reduced, int k) {
  const std::size_t lead = static_cast<std::size_t>(k) + 1;
  BandedRowMatrix full(reduced.rows() + lead, reduced.cols(), reduced.width());
  const double one[] = {1.0};
  for (std::size_t r = 0; r < lead; ++r)
    full.set_row(r, r, one);
  for (std::size_t r = 0; r < reduced.rows(); ++r)
    full.set_row(lead + r, reduced.first(r), reduced.row(r));
  return full;
}

// Rows of the (order)-th difference operator, stored densely per row: row i
// covers columns i..i+order.
using RowBlock = std::vector<std::vector<double>>;

RowBlock first_differences(std::size_t n) {
  RowBlock rows(n - 1, std::vector<double>{1.0, -1.0});
  return rows;
}

// Left-multiplies by D^(1): row i becomes row_i - row_{i+1}, one column wider.
RowBlock difference_rows(const RowBlock &rows) {
  RowBlock out(rows.size() - 1);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto &a = rows[i];
    const auto &b = rows[i + 1];
    std::vector<double> r(a.size() + 1, 0.0);
    for (std::size_t j = 0; j < a.size(); ++j) {
      r[j] += a[j];
      r[j + 1] -= b[j];
    }
    out[i] = std::move(r);
  }
  return out;
}

DifferenceOperator pack(const RowBlock &rows, std::size_t n, int k) {
  const std::size_t width = static_cast<std::size_t>(k) + 2;
  BandedRowMatrix reduced(rows.size(), n, width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    reduced.set_row(i, i, rows[i]);
  DifferenceOperator op;
  op.order = k;
  op.full = prepend_identity(reduced, k);
  op.reduced = std::move(reduced);
  return op;
}

} // namespace

Dataset::Dataset(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size())
    throw DimensionError("x and y must have the same length");
  if (x_.empty())
    throw DimensionError("dataset must contain at least one point");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
      throw ParseError("non-finite value at row " + std::to_string(i + 1));
    if (i > 0 && !(x_[i] > x_[i - 1]))
      throw OrderingError("x must be strictly increasing (row " +
                          std::to_string(i + 1) + ")");
  }
}

Dataset Dataset::with_responses(std::vector<double> y) const {
  return Dataset(x_, std::move(y));
}

Dataset Dataset::with_scaled_grid(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw DomainError("grid scale factor must be positive");
  std::vector<double> x = x_;
  for (double &v : x)
    v *= factor;
  return Dataset(std::move(x), y_);
}

DifferenceOperator build_difference_matrix(std::size_t n, int k) {
  check_order(n, k);
  RowBlock rows = first_differences(n);
  for (int order = 1; order <= k; ++order)
    rows = difference_rows(rows);
  return pack(rows, n, k);
}

DifferenceOperator build_adjusted_difference_matrix(std::span<const double> x,
                                                    int k) {
  const std::size_t n = x.size();
  check_order(n, k);
  for (std::size_t i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1]))
      throw OrderingError("grid must be strictly increasing");

  // k = 0 uses the plain first difference; the spacing weights start at k = 1.
  RowBlock rows = first_differences(n);
  for (int order = 1; order <= k; ++order) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double w =
          static_cast<double>(order) / (x[i + static_cast<std::size_t>(order)] - x[i]);
      for (double &c : rows[i])
        c *= w;
    }
    rows = difference_rows(rows);
  }
  return pack(rows, n, k);
}

BandedSpd weighted_gram(const BandedRowMatrix &d, std::span<const double> w) {
  if (w.size() != d.rows())
    throw DimensionError("weighted_gram: one weight per operator row required");
  for (double wi : w)
    if (!(wi > 0.0) || !std::isfinite(wi))
      throw DomainError("weighted_gram: weights must be positive and finite");
  BandedSpd g(d.cols(), d.row_span());
  g.add_weighted_gram(d, w);
  return g;
}

BandedSpd weighted_gram(const DifferenceOperator &d,
                        std::span<const double> w) {
  return weighted_gram(d.full, w);
}

} // namespace bbtf
