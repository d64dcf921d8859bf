#include "sparsebound/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsebound/error.hpp"

namespace sparsebound {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) {
    throw ParameterOutOfRange("matrix dimensions must be at least 1x1");
  }
  if (entries_.size() != rows_ * cols_) {
    throw ParameterOutOfRange("matrix has " + std::to_string(entries_.size()) +
                              " entries, expected " + std::to_string(rows_ * cols_));
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i])) {
      throw ParameterOutOfRange("non-finite matrix entry at (" + std::to_string(i / cols_) +
                                ", " + std::to_string(i % cols_) + ")");
    }
  }
}

DenseMatrix DenseMatrix::filled(std::size_t rows, std::size_t cols, double value) {
  return DenseMatrix(rows, cols, std::vector<double>(rows * cols, value));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return DenseMatrix(n, n, std::move(e));
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = diag[i];
  return DenseMatrix(n, n, std::move(e));
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  std::vector<double> e;
  e.reserve(m * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw ParameterOutOfRange("ragged row list");
    e.insert(e.end(), r.begin(), r.end());
  }
  return DenseMatrix(m, n, std::move(e));
}

double DenseMatrix::max_abs() const noexcept {
  double b = 0.0;
  for (double v : entries_) b = std::max(b, std::abs(v));
  return b;
}

bool DenseMatrix::all_nonnegative() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v >= 0.0; });
}

bool DenseMatrix::all_nonpositive() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v <= 0.0; });
}

DenseMatrix DenseMatrix::transposed() const {
  std::vector<double> t(entries_.size());
  for (std::size_t j = 0; j < rows_; ++j)
    for (std::size_t k = 0; k < cols_; ++k) t[k * rows_ + j] = entries_[j * cols_ + k];
  return DenseMatrix(cols_, rows_, std::move(t));
}

DenseMatrix DenseMatrix::scaled(double c) const {
  std::vector<double> s(entries_);
  for (double& v : s) v *= c;
  return DenseMatrix(rows_, cols_, std::move(s));
}

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ParameterOutOfRange("matrix shapes differ");
  }
}

}  // namespace

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  std::vector<double> d(a.entries_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.entries_[i] - b.entries_[i];
  return DenseMatrix(a.rows_, a.cols_, std::move(d));
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  std::vector<double> d(a.entries_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.entries_[i] + b.entries_[i];
  return DenseMatrix(a.rows_, a.cols_, std::move(d));
}

SignVector::SignVector(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw ParameterOutOfRange("sign vector must have at least one component");
  for (auto s : signs_) {
    if (s != 1 && s != -1) throw ParameterOutOfRange("sign vector components must be +1 or -1");
  }
}

SignVector SignVector::ones(std::size_t dims) {
  return SignVector(std::vector<std::int8_t>(dims, 1));
}

}  // namespace sparsebound
