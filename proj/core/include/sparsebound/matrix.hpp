#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace sparsebound {

/// Real m×n matrix stored row-major. Entries are finite and both dimensions
/// are at least one; the value is immutable once constructed.
class DenseMatrix {
 public:
  /// Throws ParameterOutOfRange on a zero dimension, a size mismatch, or a
  /// non-finite entry.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix filled(std::size_t rows, std::size_t cols, double value);
  static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return filled(rows, cols, 0.0); }
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }

  double operator()(std::size_t j, std::size_t k) const noexcept { return entries_[j * cols_ + k]; }
  std::span<const double> row(std::size_t j) const noexcept {
    return {entries_.data() + j * cols_, cols_};
  }
  std::span<const double> entries() const noexcept { return entries_; }

  double max_abs() const noexcept;
  bool all_nonnegative() const noexcept;
  bool all_nonpositive() const noexcept;

  DenseMatrix transposed() const;
  DenseMatrix scaled(double c) const;

  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

/// Vector with every component exactly +1 or -1.
class SignVector {
 public:
  explicit SignVector(std::vector<std::int8_t> signs);
  static SignVector ones(std::size_t dims);

  std::size_t dims() const noexcept { return signs_.size(); }
  int operator[](std::size_t i) const noexcept { return signs_[i]; }
  std::span<const std::int8_t> signs() const noexcept { return signs_; }

  friend bool operator==(const SignVector&, const SignVector&) = default;

 private:
  std::vector<std::int8_t> signs_;
};

}  // namespace sparsebound
