#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sparsebound/matrix.hpp"

namespace sparsebound {

struct Atom {
  double value;
  double prob;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite discrete law of one entry X_jk. Probabilities lie in (0, 1] and
/// sum to one within 1e-12.
class EntryDistribution {
 public:
  explicit EntryDistribution(std::vector<Atom> atoms);

  static EntryDistribution point_mass(double value);
  /// `value` with probability `prob`, zero otherwise.
  static EntryDistribution scaled_bernoulli(double value, double prob);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  bool is_point_mass() const noexcept { return atoms_.size() == 1; }

  double mean() const noexcept;
  /// Σ_i p_i (v_i - about)^order
  double central_moment(int order, double about) const noexcept;
  double nonzero_probability() const noexcept;
  double max_abs() const noexcept;

  /// Inverse-CDF draw for u in [0, 1).
  double draw(double u) const noexcept;

  friend bool operator==(const EntryDistribution&, const EntryDistribution&) = default;

 private:
  std::vector<Atom> atoms_;
};

// The schemes. Optional parameters are filled in from the target at bind
// time: b defaults to max|a_jk| and n to the column count.

/// X_jk ~ (a_jk / p) Bern(p), 0 < p ≤ 1.
struct UniformBernoulli {
  double p;
};
/// X_jk = ±b with P(+b) = 1/2 + a_jk/(2b); requires b ≥ max|a_jk|.
struct QuantizeAM {
  std::optional<double> b;
};
/// X_jk ~ (a_jk/p_jk) Bern(p_jk) with
/// p_jk = max{p(a/b)², sqrt(p(a/b)² (8 ln n)⁴ / n)} clamped to 1.
struct NonuniformAM {
  double p;
  std::optional<double> b;
  std::optional<std::size_t> n;
};
/// X_jk ~ (a_jk/p_jk) Bern(p_jk) with p_jk = p a²/(p a² + b²); zeros stay zero.
struct ModifiedNonuniform {
  double p;
  std::optional<double> b;
};
/// Entries with |a| ≤ δ/√n become sgn(a) (δ/√n) Bern(|a|√n/δ); larger entries
/// pass through. n must equal the target's column count.
struct QuantizeSparsifyAHK {
  double delta;
  std::optional<std::size_t> n;
};
/// Explicit per-entry table, row-major.
struct CustomTable {
  std::size_t rows;
  std::size_t cols;
  std::vector<EntryDistribution> entries;
};

using Scheme = std::variant<UniformBernoulli, QuantizeAM, NonuniformAM, ModifiedNonuniform,
                            QuantizeSparsifyAHK, CustomTable>;

std::string scheme_kind(const Scheme& s);

/// `kind:key=val,key=val` form, e.g. "bernoulli:p=0.25" or "quantize-am:b=2".
/// Custom tables cannot be written this way.
std::string format_scheme(const Scheme& s);
Scheme parse_scheme(std::string_view text);

/// A scheme resolved against a particular target matrix.
class BoundScheme {
 public:
  const DenseMatrix& target() const noexcept { return target_; }
  /// Scheme with all optional parameters filled in.
  const Scheme& scheme() const noexcept { return scheme_; }
  std::size_t rows() const noexcept { return target_.rows(); }
  std::size_t cols() const noexcept { return target_.cols(); }
  const EntryDistribution& entry(std::size_t j, std::size_t k) const noexcept {
    return table_[j * target_.cols() + k];
  }
  const std::vector<EntryDistribution>& table() const noexcept { return table_; }

 private:
  friend BoundScheme bind(const Scheme& scheme, const DenseMatrix& a);
  BoundScheme(DenseMatrix target, Scheme scheme, std::vector<EntryDistribution> table)
      : target_(std::move(target)), scheme_(std::move(scheme)), table_(std::move(table)) {}

  DenseMatrix target_;
  Scheme scheme_;
  std::vector<EntryDistribution> table_;
};

/// Throws ParameterOutOfRange naming the violated constraint.
BoundScheme bind(const Scheme& scheme, const DenseMatrix& a);

/// Per-entry variance and fourth central moment plus the almost-sure bound D
/// (|X_jk| ≤ D/2).
class MomentProfile {
 public:
  /// Throws ParameterOutOfRange if shapes differ, a variance is negative, or
  /// a fourth moment is below the squared variance.
  MomentProfile(DenseMatrix variance, DenseMatrix fourth_central, double sup_bound);

  /// Profile with fourth moments set to squared variances (the smallest
  /// value consistent with them) and no almost-sure bound.
  static MomentProfile from_variances(DenseMatrix variance);

  std::size_t rows() const noexcept { return variance_.rows(); }
  std::size_t cols() const noexcept { return variance_.cols(); }
  const DenseMatrix& variance() const noexcept { return variance_; }
  const DenseMatrix& fourth_central() const noexcept { return fourth_; }
  double sup_bound() const noexcept { return sup_bound_; }

  const std::vector<double>& row_variance_sums() const noexcept { return row_var_; }
  const std::vector<double>& col_variance_sums() const noexcept { return col_var_; }
  double total_variance() const noexcept { return total_var_; }
  double total_fourth() const noexcept { return total_fourth_; }

 private:
  DenseMatrix variance_;
  DenseMatrix fourth_;
  double sup_bound_;
  std::vector<double> row_var_;
  std::vector<double> col_var_;
  double total_var_ = 0.0;
  double total_fourth_ = 0.0;
};

/// Exact moments from the atoms; sup_bound = 2 max|atom|.
MomentProfile moments(const BoundScheme& bs);

/// One realisation of X, a pure function of (seed, trial).
DenseMatrix sample(const BoundScheme& bs, std::uint64_t seed, std::uint64_t trial);

/// Σ_jk P(X_jk ≠ 0).
double expected_nnz(const BoundScheme& bs);

}  // namespace sparsebound
