#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparsebound/matrix.hpp"

namespace sparsebound {

/// Largest dimension enumerated by the exhaustive sign/subset searches.
inline constexpr std::size_t kDefaultEnumerationCap = 24;
inline constexpr double kDefaultSpectralTol = 1e-10;

/// ‖A‖∞→1 = max over x ∈ {±1}^n of ‖Ax‖₁, exact.
///
/// Uses ‖A‖∞→1 = ‖Aᵀ‖∞→1 to enumerate the smaller dimension in Gray-code
/// order. Matrices whose entries all share one sign are evaluated in closed
/// form (x = 1 is optimal) and never enumerate. Throws DimensionTooLarge when
/// enumeration is needed and min(m, n) > cap.
double norm_inf_to_1(const DenseMatrix& a, std::size_t cap = kDefaultEnumerationCap);

/// ‖A‖∞→2 = max over y ∈ {±1}^n of ‖Ay‖₂, exact. Only the column dimension
/// can be enumerated; throws DimensionTooLarge when n > cap (same-sign
/// matrices excepted, as above).
double norm_inf_to_2(const DenseMatrix& a, std::size_t cap = kDefaultEnumerationCap);

/// Largest singular value to relative accuracy `tol` by power iteration on the
/// Gram matrix of the smaller side. Throws NonConvergence when the iteration
/// cap 10·d·ln(1/tol) is exhausted.
double norm_spectral(const DenseMatrix& a, double tol = kDefaultSpectralTol);

double norm_frobenius(const DenseMatrix& a);

/// Sum of the ℓ₂ norms of the columns.
double norm_col(const DenseMatrix& a);

/// Largest row ℓ₂ norm. With weights d (one per column, strictly positive)
/// column k is divided by d_k first, i.e. the norm of A·D⁻¹.
double norm_two_to_inf(const DenseMatrix& a, std::span<const double> weights = {});

enum class CutVariant {
  /// max over S ⊆ rows, T ⊆ cols of |Σ_{j∈S,k∈T} a_jk|
  General,
  /// max over S ⊆ V of |Σ_{j∈S,k∉S} a_jk|, square matrices only
  Graph,
};

/// Cut norm by exhaustive subset enumeration. The general variant enumerates
/// subsets of the smaller dimension and picks the best partner subset in
/// closed form; the graph variant enumerates vertex subsets.
double cut_norm_brute(const DenseMatrix& a, CutVariant variant = CutVariant::General,
                      std::size_t cap = kDefaultEnumerationCap);

enum class NormTag { InfTo1, InfTo2, Spectral, Frobenius, ColNorm, TwoToInf, WeightedTwoToInf };

/// Which norm to measure. Weighted 2→∞ carries its diagonal D as weights
/// d_k > 0 with Σ d_k² = 1.
class NormKind {
 public:
  NormKind(NormTag tag);  // NOLINT(google-explicit-constructor)
  static NormKind weighted_two_to_inf(std::vector<double> weights);

  NormTag tag() const noexcept { return tag_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Stable identifier: inf_to_1, inf_to_2, spectral, frobenius, col,
  /// two_to_inf, weighted_two_to_inf.
  std::string name() const;

  /// Accepts the stable identifiers and the short forms inf1, inf2, fro,
  /// 2inf. Throws ParameterOutOfRange otherwise.
  static NormKind parse(std::string_view text);

  friend bool operator==(const NormKind&, const NormKind&) = default;

 private:
  NormKind(NormTag tag, std::vector<double> weights);

  NormTag tag_;
  std::vector<double> weights_;
};

double evaluate_norm(const NormKind& kind, const DenseMatrix& a,
                     std::size_t cap = kDefaultEnumerationCap);

}  // namespace sparsebound
