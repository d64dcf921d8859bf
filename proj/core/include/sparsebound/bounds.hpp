#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsebound/matrix.hpp"
#include "sparsebound/norms.hpp"
#include "sparsebound/schemes.hpp"

namespace sparsebound {

enum class ConstantMode {
  Explicit,
  /// Value omits an unknown universal constant C.
  ModuloC,
};

std::string to_string(ConstantMode mode);
ConstantMode parse_constant_mode(std::string_view text);

/// An evaluated error bound with its breakdown. value == scale · Σ terms.
struct BoundReport {
  NormKind norm = NormTag::InfTo1;
  double value = 0.0;
  std::map<std::string, double> terms;
  ConstantMode constant_mode = ConstantMode::Explicit;
  double scale = 1.0;
  /// Diagonal weights w_k = d_k² used by the ∞→2 bound, empty otherwise.
  std::vector<double> weights;

  double recomputed_value() const;

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// Weights w_k = d_k² of a positive diagonal D with trace(D²) = 1.
class DiagWeights {
 public:
  /// Throws ParameterOutOfRange unless every w_k > 0 and |Σ w_k − 1| ≤ 1e-10.
  explicit DiagWeights(std::vector<double> w);
  static DiagWeights uniform(std::size_t n);

  const std::vector<double>& w() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  /// d_k = √w_k
  std::vector<double> d() const;

  friend bool operator==(const DiagWeights&, const DiagWeights&) = default;

 private:
  std::vector<double> w_;
};

/// max_j Σ_k v_jk / w_k
double diag_objective(const DenseMatrix& variance, const DiagWeights& weights);

struct DiagOptimum {
  DiagWeights weights;
  double objective;
  /// Certified lower bound on the optimum over the simplex.
  double lower_bound;
  std::size_t iterations;
  bool certified;
};

inline constexpr double kDefaultDiagTol = 1e-6;
inline constexpr std::size_t kDefaultDiagIterations = 100000;

/// Minimises max_j Σ_k v_jk / w_k over the open simplex. Stops once the
/// objective is within (1 + tol) of a dual lower bound. Columns whose
/// variances are all zero get the weight floor 1e-12 before renormalising.
/// Throws AllZeroVariances if no variance is positive.
DiagOptimum optimize_diag(const DenseMatrix& variance, double tol = kDefaultDiagTol,
                          std::size_t max_iterations = kDefaultDiagIterations);

/// 2(Σ_k √(Σ_j Var) + Σ_j √(Σ_k Var)); terms col_term, row_term.
BoundReport inf1_bound(const MomentProfile& mp);

/// 2√(Σ Var) + 2√m · √(max_j Σ_k Var/w_k); terms frobenius_term,
/// weighted_2inf_term (the latter includes the √m). Weights are optimised
/// when not supplied; an all-zero profile gives 0.
BoundReport inf2_bound(const MomentProfile& mp, const std::optional<DiagWeights>& weights = {});

/// max_j √(Σ_k Var) + max_k √(Σ_j Var) + (Σ E(X−a)⁴)^{1/4}, modulo C.
BoundReport spectral_bound(const MomentProfile& mp);

/// The exponent s = max{0, 1 − 2/q} with q conjugate to p ≥ 1.
double tail_exponent_s(double p);

/// P(‖A−X‖∞→p > E‖A−X‖∞→p + t) ≤ exp(−t²/(4D²·n·m^s)). Requires p ≥ 1,
/// D > 0 and t ≥ 0.
double tail_infp(double p, std::size_t m, std::size_t n, double sup_bound, double t);
/// Relative form with t = δ·mean.
double tail_infp_relative(double p, std::size_t m, std::size_t n, double sup_bound, double delta,
                          double mean);

/// exp(−t²/(4D²))
double tail_spectral(double sup_bound, double t);
double tail_spectral_relative(double sup_bound, double delta, double mean);

struct Estimate {
  double mean;
  double std_err;
};

/// Monte Carlo estimate of the symmetrised right-hand side for Z = X − A:
///   p = 1: 2(colnorm Z + colnorm Zᵀ)
///   p = 2: 2‖Z‖_F + 2‖Z D⁻¹‖_{2→∞} with D optimised on the variance table.
/// Draws X with the same (seed, trial) pairs as sample().
Estimate symmetrized_infp_estimate(const BoundScheme& bs, int p, std::size_t trials,
                                   std::uint64_t seed);

}  // namespace sparsebound
