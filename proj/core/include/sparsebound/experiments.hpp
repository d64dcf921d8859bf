#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsebound/bounds.hpp"
#include "sparsebound/matrix.hpp"
#include "sparsebound/norms.hpp"
#include "sparsebound/schemes.hpp"
#include "sparsebound/stats.hpp"

namespace sparsebound {

enum class Pattern {
  Ones,
  Zeros,
  /// Independent uniform entries in [1, 2).
  Uniform12,
  /// 1 where j + k is even, 1/4 elsewhere.
  TwoScale,
};

std::string to_string(Pattern p);
Pattern parse_pattern(std::string_view text);

/// Where the target matrix comes from: a named pattern of the given shape,
/// or an explicit matrix.
struct MatrixSource {
  Pattern pattern = Pattern::Ones;
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::optional<DenseMatrix> matrix;

  /// "ones:8x8", "two-scale:4x16", "explicit:3x5", ...
  std::string label() const;
};

/// Builds the target. Random patterns draw from the MatrixSource stream of
/// `seed`.
DenseMatrix generate(const MatrixSource& source, std::uint64_t seed);

struct ExperimentConfig {
  MatrixSource source;
  Scheme scheme = UniformBernoulli{1.0};
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::vector<NormKind> norms;
  bool keep_per_trial = false;
};

/// errors[i][t] = ‖A − X_t‖ in norms[i], X_t = sample(bs, seed, t).
std::vector<std::vector<double>> realized_errors(const BoundScheme& bs,
                                                 std::span<const NormKind> norms,
                                                 std::size_t trials, std::uint64_t seed,
                                                 std::size_t cap = kDefaultEnumerationCap);

/// One TrialStats per requested norm, identical for any thread count.
std::vector<TrialStats> run_trials(const ExperimentConfig& cfg);

struct TailRow {
  NormKind norm = NormTag::InfTo1;
  double mean = 0.0;
  double t = 0.0;
  /// Fraction of trials with error > mean + t.
  double empirical = 0.0;
  double bound = 1.0;
  /// Three binomial standard errors at the bound.
  double slack = 0.0;
  bool violation = false;
};

struct TailTable {
  double sup_bound = 0.0;
  std::size_t trials = 0;
  std::vector<TailRow> rows;

  std::size_t violations() const;
};

/// t = c · (2D √(n m^s)) for c on this grid; the bound is then exp(−c²).
inline constexpr std::array<double, 8> kNaturalTailGrid = {0.25, 0.5, 0.75, 1.0,
                                                           1.25, 1.5, 1.75, 2.0};

/// 2D√(n m^s) for ∞→1 / ∞→2, 2D for the spectral norm.
double natural_tail_scale(NormTag norm, std::size_t m, std::size_t n, double sup_bound);

/// Empirical exceedance P̂(W > mean + t) against the tail bound for every
/// norm in cfg (∞→1, ∞→2 and spectral only). An empty grid means
/// kNaturalTailGrid scaled per norm. Throws ParameterOutOfRange if the scheme
/// is deterministic (D = 0) or a norm has no tail bound.
TailTable verify_tails(const ExperimentConfig& cfg, std::span<const double> t_grid = {});

struct Inf1GrowthRow {
  std::size_t m = 0;
  std::size_t cols = 0;
  double mean = 0.0;
  double std_err = 0.0;
  double min_error = 0.0;
  /// m^{5/4}/√2
  double lower_bound = 0.0;
  /// The ∞→1 bound, 2(m + m^{5/4}).
  double upper_bound = 0.0;
};

struct Inf1GrowthReport {
  std::vector<Inf1GrowthRow> rows;
  /// Least-squares slope of log mean against log m.
  double slope = 0.0;
};

/// m × √m all-ones targets with X_jk ~ 2·Bern(1/2). Each m must be a perfect
/// square.
Inf1GrowthReport optimality_inf1(std::span<const std::size_t> m_list, std::size_t trials,
                                 std::uint64_t seed);

struct SingleColumnRow {
  std::size_t m = 0;
  std::size_t cols = 0;
  /// max over trials of |‖Z‖∞→2 − √m|
  double max_inf2_deviation = 0.0;
  double mean_inf2 = 0.0;
  double mean_frobenius = 0.0;
  /// E‖Z D⁻¹‖_{2→∞} at the optimised D.
  double weighted_value = 0.0;
};

struct FullRademacherRow {
  std::size_t n = 0;
  std::size_t rows = 0;
  double min_inf2 = 0.0;
  double mean_inf2 = 0.0;
  double mean_frobenius = 0.0;
  /// n^{3/4}
  double frobenius_reference = 0.0;
  /// E‖Z D⁻¹‖_{2→∞} at the optimised D.
  double weighted_value = 0.0;
};

struct Inf2OptimalityReport {
  std::vector<SingleColumnRow> single_column;
  std::vector<FullRademacherRow> full;
};

/// For each s in the list (a perfect square): the s × √s matrix whose first
/// column is Rademacher and the rest zero, and the √s × s Rademacher matrix.
/// The second enumerates s columns, so s must not exceed the enumeration cap.
Inf2OptimalityReport optimality_inf2(std::span<const std::size_t> sizes, std::size_t trials,
                                     std::uint64_t seed);

struct SpectralRatioRow {
  std::string label;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double mean_error = 0.0;
  double std_err = 0.0;
  double bound_sans_c = 0.0;
  /// mean_error / bound_sans_c
  double ratio = 0.0;
  double ratio_std_err = 0.0;
};

struct SpectralConstantReport {
  std::vector<SpectralRatioRow> rows;
  double max_ratio = 0.0;
  /// Configurations dropped because their bound is zero.
  std::size_t skipped = 0;
};

/// Empirical ratio of mean spectral error to the modulo-C bound for each
/// configuration. Throws ParameterOutOfRange on an empty corpus.
SpectralConstantReport estimate_spectral_constant(std::span<const ExperimentConfig> corpus);

/// p on the budget grid is 2^{−i/4}, i = 0 … kBudgetGridSteps.
inline constexpr int kBudgetGridSteps = 96;
double budget_grid_point(int i);

struct BudgetReport {
  NormKind norm = NormTag::InfTo1;
  double gamma = 0.0;
  double p = 1.0;
  int grid_index = 0;
  /// bound(p) / ‖A‖ at the returned p.
  double relative_bound = 0.0;
  double norm_a = 0.0;
  /// 1/(1 + nγ²)
  double reference_p = 1.0;
  double expected_nnz = 0.0;
  /// A has an entry ≤ 0, outside the regime the scaling reference assumes.
  bool regime_warning = false;
};

/// Smallest grid p for which the explicit bound of X ~ (a/p) Bern(p),
/// divided by ‖A‖, is at most gamma. norm is InfTo1 or InfTo2.
BudgetReport sparsity_budget(const DenseMatrix& a, double gamma, NormTag norm);

/// Closed-form ceiling the modulo-C spectral bound should respect, where
/// one is known for the scheme. N = max(m, n).
struct ClosedForm {
  std::string label;
  double value;
};
std::optional<ClosedForm> spectral_closed_form(const BoundScheme& bs);

struct ComparisonRow {
  std::string scheme;
  double bound_sans_c = 0.0;
  std::optional<ClosedForm> closed_form;
  double mean_error = 0.0;
  double std_err = 0.0;
  double expected_nnz = 0.0;
  double sup_bound = 0.0;
  /// P̂(W > 2·mean) against exp(−mean²/(4D²)), i.e. δ = 1.
  double tail_empirical = 0.0;
  double tail_bound = 1.0;
  bool tail_violation = false;
};

std::vector<ComparisonRow> scheme_comparison(const DenseMatrix& a, std::span<const Scheme> schemes,
                                             std::size_t trials, std::uint64_t seed);

struct KhintchineRow {
  std::vector<double> x;
  /// E|Σ ε_k x_k|
  double expectation = 0.0;
  double l2 = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
  /// False when the expectation was estimated by Monte Carlo (dim > 20).
  bool exact = true;
};

/// Exact expectation by enumerating all 2^dim sign patterns; dim ≤ 20.
KhintchineRow khintchine_exact(std::span<const double> x);

/// `count` integer vectors with entries in [−9, 9]; vector i has dimension
/// 1 + (i mod dim).
std::vector<KhintchineRow> khintchine_check(std::size_t dim, std::size_t count,
                                            std::uint64_t seed);

}  // namespace sparsebound
