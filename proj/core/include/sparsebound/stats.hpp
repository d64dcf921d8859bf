#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "sparsebound/norms.hpp"

namespace sparsebound {

/// Recursive pairwise summation; the result depends only on the order of
/// the input, never on how it was produced.
double pairwise_sum(std::span<const double> values);

/// Sample mean and standard error (sample std with n − 1, divided by √n;
/// zero for a single value).
struct MeanAndError {
  double mean;
  double std_err;
};
MeanAndError mean_and_error(std::span<const double> values);

/// Type-7 (linear interpolation) quantile of sorted data, level in [0, 1].
double quantile_sorted(std::span<const double> sorted, double level);

/// Least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

inline constexpr std::array<double, 5> kQuantileLevels = {0.05, 0.25, 0.5, 0.75, 0.95};

/// Summary of realised errors ‖A − X_i‖ for one norm.
struct TrialStats {
  NormKind norm = NormTag::InfTo1;
  std::size_t trials = 0;
  double mean = 0.0;
  double std_err = 0.0;
  std::map<double, double> quantiles;
  /// Indexed by trial; empty unless retained.
  std::vector<double> per_trial;
};

TrialStats summarize(const NormKind& norm, const std::vector<double>& per_trial,
                     bool keep_per_trial = false);

}  // namespace sparsebound
