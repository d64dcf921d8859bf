#include "sparsebound/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sparsebound/error.hpp"

namespace sparsebound {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanAndError mean_and_error(std::span<const double> values) {
  if (values.empty()) throw ParameterOutOfRange("mean of an empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  if (values.size() == 1) return {mean, 0.0};
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(),
                 [mean](double v) { return (v - mean) * (v - mean); });
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

double quantile_sorted(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw ParameterOutOfRange("quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw ParameterOutOfRange("quantile level outside [0, 1]");
  const double h = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ParameterOutOfRange("slope fit needs at least two paired points");
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ParameterOutOfRange("slope fit needs distinct x values");
  return sxy / sxx;
}

TrialStats summarize(const NormKind& norm, const std::vector<double>& per_trial,
                     bool keep_per_trial) {
  TrialStats s;
  s.norm = norm;
  s.trials = per_trial.size();
  const auto me = mean_and_error(per_trial);
  s.mean = me.mean;
  s.std_err = me.std_err;
  std::vector<double> sorted = per_trial;
  std::sort(sorted.begin(), sorted.end());
  for (double level : kQuantileLevels) s.quantiles[level] = quantile_sorted(sorted, level);
  if (keep_per_trial) s.per_trial = per_trial;
  return s;
}

}  // namespace sparsebound
