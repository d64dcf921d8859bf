#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsebound/bounds.hpp"
#include "sparsebound/error.hpp"

namespace sparsebound {
namespace {

constexpr double kWeightFloor = 1e-12;

// Primal candidate for a dual point: w_k ∝ √c_k, floored and renormalised.
std::vector<double> weights_for(const std::vector<double>& c) {
  double s = 0.0;
  for (double ck : c) s += std::sqrt(ck);
  std::vector<double> w(c.size());
  double total = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    w[k] = std::max(std::sqrt(c[k]) / s, kWeightFloor);
    total += w[k];
  }
  for (double& wk : w) wk /= total;
  return w;
}

std::vector<double> row_values(const DenseMatrix& v, const std::vector<double>& w) {
  std::vector<double> g(v.rows(), 0.0);
  for (std::size_t j = 0; j < v.rows(); ++j) {
    const auto row = v.row(j);
    for (std::size_t k = 0; k < row.size(); ++k) g[j] += row[k] / w[k];
  }
  return g;
}

// Sign of d/dγ of (Σ_k √(c_k + γ δ_k))², up to the positive factor Σ√c.
double direction_slope(const std::vector<double>& c, const std::vector<double>& delta,
                       double gamma) {
  double d = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (delta[k] == 0.0) continue;
    const double ck = std::max(c[k] + gamma * delta[k], 1e-300);
    d += delta[k] / std::sqrt(ck);
  }
  return d;
}

}  // namespace

DiagWeights::DiagWeights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw ParameterOutOfRange("diagonal weights must be nonempty");
  double total = 0.0;
  for (double wk : w_) {
    if (!(wk > 0.0) || !std::isfinite(wk))
      throw ParameterOutOfRange("diagonal weights must be finite and > 0");
    total += wk;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw ParameterOutOfRange("diagonal weights must sum to 1 (trace(D^2) = 1)");
}

DiagWeights DiagWeights::uniform(std::size_t n) {
  if (n == 0) throw ParameterOutOfRange("diagonal weights must be nonempty");
  return DiagWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::vector<double> DiagWeights::d() const {
  std::vector<double> out(w_.size());
  std::transform(w_.begin(), w_.end(), out.begin(), [](double x) { return std::sqrt(x); });
  return out;
}

double diag_objective(const DenseMatrix& variance, const DiagWeights& weights) {
  if (weights.size() != variance.cols())
    throw ParameterOutOfRange("one diagonal weight per column is required");
  const auto g = row_values(variance, weights.w());
  return *std::max_element(g.begin(), g.end());
}

// Pairwise Frank-Wolfe on the dual
//   max over λ in the row simplex of h(λ) = (Σ_k √c_k)²,  c = Σ_j λ_j v_j,
// which equals min over w of Σ_k c_k / w_k. Every h(λ) is a lower bound on
// the optimum and w ∝ √c is the matching primal point, so the gap is exact.
DiagOptimum optimize_diag(const DenseMatrix& variance, double tol, std::size_t max_iterations) {
  if (!(tol > 0.0)) throw ParameterOutOfRange("optimize_diag: tol must be > 0");
  if (!variance.all_nonnegative()) throw ParameterOutOfRange("variances must be >= 0");
  if (variance.max_abs() == 0.0) throw AllZeroVariances();

  const std::size_t m = variance.rows();
  const std::size_t n = variance.cols();

  std::vector<double> best_w(n, 1.0 / static_cast<double>(n));
  double best_f = 0.0;
  double best_h = 0.0;

  // Warm start at the row that is worst under uniform weights.
  std::vector<double> lambda(m, 0.0);
  {
    const auto g = row_values(variance, best_w);
    const auto top = std::max_element(g.begin(), g.end());
    best_f = *top;
    lambda[static_cast<std::size_t>(top - g.begin())] = 1.0;
  }

  std::vector<double> c(n);
  std::vector<double> delta(n);
  std::size_t it = 0;
  bool certified = false;
  for (; it < max_iterations; ++it) {
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      if (lambda[j] == 0.0) continue;
      const auto row = variance.row(j);
      for (std::size_t k = 0; k < n; ++k) c[k] += lambda[j] * row[k];
    }
    double s = 0.0;
    for (double ck : c) s += std::sqrt(ck);
    best_h = std::max(best_h, s * s);

    const auto w = weights_for(c);
    const auto g = row_values(variance, w);
    const double f = *std::max_element(g.begin(), g.end());
    if (f < best_f) {
      best_f = f;
      best_w = w;
    }
    if (best_f <= (1.0 + tol) * best_h) {
      certified = true;
      break;
    }

    std::size_t toward = 0;
    std::size_t away = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (g[j] > g[toward]) toward = j;
      if (lambda[j] > 0.0 && (away == m || g[j] < g[away])) away = j;
    }
    if (toward == away) break;

    const auto vs = variance.row(toward);
    const auto va = variance.row(away);
    for (std::size_t k = 0; k < n; ++k) delta[k] = vs[k] - va[k];
    const double gamma_max = lambda[away];
    double step = gamma_max;
    if (direction_slope(c, delta, gamma_max) < 0.0) {
      double lo = 0.0;
      double hi = gamma_max;
      for (int b = 0; b < 64; ++b) {
        const double mid = 0.5 * (lo + hi);
        if (direction_slope(c, delta, mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      step = 0.5 * (lo + hi);
    }
    if (step <= 0.0) break;
    lambda[toward] += step;
    lambda[away] = step == gamma_max ? 0.0 : lambda[away] - step;
  }

  return DiagOptimum{DiagWeights(std::move(best_w)), best_f, best_h, it, certified};
}

}  // namespace sparsebound
