#include "sparsebound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsebound/error.hpp"
#include "sparsebound/parallel.hpp"
#include "sparsebound/stats.hpp"

namespace sparsebound {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterOutOfRange(std::string(what) + " must be > 0");
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || std::isnan(v)) throw ParameterOutOfRange(std::string(what) + " must be >= 0");
}

}  // namespace

std::string to_string(ConstantMode mode) {
  return mode == ConstantMode::Explicit ? "explicit" : "modulo_c";
}

ConstantMode parse_constant_mode(std::string_view text) {
  if (text == "explicit") return ConstantMode::Explicit;
  if (text == "modulo_c") return ConstantMode::ModuloC;
  throw ParameterOutOfRange("unknown constant mode '" + std::string(text) + "'");
}

double BoundReport::recomputed_value() const {
  double s = 0.0;
  for (const auto& [name, v] : terms) s += v;
  return scale * s;
}

BoundReport inf1_bound(const MomentProfile& mp) {
  double col = 0.0;
  for (double v : mp.col_variance_sums()) col += std::sqrt(v);
  double row = 0.0;
  for (double v : mp.row_variance_sums()) row += std::sqrt(v);
  BoundReport r;
  r.norm = NormTag::InfTo1;
  r.terms = {{"col_term", col}, {"row_term", row}};
  r.scale = 2.0;
  r.value = r.recomputed_value();
  return r;
}

BoundReport inf2_bound(const MomentProfile& mp, const std::optional<DiagWeights>& weights) {
  BoundReport r;
  r.norm = NormTag::InfTo2;
  r.scale = 2.0;
  const double fro = std::sqrt(mp.total_variance());
  double weighted = 0.0;
  if (weights) {
    weighted = std::sqrt(static_cast<double>(mp.rows()) * diag_objective(mp.variance(), *weights));
    r.weights = weights->w();
  } else if (mp.total_variance() > 0.0) {
    const auto opt = optimize_diag(mp.variance());
    weighted = std::sqrt(static_cast<double>(mp.rows()) * opt.objective);
    r.weights = opt.weights.w();
  }
  r.terms = {{"frobenius_term", fro}, {"weighted_2inf_term", weighted}};
  r.value = r.recomputed_value();
  return r;
}

BoundReport spectral_bound(const MomentProfile& mp) {
  const auto& rows = mp.row_variance_sums();
  const auto& cols = mp.col_variance_sums();
  BoundReport r;
  r.norm = NormTag::Spectral;
  r.constant_mode = ConstantMode::ModuloC;
  r.scale = 1.0;
  r.terms = {{"row_term", std::sqrt(*std::max_element(rows.begin(), rows.end()))},
             {"col_term", std::sqrt(*std::max_element(cols.begin(), cols.end()))},
             {"fourth_root_term", std::pow(mp.total_fourth(), 0.25)}};
  r.value = r.recomputed_value();
  return r;
}

double tail_exponent_s(double p) {
  if (!(p >= 1.0)) throw ParameterOutOfRange("tail bound needs p >= 1");
  if (std::isinf(p)) return 0.0;
  // q = p/(p−1), so 1 − 2/q = (2 − p)/p.
  return std::max(0.0, (2.0 - p) / p);
}

double tail_infp(double p, std::size_t m, std::size_t n, double sup_bound, double t) {
  const double s = tail_exponent_s(p);
  require_positive(sup_bound, "D");
  require_nonnegative(t, "t");
  if (m == 0 || n == 0) throw ParameterOutOfRange("dimensions must be >= 1");
  const double scale = 4.0 * sup_bound * sup_bound * static_cast<double>(n) *
                       std::pow(static_cast<double>(m), s);
  return std::exp(-t * t / scale);
}

double tail_infp_relative(double p, std::size_t m, std::size_t n, double sup_bound, double delta,
                          double mean) {
  require_nonnegative(delta, "delta");
  require_nonnegative(mean, "mean");
  return tail_infp(p, m, n, sup_bound, delta * mean);
}

double tail_spectral(double sup_bound, double t) {
  require_positive(sup_bound, "D");
  require_nonnegative(t, "t");
  if (std::isinf(t)) return 0.0;
  return std::exp(-t * t / (4.0 * sup_bound * sup_bound));
}

double tail_spectral_relative(double sup_bound, double delta, double mean) {
  require_nonnegative(delta, "delta");
  require_nonnegative(mean, "mean");
  return tail_spectral(sup_bound, delta * mean);
}

Estimate symmetrized_infp_estimate(const BoundScheme& bs, int p, std::size_t trials,
                                   std::uint64_t seed) {
  if (p != 1 && p != 2) throw ParameterOutOfRange("symmetrized estimate supports p = 1 or 2");
  if (trials == 0) throw ParameterOutOfRange("trials must be >= 1");

  std::vector<double> d;
  if (p == 2) {
    const auto mp = moments(bs);
    if (mp.total_variance() == 0.0) return {0.0, 0.0};
    d = optimize_diag(mp.variance()).weights.d();
  }

  std::vector<double> values(trials);
  parallel_for(trials, [&](std::size_t t) {
    const DenseMatrix z = sample(bs, seed, t) - bs.target();
    if (p == 1) {
      values[t] = 2.0 * (norm_col(z) + norm_col(z.transposed()));
    } else {
      values[t] = 2.0 * norm_frobenius(z) + 2.0 * norm_two_to_inf(z, d);
    }
  });
  const auto me = mean_and_error(values);
  return {me.mean, me.std_err};
}

}  // namespace sparsebound
