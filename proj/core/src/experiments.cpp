#include "sparsebound/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "sparsebound/error.hpp"
#include "sparsebound/parallel.hpp"
#include "sparsebound/random.hpp"

namespace sparsebound {
namespace {

std::size_t exact_sqrt(std::size_t v, const char* what) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v))));
  if (r == 0 || r * r != v)
    throw ParameterOutOfRange(std::string(what) + " must be a positive perfect square, got " +
                              std::to_string(v));
  return r;
}

double tail_p(NormTag tag) {
  switch (tag) {
    case NormTag::InfTo1:
      return 1.0;
    case NormTag::InfTo2:
      return 2.0;
    default:
      throw ParameterOutOfRange("no tail bound for this norm");
  }
}

double exceedance(const std::vector<double>& errors, double level) {
  std::size_t hits = 0;
  for (double e : errors)
    if (e > level) ++hits;
  return static_cast<double>(hits) / static_cast<double>(errors.size());
}

double binomial_slack(double bound, std::size_t trials) {
  return 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
}

std::string scheme_label(const Scheme& s) {
  return std::holds_alternative<CustomTable>(s) ? std::string("custom") : format_scheme(s);
}

}  // namespace

std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::Ones:
      return "ones";
    case Pattern::Zeros:
      return "zeros";
    case Pattern::Uniform12:
      return "uniform12";
    case Pattern::TwoScale:
      return "two-scale";
  }
  return "?";
}

Pattern parse_pattern(std::string_view text) {
  for (Pattern p : {Pattern::Ones, Pattern::Zeros, Pattern::Uniform12, Pattern::TwoScale})
    if (text == to_string(p)) return p;
  throw ParameterOutOfRange("unknown matrix pattern '" + std::string(text) + "'");
}

std::string MatrixSource::label() const {
  if (matrix) return "explicit:" + std::to_string(matrix->rows()) + "x" + std::to_string(matrix->cols());
  return to_string(pattern) + ":" + std::to_string(rows) + "x" + std::to_string(cols);
}

DenseMatrix generate(const MatrixSource& source, std::uint64_t seed) {
  if (source.matrix) return *source.matrix;
  const std::size_t m = source.rows;
  const std::size_t n = source.cols;
  if (m == 0 || n == 0) throw ParameterOutOfRange("matrix source dimensions must be >= 1");
  std::vector<double> a(m * n);
  const CounterRng rng(seed, Stream::MatrixSource);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      double& v = a[j * n + k];
      switch (source.pattern) {
        case Pattern::Ones:
          v = 1.0;
          break;
        case Pattern::Zeros:
          v = 0.0;
          break;
        case Pattern::Uniform12:
          v = 1.0 + rng.uniform(0, j * n + k);
          break;
        case Pattern::TwoScale:
          v = (j + k) % 2 == 0 ? 1.0 : 0.25;
          break;
      }
    }
  }
  return DenseMatrix(m, n, std::move(a));
}

std::vector<std::vector<double>> realized_errors(const BoundScheme& bs,
                                                 std::span<const NormKind> norms,
                                                 std::size_t trials, std::uint64_t seed,
                                                 std::size_t cap) {
  if (trials == 0) throw ParameterOutOfRange("trials must be >= 1");
  std::vector<std::vector<double>> errors(norms.size(), std::vector<double>(trials));
  parallel_for(trials, [&](std::size_t t) {
    const DenseMatrix z = bs.target() - sample(bs, seed, t);
    for (std::size_t i = 0; i < norms.size(); ++i) errors[i][t] = evaluate_norm(norms[i], z, cap);
  });
  return errors;
}

std::vector<TrialStats> run_trials(const ExperimentConfig& cfg) {
  if (cfg.norms.empty()) throw ParameterOutOfRange("at least one norm is required");
  const auto bs = sparsebound::bind(cfg.scheme, generate(cfg.source, cfg.seed));
  const auto errors = realized_errors(bs, cfg.norms, cfg.trials, cfg.seed);
  std::vector<TrialStats> out;
  for (std::size_t i = 0; i < cfg.norms.size(); ++i)
    out.push_back(summarize(cfg.norms[i], errors[i], cfg.keep_per_trial));
  return out;
}

std::size_t TailTable::violations() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const TailRow& r) { return r.violation; }));
}

double natural_tail_scale(NormTag norm, std::size_t m, std::size_t n, double sup_bound) {
  if (norm == NormTag::Spectral) return 2.0 * sup_bound;
  const double s = tail_exponent_s(tail_p(norm));
  return 2.0 * sup_bound * std::sqrt(static_cast<double>(n) * std::pow(static_cast<double>(m), s));
}

TailTable verify_tails(const ExperimentConfig& cfg, std::span<const double> t_grid) {
  if (cfg.norms.empty()) throw ParameterOutOfRange("at least one norm is required");
  for (const auto& nk : cfg.norms)
    if (nk.tag() != NormTag::Spectral) tail_p(nk.tag());
  for (double t : t_grid)
    if (!(t >= 0.0)) throw ParameterOutOfRange("tail grid values must be >= 0");

  const auto bs = sparsebound::bind(cfg.scheme, generate(cfg.source, cfg.seed));
  const double d = moments(bs).sup_bound();
  if (!(d > 0.0)) throw ParameterOutOfRange("tail bounds need a positive almost-sure bound D");
  const std::size_t m = bs.rows();
  const std::size_t n = bs.cols();
  const auto errors = realized_errors(bs, cfg.norms, cfg.trials, cfg.seed);

  TailTable table;
  table.sup_bound = d;
  table.trials = cfg.trials;
  for (std::size_t i = 0; i < cfg.norms.size(); ++i) {
    const NormTag tag = cfg.norms[i].tag();
    const double mean = mean_and_error(errors[i]).mean;
    std::vector<double> grid(t_grid.begin(), t_grid.end());
    if (grid.empty()) {
      const double scale = natural_tail_scale(tag, m, n, d);
      for (double c : kNaturalTailGrid) grid.push_back(c * scale);
    }
    for (double t : grid) {
      TailRow row;
      row.norm = cfg.norms[i];
      row.mean = mean;
      row.t = t;
      row.empirical = exceedance(errors[i], mean + t);
      row.bound = tag == NormTag::Spectral ? tail_spectral(d, t) : tail_infp(tail_p(tag), m, n, d, t);
      row.slack = binomial_slack(row.bound, cfg.trials);
      row.violation = row.empirical > row.bound + row.slack;
      table.rows.push_back(row);
    }
  }
  return table;
}

Inf1GrowthReport optimality_inf1(std::span<const std::size_t> m_list, std::size_t trials,
                                 std::uint64_t seed) {
  if (m_list.size() < 2) throw ParameterOutOfRange("growth fit needs at least two sizes");
  Inf1GrowthReport report;
  std::vector<double> lx;
  std::vector<double> ly;
  const std::array<NormKind, 1> norms = {NormKind(NormTag::InfTo1)};
  for (std::size_t m : m_list) {
    const std::size_t cols = exact_sqrt(m, "m");
    const auto bs = sparsebound::bind(UniformBernoulli{0.5}, DenseMatrix::filled(m, cols, 1.0));
    const auto errors = realized_errors(bs, norms, trials, seed)[0];
    const auto me = mean_and_error(errors);
    Inf1GrowthRow row;
    row.m = m;
    row.cols = cols;
    row.mean = me.mean;
    row.std_err = me.std_err;
    row.min_error = *std::min_element(errors.begin(), errors.end());
    row.lower_bound = std::pow(static_cast<double>(m), 1.25) / std::sqrt(2.0);
    row.upper_bound = inf1_bound(moments(bs)).value;
    report.rows.push_back(row);
    lx.push_back(std::log(static_cast<double>(m)));
    ly.push_back(std::log(me.mean));
  }
  report.slope = ols_slope(lx, ly);
  return report;
}

Inf2OptimalityReport optimality_inf2(std::span<const std::size_t> sizes, std::size_t trials,
                                     std::uint64_t seed) {
  Inf2OptimalityReport report;
  for (std::size_t s : sizes) {
    const std::size_t r = exact_sqrt(s, "size");

    {
      const auto rademacher = EntryDistribution({{1.0, 0.5}, {-1.0, 0.5}});
      std::vector<EntryDistribution> table;
      for (std::size_t j = 0; j < s; ++j)
        for (std::size_t k = 0; k < r; ++k)
          table.push_back(k == 0 ? rademacher : EntryDistribution::point_mass(0.0));
      const auto bs = sparsebound::bind(CustomTable{s, r, std::move(table)}, DenseMatrix::zeros(s, r));
      const auto opt = optimize_diag(moments(bs).variance());
      const std::array<NormKind, 3> norms = {NormKind(NormTag::InfTo2),
                                             NormKind(NormTag::Frobenius),
                                             NormKind::weighted_two_to_inf(opt.weights.d())};
      const auto errors = realized_errors(bs, norms, trials, seed);
      SingleColumnRow row;
      row.m = s;
      row.cols = r;
      const double target = std::sqrt(static_cast<double>(s));
      for (double e : errors[0]) row.max_inf2_deviation = std::max(row.max_inf2_deviation, std::abs(e - target));
      row.mean_inf2 = mean_and_error(errors[0]).mean;
      row.mean_frobenius = mean_and_error(errors[1]).mean;
      row.weighted_value = mean_and_error(errors[2]).mean;
      report.single_column.push_back(row);
    }

    {
      const auto bs = sparsebound::bind(QuantizeAM{1.0}, DenseMatrix::zeros(r, s));
      const auto opt = optimize_diag(moments(bs).variance());
      const std::array<NormKind, 3> norms = {NormKind(NormTag::InfTo2),
                                             NormKind(NormTag::Frobenius),
                                             NormKind::weighted_two_to_inf(opt.weights.d())};
      const auto errors = realized_errors(bs, norms, trials, seed);
      FullRademacherRow row;
      row.n = s;
      row.rows = r;
      row.min_inf2 = *std::min_element(errors[0].begin(), errors[0].end());
      row.mean_inf2 = mean_and_error(errors[0]).mean;
      row.mean_frobenius = mean_and_error(errors[1]).mean;
      row.frobenius_reference = std::pow(static_cast<double>(s), 0.75);
      row.weighted_value = mean_and_error(errors[2]).mean;
      report.full.push_back(row);
    }
  }
  return report;
}

SpectralConstantReport estimate_spectral_constant(std::span<const ExperimentConfig> corpus) {
  if (corpus.empty()) throw ParameterOutOfRange("spectral constant needs a nonempty corpus");
  SpectralConstantReport report;
  const std::array<NormKind, 1> norms = {NormKind(NormTag::Spectral)};
  for (const auto& cfg : corpus) {
    const auto bs = sparsebound::bind(cfg.scheme, generate(cfg.source, cfg.seed));
    const double bound = spectral_bound(moments(bs)).value;
    if (bound == 0.0) {
      ++report.skipped;
      continue;
    }
    const auto me = mean_and_error(realized_errors(bs, norms, cfg.trials, cfg.seed)[0]);
    SpectralRatioRow row;
    row.label = cfg.source.label() + " " + scheme_label(cfg.scheme);
    row.rows = bs.rows();
    row.cols = bs.cols();
    row.mean_error = me.mean;
    row.std_err = me.std_err;
    row.bound_sans_c = bound;
    row.ratio = me.mean / bound;
    row.ratio_std_err = me.std_err / bound;
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    report.rows.push_back(std::move(row));
  }
  return report;
}

double budget_grid_point(int i) { return std::exp2(-static_cast<double>(i) / 4.0); }

BudgetReport sparsity_budget(const DenseMatrix& a, double gamma, NormTag norm) {
  if (!(gamma > 0.0)) throw ParameterOutOfRange("gamma must be > 0");
  if (norm != NormTag::InfTo1 && norm != NormTag::InfTo2)
    throw ParameterOutOfRange("sparsity budget supports the inf_to_1 and inf_to_2 norms");
  const double norm_a = norm == NormTag::InfTo1 ? norm_inf_to_1(a) : norm_inf_to_2(a);
  if (norm_a == 0.0) throw ParameterOutOfRange("sparsity budget needs a nonzero target");

  auto relative_bound = [&](double p) {
    const auto mp = moments(sparsebound::bind(UniformBernoulli{p}, a));
    return (norm == NormTag::InfTo1 ? inf1_bound(mp) : inf2_bound(mp)).value / norm_a;
  };

  BudgetReport r;
  r.norm = norm;
  r.gamma = gamma;
  r.norm_a = norm_a;
  const double n = static_cast<double>(a.cols());
  r.reference_p = 1.0 / (1.0 + n * gamma * gamma);
  r.regime_warning = !(std::all_of(a.entries().begin(), a.entries().end(),
                                   [](double v) { return v > 0.0; }));

  const double at_one = relative_bound(1.0);
  if (at_one > gamma) throw UnreachableTarget("even p = 1 misses the target relative error");
  r.p = 1.0;
  r.grid_index = 0;
  r.relative_bound = at_one;
  // The bound decreases in p, so the first miss ends the search.
  for (int i = 1; i <= kBudgetGridSteps; ++i) {
    const double p = budget_grid_point(i);
    const double rb = relative_bound(p);
    if (rb > gamma) break;
    r.p = p;
    r.grid_index = i;
    r.relative_bound = rb;
  }
  r.expected_nnz = expected_nnz(sparsebound::bind(UniformBernoulli{r.p}, a));
  return r;
}

std::optional<ClosedForm> spectral_closed_form(const BoundScheme& bs) {
  const double big_n = static_cast<double>(std::max(bs.rows(), bs.cols()));
  if (const auto* q = std::get_if<QuantizeAM>(&bs.scheme())) {
    return ClosedForm{"4 b sqrt(N)", 4.0 * *q->b * std::sqrt(big_n)};
  }
  if (const auto* s = std::get_if<ModifiedNonuniform>(&bs.scheme())) {
    double r = 0.0;
    for (double v : bs.target().entries())
      if (v != 0.0) r = std::max(r, *s->b / std::abs(v));
    if (r == 0.0) return std::nullopt;
    return ClosedForm{"(2 + sqrt(R)) b sqrt(N/p)",
                      (2.0 + std::sqrt(r)) * *s->b * std::sqrt(big_n / s->p)};
  }
  if (const auto* s = std::get_if<QuantizeSparsifyAHK>(&bs.scheme())) {
    return ClosedForm{"4 delta", 4.0 * s->delta};
  }
  return std::nullopt;
}

std::vector<ComparisonRow> scheme_comparison(const DenseMatrix& a, std::span<const Scheme> schemes,
                                             std::size_t trials, std::uint64_t seed) {
  std::vector<ComparisonRow> out;
  const std::array<NormKind, 1> norms = {NormKind(NormTag::Spectral)};
  for (const auto& scheme : schemes) {
    const auto bs = sparsebound::bind(scheme, a);
    const auto mp = moments(bs);
    const auto errors = realized_errors(bs, norms, trials, seed)[0];
    const auto me = mean_and_error(errors);
    ComparisonRow row;
    row.scheme = scheme_label(bs.scheme());
    row.bound_sans_c = spectral_bound(mp).value;
    row.closed_form = spectral_closed_form(bs);
    row.mean_error = me.mean;
    row.std_err = me.std_err;
    row.expected_nnz = expected_nnz(bs);
    row.sup_bound = mp.sup_bound();
    if (row.sup_bound > 0.0) {
      row.tail_empirical = exceedance(errors, 2.0 * me.mean);
      row.tail_bound = tail_spectral_relative(row.sup_bound, 1.0, me.mean);
      row.tail_violation =
          row.tail_empirical > row.tail_bound + binomial_slack(row.tail_bound, trials);
    }
    out.push_back(std::move(row));
  }
  return out;
}

KhintchineRow khintchine_exact(std::span<const double> x) {
  const std::size_t d = x.size();
  if (d == 0 || d > 20) throw ParameterOutOfRange("exact Khintchine check needs 1 <= dim <= 20");
  // Gray-code walk over all sign patterns, starting from all +1.
  std::vector<int> sign(d, 1);
  long double s = 0.0L;
  long double l2sq = 0.0L;
  for (double v : x) {
    s += v;
    l2sq += static_cast<long double>(v) * v;
  }
  long double total = std::abs(s);
  const std::uint64_t count = std::uint64_t{1} << d;
  for (std::uint64_t i = 1; i < count; ++i) {
    const auto bit = static_cast<std::size_t>(__builtin_ctzll(i));
    s -= 2.0L * sign[bit] * x[bit];
    sign[bit] = -sign[bit];
    total += std::abs(s);
  }
  const long double scale = static_cast<long double>(count);
  KhintchineRow row;
  row.x.assign(x.begin(), x.end());
  row.expectation = static_cast<double>(total / scale);
  row.l2 = static_cast<double>(std::sqrt(l2sq));
  // E ≥ ‖x‖/√2 and E ≤ ‖x‖, compared in squared form.
  row.lower_ok = 2.0L * total * total >= l2sq * scale * scale;
  row.upper_ok = total * total <= l2sq * scale * scale;
  row.exact = true;
  return row;
}

std::vector<KhintchineRow> khintchine_check(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim == 0) throw ParameterOutOfRange("dim must be >= 1");
  const CounterRng entries(seed, Stream::MatrixSource);
  const CounterRng signs(seed, Stream::Rademacher);
  std::vector<KhintchineRow> out(count);
  parallel_for(count, [&](std::size_t i) {
    const std::size_t d = 1 + i % dim;
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k)
      x[k] = std::floor(entries.uniform(i, k) * 19.0) - 9.0;
    if (d <= 20) {
      out[i] = khintchine_exact(x);
      return;
    }
    constexpr std::size_t kSamples = 1 << 16;
    std::vector<double> v(kSamples);
    for (std::size_t t = 0; t < kSamples; ++t) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += signs.rademacher(i, t * d + k) * x[k];
      v[t] = std::abs(s);
    }
    const auto me = mean_and_error(v);
    KhintchineRow row;
    row.x = x;
    row.expectation = me.mean;
    double l2sq = 0.0;
    for (double xk : x) l2sq += xk * xk;
    row.l2 = std::sqrt(l2sq);
    row.lower_ok = me.mean + 3.0 * me.std_err >= row.l2 / std::sqrt(2.0);
    row.upper_ok = me.mean - 3.0 * me.std_err <= row.l2;
    row.exact = false;
    out[i] = std::move(row);
  });
  return out;
}

}  // namespace sparsebound
