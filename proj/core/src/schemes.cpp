#include "sparsebound/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sparsebound/error.hpp"
#include "sparsebound/random.hpp"
#include "text.hpp"

namespace sparsebound {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterOutOfRange(what);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double unbiasedness_slack(double a) { return 1e-12 * std::max(1.0, std::abs(a)); }

double resolve_b(const std::optional<double>& b, const DenseMatrix& a, const char* kind) {
  const double bmax = a.max_abs();
  const double v = b.value_or(bmax);
  require(v > 0.0 && std::isfinite(v), std::string(kind) + ": b must be > 0");
  require(v >= bmax, std::string(kind) + ": b must be >= max|a_jk| (" +
                         detail::format_shortest(bmax) + ")");
  return v;
}

EntryDistribution quantize_entry(double a, double b) {
  const double up = 0.5 + a / (2.0 * b);
  const double down = 0.5 - a / (2.0 * b);
  std::vector<Atom> atoms;
  if (up > 0.0) atoms.push_back({b, up});
  if (down > 0.0) atoms.push_back({-b, down});
  return EntryDistribution(std::move(atoms));
}

}  // namespace

EntryDistribution::EntryDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  require(!atoms_.empty(), "entry distribution needs at least one atom");
  double total = 0.0;
  for (const auto& at : atoms_) {
    require(std::isfinite(at.value), "atom values must be finite");
    require(at.prob > 0.0 && at.prob <= 1.0, "atom probabilities must lie in (0, 1]");
    total += at.prob;
  }
  require(std::abs(total - 1.0) <= 1e-12, "atom probabilities must sum to 1");
}

EntryDistribution EntryDistribution::point_mass(double value) {
  return EntryDistribution({{value, 1.0}});
}

EntryDistribution EntryDistribution::scaled_bernoulli(double value, double prob) {
  require(prob > 0.0 && prob <= 1.0, "keep probability must lie in (0, 1]");
  if (prob >= 1.0 || value == 0.0) return point_mass(prob >= 1.0 ? value : 0.0);
  return EntryDistribution({{value, prob}, {0.0, 1.0 - prob}});
}

double EntryDistribution::mean() const noexcept {
  double m = 0.0;
  for (const auto& at : atoms_) m += at.prob * at.value;
  return m;
}

double EntryDistribution::central_moment(int order, double about) const noexcept {
  double m = 0.0;
  for (const auto& at : atoms_) {
    const double d = at.value - about;
    double pw = 1.0;
    for (int i = 0; i < order; ++i) pw *= d;
    m += at.prob * pw;
  }
  return m;
}

double EntryDistribution::nonzero_probability() const noexcept {
  double p = 0.0;
  for (const auto& at : atoms_)
    if (at.value != 0.0) p += at.prob;
  return p;
}

double EntryDistribution::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& at : atoms_) m = std::max(m, std::abs(at.value));
  return m;
}

double EntryDistribution::draw(double u) const noexcept {
  double cdf = 0.0;
  for (const auto& at : atoms_) {
    cdf += at.prob;
    if (u < cdf) return at.value;
  }
  return atoms_.back().value;
}

std::string scheme_kind(const Scheme& s) {
  return std::visit(Overloaded{
                        [](const UniformBernoulli&) { return std::string("bernoulli"); },
                        [](const QuantizeAM&) { return std::string("quantize-am"); },
                        [](const NonuniformAM&) { return std::string("nonuniform-am"); },
                        [](const ModifiedNonuniform&) { return std::string("modified-nonuniform"); },
                        [](const QuantizeSparsifyAHK&) { return std::string("ahk"); },
                        [](const CustomTable&) { return std::string("custom"); },
                    },
                    s);
}

std::string format_scheme(const Scheme& s) {
  using detail::format_shortest;
  std::vector<std::string> kv;
  std::visit(Overloaded{
                 [&](const UniformBernoulli& x) { kv.push_back("p=" + format_shortest(x.p)); },
                 [&](const QuantizeAM& x) {
                   if (x.b) kv.push_back("b=" + format_shortest(*x.b));
                 },
                 [&](const NonuniformAM& x) {
                   kv.push_back("p=" + format_shortest(x.p));
                   if (x.b) kv.push_back("b=" + format_shortest(*x.b));
                   if (x.n) kv.push_back("n=" + std::to_string(*x.n));
                 },
                 [&](const ModifiedNonuniform& x) {
                   kv.push_back("p=" + format_shortest(x.p));
                   if (x.b) kv.push_back("b=" + format_shortest(*x.b));
                 },
                 [&](const QuantizeSparsifyAHK& x) {
                   kv.push_back("delta=" + format_shortest(x.delta));
                   if (x.n) kv.push_back("n=" + std::to_string(*x.n));
                 },
                 [&](const CustomTable&) {
                   throw ParameterOutOfRange("custom schemes have no text form");
                 },
             },
             s);
  std::string out = scheme_kind(s);
  for (std::size_t i = 0; i < kv.size(); ++i) out += (i == 0 ? ":" : ",") + kv[i];
  return out;
}

Scheme parse_scheme(std::string_view text) {
  text = detail::trim(text);
  const auto colon = text.find(':');
  const std::string kind(text.substr(0, colon));
  std::map<std::string, std::string, std::less<>> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = detail::trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      require(eq != std::string_view::npos && eq > 0,
              "scheme parameter '" + std::string(item) + "' is not key=value");
      params.emplace(std::string(detail::trim(item.substr(0, eq))),
                     std::string(detail::trim(item.substr(eq + 1))));
    }
  }

  auto take_double = [&](const char* key) -> std::optional<double> {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    auto v = detail::parse_double(it->second);
    require(v.has_value(), std::string("scheme parameter ") + key + " is not a number");
    params.erase(it);
    return v;
  };
  auto take_size = [&](const char* key) -> std::optional<std::size_t> {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    auto v = detail::parse_int<std::size_t>(it->second);
    require(v.has_value(), std::string("scheme parameter ") + key + " is not an integer");
    params.erase(it);
    return v;
  };
  auto need = [&](std::optional<double> v, const char* key) {
    require(v.has_value(), kind + ": missing parameter " + key);
    return *v;
  };

  Scheme out;
  if (kind == "bernoulli" || kind == "uniform-bernoulli") {
    out = UniformBernoulli{need(take_double("p"), "p")};
  } else if (kind == "quantize-am") {
    out = QuantizeAM{take_double("b")};
  } else if (kind == "nonuniform-am") {
    const double p = need(take_double("p"), "p");
    const auto b = take_double("b");
    out = NonuniformAM{p, b, take_size("n")};
  } else if (kind == "modified-nonuniform" || kind == "modified") {
    const double p = need(take_double("p"), "p");
    out = ModifiedNonuniform{p, take_double("b")};
  } else if (kind == "ahk") {
    const double delta = need(take_double("delta"), "delta");
    out = QuantizeSparsifyAHK{delta, take_size("n")};
  } else {
    throw ParameterOutOfRange("unknown scheme kind '" + kind + "'");
  }
  require(params.empty(), kind + ": unknown parameter '" +
                              (params.empty() ? std::string() : params.begin()->first) + "'");
  return out;
}

BoundScheme bind(const Scheme& scheme, const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<EntryDistribution> table;
  table.reserve(m * n);

  Scheme resolved = std::visit(
      Overloaded{
          [&](const UniformBernoulli& s) -> Scheme {
            require(s.p > 0.0 && s.p <= 1.0, "bernoulli: p must lie in (0, 1]");
            for (double v : a.entries()) table.push_back(EntryDistribution::scaled_bernoulli(v / s.p, s.p));
            return s;
          },
          [&](const QuantizeAM& s) -> Scheme {
            const double b = resolve_b(s.b, a, "quantize-am");
            for (double v : a.entries()) table.push_back(quantize_entry(v, b));
            return QuantizeAM{b};
          },
          [&](const NonuniformAM& s) -> Scheme {
            require(s.p > 0.0 && s.p < 1.0, "nonuniform-am: p must lie in (0, 1)");
            const double b = resolve_b(s.b, a, "nonuniform-am");
            const std::size_t nn = s.n.value_or(n);
            require(nn >= 1, "nonuniform-am: n must be >= 1");
            const double l = 8.0 * std::log(static_cast<double>(nn));
            const double boost = l * l * l * l / static_cast<double>(nn);
            for (double v : a.entries()) {
              if (v == 0.0) {
                table.push_back(EntryDistribution::point_mass(0.0));
                continue;
              }
              const double r = v / b;
              const double base = s.p * r * r;
              const double keep = std::min(1.0, std::max(base, std::sqrt(base * boost)));
              table.push_back(EntryDistribution::scaled_bernoulli(v / keep, keep));
            }
            return NonuniformAM{s.p, b, nn};
          },
          [&](const ModifiedNonuniform& s) -> Scheme {
            require(s.p > 0.0 && s.p < 1.0, "modified-nonuniform: p must lie in (0, 1)");
            const double b = resolve_b(s.b, a, "modified-nonuniform");
            for (double v : a.entries()) {
              if (v == 0.0) {
                table.push_back(EntryDistribution::point_mass(0.0));
                continue;
              }
              const double pa2 = s.p * v * v;
              const double keep = pa2 / (pa2 + b * b);
              table.push_back(EntryDistribution::scaled_bernoulli(v / keep, keep));
            }
            return ModifiedNonuniform{s.p, b};
          },
          [&](const QuantizeSparsifyAHK& s) -> Scheme {
            require(s.delta > 0.0 && std::isfinite(s.delta), "ahk: delta must be > 0");
            const std::size_t nn = s.n.value_or(n);
            require(nn == n, "ahk: n must equal the column count " + std::to_string(n));
            const double tau = s.delta / std::sqrt(static_cast<double>(nn));
            for (double v : a.entries()) {
              const double mag = std::abs(v);
              if (v == 0.0 || mag >= tau) {
                table.push_back(EntryDistribution::point_mass(v));
              } else {
                table.push_back(EntryDistribution::scaled_bernoulli(std::copysign(tau, v), mag / tau));
              }
            }
            return QuantizeSparsifyAHK{s.delta, nn};
          },
          [&](const CustomTable& s) -> Scheme {
            require(s.rows == m && s.cols == n, "custom: table shape differs from the target");
            require(s.entries.size() == m * n, "custom: table needs rows*cols entries");
            table = s.entries;
            return s;
          },
      },
      scheme);

  for (std::size_t i = 0; i < table.size(); ++i) {
    const double target = a.entries()[i];
    if (std::abs(table[i].mean() - target) > unbiasedness_slack(target)) {
      throw ParameterOutOfRange(scheme_kind(scheme) + ": entry (" + std::to_string(i / n) + ", " +
                                std::to_string(i % n) + ") is biased: mean " +
                                detail::format_shortest(table[i].mean()) + " vs target " +
                                detail::format_shortest(target));
    }
  }
  return BoundScheme(a, std::move(resolved), std::move(table));
}

MomentProfile::MomentProfile(DenseMatrix variance, DenseMatrix fourth_central, double sup_bound)
    : variance_(std::move(variance)), fourth_(std::move(fourth_central)), sup_bound_(sup_bound) {
  require(variance_.rows() == fourth_.rows() && variance_.cols() == fourth_.cols(),
          "variance and fourth-moment tables differ in shape");
  require(sup_bound_ >= 0.0 && std::isfinite(sup_bound_), "sup bound must be finite and >= 0");
  const std::size_t m = variance_.rows();
  const std::size_t n = variance_.cols();
  row_var_.assign(m, 0.0);
  col_var_.assign(n, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double v = variance_(j, k);
      const double f = fourth_(j, k);
      require(v >= 0.0, "variances must be >= 0");
      require(f >= v * v * (1.0 - 1e-12), "fourth central moment below squared variance");
      row_var_[j] += v;
      col_var_[k] += v;
      total_var_ += v;
      total_fourth_ += f;
    }
  }
}

MomentProfile MomentProfile::from_variances(DenseMatrix variance) {
  std::vector<double> sq(variance.entries().begin(), variance.entries().end());
  for (double& v : sq) v *= v;
  DenseMatrix fourth(variance.rows(), variance.cols(), std::move(sq));
  return MomentProfile(std::move(variance), std::move(fourth), 0.0);
}

MomentProfile moments(const BoundScheme& bs) {
  const auto& a = bs.target();
  std::vector<double> var(a.size());
  std::vector<double> fourth(a.size());
  double max_atom = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& e = bs.table()[i];
    const double target = a.entries()[i];
    // Rounding in the atom sums can leave tiny negatives for point masses.
    var[i] = std::max(0.0, e.central_moment(2, target));
    fourth[i] = std::max(var[i] * var[i], e.central_moment(4, target));
    max_atom = std::max(max_atom, e.max_abs());
  }
  return MomentProfile(DenseMatrix(a.rows(), a.cols(), std::move(var)),
                       DenseMatrix(a.rows(), a.cols(), std::move(fourth)), 2.0 * max_atom);
}

DenseMatrix sample(const BoundScheme& bs, std::uint64_t seed, std::uint64_t trial) {
  const CounterRng rng(seed, Stream::Entries);
  std::vector<double> x(bs.table().size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& e = bs.table()[i];
    x[i] = e.is_point_mass() ? e.atoms().front().value : e.draw(rng.uniform(trial, i));
  }
  return DenseMatrix(bs.rows(), bs.cols(), std::move(x));
}

double expected_nnz(const BoundScheme& bs) {
  double total = 0.0;
  for (const auto& e : bs.table()) total += e.nonzero_probability();
  return total;
}

}  // namespace sparsebound
