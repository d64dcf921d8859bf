#include "sparsebound/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "gray_walk.hpp"
#include "sparsebound/error.hpp"

namespace sparsebound {
namespace {

// Column-major copy of `a`, so that column k is contiguous.
std::vector<double> column_major(const DenseMatrix& a) {
  std::vector<double> c(a.size());
  for (std::size_t j = 0; j < a.rows(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) c[k * a.rows() + j] = a(j, k);
  return c;
}

enum class Reduce { L1, L2Squared };

// y = Σ_k x_k c_k over `count` contiguous vectors of length `len`. The last
// sign is pinned to +1 because x and -x give the same norm.
class SignState {
 public:
  SignState(const std::vector<double>& vecs, std::size_t count, std::size_t len, Reduce reduce)
      : vecs_(vecs), count_(count), len_(len), reduce_(reduce), x_(count, 1), y_(len, 0.0) {}

  void reset(std::uint64_t assignment) {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (std::size_t k = 0; k < count_; ++k) {
      const bool flipped = k + 1 < count_ && ((assignment >> k) & 1U) != 0;
      x_[k] = flipped ? -1 : 1;
      const double* v = vecs_.data() + k * len_;
      const double s = x_[k];
      for (std::size_t i = 0; i < len_; ++i) y_[i] += s * v[i];
    }
  }

  void flip(std::size_t k) {
    const double* v = vecs_.data() + k * len_;
    const double step = -2.0 * x_[k];
    for (std::size_t i = 0; i < len_; ++i) y_[i] += step * v[i];
    x_[k] = -x_[k];
  }

  double value() const {
    double acc = 0.0;
    if (reduce_ == Reduce::L1) {
      for (double v : y_) acc += std::abs(v);
    } else {
      for (double v : y_) acc += v * v;
    }
    return acc;
  }

 private:
  const std::vector<double>& vecs_;
  std::size_t count_;
  std::size_t len_;
  Reduce reduce_;
  std::vector<int> x_;
  std::vector<double> y_;
};

double max_over_signs(const std::vector<double>& vecs, std::size_t count, std::size_t len,
                      Reduce reduce) {
  return detail::gray_max(count - 1, [&] { return SignState(vecs, count, len, reduce); });
}

// c = Σ_{i∈S} v_i; value is the best |Σ_{k∈T} c_k| over T.
class SubsetSumState {
 public:
  SubsetSumState(const std::vector<double>& vecs, std::size_t count, std::size_t len)
      : vecs_(vecs), count_(count), len_(len), in_(count, false), c_(len, 0.0) {}

  void reset(std::uint64_t assignment) {
    std::fill(c_.begin(), c_.end(), 0.0);
    for (std::size_t i = 0; i < count_; ++i) {
      in_[i] = ((assignment >> i) & 1U) != 0;
      if (!in_[i]) continue;
      const double* v = vecs_.data() + i * len_;
      for (std::size_t k = 0; k < len_; ++k) c_[k] += v[k];
    }
  }

  void flip(std::size_t i) {
    const double* v = vecs_.data() + i * len_;
    const double s = in_[i] ? -1.0 : 1.0;
    for (std::size_t k = 0; k < len_; ++k) c_[k] += s * v[k];
    in_[i] = !in_[i];
  }

  double value() const {
    double pos = 0.0;
    double neg = 0.0;
    for (double v : c_) (v > 0.0 ? pos : neg) += v;
    return std::max(pos, -neg);
  }

 private:
  const std::vector<double>& vecs_;
  std::size_t count_;
  std::size_t len_;
  std::vector<bool> in_;
  std::vector<double> c_;
};

// cross = Σ_{j∈S, k∉S} a_jk, maintained with O(V) work per move.
class GraphCutState {
 public:
  explicit GraphCutState(const DenseMatrix& a)
      : a_(a), n_(a.rows()), in_(n_, false), col_in_(n_, 0.0), row_out_(n_, 0.0) {}

  void reset(std::uint64_t assignment) {
    for (std::size_t v = 0; v < n_; ++v) in_[v] = ((assignment >> v) & 1U) != 0;
    cross_ = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      col_in_[k] = 0.0;
      for (std::size_t j = 0; j < n_; ++j)
        if (in_[j]) col_in_[k] += a_(j, k);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      row_out_[j] = 0.0;
      for (std::size_t k = 0; k < n_; ++k)
        if (!in_[k]) row_out_[j] += a_(j, k);
      if (in_[j]) cross_ += row_out_[j];
    }
  }

  void flip(std::size_t v) {
    const double self = a_(v, v);
    if (!in_[v]) {
      cross_ += row_out_[v] - self - col_in_[v];
      for (std::size_t k = 0; k < n_; ++k) col_in_[k] += a_(v, k);
      for (std::size_t j = 0; j < n_; ++j) row_out_[j] -= a_(j, v);
    } else {
      cross_ += col_in_[v] - self - row_out_[v];
      for (std::size_t k = 0; k < n_; ++k) col_in_[k] -= a_(v, k);
      for (std::size_t j = 0; j < n_; ++j) row_out_[j] += a_(j, v);
    }
    in_[v] = !in_[v];
  }

  double value() const { return std::abs(cross_); }

 private:
  const DenseMatrix& a_;
  std::size_t n_;
  std::vector<bool> in_;
  std::vector<double> col_in_;
  std::vector<double> row_out_;
  double cross_ = 0.0;
};

bool same_sign(const DenseMatrix& a) { return a.all_nonnegative() || a.all_nonpositive(); }

}  // namespace

double norm_inf_to_1(const DenseMatrix& a, std::size_t cap) {
  if (same_sign(a)) {
    double s = 0.0;
    for (double v : a.entries()) s += std::abs(v);
    return s;
  }
  const std::size_t small = std::min(a.rows(), a.cols());
  if (small > cap) throw DimensionTooLarge(small, cap);
  if (a.rows() < a.cols()) {
    // ‖A‖∞→1 = ‖Aᵀ‖∞→1; the columns of Aᵀ are the rows of A.
    const std::vector<double> rows(a.entries().begin(), a.entries().end());
    return max_over_signs(rows, a.rows(), a.cols(), Reduce::L1);
  }
  return max_over_signs(column_major(a), a.cols(), a.rows(), Reduce::L1);
}

double norm_inf_to_2(const DenseMatrix& a, std::size_t cap) {
  if (same_sign(a)) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.rows(); ++j) {
      double r = 0.0;
      for (double v : a.row(j)) r += std::abs(v);
      s += r * r;
    }
    return std::sqrt(s);
  }
  if (a.cols() > cap) throw DimensionTooLarge(a.cols(), cap);
  return std::sqrt(max_over_signs(column_major(a), a.cols(), a.rows(), Reduce::L2Squared));
}

double norm_spectral(const DenseMatrix& a, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ParameterOutOfRange("spectral tol must be > 0");
  if (a.max_abs() == 0.0) return 0.0;

  // Gram matrix of the smaller side, normalised to unit trace.
  const bool use_rows = a.rows() < a.cols();
  const std::size_t d = use_rows ? a.rows() : a.cols();
  std::vector<double> gram(d * d, 0.0);
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = p; q < d; ++q) {
      double s = 0.0;
      if (use_rows) {
        for (std::size_t k = 0; k < a.cols(); ++k) s += a(p, k) * a(q, k);
      } else {
        for (std::size_t j = 0; j < a.rows(); ++j) s += a(j, p) * a(j, q);
      }
      gram[p * d + q] = s;
      gram[q * d + p] = s;
    }
  }
  double trace = 0.0;
  for (std::size_t p = 0; p < d; ++p) trace += gram[p * d + p];
  for (double& g : gram) g /= trace;

  // Each outer step applies G^(2^squarings): sixteen power steps per
  // matrix-vector product for small Gram matrices.
  const std::size_t squarings = d <= 512 ? 4 : 0;
  std::vector<double> power = gram;
  std::vector<double> tmp(d * d);
  for (std::size_t s = 0; s < squarings; ++s) {
    double tr = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = 0; q < d; ++q) {
        double acc = 0.0;
        for (std::size_t r = 0; r < d; ++r) acc += power[p * d + r] * power[r * d + q];
        tmp[p * d + q] = acc;
      }
      tr += tmp[p * d + p];
    }
    for (std::size_t i = 0; i < d * d; ++i) power[i] = tmp[i] / tr;
  }

  auto matvec = [d](const std::vector<double>& m, const std::vector<double>& v,
                    std::vector<double>& out) {
    for (std::size_t p = 0; p < d; ++p) {
      double acc = 0.0;
      for (std::size_t q = 0; q < d; ++q) acc += m[p * d + q] * v[q];
      out[p] = acc;
    }
  };
  auto normalize = [](std::vector<double>& v) {
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    const double n = std::sqrt(n2);
    if (n == 0.0) return false;
    for (double& x : v) x /= n;
    return true;
  };

  std::vector<double> v(d, 1.0);
  v[0] += 0.5;
  normalize(v);
  std::vector<double> w(d);
  auto rayleigh = [&](const std::vector<double>& x) {
    matvec(gram, x, w);
    return std::inner_product(x.begin(), x.end(), w.begin(), 0.0);
  };

  double lambda = rayleigh(v);
  const auto cap = static_cast<std::size_t>(
      std::ceil(10.0 * static_cast<double>(d) * std::max(1.0, std::log(1.0 / tol))));
  for (std::size_t it = 0; it < cap; ++it) {
    std::vector<double> next(d);
    matvec(power, v, next);
    if (!normalize(next)) throw NonConvergence("power iteration collapsed to zero");
    v.swap(next);
    const double updated = rayleigh(v);
    const bool done = std::abs(updated - lambda) <= tol * updated;
    lambda = updated;
    if (done) return std::sqrt(lambda * trace);
  }
  throw NonConvergence("power iteration did not reach tol " + std::to_string(tol) + " in " +
                       std::to_string(cap) + " iterations");
}

double norm_frobenius(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

double norm_col(const DenseMatrix& a) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.rows(); ++j) s += a(j, k) * a(j, k);
    total += std::sqrt(s);
  }
  return total;
}

double norm_two_to_inf(const DenseMatrix& a, std::span<const double> weights) {
  if (!weights.empty()) {
    if (weights.size() != a.cols()) throw ParameterOutOfRange("one weight per column required");
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w)) throw ParameterOutOfRange("weights must be positive");
  }
  double best = 0.0;
  for (std::size_t j = 0; j < a.rows(); ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = weights.empty() ? a(j, k) : a(j, k) / weights[k];
      s += v * v;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double cut_norm_brute(const DenseMatrix& a, CutVariant variant, std::size_t cap) {
  if (variant == CutVariant::Graph) {
    if (a.rows() != a.cols()) throw ParameterOutOfRange("graph cut norm needs a square matrix");
    if (a.rows() > cap) throw DimensionTooLarge(a.rows(), cap);
    return detail::gray_max(a.rows(), [&] { return GraphCutState(a); });
  }
  const std::size_t small = std::min(a.rows(), a.cols());
  if (small > cap) throw DimensionTooLarge(small, cap);
  if (a.rows() <= a.cols()) {
    const std::vector<double> rows(a.entries().begin(), a.entries().end());
    return detail::gray_max(a.rows(), [&] { return SubsetSumState(rows, a.rows(), a.cols()); });
  }
  const std::vector<double> cols = column_major(a);
  return detail::gray_max(a.cols(), [&] { return SubsetSumState(cols, a.cols(), a.rows()); });
}

NormKind::NormKind(NormTag tag) : tag_(tag) {
  if (tag == NormTag::WeightedTwoToInf) {
    throw ParameterOutOfRange("weighted 2->inf norm needs weights; use weighted_two_to_inf()");
  }
}

NormKind::NormKind(NormTag tag, std::vector<double> weights)
    : tag_(tag), weights_(std::move(weights)) {}

NormKind NormKind::weighted_two_to_inf(std::vector<double> weights) {
  if (weights.empty()) throw ParameterOutOfRange("weights must be non-empty");
  double ss = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ParameterOutOfRange("weights must be positive");
    ss += w * w;
  }
  if (std::abs(ss - 1.0) > 1e-10) {
    throw ParameterOutOfRange("weights must have unit sum of squares (trace(D^2) = 1)");
  }
  return NormKind(NormTag::WeightedTwoToInf, std::move(weights));
}

std::string NormKind::name() const {
  switch (tag_) {
    case NormTag::InfTo1: return "inf_to_1";
    case NormTag::InfTo2: return "inf_to_2";
    case NormTag::Spectral: return "spectral";
    case NormTag::Frobenius: return "frobenius";
    case NormTag::ColNorm: return "col";
    case NormTag::TwoToInf: return "two_to_inf";
    case NormTag::WeightedTwoToInf: return "weighted_two_to_inf";
  }
  return "unknown";
}

NormKind NormKind::parse(std::string_view text) {
  if (text == "inf_to_1" || text == "inf1") return NormTag::InfTo1;
  if (text == "inf_to_2" || text == "inf2") return NormTag::InfTo2;
  if (text == "spectral" || text == "spec") return NormTag::Spectral;
  if (text == "frobenius" || text == "fro") return NormTag::Frobenius;
  if (text == "col") return NormTag::ColNorm;
  if (text == "two_to_inf" || text == "2inf") return NormTag::TwoToInf;
  throw ParameterOutOfRange("unknown norm '" + std::string(text) + "'");
}

double evaluate_norm(const NormKind& kind, const DenseMatrix& a, std::size_t cap) {
  switch (kind.tag()) {
    case NormTag::InfTo1: return norm_inf_to_1(a, cap);
    case NormTag::InfTo2: return norm_inf_to_2(a, cap);
    case NormTag::Spectral: return norm_spectral(a);
    case NormTag::Frobenius: return norm_frobenius(a);
    case NormTag::ColNorm: return norm_col(a);
    case NormTag::TwoToInf: return norm_two_to_inf(a);
    case NormTag::WeightedTwoToInf: return norm_two_to_inf(a, kind.weights());
  }
  return 0.0;
}

}  // namespace sparsebound
