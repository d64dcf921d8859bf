#include "sparsebound/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "sparsebound/error.hpp"
#include "sparsebound/norms.hpp"
#include "sparsebound/parallel.hpp"

namespace sparsebound {
namespace {

// Change in Σ_{j∈S,k∉S} a_jk when v joins (join = true) or leaves S.
double flip_delta(const DenseMatrix& a, const std::vector<char>& in_s, std::size_t v, bool join) {
  double out_w = 0.0;
  double in_w = 0.0;
  for (std::size_t u = 0; u < in_s.size(); ++u) {
    if (u == v) continue;
    if (in_s[u]) {
      in_w += a(u, v);
    } else {
      out_w += a(v, u);
    }
  }
  // Joining adds v's edges to the outside and removes edges from S into v.
  return join ? out_w - in_w : in_w - out_w;
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t vertices, std::vector<Edge> edges)
    : vertices_(vertices), edges_(std::move(edges)) {
  if (vertices_ == 0) throw ParameterOutOfRange("a graph needs at least one vertex");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges_) {
    if (e.j >= vertices_ || e.k >= vertices_)
      throw ParameterOutOfRange("edge (" + std::to_string(e.j) + ", " + std::to_string(e.k) +
                                ") has an endpoint outside [0, " + std::to_string(vertices_) + ")");
    if (e.j == e.k) throw ParameterOutOfRange("self-loop at vertex " + std::to_string(e.j));
    if (!std::isfinite(e.weight)) throw ParameterOutOfRange("edge weights must be finite");
    if (!seen.emplace(std::min(e.j, e.k), std::max(e.j, e.k)).second)
      throw ParameterOutOfRange("repeated edge (" + std::to_string(e.j) + ", " +
                                std::to_string(e.k) + ")");
  }
}

bool WeightedGraph::has_negative_weights() const noexcept {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight < 0.0; });
}

DenseMatrix adjacency(const WeightedGraph& g) {
  const std::size_t v = g.vertices();
  std::vector<double> a(v * v, 0.0);
  for (const auto& e : g.edges()) {
    a[e.j * v + e.k] = e.weight;
    a[e.k * v + e.j] = e.weight;
  }
  return DenseMatrix(v, v, std::move(a));
}

double cut_weight(const DenseMatrix& a, const std::vector<std::size_t>& subset) {
  std::vector<char> in_s(a.rows(), 0);
  for (std::size_t v : subset) {
    if (v >= a.rows()) throw ParameterOutOfRange("subset vertex out of range");
    in_s[v] = 1;
  }
  double total = 0.0;
  for (std::size_t j = 0; j < a.rows(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (in_s[j] && !in_s[k]) total += a(j, k);
  return total;
}

MaxCut max_cut_brute(const WeightedGraph& g) {
  const std::size_t v = g.vertices();
  if (v > kMaxCutVertexCap) throw DimensionTooLarge(v, kMaxCutVertexCap);
  const DenseMatrix a = adjacency(g);

  // Vertex 0 stays in S; Gray walk over the other V − 1 memberships.
  std::vector<char> in_s(v, 0);
  in_s[0] = 1;
  double cut = flip_delta(a, std::vector<char>(v, 0), 0, true);
  double best = cut;
  std::uint64_t best_mask = 1;
  std::uint64_t mask = 1;
  const std::uint64_t count = std::uint64_t{1} << (v - 1);
  for (std::uint64_t i = 1; i < count; ++i) {
    const std::size_t u = 1 + static_cast<std::size_t>(__builtin_ctzll(i));
    const bool join = !in_s[u];
    cut += flip_delta(a, in_s, u, join);
    in_s[u] = join ? 1 : 0;
    mask ^= std::uint64_t{1} << u;
    const double tol = 1e-12 * (1.0 + std::abs(best));
    if (cut > best + tol || (std::abs(cut - best) <= tol && mask < best_mask)) {
      best = cut;
      best_mask = mask;
    }
  }

  MaxCut out;
  for (std::size_t u = 0; u < v; ++u)
    if ((best_mask >> u) & 1U) out.subset.push_back(u);
  out.cost = cut_weight(a, out.subset);
  out.negative_weights = g.has_negative_weights();
  return out;
}

CutPreservationReport cut_preservation(const WeightedGraph& g, const Scheme& scheme,
                                       std::size_t trials, std::uint64_t seed, double epsilon) {
  const std::size_t v = g.vertices();
  if (v > kCutPreservationVertexCap) throw DimensionTooLarge(v, kCutPreservationVertexCap);
  if (trials == 0) throw ParameterOutOfRange("trials must be >= 1");
  if (!(epsilon >= 0.0)) throw ParameterOutOfRange("epsilon must be >= 0");
  const DenseMatrix a = adjacency(g);
  const auto bs = sparsebound::bind(scheme, a);

  CutPreservationReport report;
  report.epsilon = epsilon;
  report.trials.resize(trials);
  parallel_for(trials, [&](std::size_t t) {
    const DenseMatrix d = a - sample(bs, seed, t);
    std::vector<char> in_s(v, 0);
    double cut_a = 0.0;
    double cut_d = 0.0;
    CutTrial row;
    const std::uint64_t count = std::uint64_t{1} << v;
    for (std::uint64_t i = 1; i < count; ++i) {
      const auto u = static_cast<std::size_t>(__builtin_ctzll(i));
      const bool join = !in_s[u];
      cut_a += flip_delta(a, in_s, u, join);
      cut_d += flip_delta(d, in_s, u, join);
      in_s[u] = join ? 1 : 0;
      const double dev = std::abs(cut_d);
      row.max_abs_deviation = std::max(row.max_abs_deviation, dev);
      row.max_relative_deviation = std::max(row.max_relative_deviation, dev / std::max(cut_a, 1.0));
    }
    row.cut_norm = cut_norm_brute(d, CutVariant::General);
    row.inf1 = norm_inf_to_1(d);
    const double tol = 1e-9 * (1.0 + row.inf1);
    row.sandwich_ok = row.max_abs_deviation <= row.cut_norm + tol && row.cut_norm <= row.inf1 + tol &&
                      row.inf1 <= 4.0 * row.cut_norm + tol;
    report.trials[t] = row;
  });
  for (const auto& row : report.trials) {
    if (row.max_relative_deviation <= epsilon) ++report.within_epsilon;
    report.sandwich_holds = report.sandwich_holds && row.sandwich_ok;
  }
  return report;
}

}  // namespace sparsebound
