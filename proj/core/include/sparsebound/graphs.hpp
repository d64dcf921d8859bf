#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sparsebound/matrix.hpp"
#include "sparsebound/schemes.hpp"

namespace sparsebound {

struct Edge {
  std::size_t j;
  std::size_t k;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple weighted graph: no self-loops, at most one edge per vertex pair.
class WeightedGraph {
 public:
  /// Throws ParameterOutOfRange on V = 0, an out-of-range endpoint, a
  /// self-loop, a repeated pair, or a non-finite weight.
  WeightedGraph(std::size_t vertices, std::vector<Edge> edges);

  std::size_t vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_negative_weights() const noexcept;

 private:
  std::size_t vertices_;
  std::vector<Edge> edges_;
};

/// Symmetric, zero diagonal, a_jk = a_kj = ω_jk.
DenseMatrix adjacency(const WeightedGraph& g);

inline constexpr std::size_t kMaxCutVertexCap = 20;
inline constexpr std::size_t kCutPreservationVertexCap = 16;

struct MaxCut {
  double cost = 0.0;
  /// Sorted; always contains vertex 0. Among equal costs the subset with
  /// the smallest bitmask wins.
  std::vector<std::size_t> subset;
  /// Set when some weight is negative; the cut / cut-norm identity then no
  /// longer applies.
  bool negative_weights = false;
};

/// Exact maximum cut over all 2^{V−1} bipartitions. Throws DimensionTooLarge
/// for V > 20.
MaxCut max_cut_brute(const WeightedGraph& g);

/// Σ_{j∈S, k∉S} a_jk
double cut_weight(const DenseMatrix& a, const std::vector<std::size_t>& subset);

struct CutTrial {
  /// max_S |cut_A(S) − cut_X(S)| / max(cut_A(S), 1)
  double max_relative_deviation = 0.0;
  /// max_S |cut_A(S) − cut_X(S)|, the graph cut-norm of A − X
  double max_abs_deviation = 0.0;
  /// General cut-norm of A − X.
  double cut_norm = 0.0;
  double inf1 = 0.0;
  /// max_abs_deviation ≤ cut_norm ≤ inf1 ≤ 4·cut_norm
  bool sandwich_ok = false;
};

struct CutPreservationReport {
  double epsilon = 0.0;
  std::vector<CutTrial> trials;
  /// Trials whose max relative deviation is at most epsilon.
  std::size_t within_epsilon = 0;
  bool sandwich_holds = true;
};

/// Samples X from the scheme bound to the adjacency matrix (every entry
/// independently) and compares all 2^V cuts. Throws DimensionTooLarge for
/// V > 16.
CutPreservationReport cut_preservation(const WeightedGraph& g, const Scheme& scheme,
                                       std::size_t trials, std::uint64_t seed, double epsilon);

}  // namespace sparsebound
