#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rwpoly/error.hpp"

namespace rwpoly {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Counters reported while normalising a raw edge list.
struct BuildStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

/// Undirected graph with strictly positive weights, stored both as a sorted
/// edge list (u < v) and as a symmetric CSR adjacency. Immutable once built.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds from arbitrary (u, v, w) triples. Self-loops are dropped,
  /// repeated pairs (either orientation) are summed, weights must be > 0.
  static WeightedGraph from_edges(std::size_t n, std::span<const Edge> edges,
                                  BuildStats* stats = nullptr);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Vertex> neighbors(Vertex u) const noexcept {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }
  std::span<const double> neighbor_weights(Vertex u) const noexcept {
    return {adj_w_.data() + offsets_[u], adj_w_.data() + offsets_[u + 1]};
  }
  std::size_t degree_count(Vertex u) const noexcept {
    return offsets_[u + 1] - offsets_[u];
  }

  /// Weighted degree D(u,u) = sum_v A(u,v).
  double degree(Vertex u) const noexcept { return degree_[u]; }
  const std::vector<double>& degrees() const noexcept { return degree_; }
  double total_weight() const noexcept;

  /// A(u,v), zero when absent.
  double weight(Vertex u, Vertex v) const noexcept;

  /// Copy with every weight multiplied by `factor` (> 0).
  WeightedGraph scaled(double factor) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adj_;
  std::vector<double> adj_w_;
  std::vector<double> degree_;
};

// ---------------------------------------------------------------------------
// Laplacian operations (L = D - A), never materialised.

/// (D - A) x.
std::vector<double> laplacian_matvec(const WeightedGraph& g, std::span<const double> x);

/// A x.
std::vector<double> adjacency_matvec(const WeightedGraph& g, std::span<const double> x);

/// sum_{(u,v) in E} w_uv (x_u - x_v)^2.
double laplacian_quadratic_form(const WeightedGraph& g, std::span<const double> x);

/// Light-weight view exposing the Laplacian of a graph as an operator.
class LaplacianView {
 public:
  explicit LaplacianView(const WeightedGraph& g) : g_(&g) {}
  std::size_t size() const noexcept { return g_->num_vertices(); }
  std::vector<double> apply(std::span<const double> x) const { return laplacian_matvec(*g_, x); }
  double quadratic_form(std::span<const double> x) const {
    return laplacian_quadratic_form(*g_, x);
  }
  const WeightedGraph& graph() const noexcept { return *g_; }

 private:
  const WeightedGraph* g_;
};

/// Connected-component label per vertex; returns the number of components.
std::size_t connected_components(const WeightedGraph& g, std::vector<std::uint32_t>& label);
bool is_connected(const WeightedGraph& g);
/// Two-colouring test over every component.
bool is_bipartite(const WeightedGraph& g);

// ---------------------------------------------------------------------------

/// Nonnegative coefficients (alpha_1..alpha_d) summing to one.
class PolyCoeffs {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit PolyCoeffs(std::vector<double> alpha);
  /// alpha = e_r.
  static PolyCoeffs monomial(std::size_t r);

  std::size_t degree() const noexcept { return alpha_.size(); }
  /// alpha_r for r in [1, degree()].
  double operator[](std::size_t r) const { return alpha_.at(r - 1); }
  const std::vector<double>& values() const noexcept { return alpha_; }

 private:
  std::vector<double> alpha_;
};

// ---------------------------------------------------------------------------

/// Symmetric diagonally dominant matrix with nonpositive off-diagonal in
/// split form M = diag - A. A is stored as a WeightedGraph.
///
/// Construction enforces diag(i) >= sum_j A(i,j). Zero slack everywhere (a
/// plain Laplacian) is accepted; `positive_definite()` tells the two apart.
class SddmMatrix {
 public:
  SddmMatrix() = default;
  SddmMatrix(std::vector<double> diag, WeightedGraph offdiag);

  static SddmMatrix from_laplacian(const WeightedGraph& g);

  std::size_t size() const noexcept { return diag_.size(); }
  const std::vector<double>& diag() const noexcept { return diag_; }
  const WeightedGraph& offdiag() const noexcept { return offdiag_; }
  const std::vector<double>& graph_degree() const noexcept { return offdiag_.degrees(); }
  std::vector<double> slack() const;

  /// Every connected component of the off-diagonal graph carries a row with
  /// strictly positive slack.
  bool positive_definite() const;

  std::vector<double> matvec(std::span<const double> x) const;

 private:
  std::vector<double> diag_;
  WeightedGraph offdiag_;
};

}  // namespace rwpoly
