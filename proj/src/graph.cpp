#include "rwpoly/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace rwpoly {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::Asymmetric: return "Asymmetric";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::ThresholdExceeded: return "ThresholdExceeded";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::Bipartite: return "Bipartite";
    case ErrorKind::Refused: return "Refused";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

WeightedGraph WeightedGraph::from_edges(std::size_t n, std::span<const Edge> raw,
                                        BuildStats* stats) {
  BuildStats local;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const Edge& e : raw) {
    require(e.u < n && e.v < n, ErrorKind::InvalidArgument,
            "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                ") out of range for n=" + std::to_string(n));
    require(std::isfinite(e.w), ErrorKind::InvalidArgument, "non-finite edge weight");
    if (e.w < 0) fail(ErrorKind::NegativeWeight, "negative edge weight");
    if (e.u == e.v) {
      ++local.self_loops_dropped;
      continue;
    }
    if (e.w == 0) continue;
    edges.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (out > 0 && edges[out - 1].u == edges[i].u && edges[out - 1].v == edges[i].v) {
      edges[out - 1].w += edges[i].w;
      ++local.duplicates_merged;
    } else {
      edges[out++] = edges[i];
    }
  }
  edges.resize(out);

  WeightedGraph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adj_.resize(2 * g.edges_.size());
  g.adj_w_.resize(2 * g.edges_.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so every per-vertex list comes out sorted.
  for (const Edge& e : g.edges_) {
    g.adj_[cursor[e.u]] = e.v;
    g.adj_w_[cursor[e.u]++] = e.w;
    g.adj_[cursor[e.v]] = e.u;
    g.adj_w_[cursor[e.v]++] = e.w;
  }
  g.degree_.assign(n, 0.0);
  for (Vertex u = 0; u < n; ++u) {
    double s = 0;
    for (double w : g.neighbor_weights(u)) s += w;
    g.degree_[u] = s;
  }
  if (stats) *stats = local;
  return g;
}

double WeightedGraph::total_weight() const noexcept {
  double s = 0;
  for (const Edge& e : edges_) s += e.w;
  return s;
}

double WeightedGraph::weight(Vertex u, Vertex v) const noexcept {
  if (u >= n_ || v >= n_) return 0.0;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0.0;
  return adj_w_[offsets_[u] + static_cast<std::size_t>(it - nb.begin())];
}

WeightedGraph WeightedGraph::scaled(double factor) const {
  require(factor > 0 && std::isfinite(factor), ErrorKind::InvalidArgument,
          "scale factor must be positive");
  WeightedGraph g = *this;
  for (Edge& e : g.edges_) e.w *= factor;
  for (double& w : g.adj_w_) w *= factor;
  for (double& d : g.degree_) d *= factor;
  return g;
}

std::vector<double> adjacency_matvec(const WeightedGraph& g, std::span<const double> x) {
  require(x.size() == g.num_vertices(), ErrorKind::DimensionMismatch,
          "vector length " + std::to_string(x.size()) + " != n=" +
              std::to_string(g.num_vertices()));
  std::vector<double> y(x.size(), 0.0);
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    auto nb = g.neighbors(u);
    auto wt = g.neighbor_weights(u);
    double s = 0;
    for (std::size_t k = 0; k < nb.size(); ++k) s += wt[k] * x[nb[k]];
    y[u] = s;
  }
  return y;
}

std::vector<double> laplacian_matvec(const WeightedGraph& g, std::span<const double> x) {
  require(x.size() == g.num_vertices(), ErrorKind::DimensionMismatch,
          "vector length " + std::to_string(x.size()) + " != n=" +
              std::to_string(g.num_vertices()));
  std::vector<double> y(x.size(), 0.0);
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    auto nb = g.neighbors(u);
    auto wt = g.neighbor_weights(u);
    double s = 0;
    for (std::size_t k = 0; k < nb.size(); ++k) s += wt[k] * (x[u] - x[nb[k]]);
    y[u] = s;
  }
  return y;
}

double laplacian_quadratic_form(const WeightedGraph& g, std::span<const double> x) {
  require(x.size() == g.num_vertices(), ErrorKind::DimensionMismatch, "vector length mismatch");
  double s = 0;
  for (const Edge& e : g.edges()) {
    const double d = x[e.u] - x[e.v];
    s += e.w * d * d;
  }
  return s;
}

std::size_t connected_components(const WeightedGraph& g, std::vector<std::uint32_t>& label) {
  const std::size_t n = g.num_vertices();
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  label.assign(n, kUnset);
  std::uint32_t count = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v : g.neighbors(u)) {
        if (label[v] == kUnset) {
          label[v] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return count;
}

bool is_connected(const WeightedGraph& g) {
  if (g.num_vertices() <= 1) return true;
  std::vector<std::uint32_t> label;
  return connected_components(g, label) == 1;
}

bool is_bipartite(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<int> colour(n, -1);
  std::queue<Vertex> q;
  for (Vertex s = 0; s < n; ++s) {
    if (colour[s] >= 0) continue;
    colour[s] = 0;
    q.push(s);
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      for (Vertex v : g.neighbors(u)) {
        if (colour[v] < 0) {
          colour[v] = 1 - colour[u];
          q.push(v);
        } else if (colour[v] == colour[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

PolyCoeffs::PolyCoeffs(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  require(!alpha_.empty(), ErrorKind::InvalidArgument, "alpha must have at least one entry");
  double sum = 0;
  for (double a : alpha_) {
    require(std::isfinite(a) && a >= 0, ErrorKind::InvalidArgument,
            "alpha entries must be finite and nonnegative");
    sum += a;
  }
  require(std::abs(sum - 1.0) <= kSumTolerance, ErrorKind::InvalidArgument,
          "alpha must sum to 1 (got " + std::to_string(sum) + ")");
}

PolyCoeffs PolyCoeffs::monomial(std::size_t r) {
  require(r >= 1, ErrorKind::InvalidArgument, "monomial degree must be >= 1");
  std::vector<double> a(r, 0.0);
  a[r - 1] = 1.0;
  return PolyCoeffs(std::move(a));
}

// ---------------------------------------------------------------------------

namespace {
constexpr double kDominanceTol = 1e-12;
}

SddmMatrix::SddmMatrix(std::vector<double> diag, WeightedGraph offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
  require(diag_.size() == offdiag_.num_vertices(), ErrorKind::DimensionMismatch,
          "diagonal length does not match off-diagonal graph");
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    const double gd = offdiag_.degree(static_cast<Vertex>(i));
    require(std::isfinite(diag_[i]) && diag_[i] > 0, ErrorKind::InvalidMatrix,
            "diagonal entry " + std::to_string(i) + " must be positive");
    require(diag_[i] >= gd - kDominanceTol * std::max(1.0, gd), ErrorKind::InvalidMatrix,
            "row " + std::to_string(i) + " is not diagonally dominant");
  }
}

SddmMatrix SddmMatrix::from_laplacian(const WeightedGraph& g) {
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    require(g.degree(u) > 0, ErrorKind::InvalidMatrix,
            "isolated vertex " + std::to_string(u) + " has a zero diagonal");
  }
  return SddmMatrix(g.degrees(), g);
}

std::vector<double> SddmMatrix::slack() const {
  std::vector<double> s(size());
  for (std::size_t i = 0; i < size(); ++i)
    s[i] = std::max(0.0, diag_[i] - offdiag_.degree(static_cast<Vertex>(i)));
  return s;
}

bool SddmMatrix::positive_definite() const {
  std::vector<std::uint32_t> label;
  const std::size_t c = connected_components(offdiag_, label);
  std::vector<bool> strict(c, false);
  for (std::size_t i = 0; i < size(); ++i) {
    const double gd = offdiag_.degree(static_cast<Vertex>(i));
    if (diag_[i] - gd > kDominanceTol * std::max(1.0, gd)) strict[label[i]] = true;
  }
  return std::all_of(strict.begin(), strict.end(), [](bool b) { return b; });
}

std::vector<double> SddmMatrix::matvec(std::span<const double> x) const {
  std::vector<double> y = adjacency_matvec(offdiag_, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = diag_[i] * x[i] - y[i];
  return y;
}

}  // namespace rwpoly
