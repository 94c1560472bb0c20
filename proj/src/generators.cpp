#include "rwpoly/generators.hpp"

#include <algorithm>
#include <random>

#include "rwpoly/error.hpp"

namespace rwpoly::gen {

namespace {

class WeightDraw {
 public:
  WeightDraw(WeightRange w, RngStream s) : w_(w), rng_(s) {
    require(w.lo > 0 && w.hi >= w.lo, ErrorKind::InvalidArgument, "bad weight range");
  }
  double operator()() { return w_.lo == w_.hi ? w_.lo : w_.lo + (w_.hi - w_.lo) * rng_.uniform(); }

 private:
  WeightRange w_;
  Rng rng_;
};

}  // namespace

WeightedGraph path(std::size_t n, WeightRange w, RngStream rng) {
  WeightDraw draw(w, rng);
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i)
    e.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1), draw()});
  return WeightedGraph::from_edges(n, e);
}

WeightedGraph cycle(std::size_t n, WeightRange w, RngStream rng) {
  require(n >= 3, ErrorKind::InvalidArgument, "cycle needs n >= 3");
  return ring(n, 1, w, rng);
}

WeightedGraph ring(std::size_t n, std::size_t k, WeightRange w, RngStream rng) {
  require(n >= 3 && k >= 1 && 2 * k < n, ErrorKind::InvalidArgument, "ring needs n > 2k >= 2");
  WeightDraw draw(w, rng);
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= k; ++j)
      e.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + j) % n), draw()});
  return WeightedGraph::from_edges(n, e);
}

WeightedGraph complete(std::size_t n, WeightRange w, RngStream rng) {
  WeightDraw draw(w, rng);
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      e.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), draw()});
  return WeightedGraph::from_edges(n, e);
}

WeightedGraph star(std::size_t leaves, WeightRange w, RngStream rng) {
  WeightDraw draw(w, rng);
  std::vector<Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.push_back({0, static_cast<Vertex>(i), draw()});
  return WeightedGraph::from_edges(leaves + 1, e);
}

WeightedGraph barbell(std::size_t k, WeightRange w, RngStream rng) {
  require(k >= 2, ErrorKind::InvalidArgument, "barbell needs cliques of size >= 2");
  WeightDraw draw(w, rng);
  std::vector<Edge> e;
  for (std::size_t off : {std::size_t{0}, k})
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        e.push_back({static_cast<Vertex>(off + i), static_cast<Vertex>(off + j), draw()});
  e.push_back({static_cast<Vertex>(k - 1), static_cast<Vertex>(k), draw()});
  return WeightedGraph::from_edges(2 * k, e);
}

WeightedGraph erdos_renyi(std::size_t n, double p, WeightRange w, RngStream rng) {
  require(n >= 2 && p >= 0 && p <= 1, ErrorKind::InvalidArgument, "bad G(n,p) parameters");
  Rng r(rng);
  WeightDraw draw(w, rng.child(1));
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (r.uniform() < p) e.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), draw()});
  WeightedGraph g = WeightedGraph::from_edges(n, e);
  std::vector<std::uint32_t> label;
  const std::size_t c = connected_components(g, label);
  if (c == 1) return g;
  // One representative per component, chained together.
  std::vector<Vertex> rep(c, 0);
  std::vector<bool> seen(c, false);
  for (Vertex u = 0; u < n; ++u)
    if (!seen[label[u]]) {
      seen[label[u]] = true;
      rep[label[u]] = u;
    }
  for (std::size_t i = 0; i + 1 < c; ++i) e.push_back({rep[i], rep[i + 1], draw()});
  return WeightedGraph::from_edges(n, e);
}

SddmMatrix sddm_with_slack(const WeightedGraph& g, double lo, double hi, RngStream rng) {
  require(lo >= 0 && hi >= lo, ErrorKind::InvalidArgument, "bad slack range");
  Rng r(rng);
  std::vector<double> diag(g.num_vertices());
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    const double d = g.degree(u) > 0 ? g.degree(u) : 1.0;
    diag[u] = g.degree(u) + d * (lo + (hi - lo) * r.uniform());
    if (diag[u] <= 0) diag[u] = 1.0;
  }
  return SddmMatrix(std::move(diag), g);
}

}  // namespace rwpoly::gen
