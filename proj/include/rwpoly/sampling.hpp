#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "rwpoly/alias.hpp"
#include "rwpoly/graph.hpp"
#include "rwpoly/rng.hpp"

namespace rwpoly {

/// A sampled walk p = (u_0, ..., u_r).
///
/// weight          w(p) = prod_i A(u_{i-1},u_i) / prod_{0<i<r} D(u_i), with D the
///                 normalisation diagonal (graph degrees, or an SDDM diagonal).
/// sampling_weight same product under the sampler's own degrees; equals
///                 `weight` for plain graphs.
/// resistance_bound Z(p) = sum_i c_i / A(u_{i-1},u_i).
/// mass            tau_p = sampling_weight * Z(p).
struct PathSample {
  std::vector<Vertex> vertices;
  double weight = 0;
  double sampling_weight = 0;
  double resistance_bound = 0;
  double mass = 0;

  Vertex first() const { return vertices.front(); }
  Vertex last() const { return vertices.back(); }
  bool closed() const { return vertices.front() == vertices.back(); }
  std::size_t length() const { return vertices.size() - 1; }
};

/// Endpoints of a sampled walk plus what the estimator needs. `weight_ratio`
/// is weight / sampling_weight.
struct EndpointDraw {
  Vertex first;
  Vertex last;
  double resistance_bound;
  double weight_ratio;
};

/// Preprocessed sampling tables for walks on one graph: an alias table per
/// vertex over A(u,.)/D_g(u) and the edge array for uniform edge draws.
/// Holds a pointer to the graph, which must outlive the index.
class SamplerIndex {
 public:
  explicit SamplerIndex(const WeightedGraph& g);
  /// `normalization` is the diagonal D used in w(p); it must dominate the
  /// graph degree entrywise (SDDM splitting). Walks still move with
  /// probabilities A(u,v)/D_g(u).
  SamplerIndex(const WeightedGraph& g, std::vector<double> normalization);

  const WeightedGraph& graph() const noexcept { return *g_; }
  const std::vector<double>& normalization() const noexcept { return norm_; }

  /// Neighbour slot (index into g.neighbors(u)) drawn with prob A(u,v)/D_g(u).
  std::size_t step(Vertex u, Rng& rng) const { return nbr_.sample(u, rng); }
  double step_probability(Vertex u, std::size_t slot) const { return nbr_.probability(u, slot); }
  double table_mass(Vertex u) const;

  const Edge& uniform_edge(Rng& rng) const {
    return g_->edges()[static_cast<std::size_t>(rng.below(g_->num_edges()))];
  }

  /// D_g(u) / D(u); 1 for plain graphs.
  double interior_ratio(Vertex u) const noexcept { return ratio_.empty() ? 1.0 : ratio_[u]; }

 private:
  const WeightedGraph* g_;
  std::vector<double> norm_;
  std::vector<double> ratio_;
  SegmentedAlias nbr_;
};

/// Draws a length-r walk with probability proportional to
/// w(p) * Z(p), Z(p) = sum_i 2/A(u_{i-1},u_i): pick the anchor position k and
/// a uniform edge with a random orientation, then walk k-1 steps backwards
/// and r-k steps forwards. Over the mass 2rm of total_mass(), the unordered
/// pair {p, reverse(p)} is drawn with probability w(p)Z(p)/(2rm).
PathSample sample_path(const SamplerIndex& idx, unsigned r, Rng& rng);
EndpointDraw sample_path_endpoints(const SamplerIndex& idx, unsigned r, Rng& rng);

/// sum over walks of w(p) Z(p), counting a walk and its reversal once: 2 r m.
double total_mass(unsigned r, std::size_t m);

// ---------------------------------------------------------------------------
// Importance-sampling accumulator.

struct SamplingOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Samples per deterministic work unit. Output does not depend on the
  /// thread count, only on (rng, chunk_size).
  std::uint64_t chunk_size = 1u << 16;
};

/// One importance draw: an element joining u and v whose exact weight in the
/// target is `weight`, drawn with probability tau / tau_total.
struct WeightedDraw {
  Vertex u;
  Vertex v;
  double weight;
  double tau;
};

using DrawFn = std::function<WeightedDraw(Rng&)>;

/// Sampling loop over arbitrary draws: every draw adds
/// weight * tau_total / (samples * tau) to edge (u, v); draws with u == v are
/// consumed but emit nothing. Duplicates aggregate.
WeightedGraph graph_sampling(std::size_t n, const DrawFn& draw, double tau_total,
                             std::uint64_t samples, RngStream rng,
                             const SamplingOptions& opts = {});

namespace detail {

/// Per-chunk accumulation of (u, v, weight) into a deterministic graph.
class EdgeAccumulator {
 public:
  explicit EdgeAccumulator(std::size_t n);
  void add(Vertex u, Vertex v, double w);
  /// Sorted (key, weight) pairs; resets the accumulator.
  std::vector<std::pair<std::uint64_t, double>> take();

 private:
  std::size_t n_;
  bool dense_;
  std::vector<double> dense_w_;
  std::vector<std::uint64_t> touched_;
  std::vector<std::pair<std::uint64_t, double>> sparse_;
};

/// Runs `chunk(index, rng, acc)` for every chunk, in parallel, and merges
/// the per-chunk partial sums in chunk order.
WeightedGraph run_chunked(std::size_t n, std::uint64_t samples, RngStream rng,
                          const SamplingOptions& opts,
                          const std::function<void(std::uint64_t begin, std::uint64_t end, Rng&,
                                                   EdgeAccumulator&)>& chunk);

unsigned resolve_threads(unsigned requested);

}  // namespace detail

// ---------------------------------------------------------------------------
// Heterogeneous walk templates.

/// One layer of a walk template: an undirected graph plus optional
/// nonnegative self-loop weights (a walk may stay at u with weight loops[u]).
struct WalkLayer {
  std::shared_ptr<const WeightedGraph> graph;
  std::vector<double> self_loops;

  double loop(Vertex u) const { return self_loops.empty() ? 0.0 : self_loops[u]; }
};

/// Walks u_0..u_r where step i uses layer i, weighted by
///   w(p) = prod_i layer_i(u_{i-1},u_i) / prod_{0<i<r} D(u_i)
/// with a shared diagonal D, and resistance bound Z(p) = sum_i c_i/layer_i(.).
///
/// Layers need not have row sums equal to D. Left/right absorption vectors
///   L_1 = 1,  L_{i+1}(b) = sum_a L_i(a) layer_i(a,b) / D(b)
///   R_r = 1,  R_{i-1}(a) = sum_b layer_i(a,b) R_i(b) / D(a)
/// make the draw exact: the anchor (i, a->b) is chosen with mass
/// c_i L_i(a) R_i(b) and each extension step is reweighted by the absorption
/// of the vertex it lands on. Walks are drawn with probability
/// w(p)Z(p) / (2 * total_mass()).
class WalkTemplate {
 public:
  WalkTemplate(std::vector<WalkLayer> layers, std::vector<double> coeffs,
               std::vector<double> normalization);

  std::size_t length() const noexcept { return layers_.size(); }
  std::size_t num_vertices() const noexcept { return norm_.size(); }

  /// sum_i c_i * position_mass(i): the sum over walks of w(p)Z(p) with a walk
  /// and its reversal counted once.
  double total_mass() const noexcept { return total_mass_; }
  /// (1/2) sum over directed layer-i pairs (a,b) of L_i(a) R_i(b), i in [1, r].
  double position_mass(std::size_t i) const { return position_mass_.at(i - 1); }
  std::span<const double> left_absorption(std::size_t i) const { return left_.at(i - 1); }
  std::span<const double> right_absorption(std::size_t i) const { return right_.at(i - 1); }
  double coeff(std::size_t i) const { return coeffs_.at(i - 1); }

  PathSample sample(Rng& rng) const;
  EndpointDraw sample_endpoints(Rng& rng) const;

 private:
  struct ExtLayer {
    std::vector<std::size_t> offsets;
    std::vector<Vertex> nbr;
    std::vector<double> wt;
  };

  std::size_t draw_anchor(Rng& rng, std::size_t& pos, Vertex& a, Vertex& b, double& w) const;

  std::vector<WalkLayer> layers_;
  std::vector<double> coeffs_;
  std::vector<double> norm_;
  std::vector<ExtLayer> ext_;
  std::vector<std::vector<double>> left_, right_;
  std::vector<double> position_mass_;
  double total_mass_ = 0;

  // Anchor table over (position, directed pair).
  AliasTable anchor_;
  std::vector<std::uint32_t> anchor_pos_;
  std::vector<Vertex> anchor_a_;
  std::vector<std::size_t> anchor_slot_;
  // fwd_[j]: step j (layer j) from u_{j-1}, weights layer_j(u,y) R_j(y).
  // bwd_[j]: step j backwards from u_j, weights layer_j(u,x) L_j(x).
  std::vector<SegmentedAlias> fwd_, bwd_;
};

}  // namespace rwpoly
