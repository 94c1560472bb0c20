#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rwpoly/config.hpp"
#include "rwpoly/graph.hpp"
#include "rwpoly/rng.hpp"

namespace rwpoly {

struct ErOptions {
  ErMethod method = ErMethod::Auto;
  /// Sketch tolerance; k = ceil(24 ln n / delta^2) projections.
  double delta = 0.2;
  /// Auto picks the dense path up to this many vertices.
  std::size_t dense_threshold = 512;
  double cg_tolerance = 1e-8;
  /// 0 means max(1000, 10 n).
  std::size_t cg_max_iterations = 0;
  unsigned threads = 0;
};

/// Per-edge resistance upper bounds, aligned with H.edges().
struct ErEstimates {
  std::vector<double> bound;
  ErMethod method = ErMethod::DenseExact;
  /// Factor applied to raw sketch values; 1 for the dense path.
  double inflation = 1.0;
};

/// Dense path: per-component inverse of L + J/k. Sketch path: random +-1/sqrt(k)
/// projections of W^{1/2} B, each solved against L_H by Jacobi-preconditioned
/// conjugate gradients on a grounded system, then inflated by (1+delta)^2.
ErEstimates estimate_er(const WeightedGraph& H, const ErOptions& opts, RngStream rng);

/// n x k embedding Y with ||Y_u - Y_v||^2 ~ R(u,v) within 1 +- delta.
Eigen::MatrixXd resistance_sketch(const WeightedGraph& H, const ErOptions& opts, RngStream rng);

/// floor(c_s n ln n / eps^2).
std::size_t resparsify_budget(std::size_t n, double eps, double c_s);

/// Importance-samples edges of H by w_e Z_e. Returns H untouched when it
/// already fits the edge budget.
WeightedGraph resparsify(const WeightedGraph& H, double eps, const SparsifyConfig& cfg,
                         RngStream rng);

/// Approximate effective resistances of L_alpha(G): sparsify, then keep a
/// resistance sketch of the sparsifier. Queries cost O(k).
class ErOracle {
 public:
  static ErOracle build(const WeightedGraph& g, const PolyCoeffs& alpha, double eps,
                        const SparsifyConfig& cfg, RngStream rng, const ErOptions& opts = {});

  double query(Vertex u, Vertex v) const;
  const WeightedGraph& sparsifier() const noexcept { return h_; }
  std::size_t num_vertices() const noexcept { return h_.num_vertices(); }
  std::size_t sketch_dimension() const noexcept { return static_cast<std::size_t>(embed_.cols()); }
  ErMethod method() const noexcept { return method_; }

 private:
  WeightedGraph h_;
  Eigen::MatrixXd embed_;
  Eigen::MatrixXd pinv_;
  std::vector<std::uint32_t> comp_;
  ErMethod method_ = ErMethod::Sketch;
};

}  // namespace rwpoly
