#pragma once

#include <cstdint>

#include "rwpoly/graph.hpp"
#include "rwpoly/rng.hpp"

namespace rwpoly::gen {

/// Weights drawn uniformly from [lo, hi]; lo == hi gives unit-style weights.
struct WeightRange {
  double lo = 1.0;
  double hi = 1.0;
};

WeightedGraph path(std::size_t n, WeightRange w = {}, RngStream rng = {});
WeightedGraph cycle(std::size_t n, WeightRange w = {}, RngStream rng = {});
WeightedGraph complete(std::size_t n, WeightRange w = {}, RngStream rng = {});
WeightedGraph star(std::size_t leaves, WeightRange w = {}, RngStream rng = {});
/// Two cliques of size k joined by one bridge edge (k-1, k).
WeightedGraph barbell(std::size_t k, WeightRange w = {}, RngStream rng = {});
/// Ring lattice: each vertex joined to its `k` nearest neighbours on each side.
WeightedGraph ring(std::size_t n, std::size_t k = 1, WeightRange w = {}, RngStream rng = {});

/// G(n, p), patched to be connected by linking consecutive components.
WeightedGraph erdos_renyi(std::size_t n, double p, WeightRange w, RngStream rng);

/// Split-form SDDM: off-diagonal from `g`, slack uniform in [lo, hi] times the
/// vertex degree added to the diagonal.
SddmMatrix sddm_with_slack(const WeightedGraph& g, double lo, double hi, RngStream rng);

}  // namespace rwpoly::gen
