#pragma once

#include <cstdint>

#include "rwpoly/config.hpp"
#include "rwpoly/graph.hpp"
#include "rwpoly/rng.hpp"
#include "rwpoly/sampling.hpp"

namespace rwpoly {

/// Error split between the path-sampling stage and the resistance stage.
struct StagePlan {
  double eps1 = 0;
  double eps2 = 0;
  bool second_stage = false;
};

StagePlan plan_stages(const SparsifyConfig& cfg, std::size_t n);

/// M = ceil(c_s ln n / eps1^2 * sum_r alpha_r 2 r m).
std::uint64_t stage_one_edge_budget(const PolyCoeffs& alpha, std::size_t m, std::size_t n,
                                    double eps1, double c_s);
std::uint64_t stage_one_edge_budget(const PolyCoeffs& alpha, std::size_t m, std::size_t n,
                                    const SparsifyConfig& cfg);

struct SparsifyStats {
  std::uint64_t samples = 0;
  std::size_t stage_one_edges = 0;
  std::size_t output_edges = 0;
  double eps1 = 0;
  double eps2 = 0;
  bool second_stage_ran = false;
};

/// Draws `samples` walks for the mixture alpha over the sampler's graph: the
/// length r with probability proportional to alpha_r r, then a walk via
/// sample_path_endpoints. Each draw adds T weight_ratio / (samples Z(p)) to
/// (u_0, u_r), T = sum_r alpha_r 2 r m.
WeightedGraph sample_poly_paths(const SamplerIndex& idx, const PolyCoeffs& alpha,
                                std::uint64_t samples, RngStream rng,
                                const SamplingOptions& opts = {});

/// L_H ~ L_alpha(G). Refuses disconnected graphs unless cfg.allow_disconnected.
WeightedGraph sparsify_poly(const WeightedGraph& g, const PolyCoeffs& alpha,
                            const SparsifyConfig& cfg, RngStream rng,
                            SparsifyStats* stats = nullptr);

WeightedGraph sparsify_monomial(const WeightedGraph& g, std::size_t r, const SparsifyConfig& cfg,
                                RngStream rng, SparsifyStats* stats = nullptr);

}  // namespace rwpoly
