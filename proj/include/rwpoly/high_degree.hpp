#pragma once

#include <string>
#include <vector>

#include "rwpoly/config.hpp"
#include "rwpoly/graph.hpp"
#include "rwpoly/rng.hpp"
#include "rwpoly/sampling.hpp"

namespace rwpoly {

enum class DegreeOp { Square, Plus };

const char* to_string(DegreeOp op) noexcept;

struct DegreeSchedule {
  std::size_t requested_degree = 0;
  /// Degree actually built (d - 2 when substituted).
  std::size_t target_degree = 0;
  /// Too small or the wrong residue for composition: sample G_d directly.
  bool direct = false;
  bool substituted = false;
  /// Error budget for the composed chain: eps, or eps/2 after substitution.
  double budget = 0;
  std::vector<DegreeOp> ops;

  std::size_t k() const noexcept { return ops.size(); }
  /// Budget per sampling round: the base G_2 and each of the k steps get
  /// budget / (2(k+1)); the final resparsification gets budget / 2.
  double step_eps() const noexcept { return budget / (2.0 * static_cast<double>(k() + 1)); }
  /// 2, then the degree after every op.
  std::vector<std::size_t> degrees() const;
  std::string to_string() const;
};

/// Shortest {x2, +4} program from 2 to `target` (breadth first, squaring
/// tried first). `target` must be even and >= 2.
std::vector<DegreeOp> shortest_program(std::size_t target);

/// d = 2 is direct. d = 2 (mod 4) is replaced by d - 2 at half the budget when
/// (d - 2)/4 >= 1/eps, and is direct otherwise. Multiples of 4 are composed.
DegreeSchedule schedule(std::size_t d, double eps);

/// A_tilde with rows summing to D: graph part plus self-loops D - D_graph.
/// D - A_tilde is the Laplacian of `graph`.
struct MonomialApprox {
  std::size_t degree = 0;
  WeightedGraph graph;
  std::vector<double> self_loops;
  double accumulated_eps = 0;
  /// Number of times the graph part was shrunk to keep the loops nonnegative.
  std::size_t rescale_events = 0;
};

/// Wraps a sparsifier of L_{G_degree} as an approximation. If some row of
/// the graph exceeds D, the graph is scaled by the smallest factor that
/// fixes it and ln(1/factor) is added to accumulated_eps.
MonomialApprox make_approx(WeightedGraph h, const std::vector<double>& D, std::size_t degree,
                           double accumulated_eps);

/// Samples the endpoints of template walks: M = ceil(c_s ln n T / eps1^2)
/// draws, each adding T / (M Z(p)) to (u_0, u_r); then resparsifies.
WeightedGraph sparsify_template(const WalkTemplate& t, double eps, const SparsifyConfig& cfg,
                                RngStream rng);

/// D - A_tilde D^-1 A_tilde via the template (A_tilde, A_tilde), c = (2, 2).
MonomialApprox square_step(const MonomialApprox& cur, const std::vector<double>& D, double eps,
                           const SparsifyConfig& cfg, RngStream rng);

/// Degree + 4 via the template (A, A, A_tilde, A, A) with coefficients
/// (e^h, e^h, e^2h, e^h, e^h), h = cur.accumulated_eps.
MonomialApprox plus_step(const MonomialApprox& cur, const WeightedGraph& base, double eps,
                         const SparsifyConfig& cfg, RngStream rng);

struct HighDegreeStats {
  DegreeSchedule schedule;
  double accumulated_eps = 0;
  std::size_t rescale_events = 0;
};

/// L_out ~ L_{G_d} for even d. Refuses bipartite or disconnected graphs.
WeightedGraph sparsify_high_degree(const WeightedGraph& g, std::size_t d, double eps,
                                   const SparsifyConfig& cfg, RngStream rng,
                                   HighDegreeStats* stats = nullptr);

}  // namespace rwpoly
