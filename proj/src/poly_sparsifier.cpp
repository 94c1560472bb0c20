#include "rwpoly/poly_sparsifier.hpp"

#include <cmath>

#include "rwpoly/alias.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/resistance.hpp"

namespace rwpoly {

namespace {
double log_n(std::size_t n) { return std::log(static_cast<double>(std::max<std::size_t>(n, 2))); }
}  // namespace

StagePlan plan_stages(const SparsifyConfig& cfg, std::size_t n) {
  StagePlan p;
  if (!cfg.second_stage) {
    p.eps1 = cfg.epsilon;
    return p;
  }
  p.eps1 = cfg.split * cfg.epsilon;
  p.eps2 = (1 - cfg.split) * cfg.epsilon;
  p.second_stage = true;
  const double pairs = 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1);
  if (cfg.adaptive_split &&
      static_cast<double>(resparsify_budget(n, p.eps2, cfg.c_s)) >= pairs) {
    // Stage two could not remove anything.
    p.eps1 = cfg.epsilon;
    p.eps2 = 0;
    p.second_stage = false;
  }
  return p;
}

std::uint64_t stage_one_edge_budget(const PolyCoeffs& alpha, std::size_t m, std::size_t n,
                                    double eps1, double c_s) {
  require(eps1 > 0 && c_s > 0, ErrorKind::InvalidArgument, "eps1 and c_s must be positive");
  double mass = 0;
  for (std::size_t r = 1; r <= alpha.degree(); ++r)
    mass += alpha[r] * 2.0 * static_cast<double>(r) * static_cast<double>(m);
  return static_cast<std::uint64_t>(std::ceil(c_s * log_n(n) / (eps1 * eps1) * mass));
}

std::uint64_t stage_one_edge_budget(const PolyCoeffs& alpha, std::size_t m, std::size_t n,
                                    const SparsifyConfig& cfg) {
  return stage_one_edge_budget(alpha, m, n, plan_stages(cfg, n).eps1, cfg.c_s);
}

WeightedGraph sample_poly_paths(const SamplerIndex& idx, const PolyCoeffs& alpha,
                                std::uint64_t samples, RngStream rng,
                                const SamplingOptions& opts) {
  require(samples >= 1, ErrorKind::InvalidArgument, "sample count must be >= 1");
  const WeightedGraph& g = idx.graph();
  const double m = static_cast<double>(g.num_edges());
  std::vector<double> len_w(alpha.degree());
  double total = 0;
  for (std::size_t r = 1; r <= alpha.degree(); ++r) {
    len_w[r - 1] = alpha[r] * static_cast<double>(r);
    total += alpha[r] * 2.0 * static_cast<double>(r) * m;
  }
  const AliasTable lengths(len_w);
  const double scale = total / static_cast<double>(samples);
  return detail::run_chunked(
      g.num_vertices(), samples, rng, opts,
      [&](std::uint64_t b, std::uint64_t e, Rng& local, detail::EdgeAccumulator& acc) {
        for (std::uint64_t s = b; s < e; ++s) {
          const auto r = static_cast<unsigned>(lengths.sample(local) + 1);
          const EndpointDraw d = sample_path_endpoints(idx, r, local);
          if (d.first == d.last) continue;
          acc.add(d.first, d.last, scale * d.weight_ratio / d.resistance_bound);
        }
      });
}

WeightedGraph sparsify_poly(const WeightedGraph& g, const PolyCoeffs& alpha,
                            const SparsifyConfig& cfg, RngStream rng, SparsifyStats* stats) {
  cfg.validate();
  const std::size_t n = g.num_vertices();
  if (!cfg.allow_disconnected) {
    require(is_connected(g), ErrorKind::Disconnected,
            "input graph is disconnected (enable per-component processing to continue)");
  }
  SparsifyStats st;
  if (g.num_edges() == 0) {
    if (stats) *stats = st;
    return g;
  }
  const StagePlan plan = plan_stages(cfg, n);
  st.eps1 = plan.eps1;
  st.eps2 = plan.eps2;
  st.samples = stage_one_edge_budget(alpha, g.num_edges(), n, plan.eps1, cfg.c_s);
  SamplingOptions so;
  so.threads = cfg.threads;
  so.chunk_size = cfg.chunk_size;
  const SamplerIndex idx(g);
  WeightedGraph h = sample_poly_paths(idx, alpha, st.samples, rng.child(0), so);
  st.stage_one_edges = h.num_edges();
  if (plan.second_stage && h.num_edges() > 0) {
    st.second_stage_ran = h.num_edges() > resparsify_budget(n, plan.eps2, cfg.c_s);
    h = resparsify(h, plan.eps2, cfg, rng.child(1));
  }
  st.output_edges = h.num_edges();
  if (stats) *stats = st;
  return h;
}

WeightedGraph sparsify_monomial(const WeightedGraph& g, std::size_t r, const SparsifyConfig& cfg,
                                RngStream rng, SparsifyStats* stats) {
  return sparsify_poly(g, PolyCoeffs::monomial(r), cfg, rng, stats);
}

}  // namespace rwpoly
