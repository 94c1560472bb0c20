#include "rwpoly/sddm.hpp"

#include <algorithm>
#include <cmath>

#include "rwpoly/error.hpp"
#include "rwpoly/poly_sparsifier.hpp"
#include "rwpoly/resistance.hpp"
#include "rwpoly/sampling.hpp"

namespace rwpoly {

DenseMatrix sddm_poly_dense(const SddmMatrix& m, const PolyCoeffs& alpha, std::size_t max_n) {
  DenseMatrix P = dense_poly(m, alpha, max_n);
  const Eigen::Index n = P.rows();
  const double scale = std::max(1.0, P.diagonal().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      require(P(i, j) <= 1e-12 * scale, ErrorKind::InvalidMatrix,
              "polynomial has a positive off-diagonal entry");
      off -= P(i, j);
    }
    require(P(i, i) >= off - 1e-9 * scale, ErrorKind::InvalidMatrix,
            "polynomial lost diagonal dominance in row " + std::to_string(i));
  }
  return P;
}

std::vector<double> extra_diagonal(const SddmMatrix& m, const PolyCoeffs& alpha) {
  const std::size_t n = m.size();
  const auto& D = m.diag();
  const auto slack = m.slack();
  std::vector<double> base(n), s(n, 0.0), acc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) base[i] = slack[i] / D[i];
  for (std::size_t r = 1; r <= alpha.degree(); ++r) {
    std::vector<double> As = adjacency_matvec(m.offdiag(), s);
    for (std::size_t i = 0; i < n; ++i) s[i] = base[i] + As[i] / D[i];
    if (alpha[r] != 0)
      for (std::size_t i = 0; i < n; ++i) acc[i] += alpha[r] * s[i];
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = D[i] * acc[i];
    require(x >= -1e-12 * std::max(1.0, D[i]), ErrorKind::InvalidMatrix,
            "negative extra diagonal at row " + std::to_string(i));
    out[i] = std::max(0.0, x);
  }
  return out;
}

SddmMatrix SddmPolyResult::assembled() const {
  std::vector<double> d(extra_diag.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = laplacian_part.degree(static_cast<Vertex>(i)) + extra_diag[i];
  return SddmMatrix(std::move(d), laplacian_part);
}

SddmPolyResult sparsify_sddm_split(const SddmMatrix& m, const PolyCoeffs& alpha,
                                   const SparsifyConfig& cfg, RngStream rng) {
  cfg.validate();
  const WeightedGraph& g = m.offdiag();
  const std::size_t n = m.size();
  SddmPolyResult res;
  res.extra_diag = extra_diagonal(m, alpha);
  if (g.num_edges() == 0) {
    res.laplacian_part = g;
    return res;
  }
  if (!cfg.allow_disconnected)
    require(is_connected(g), ErrorKind::Disconnected,
            "off-diagonal graph is disconnected (enable per-component processing to continue)");

  // e^{+-eps'} with eps' = ln(1 + eps) sits inside [1 - eps, 1 + eps].
  SparsifyConfig c = cfg;
  c.epsilon = std::log1p(cfg.epsilon);
  const StagePlan plan = plan_stages(c, n);
  const std::uint64_t M = stage_one_edge_budget(alpha, g.num_edges(), n, plan.eps1, c.c_s);
  SamplingOptions so;
  so.threads = c.threads;
  so.chunk_size = c.chunk_size;
  const SamplerIndex idx(g, m.diag());
  WeightedGraph h = sample_poly_paths(idx, alpha, M, rng.child(0), so);
  if (plan.second_stage && h.num_edges() > 0) h = resparsify(h, plan.eps2, c, rng.child(1));
  res.laplacian_part = std::move(h);
  return res;
}

SddmMatrix sparsify_sddm(const SddmMatrix& m, const PolyCoeffs& alpha, const SparsifyConfig& cfg,
                         RngStream rng) {
  return sparsify_sddm_split(m, alpha, cfg, rng).assembled();
}

}  // namespace rwpoly
