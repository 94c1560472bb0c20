#include "rwpoly/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "rwpoly/alias.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/poly_sparsifier.hpp"
#include "rwpoly/sampling.hpp"

namespace rwpoly {

const char* to_string(ErMethod m) noexcept {
  switch (m) {
    case ErMethod::Auto: return "auto";
    case ErMethod::DenseExact: return "dense-exact";
    case ErMethod::Sketch: return "sketch";
  }
  return "unknown";
}

void SparsifyConfig::validate() const {
  require(std::isfinite(epsilon) && epsilon > 0 && epsilon <= 1, ErrorKind::InvalidArgument,
          "epsilon must lie in (0, 1]");
  require(std::isfinite(c_s) && c_s > 0, ErrorKind::InvalidArgument, "c_s must be positive");
  require(split > 0 && split < 1, ErrorKind::InvalidArgument, "split must lie in (0, 1)");
  require(chunk_size >= 1, ErrorKind::InvalidArgument, "chunk size must be positive");
  require(er_delta > 0 && er_delta < 1, ErrorKind::InvalidArgument, "er_delta must lie in (0, 1)");
}

namespace {

ErMethod resolve(const ErOptions& o, std::size_t n) {
  if (o.method != ErMethod::Auto) return o.method;
  return n <= o.dense_threshold ? ErMethod::DenseExact : ErMethod::Sketch;
}

/// (L + sum_c J_c / |c|)^{-1}; agrees with L^+ on vectors summing to zero
/// within every component.
Eigen::MatrixXd shifted_inverse(const WeightedGraph& H, std::vector<std::uint32_t>& comp) {
  const std::size_t n = H.num_vertices();
  const std::size_t c = connected_components(H, comp);
  std::vector<double> size(c, 0.0);
  for (auto l : comp) size[l] += 1;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const Edge& e : H.edges()) {
    L(e.u, e.v) -= e.w;
    L(e.v, e.u) -= e.w;
    L(e.u, e.u) += e.w;
    L(e.v, e.v) += e.w;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (comp[i] == comp[j]) L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += 1.0 / size[comp[i]];
  Eigen::LLT<Eigen::MatrixXd> llt(L);
  require(llt.info() == Eigen::Success, ErrorKind::NotConverged, "dense Laplacian factorization failed");
  return llt.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

/// Grounded reduced Laplacian: one vertex per component removed.
struct Grounded {
  std::vector<std::int64_t> index;  // -1 for grounded vertices
  Eigen::SparseMatrix<double> L;
};

Grounded ground(const WeightedGraph& H) {
  const std::size_t n = H.num_vertices();
  std::vector<std::uint32_t> comp;
  const std::size_t c = connected_components(H, comp);
  std::vector<bool> grounded(c, false);
  Grounded g;
  g.index.assign(n, -1);
  std::int64_t next = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (!grounded[comp[u]]) {
      grounded[comp[u]] = true;
      continue;
    }
    g.index[u] = next++;
  }
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * H.num_edges());
  for (const Edge& e : H.edges()) {
    const auto a = g.index[e.u], b = g.index[e.v];
    if (a >= 0) t.emplace_back(a, a, e.w);
    if (b >= 0) t.emplace_back(b, b, e.w);
    if (a >= 0 && b >= 0) {
      t.emplace_back(a, b, -e.w);
      t.emplace_back(b, a, -e.w);
    }
  }
  g.L.resize(next, next);
  g.L.setFromTriplets(t.begin(), t.end());
  return g;
}

}  // namespace

Eigen::MatrixXd resistance_sketch(const WeightedGraph& H, const ErOptions& opts, RngStream rng) {
  const std::size_t n = H.num_vertices();
  require(opts.delta > 0 && opts.delta < 1, ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  const auto k = static_cast<std::size_t>(std::ceil(24.0 * logn / (opts.delta * opts.delta)));
  const Grounded G = ground(H);
  const auto nr = G.L.rows();
  const std::size_t max_it = opts.cg_max_iterations ? opts.cg_max_iterations
                                                     : std::max<std::size_t>(1000, 10 * n);
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  if (nr == 0) return Y;

  // Projection j, column rhs = sum_e q_je sqrt(w_e) (e_u - e_v), q = +-1/sqrt(k).
  const double s = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<double> sqrtw(H.num_edges());
  for (std::size_t e = 0; e < H.num_edges(); ++e) sqrtw[e] = std::sqrt(H.edges()[e].w);

  const unsigned nthreads = std::min<unsigned>(detail::resolve_threads(opts.threads),
                                               static_cast<unsigned>(std::min<std::size_t>(k, 64)));
  const std::size_t per = (k + nthreads - 1) / nthreads;
  std::vector<std::string> errors(nthreads);
  auto work = [&](unsigned t) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(opts.cg_tolerance);
    cg.setMaxIterations(static_cast<Eigen::Index>(max_it));
    cg.compute(G.L);
    Eigen::VectorXd b(nr), x(nr);
    for (std::size_t j = t * per; j < std::min(k, (t + 1) * per); ++j) {
      Rng r(rng.child(j));
      b.setZero();
      for (std::size_t e = 0; e < H.num_edges(); ++e) {
        const Edge& ed = H.edges()[e];
        const double v = (r.coin() ? s : -s) * sqrtw[e];
        if (G.index[ed.u] >= 0) b(G.index[ed.u]) += v;
        if (G.index[ed.v] >= 0) b(G.index[ed.v]) -= v;
      }
      x = cg.solve(b);
      if (cg.info() != Eigen::Success) {
        errors[t] = "conjugate gradients did not converge: relative residual " +
                    std::to_string(cg.error()) + " after " + std::to_string(cg.iterations()) +
                    " iterations";
        return;
      }
      for (std::size_t u = 0; u < n; ++u)
        if (G.index[u] >= 0) Y(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(j)) = x(G.index[u]);
    }
  };
  if (nthreads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) fail(ErrorKind::NotConverged, e);
  return Y;
}

ErEstimates estimate_er(const WeightedGraph& H, const ErOptions& opts, RngStream rng) {
  require(H.num_edges() >= 1, ErrorKind::InvalidArgument, "resistance estimation needs edges");
  ErEstimates out;
  out.method = resolve(opts, H.num_vertices());
  out.bound.resize(H.num_edges());
  if (out.method == ErMethod::DenseExact) {
    std::vector<std::uint32_t> comp;
    const Eigen::MatrixXd P = shifted_inverse(H, comp);
    for (std::size_t e = 0; e < H.num_edges(); ++e) {
      const Edge& ed = H.edges()[e];
      out.bound[e] = std::max(0.0, P(ed.u, ed.u) + P(ed.v, ed.v) - 2 * P(ed.u, ed.v));
    }
    out.inflation = 1.0;
  } else {
    const Eigen::MatrixXd Y = resistance_sketch(H, opts, rng);
    out.inflation = (1 + opts.delta) * (1 + opts.delta);
    for (std::size_t e = 0; e < H.num_edges(); ++e) {
      const Edge& ed = H.edges()[e];
      out.bound[e] = out.inflation * (Y.row(ed.u) - Y.row(ed.v)).squaredNorm();
    }
  }
  // An edge can never have resistance above 1/w; tiny or zero estimates are
  // kept positive so every edge stays sampleable.
  for (std::size_t e = 0; e < H.num_edges(); ++e) {
    const double cap = 1.0 / H.edges()[e].w;
    out.bound[e] = std::clamp(out.bound[e], 1e-12 * cap, cap);
  }
  return out;
}

std::size_t resparsify_budget(std::size_t n, double eps, double c_s) {
  require(eps > 0 && c_s > 0, ErrorKind::InvalidArgument, "eps and c_s must be positive");
  const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return static_cast<std::size_t>(std::floor(c_s * static_cast<double>(n) * logn / (eps * eps)));
}

WeightedGraph resparsify(const WeightedGraph& H, double eps, const SparsifyConfig& cfg,
                         RngStream rng) {
  require(eps > 0, ErrorKind::InvalidArgument, "eps must be positive");
  const std::size_t n = H.num_vertices();
  const std::size_t budget = resparsify_budget(n, eps, cfg.c_s);
  if (H.num_edges() <= budget) return H;

  ErOptions eo;
  eo.method = cfg.er_method;
  eo.delta = cfg.er_delta;
  eo.threads = cfg.threads;
  const ErEstimates er = estimate_er(H, eo, rng.child(0));
  std::vector<double> tau(H.num_edges());
  double total = 0;
  for (std::size_t e = 0; e < H.num_edges(); ++e) {
    tau[e] = H.edges()[e].w * er.bound[e];
    total += tau[e];
  }
  const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  const double want = std::ceil(cfg.c_s * logn * total / (eps * eps));
  const auto M = static_cast<std::uint64_t>(std::min(want, static_cast<double>(budget)));
  const AliasTable table(tau);
  const auto edges = H.edges();
  SamplingOptions so;
  so.threads = cfg.threads;
  so.chunk_size = cfg.chunk_size;
  const double scale = total / static_cast<double>(M);
  return detail::run_chunked(
      n, M, rng.child(1), so,
      [&](std::uint64_t b, std::uint64_t e, Rng& local, detail::EdgeAccumulator& acc) {
        for (std::uint64_t s = b; s < e; ++s) {
          const std::size_t i = table.sample(local);
          acc.add(edges[i].u, edges[i].v, edges[i].w * scale / tau[i]);
        }
      });
}

// ---------------------------------------------------------------------------

ErOracle ErOracle::build(const WeightedGraph& g, const PolyCoeffs& alpha, double eps,
                         const SparsifyConfig& cfg, RngStream rng, const ErOptions& opts) {
  SparsifyConfig c = cfg;
  c.epsilon = eps;
  ErOracle o;
  o.h_ = sparsify_poly(g, alpha, c, rng.child(0));
  connected_components(o.h_, o.comp_);
  // The oracle defaults to the sketch; an explicit dense request stores L^+.
  o.method_ = opts.method == ErMethod::DenseExact ? ErMethod::DenseExact : ErMethod::Sketch;
  if (o.method_ == ErMethod::DenseExact) {
    std::vector<std::uint32_t> comp;
    o.pinv_ = shifted_inverse(o.h_, comp);
  } else {
    o.embed_ = resistance_sketch(o.h_, opts, rng.child(1));
  }
  return o;
}

double ErOracle::query(Vertex u, Vertex v) const {
  const std::size_t n = h_.num_vertices();
  require(u < n && v < n, ErrorKind::InvalidArgument,
          "vertex out of range (n=" + std::to_string(n) + ")");
  if (u == v) return 0.0;
  if (comp_[u] != comp_[v]) return std::numeric_limits<double>::infinity();
  if (method_ == ErMethod::DenseExact)
    return std::max(0.0, pinv_(u, u) + pinv_(v, v) - 2 * pinv_(u, v));
  return (embed_.row(u) - embed_.row(v)).squaredNorm();
}

}  // namespace rwpoly
