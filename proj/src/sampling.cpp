#include "rwpoly/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "rwpoly/error.hpp"

namespace rwpoly {

namespace {

std::vector<std::size_t> csr_offsets(const WeightedGraph& g) {
  std::vector<std::size_t> off(g.num_vertices() + 1, 0);
  for (Vertex u = 0; u < g.num_vertices(); ++u) off[u + 1] = off[u] + g.degree_count(u);
  return off;
}

std::vector<double> csr_weights(const WeightedGraph& g) {
  std::vector<double> w;
  w.reserve(2 * g.num_edges());
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    auto nw = g.neighbor_weights(u);
    w.insert(w.end(), nw.begin(), nw.end());
  }
  return w;
}

}  // namespace

SamplerIndex::SamplerIndex(const WeightedGraph& g) : g_(&g) {
  require(g.num_edges() >= 1, ErrorKind::InvalidArgument, "cannot sample walks on an empty graph");
  norm_ = g.degrees();
  const auto off = csr_offsets(g);
  const auto w = csr_weights(g);
  nbr_ = SegmentedAlias(off, w);
}

SamplerIndex::SamplerIndex(const WeightedGraph& g, std::vector<double> normalization)
    : SamplerIndex(g) {
  require(normalization.size() == g.num_vertices(), ErrorKind::DimensionMismatch,
          "normalization length does not match the graph");
  ratio_.resize(g.num_vertices());
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    const double d = normalization[u], gd = g.degree(u);
    require(std::isfinite(d) && d > 0, ErrorKind::InvalidArgument,
            "normalization must be positive");
    require(d >= gd * (1 - 1e-12), ErrorKind::InvalidMatrix,
            "normalization must dominate the graph degree");
    ratio_[u] = std::min(1.0, gd / d);
  }
  norm_ = std::move(normalization);
}

double SamplerIndex::table_mass(Vertex u) const {
  double s = 0;
  for (std::size_t k = 0; k < g_->degree_count(u); ++k) s += nbr_.probability(u, k);
  return s;
}

double total_mass(unsigned r, std::size_t m) {
  require(r >= 1 && m >= 1, ErrorKind::InvalidArgument, "total_mass needs r, m >= 1");
  return 2.0 * r * static_cast<double>(m);
}

EndpointDraw sample_path_endpoints(const SamplerIndex& idx, unsigned r, Rng& rng) {
  const WeightedGraph& g = idx.graph();
  const unsigned k = 1 + static_cast<unsigned>(rng.below(r));
  const Edge& e = idx.uniform_edge(rng);
  Vertex a = e.u, b = e.v;
  if (rng.coin()) std::swap(a, b);
  double z = 2.0 / e.w;
  const bool use_log = r > 64;
  double ratio = 1.0, log_ratio = 0.0;
  auto walk = [&](Vertex cur, unsigned steps) {
    for (unsigned s = 0; s < steps; ++s) {
      const double q = idx.interior_ratio(cur);
      if (use_log) log_ratio += std::log(q); else ratio *= q;
      const std::size_t slot = idx.step(cur, rng);
      z += 2.0 / g.neighbor_weights(cur)[slot];
      cur = g.neighbors(cur)[slot];
    }
    return cur;
  };
  const Vertex first = walk(a, k - 1);
  const Vertex last = walk(b, r - k);
  return {first, last, z, use_log ? std::exp(log_ratio) : ratio};
}

PathSample sample_path(const SamplerIndex& idx, unsigned r, Rng& rng) {
  require(r >= 1, ErrorKind::InvalidArgument, "walk length must be >= 1");
  const WeightedGraph& g = idx.graph();
  const auto& norm = idx.normalization();
  const unsigned k = 1 + static_cast<unsigned>(rng.below(r));
  const Edge& e = idx.uniform_edge(rng);
  Vertex a = e.u, b = e.v;
  if (rng.coin()) std::swap(a, b);

  PathSample p;
  p.vertices.assign(r + 1, 0);
  p.vertices[k - 1] = a;
  p.vertices[k] = b;
  std::vector<double> step_w(r + 1, 0.0);  // step_w[i]: weight of edge (u_{i-1}, u_i)
  step_w[k] = e.w;
  for (unsigned i = k - 1; i >= 1; --i) {
    const Vertex cur = p.vertices[i];
    const std::size_t slot = idx.step(cur, rng);
    p.vertices[i - 1] = g.neighbors(cur)[slot];
    step_w[i] = g.neighbor_weights(cur)[slot];
  }
  for (unsigned i = k + 1; i <= r; ++i) {
    const Vertex cur = p.vertices[i - 1];
    const std::size_t slot = idx.step(cur, rng);
    p.vertices[i] = g.neighbors(cur)[slot];
    step_w[i] = g.neighbor_weights(cur)[slot];
  }

  double z = 0;
  for (unsigned i = 1; i <= r; ++i) z += 2.0 / step_w[i];
  if (r > 64) {
    double lw = 0, lg = 0;
    for (unsigned i = 1; i <= r; ++i) lw += std::log(step_w[i]);
    lg = lw;
    for (unsigned i = 1; i < r; ++i) {
      lw -= std::log(norm[p.vertices[i]]);
      lg -= std::log(g.degree(p.vertices[i]));
    }
    p.weight = std::exp(lw);
    p.sampling_weight = std::exp(lg);
  } else {
    double w = 1, wg = 1;
    for (unsigned i = 1; i <= r; ++i) {
      w *= step_w[i];
      wg *= step_w[i];
      if (i < r) {
        w /= norm[p.vertices[i]];
        wg /= g.degree(p.vertices[i]);
      }
    }
    p.weight = w;
    p.sampling_weight = wg;
  }
  p.resistance_bound = z;
  p.mass = p.sampling_weight * z;
  return p;
}

// ---------------------------------------------------------------------------

namespace detail {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {
constexpr std::size_t kDenseAccumLimit = 1024;

std::uint64_t edge_key(std::size_t n, Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * n + v;
}
}  // namespace

EdgeAccumulator::EdgeAccumulator(std::size_t n) : n_(n), dense_(n <= kDenseAccumLimit) {
  if (dense_) dense_w_.assign(n * n, 0.0);
}

void EdgeAccumulator::add(Vertex u, Vertex v, double w) {
  const std::uint64_t key = edge_key(n_, u, v);
  if (dense_) {
    double& slot = dense_w_[key];
    if (slot == 0.0) touched_.push_back(key);
    slot += w;
  } else {
    sparse_.emplace_back(key, w);
  }
}

std::vector<std::pair<std::uint64_t, double>> EdgeAccumulator::take() {
  std::vector<std::pair<std::uint64_t, double>> out;
  if (dense_) {
    std::sort(touched_.begin(), touched_.end());
    out.reserve(touched_.size());
    for (std::uint64_t k : touched_) {
      out.emplace_back(k, dense_w_[k]);
      dense_w_[k] = 0.0;
    }
    touched_.clear();
  } else {
    // Stable sort keeps draw order within a key, so the sums are reproducible.
    std::stable_sort(sparse_.begin(), sparse_.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [k, w] : sparse_) {
      if (!out.empty() && out.back().first == k) out.back().second += w;
      else out.emplace_back(k, w);
    }
    sparse_.clear();
  }
  return out;
}

WeightedGraph run_chunked(std::size_t n, std::uint64_t samples, RngStream rng,
                          const SamplingOptions& opts,
                          const std::function<void(std::uint64_t, std::uint64_t, Rng&,
                                                   EdgeAccumulator&)>& chunk) {
  const std::uint64_t cs = std::max<std::uint64_t>(1, opts.chunk_size);
  const std::uint64_t nchunks = (samples + cs - 1) / cs;
  std::vector<std::vector<std::pair<std::uint64_t, double>>> parts(nchunks);
  const unsigned nthreads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(opts.threads), std::max<std::uint64_t>(1, nchunks)));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    try {
      EdgeAccumulator acc(n);
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= nchunks || failed.load()) break;
        Rng local(rng.child(c));
        const std::uint64_t b = c * cs, e = std::min(samples, b + cs);
        chunk(b, e, local, acc);
        parts[c] = acc.take();
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  // Merge in chunk order.
  std::vector<Edge> edges;
  if (n <= kDenseAccumLimit) {
    std::vector<double> sum(n * n, 0.0);
    std::vector<std::uint64_t> keys;
    for (const auto& part : parts)
      for (const auto& [k, w] : part) {
        if (sum[k] == 0.0) keys.push_back(k);
        sum[k] += w;
      }
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t k : keys)
      edges.push_back({static_cast<Vertex>(k / n), static_cast<Vertex>(k % n), sum[k]});
  } else {
    std::unordered_map<std::uint64_t, double> sum;
    for (const auto& part : parts)
      for (const auto& [k, w] : part) sum[k] += w;
    std::vector<std::pair<std::uint64_t, double>> flat(sum.begin(), sum.end());
    std::sort(flat.begin(), flat.end());
    for (const auto& [k, w] : flat)
      edges.push_back({static_cast<Vertex>(k / n), static_cast<Vertex>(k % n), w});
  }
  return WeightedGraph::from_edges(n, edges);
}

}  // namespace detail

WeightedGraph graph_sampling(std::size_t n, const DrawFn& draw, double tau_total,
                             std::uint64_t samples, RngStream rng, const SamplingOptions& opts) {
  require(samples >= 1, ErrorKind::InvalidArgument, "sample count must be >= 1");
  require(tau_total > 0 && std::isfinite(tau_total), ErrorKind::InvalidArgument,
          "total mass must be positive");
  const double scale = tau_total / static_cast<double>(samples);
  return detail::run_chunked(
      n, samples, rng, opts,
      [&](std::uint64_t b, std::uint64_t e, Rng& local, detail::EdgeAccumulator& acc) {
        for (std::uint64_t s = b; s < e; ++s) {
          const WeightedDraw d = draw(local);
          if (d.u == d.v) continue;
          acc.add(d.u, d.v, d.weight * scale / d.tau);
        }
      });
}

// ---------------------------------------------------------------------------

WalkTemplate::WalkTemplate(std::vector<WalkLayer> layers, std::vector<double> coeffs,
                           std::vector<double> normalization)
    : layers_(std::move(layers)), coeffs_(std::move(coeffs)), norm_(std::move(normalization)) {
  const std::size_t r = layers_.size();
  const std::size_t n = norm_.size();
  require(r >= 1, ErrorKind::InvalidArgument, "walk template needs at least one layer");
  require(coeffs_.size() == r, ErrorKind::DimensionMismatch,
          "one resistance coefficient per layer is required");
  for (double c : coeffs_)
    require(std::isfinite(c) && c > 0, ErrorKind::InvalidArgument,
            "template coefficients must be positive");
  for (double d : norm_)
    require(std::isfinite(d) && d >= 0, ErrorKind::InvalidArgument,
            "normalization must be nonnegative");

  // Extended CSR per layer: graph neighbours plus the self-loop slot.
  ext_.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    const WalkLayer& L = layers_[i];
    require(L.graph != nullptr, ErrorKind::InvalidArgument, "template layer has no graph");
    require(L.graph->num_vertices() == n, ErrorKind::DimensionMismatch,
            "template layers must share the vertex set");
    require(L.self_loops.empty() || L.self_loops.size() == n, ErrorKind::DimensionMismatch,
            "self-loop vector length mismatch");
    bool any = L.graph->num_edges() > 0;
    for (double s : L.self_loops) {
      require(std::isfinite(s) && s >= 0, ErrorKind::InvalidArgument,
              "self-loop weights must be nonnegative");
      any = any || s > 0;
    }
    require(any, ErrorKind::InvalidArgument,
            "template layer " + std::to_string(i + 1) + " has an empty edge set");
    ExtLayer& X = ext_[i];
    X.offsets.assign(n + 1, 0);
    for (Vertex u = 0; u < n; ++u) {
      auto nb = L.graph->neighbors(u);
      auto nw = L.graph->neighbor_weights(u);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        X.nbr.push_back(nb[k]);
        X.wt.push_back(nw[k]);
      }
      if (L.loop(u) > 0) {
        X.nbr.push_back(u);
        X.wt.push_back(L.loop(u));
      }
      X.offsets[u + 1] = X.nbr.size();
    }
  }

  auto layer_apply = [&](std::size_t i, const std::vector<double>& x) {
    const ExtLayer& X = ext_[i];
    std::vector<double> y(n, 0.0);
    for (Vertex u = 0; u < n; ++u) {
      double s = 0;
      for (std::size_t k = X.offsets[u]; k < X.offsets[u + 1]; ++k) s += X.wt[k] * x[X.nbr[k]];
      y[u] = norm_[u] > 0 ? s / norm_[u] : 0.0;
    }
    return y;
  };
  left_.assign(r, {});
  right_.assign(r, {});
  left_[0].assign(n, 1.0);
  for (std::size_t i = 1; i < r; ++i) left_[i] = layer_apply(i - 1, left_[i - 1]);
  right_[r - 1].assign(n, 1.0);
  for (std::size_t i = r - 1; i >= 1; --i) right_[i - 1] = layer_apply(i, right_[i]);

  // Anchor table and per-position masses.
  position_mass_.assign(r, 0.0);
  std::vector<double> anchor_w;
  for (std::size_t i = 0; i < r; ++i) {
    const ExtLayer& X = ext_[i];
    double mass = 0;
    for (Vertex a = 0; a < n; ++a) {
      if (left_[i][a] <= 0) continue;
      for (std::size_t k = X.offsets[a]; k < X.offsets[a + 1]; ++k) {
        const double q = left_[i][a] * right_[i][X.nbr[k]];
        if (q <= 0) continue;
        mass += q;
        anchor_w.push_back(coeffs_[i] * q);
        anchor_pos_.push_back(static_cast<std::uint32_t>(i));
        anchor_a_.push_back(a);
        anchor_slot_.push_back(k);
      }
    }
    position_mass_[i] = 0.5 * mass;
    total_mass_ += coeffs_[i] * position_mass_[i];
  }
  require(total_mass_ > 0, ErrorKind::InvalidArgument, "walk template carries no walks");
  anchor_ = AliasTable(anchor_w);

  fwd_.resize(r);
  bwd_.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    const ExtLayer& X = ext_[i];
    std::vector<double> wf(X.wt.size()), wb(X.wt.size());
    for (Vertex u = 0; u < n; ++u)
      for (std::size_t k = X.offsets[u]; k < X.offsets[u + 1]; ++k) {
        wf[k] = X.wt[k] * right_[i][X.nbr[k]];
        wb[k] = X.wt[k] * left_[i][X.nbr[k]];
      }
    if (i > 0) fwd_[i] = SegmentedAlias(X.offsets, wf);
    if (i + 1 < r) bwd_[i] = SegmentedAlias(X.offsets, wb);
  }
}

PathSample WalkTemplate::sample(Rng& rng) const {
  const std::size_t r = layers_.size();
  const std::size_t t = anchor_.sample(rng);
  const std::size_t i = anchor_pos_[t];  // 0-based layer of the anchor step
  PathSample p;
  p.vertices.assign(r + 1, 0);
  std::vector<double> step_w(r, 0.0);
  {
    const ExtLayer& X = ext_[i];
    Vertex a = anchor_a_[t], b = X.nbr[anchor_slot_[t]];
    p.vertices[i] = a;
    p.vertices[i + 1] = b;
    step_w[i] = X.wt[anchor_slot_[t]];
  }
  for (std::size_t j = i; j-- > 0;) {  // layer j joins u_j and u_{j+1}
    const ExtLayer& X = ext_[j];
    const Vertex cur = p.vertices[j + 1];
    const std::size_t k = X.offsets[cur] + bwd_[j].sample(cur, rng);
    p.vertices[j] = X.nbr[k];
    step_w[j] = X.wt[k];
  }
  for (std::size_t j = i + 1; j < r; ++j) {
    const ExtLayer& X = ext_[j];
    const Vertex cur = p.vertices[j];
    const std::size_t k = X.offsets[cur] + fwd_[j].sample(cur, rng);
    p.vertices[j + 1] = X.nbr[k];
    step_w[j] = X.wt[k];
  }
  double z = 0;
  for (std::size_t j = 0; j < r; ++j) z += coeffs_[j] / step_w[j];
  if (r > 64) {
    double lw = 0;
    for (std::size_t j = 0; j < r; ++j) lw += std::log(step_w[j]);
    for (std::size_t j = 1; j < r; ++j) lw -= std::log(norm_[p.vertices[j]]);
    p.weight = std::exp(lw);
  } else {
    double w = 1;
    for (std::size_t j = 0; j < r; ++j) {
      w *= step_w[j];
      if (j + 1 < r) w /= norm_[p.vertices[j + 1]];
    }
    p.weight = w;
  }
  p.sampling_weight = p.weight;
  p.resistance_bound = z;
  p.mass = p.weight * z;
  return p;
}

EndpointDraw WalkTemplate::sample_endpoints(Rng& rng) const {
  const std::size_t r = layers_.size();
  const std::size_t t = anchor_.sample(rng);
  const std::size_t i = anchor_pos_[t];
  const ExtLayer& A = ext_[i];
  Vertex lo = anchor_a_[t], hi = A.nbr[anchor_slot_[t]];
  double z = coeffs_[i] / A.wt[anchor_slot_[t]];
  for (std::size_t j = i; j-- > 0;) {
    const ExtLayer& X = ext_[j];
    const std::size_t k = X.offsets[lo] + bwd_[j].sample(lo, rng);
    z += coeffs_[j] / X.wt[k];
    lo = X.nbr[k];
  }
  for (std::size_t j = i + 1; j < r; ++j) {
    const ExtLayer& X = ext_[j];
    const std::size_t k = X.offsets[hi] + fwd_[j].sample(hi, rng);
    z += coeffs_[j] / X.wt[k];
    hi = X.nbr[k];
  }
  return {lo, hi, z, 1.0};
}

}  // namespace rwpoly
