#include "rwpoly/high_degree.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <sstream>

#include "rwpoly/error.hpp"
#include "rwpoly/poly_sparsifier.hpp"
#include "rwpoly/resistance.hpp"

namespace rwpoly {

const char* to_string(DegreeOp op) noexcept {
  return op == DegreeOp::Square ? "SQUARE" : "PLUS";
}

std::vector<std::size_t> DegreeSchedule::degrees() const {
  std::vector<std::size_t> d{2};
  for (DegreeOp op : ops) d.push_back(op == DegreeOp::Square ? 2 * d.back() : d.back() + 4);
  return d;
}

std::string DegreeSchedule::to_string() const {
  std::ostringstream os;
  if (direct) {
    os << "DIRECT(" << target_degree << ")";
    return os.str();
  }
  const auto d = degrees();
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "->" : "") << d[i];
  return os.str();
}

std::vector<DegreeOp> shortest_program(std::size_t target) {
  require(target >= 2 && target % 2 == 0, ErrorKind::InvalidArgument,
          "degree must be even and >= 2");
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(target + 1, kNone);
  std::vector<DegreeOp> via(target + 1, DegreeOp::Square);
  std::queue<std::size_t> q;
  parent[2] = 2;
  q.push(2);
  while (!q.empty() && parent[target] == kNone) {
    const std::size_t x = q.front();
    q.pop();
    const std::pair<std::size_t, DegreeOp> next[] = {{2 * x, DegreeOp::Square},
                                                     {x + 4, DegreeOp::Plus}};
    for (auto [y, op] : next) {
      if (y > target || parent[y] != kNone) continue;
      parent[y] = x;
      via[y] = op;
      q.push(y);
    }
  }
  std::vector<DegreeOp> ops;
  for (std::size_t x = target; x != 2; x = parent[x]) ops.push_back(via[x]);
  std::reverse(ops.begin(), ops.end());
  return ops;
}

DegreeSchedule schedule(std::size_t d, double eps) {
  require(d >= 2 && d % 2 == 0, ErrorKind::InvalidArgument,
          "high-degree sparsification needs an even degree >= 2 (got " + std::to_string(d) + ")");
  require(eps > 0, ErrorKind::InvalidArgument, "eps must be positive");
  DegreeSchedule s;
  s.requested_degree = d;
  s.target_degree = d;
  s.budget = eps;
  if (d == 2) {
    s.direct = true;
    return s;
  }
  if (d % 4 == 2) {
    const double r = static_cast<double>(d - 2) / 4.0;
    if (r * eps >= 1.0) {
      s.substituted = true;
      s.target_degree = d - 2;
      s.budget = eps / 2;
    } else {
      s.direct = true;
      return s;
    }
  }
  s.ops = shortest_program(s.target_degree);
  return s;
}

MonomialApprox make_approx(WeightedGraph h, const std::vector<double>& D, std::size_t degree,
                           double accumulated_eps) {
  require(D.size() == h.num_vertices(), ErrorKind::DimensionMismatch, "degree vector mismatch");
  MonomialApprox a;
  a.degree = degree;
  a.accumulated_eps = accumulated_eps;
  double worst = 1.0;
  for (Vertex u = 0; u < h.num_vertices(); ++u)
    if (h.degree(u) > D[u]) worst = std::min(worst, D[u] / h.degree(u));
  if (worst < 1.0) {
    h = h.scaled(worst);
    a.accumulated_eps += std::log(1.0 / worst);
    a.rescale_events = 1;
  }
  a.self_loops.resize(D.size());
  for (Vertex u = 0; u < h.num_vertices(); ++u) a.self_loops[u] = std::max(0.0, D[u] - h.degree(u));
  a.graph = std::move(h);
  return a;
}

WeightedGraph sparsify_template(const WalkTemplate& t, double eps, const SparsifyConfig& cfg,
                                RngStream rng) {
  const std::size_t n = t.num_vertices();
  SparsifyConfig c = cfg;
  c.epsilon = std::min(eps, 1.0);
  const StagePlan plan = plan_stages(c, n);
  const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  const double T = t.total_mass();
  const auto M = static_cast<std::uint64_t>(std::ceil(cfg.c_s * logn * T / (plan.eps1 * plan.eps1)));
  SamplingOptions so;
  so.threads = cfg.threads;
  so.chunk_size = cfg.chunk_size;
  const double scale = T / static_cast<double>(M);
  WeightedGraph h = detail::run_chunked(
      n, M, rng.child(0), so,
      [&](std::uint64_t b, std::uint64_t e, Rng& local, detail::EdgeAccumulator& acc) {
        for (std::uint64_t s = b; s < e; ++s) {
          const EndpointDraw d = t.sample_endpoints(local);
          if (d.first != d.last) acc.add(d.first, d.last, scale / d.resistance_bound);
        }
      });
  if (plan.second_stage && h.num_edges() > 0) h = resparsify(h, plan.eps2, c, rng.child(1));
  return h;
}

MonomialApprox square_step(const MonomialApprox& cur, const std::vector<double>& D, double eps,
                           const SparsifyConfig& cfg, RngStream rng) {
  auto g = std::make_shared<const WeightedGraph>(cur.graph);
  WalkLayer layer{g, cur.self_loops};
  const WalkTemplate t({layer, layer}, {2.0, 2.0}, D);
  WeightedGraph h = sparsify_template(t, eps, cfg, rng);
  MonomialApprox next = make_approx(std::move(h), D, 2 * cur.degree, cur.accumulated_eps + eps);
  next.rescale_events += cur.rescale_events;
  return next;
}

MonomialApprox plus_step(const MonomialApprox& cur, const WeightedGraph& base, double eps,
                         const SparsifyConfig& cfg, RngStream rng) {
  auto a = std::make_shared<const WeightedGraph>(base);
  auto at = std::make_shared<const WeightedGraph>(cur.graph);
  const WalkLayer la{a, {}};
  const WalkLayer lt{at, cur.self_loops};
  const double e1 = std::exp(cur.accumulated_eps), e2 = std::exp(2 * cur.accumulated_eps);
  const WalkTemplate t({la, la, lt, la, la}, {e1, e1, e2, e1, e1}, base.degrees());
  WeightedGraph h = sparsify_template(t, eps, cfg, rng);
  MonomialApprox next =
      make_approx(std::move(h), base.degrees(), cur.degree + 4, cur.accumulated_eps + eps);
  next.rescale_events += cur.rescale_events;
  return next;
}

WeightedGraph sparsify_high_degree(const WeightedGraph& g, std::size_t d, double eps,
                                   const SparsifyConfig& cfg, RngStream rng,
                                   HighDegreeStats* stats) {
  const DegreeSchedule sched = schedule(d, eps);
  require(g.num_edges() > 0 && is_connected(g), ErrorKind::Disconnected,
          "high-degree sparsification needs a connected graph");
  require(!is_bipartite(g), ErrorKind::Bipartite,
          "graph is bipartite: even powers of its walk matrix are periodic and degenerate");
  SparsifyConfig c = cfg;
  HighDegreeStats st;
  st.schedule = sched;
  WeightedGraph out;
  if (sched.direct) {
    c.epsilon = std::min(sched.budget, 1.0);
    out = sparsify_monomial(g, sched.target_degree, c, rng.child(0));
    st.accumulated_eps = sched.budget;
  } else {
    const double es = sched.step_eps();
    c.epsilon = es;
    c.second_stage = true;
    const std::vector<double>& D = g.degrees();
    MonomialApprox cur = make_approx(sparsify_monomial(g, 2, c, rng.child(0)), D, 2, es);
    std::uint64_t step = 1;
    for (DegreeOp op : sched.ops) {
      cur = op == DegreeOp::Square ? square_step(cur, D, es, c, rng.child(step))
                                   : plus_step(cur, g, es, c, rng.child(step));
      ++step;
    }
    const double final_eps = sched.budget / 2;
    c.epsilon = std::min(final_eps, 1.0);
    out = resparsify(cur.graph, final_eps, c, rng.child(step));
    st.accumulated_eps = cur.accumulated_eps + final_eps;
    // Replacing G_d by G_{d-2} costs ln(1 + eps/2) <= eps/2.
    if (sched.substituted) st.accumulated_eps += eps / 2;
    st.rescale_events = cur.rescale_events;
  }
  if (stats) *stats = st;
  return out;
}

}  // namespace rwpoly
