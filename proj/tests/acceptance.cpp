// Acceptance suite: one PASS/FAIL line per criterion, with wall time against
// its limit. `acceptance 3 5` runs only criteria 3 and 5.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "rwpoly/dense_oracle.hpp"
#include "rwpoly/generators.hpp"
#include "rwpoly/graph_io.hpp"
#include "rwpoly/high_degree.hpp"
#include "rwpoly/newton.hpp"
#include "rwpoly/poly_sparsifier.hpp"
#include "rwpoly/resistance.hpp"
#include "rwpoly/sampling.hpp"
#include "rwpoly/sddm.hpp"
#include "test_util.hpp"

using namespace rwpoly;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

DenseMatrix diag_of(const std::vector<double>& d) {
  return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(d.data(), Eigen::Index(d.size())))
      .asDiagonal();
}

// ---------------------------------------------------------------------------

Outcome walk_identity() {
  std::size_t cases = 0, bad = 0;
  double worst = 0;
  for (std::uint64_t s = 0; s < 24; ++s) {
    const std::size_t n = 2 + s % 5;
    auto g = gen::erdos_renyi(n, 0.6, {0.1, 5.0}, {s, 1001});
    for (std::size_t r = 1; r <= 4; ++r) {
      const double want = total_mass(unsigned(r), g.num_edges());
      const double got = enumerate_paths(g, r).total_mass;
      const double rel = std::abs(got - want) / want;
      worst = std::max(worst, rel);
      bad += rel > 1e-9;
      ++cases;
    }
  }
  return {bad == 0 && cases >= 20, fmt("%zu cases, max rel err %.2e", cases, worst)};
}

Outcome sampler_distribution() {
  auto g = testutil::four_cycle();
  auto en = enumerate_paths(g, 3);
  std::map<std::vector<Vertex>, double> expected;
  auto canon = [](std::vector<Vertex> k) {
    std::vector<Vertex> rev(k.rbegin(), k.rend());
    return std::min(k, rev);
  };
  for (const auto& w : en.walks)
    expected[canon(w.vertices)] += 0.5 * w.weight * w.resistance_bound / en.total_mass;
  SamplerIndex idx(g);
  double min_p = 1;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng({seed, 1002});
    std::map<std::vector<Vertex>, double> seen;
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) seen[canon(sample_path(idx, 3, rng).vertices)] += 1;
    double stat = 0;
    for (const auto& [k, p] : expected) {
      const double e = p * draws;
      const double o = seen.count(k) ? seen[k] : 0;
      stat += (o - e) * (o - e) / e;
    }
    if (seen.size() > expected.size()) return {false, "sampled a walk outside the enumeration"};
    min_p = std::min(min_p, testutil::chi2_pvalue(stat, double(expected.size() - 1)));
  }
  return {min_p > 0.001, fmt("min chi-square p over 3 seeds = %.4f", min_p)};
}

struct PolyCase {
  std::string label;
  WeightedGraph g;
  PolyCoeffs alpha;
};

std::vector<PolyCase> poly_cases() {
  std::vector<PolyCase> c;
  const std::vector<std::vector<double>> alphas = {
      {0, 1}, {0, 0, 1}, {0.5, 0.5}, {0, 0, 0, 0, 1}, {0.2, 0.2, 0.2, 0.2, 0.2}, {0, 0, 0, 0, 0, 1}};
  auto er50 = gen::erdos_renyi(50, 0.15, {0.5, 2.0}, {1, 1003});
  auto er100 = gen::erdos_renyi(100, 0.08, {0.5, 2.0}, {2, 1003});
  auto er200 = gen::erdos_renyi(200, 0.05, {0.5, 2.0}, {3, 1003});
  for (const auto& a : alphas) c.push_back({"er50", er50, PolyCoeffs(a)});
  for (std::size_t i = 0; i < 5; ++i) c.push_back({"er100", er100, PolyCoeffs(alphas[i])});
  for (std::size_t i : {0, 2, 3}) c.push_back({"er200", er200, PolyCoeffs(alphas[i])});
  auto ring = gen::ring(100, 3, {0.5, 2.0}, {4, 1003});
  c.push_back({"ring", ring, PolyCoeffs({0, 1})});
  c.push_back({"ring", ring, PolyCoeffs({0, 0, 0.5, 0, 0, 0.5})});
  auto star = gen::star(60, {0.5, 2.0}, {5, 1003});
  c.push_back({"star", star, PolyCoeffs({0.5, 0.5})});
  c.push_back({"star", star, PolyCoeffs({1.0 / 3, 1.0 / 3, 1.0 / 3})});
  auto barbell = gen::barbell(25);
  c.push_back({"barbell", barbell, PolyCoeffs({0, 1})});
  c.push_back({"barbell", barbell, PolyCoeffs({0.25, 0.25, 0.25, 0.25})});
  return c;
}

Outcome poly_guarantee() {
  SparsifyConfig cfg;
  cfg.epsilon = 0.5;
  const double eps2_nominal = cfg.epsilon * (1 - cfg.split);
  std::size_t passed = 0, over_budget = 0, total = 0;
  double worst = 0;
  for (std::size_t i = 0; auto& pc : poly_cases()) {
    const std::size_t n = pc.g.num_vertices();
    auto h = sparsify_poly(pc.g, pc.alpha, cfg, {100 + i++, 1004});
    auto rep = similarity_check(dense_laplacian(h), dense_poly(pc.g, pc.alpha), cfg.epsilon);
    passed += rep.pass;
    worst = std::max(worst, rep.eps_required);
    over_budget += h.num_edges() > resparsify_budget(n, eps2_nominal, cfg.c_s);
    ++total;
  }
  const bool ok = total == 20 && passed * 10 >= total * 9 && over_budget == 0;
  return {ok, fmt("%zu/%zu similar at eps=0.5 (worst eps_required %.3f), %zu over nnz budget",
                  passed, total, worst, over_budget)};
}

Outcome support_bounds() {
  std::vector<WeightedGraph> graphs = {testutil::triangle(), testutil::four_cycle(),
                                       gen::erdos_renyi(50, 0.15, {0.5, 2.0}, {1, 1003}),
                                       gen::erdos_renyi(100, 0.08, {0.5, 2.0}, {2, 1003}),
                                       gen::ring(100, 3, {0.5, 2.0}, {4, 1003}),
                                       gen::star(60, {0.5, 2.0}, {5, 1003}), gen::barbell(25),
                                       gen::path(30, {0.2, 3.0}, {6, 1005})};
  std::size_t checks = 0, bad = 0;
  for (const auto& g : graphs)
    for (std::size_t r = 1; r <= 6; ++r) {
      bad += !support_check(g, r, 1e-9).pass;
      ++checks;
    }
  return {bad == 0, fmt("%zu/%zu pencils inside their brackets", checks - bad, checks)};
}

Outcome high_degree_guarantee() {
  SparsifyConfig cfg;
  std::string detail;
  bool ok = true;
  struct Run {
    std::size_t d;
    double eps;
  };
  for (Run run : {Run{8, 0.75}, Run{16, 0.75}, Run{10, 0.5}}) {
    std::size_t passed = 0;
    bool substituted = false;
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto g = gen::erdos_renyi(60, 0.1, {0.5, 2.0}, {s, 1006 + run.d});
      if (is_bipartite(g)) return {false, "generator produced a bipartite graph"};
      HighDegreeStats st;
      auto h = sparsify_high_degree(g, run.d, run.eps, cfg, {s, 1007}, &st);
      substituted = st.schedule.substituted;
      passed += similarity_check(dense_laplacian(h), dense_monomial(g, run.d), run.eps).pass;
    }
    if (run.d == 10 && !substituted) ok = false;
    ok = ok && passed >= 8;
    detail += fmt("d=%zu: %zu/10%s  ", run.d, passed, run.d == 10 ? " (via d-2)" : "");
  }
  return {ok, detail};
}

Outcome even_walk_facts() {
  std::size_t pairs = 0, counter = 0;
  for (double delta : {0.1, 0.3}) {
    for (std::uint64_t s = 0; s < 25; ++s) {
      const std::size_t n = 20 + 3 * s;
      auto g = gen::erdos_renyi(n, 0.15, {0.5, 2.0}, {s, 1008});
      const DenseMatrix D = diag_of(g.degrees());
      const DenseMatrix Dinv = D.inverse();
      const DenseMatrix A1 = dense_adjacency(g);
      // Even walks give PSD adjacencies; odd seeds use the graph itself for the
      // second implication, which needs no PSD assumption.
      const DenseMatrix A = (s % 2 == 0) ? DenseMatrix(A1 * Dinv * A1) : A1;
      const DenseMatrix L = D - A;
      const DenseMatrix P = dense_laplacian(gen::erdos_renyi(n, 0.2, {0.1, 1.0}, {s, 1009}));
      // Scale the perturbation so that (D - At, D - A) spans exactly 1 -+ delta.
      auto probe = linear_similarity_check(L + P, L, 1.0);
      const double mu = probe.lambda_max - 1;
      const double t = (s % 4 < 2 ? 1.0 : -1.0) * delta / mu;
      const DenseMatrix At = A - t * P;
      ++pairs;
      if (s % 2 == 0) {
        auto minus = linear_similarity_check(D - At, L, 0);
        if (!linear_similarity_check(D + At, D + A, minus.linear_eps + 1e-9).pass) ++counter;
      }
      auto m = similarity_check(D - At, L, 0);
      auto p = similarity_check(D + At, D + A, 0);
      const double e = std::max(m.eps_required, p.eps_required);
      if (!similarity_check(D - At * Dinv * At, D - A * Dinv * A, e + 1e-9).pass) ++counter;
    }
  }
  return {counter == 0, fmt("%zu pairs, %zu counterexamples", pairs, counter)};
}

Outcome sddm_guarantee() {
  SparsifyConfig cfg;
  PolyCoeffs alpha({0.5, 0.5});
  std::size_t passed = 0;
  double worst_diag = 0, worst_eps = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto g = gen::erdos_renyi(100, 0.06, {0.5, 2.0}, {s, 1010});
    auto m = gen::sddm_with_slack(g, 0.0, 0.5, {s, 1011});
    const DenseMatrix exact = sddm_poly_dense(m, alpha);
    auto extra = extra_diagonal(m, alpha);
    Eigen::VectorXd rows = exact.rowwise().sum();
    for (std::size_t i = 0; i < extra.size(); ++i)
      worst_diag = std::max(worst_diag, std::abs(extra[i] - rows(Eigen::Index(i))) /
                                            std::max(1.0, m.diag()[i]));
    auto out = sparsify_sddm(m, alpha, cfg, {s, 1012});
    auto rep = linear_similarity_check(dense_sddm(out), exact, 0.5);
    passed += rep.pass;
    worst_eps = std::max(worst_eps, rep.linear_eps);
  }
  return {passed >= 9 && worst_diag <= 1e-9,
          fmt("%zu/10 within [1-eps,1+eps] (worst %.3f), extra_diagonal err %.1e", passed,
              worst_eps, worst_diag)};
}

Outcome newton_apps() {
  auto red = qth_root_reduce_step(1);
  const bool coeffs = red.alpha == std::vector<double>{0.0, 0.75, 0.25};

  auto g = gen::erdos_renyi(50, 0.1, {0.5, 2.0}, {1, 1013});
  auto m = gen::sddm_with_slack(g, 0.05, 0.5, {1, 1014});
  SparsifyConfig cfg;
  auto chain = inv_sqrt_chain(m, 0.2, cfg, {1, 1015});
  DenseMatrix C = chain.dense();
  DenseMatrix X = C * dense_sddm(m) * C.transpose();
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<DenseMatrix>(0.5 * (X + X.transpose())).eigenvalues();
  const bool bracket = ev.minCoeff() >= 0.8 && ev.maxCoeff() <= 1.2;

  auto g2 = gen::erdos_renyi(30, 0.2, {0.5, 2.0}, {2, 1016});
  auto m2 = gen::sddm_with_slack(g2, 0.02, 0.1, {2, 1017});
  std::vector<double> err;
  for (std::size_t k = 1; k <= 6; ++k) {
    NewtonOptions o;
    o.dense_steps = true;
    o.fixed_steps = k;
    DenseMatrix Ck = inv_sqrt_chain(m2, 0.5, cfg, {2, 0}, o).dense();
    DenseMatrix Y = Ck * dense_sddm(m2) * Ck.transpose();
    Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<DenseMatrix>(0.5 * (Y + Y.transpose())).eigenvalues();
    err.push_back(std::max(e.maxCoeff() - 1, 1 - e.minCoeff()));
  }
  double min_ratio = 1e9;
  for (std::size_t k = 0; k + 1 < err.size() && err[k + 1] > 1e-12; ++k)
    min_ratio = std::min(min_ratio, std::log(err[k + 1]) / std::log(err[k]));
  const bool quad = min_ratio >= 1.8 && min_ratio < 1e9;
  return {coeffs && bracket && quad,
          fmt("q=1 coeffs %s, eig(CMC^T) in [%.4f, %.4f] (k=%zu), min log-error ratio %.2f",
              coeffs ? "exact" : "WRONG", ev.minCoeff(), ev.maxCoeff(), chain.length(), min_ratio)};
}

Outcome er_oracle() {
  const double eps = 0.3, delta = 0.2;
  const double factor = std::exp(eps) * (1 + delta);
  SparsifyConfig cfg;
  std::size_t total = 0, bad = 0;
  double worst = 1;
  auto check = [&](const WeightedGraph& g, const PolyCoeffs& alpha, std::uint64_t seed,
                   std::vector<std::pair<Vertex, Vertex>> pairs) {
    auto o = ErOracle::build(g, alpha, eps, cfg, {seed, 1018}, {.delta = delta});
    const DenseMatrix R = exact_er_matrix(dense_poly(g, alpha));
    for (auto [u, v] : pairs) {
      const double ratio = o.query(u, v) / R(u, v);
      worst = std::max({worst, ratio, 1 / ratio});
      bad += !(ratio <= factor && ratio >= 1 / factor);
      ++total;
    }
  };
  std::vector<std::pair<Vertex, Vertex>> tri = {{0, 1}, {0, 2}, {1, 2}};
  check(testutil::triangle(), PolyCoeffs({1.0}), 1, tri);
  check(testutil::triangle(), PolyCoeffs({0.0, 1.0}), 2, tri);
  Rng rng({3, 1019});
  std::vector<std::pair<Vertex, Vertex>> pairs;
  while (pairs.size() < 100) {
    Vertex u = Vertex(rng.below(100)), v = Vertex(rng.below(100));
    if (u != v) pairs.push_back({u, v});
  }
  check(gen::erdos_renyi(100, 0.08, {0.5, 2.0}, {4, 1020}), PolyCoeffs({0.5, 0.5}), 3, pairs);
  check(gen::ring(100, 2, {0.5, 2.0}, {5, 1020}), PolyCoeffs({0, 0, 1}), 4, pairs);
  return {bad == 0, fmt("%zu/%zu queries within factor %.3f (worst %.3f)", total - bad, total,
                        factor, worst)};
}

Outcome scalar_suite() {
  auto res = scalar_inequality_suite();
  return {res.ok() && res.checks > 0,
          fmt("%zu checks, %zu violations", res.checks, res.violations)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  auto dir = testutil::scratch("acceptance_replay");
  auto g = gen::erdos_renyi(60, 0.1, {0.5, 2.0}, {1, 1021});
  save_graph(dir / "g.mtx", g);
  save_graph(dir / "tri.mtx", testutil::triangle());
  save_sddm(dir / "m.mtx", gen::sddm_with_slack(g, 0.05, 0.5, {1, 1022}));
  {
    std::ofstream q(dir / "q.txt");
    q << "0 1\n5 17\n3 40\n";
  }
  auto s = [&](const char* f) { return (dir / f).string(); };
  struct Cmd {
    std::vector<std::string> args;
    std::string product;  // file compared byte for byte
    std::string manifest;
  };
  const std::vector<Cmd> cmds = {
      {{"sparsify-poly", "-i", s("g.mtx"), "--alpha", "0,0.5,0.5", "--seed", "11", "-o", s("a.mtx")},
       "a.mtx", "a.mtx.manifest"},
      {{"sparsify-monomial", "-i", s("g.mtx"), "-r", "3", "-o", s("b.mtx")}, "b.mtx", "b.mtx.manifest"},
      {{"high-degree", "-i", s("g.mtx"), "--d", "8", "--eps", "0.75", "-o", s("c.mtx")}, "c.mtx",
       "c.mtx.manifest"},
      {{"sparsify-sddm", "-i", s("m.mtx"), "--alpha", "0.5,0.5", "-o", s("d.mtx")}, "d.mtx",
       "d.mtx.manifest"},
      {{"qth-root", "-i", s("m.mtx"), "--q", "2", "-o", s("e.mtx")}, "e.mtx", "e.mtx.manifest"},
      {{"inv-sqrt", "-i", s("m.mtx"), "--eps", "0.2", "-o", s("f")}, "f.terminal.mtx", "f.chain.manifest"},
      {{"resistance", "-i", s("g.mtx"), "--alpha", "0,1", "--queries", s("q.txt"), "-o", s("r.txt")},
       "r.txt", "r.txt.manifest"},
      {{"enumerate", "-i", s("tri.mtx"), "-r", "3", "-o", s("n.txt")}, "n.txt", "n.txt.manifest"},
  };
  std::size_t same = 0;
  std::string failed;
  for (const auto& c : cmds) {
    std::ostringstream out, err;
    if (cli::run(c.args, out, err) != 0) {
      failed += " " + c.args[0] + "(run)";
      continue;
    }
    const std::string first = testutil::slurp(dir / c.product);
    // Replay into a fresh prefix, then compare the product file.
    // Keep the extension: it selects the output format.
    const fs::path prod(c.product);
    const std::string again =
        c.args[0] == "inv-sqrt"
            ? s("f2")
            : s((prod.stem().string() + ".again" + prod.extension().string()).c_str());
    if (cli::run({"replay", s(c.manifest.c_str()), "-o", again}, out, err) != 0) {
      failed += " " + c.args[0] + "(replay)";
      continue;
    }
    const std::string second =
        testutil::slurp(c.args[0] == "inv-sqrt" ? dir / "f2.terminal.mtx" : fs::path(again));
    if (!first.empty() && first == second)
      ++same;
    else
      failed += " " + c.args[0];
  }
  return {same == cmds.size() && same >= 3,
          fmt("%zu/%zu subcommands byte-identical on replay%s", same, cmds.size(), failed.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<Criterion> all = {
      {1, "random-walk mass identity", 5, walk_identity},
      {2, "sampler path distribution", 10, sampler_distribution},
      {3, "polynomial sparsifier guarantee", 120, poly_guarantee},
      {4, "two-step support brackets", 30, support_bounds},
      {5, "high-degree monomials", 180, high_degree_guarantee},
      {6, "even-walk approximation facts", 30, even_walk_facts},
      {7, "SDDM polynomials", 60, sddm_guarantee},
      {8, "Newton applications", 60, newton_apps},
      {9, "effective-resistance oracle", 30, er_oracle},
      {10, "scalar inequality suite", 5, scalar_suite},
      {11, "replay determinism", 60, determinism},
  };
  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.limit_s;
    failures += !pass;
    std::printf("[%s] %2d %-32s %s (%.2fs, limit %.0fs)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
