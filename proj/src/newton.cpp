#include "rwpoly/newton.hpp"

#include <algorithm>
#include <cmath>

#include "rwpoly/error.hpp"
#include "rwpoly/sddm.hpp"

namespace rwpoly {

namespace {

double binom(std::size_t n, std::size_t k) {
  double r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

SddmMatrix from_dense(const DenseMatrix& P) {
  const auto n = static_cast<std::size_t>(P.rows());
  const WeightedGraph g = graph_from_laplacian(P, 0.0);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i)
    d[i] = std::max(P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)),
                    g.degree(static_cast<Vertex>(i)));
  return SddmMatrix(std::move(d), g);
}

const PolyCoeffs& cubic() {
  static const PolyCoeffs c({0.0, 0.75, 0.25});
  return c;
}

}  // namespace

double QthRootReduction::evaluate_middle(double x) const {
  double s = 0, p = 1;
  for (double c : middle) {
    s += c * p;
    p *= x;
  }
  return s;
}

QthRootReduction qth_root_reduce_step(std::size_t q) {
  require(q >= 1, ErrorKind::InvalidArgument, "q must be a positive integer");
  QthRootReduction r;
  r.q = q;
  const double h = 1.0 / (2.0 * static_cast<double>(q));
  r.outer = {1.0, h};
  const std::size_t deg = 2 * q + 1;
  // (1 + h x)^{2q} has coefficients C(2q, k) h^k; multiply by (1 - x).
  std::vector<double> b(2 * q + 1);
  for (std::size_t k = 0; k <= 2 * q; ++k) b[k] = binom(2 * q, k) * std::pow(h, static_cast<double>(k));
  r.middle.assign(deg + 1, 0.0);
  for (std::size_t k = 0; k <= deg; ++k) {
    if (k <= 2 * q) r.middle[k] += b[k];
    if (k >= 1) r.middle[k] -= b[k - 1];
  }
  r.alpha.resize(deg);
  double sum = 0;
  for (std::size_t k = 1; k <= deg; ++k) {
    double a = -r.middle[k];
    if (std::abs(a) < 1e-15) a = 0.0;
    require(a >= 0, ErrorKind::Refused,
            "middle polynomial for q=" + std::to_string(q) + " has a negative coefficient at x^" +
                std::to_string(k));
    r.alpha[k - 1] = a;
    sum += a;
  }
  // The polynomial vanishes at x = 1, so the alphas sum to c_0 = 1.
  for (double& a : r.alpha) a /= sum;
  return r;
}

double spectral_radius_estimate(const SddmMatrix& m, std::size_t iterations) {
  const std::size_t n = m.size();
  const auto& D = m.diag();
  const WeightedGraph& g = m.offdiag();
  if (g.num_edges() == 0) return 0.0;
  double cap = 0;
  for (std::size_t i = 0; i < n; ++i) cap = std::max(cap, g.degree(static_cast<Vertex>(i)) / D[i]);
  std::vector<double> isd(n);
  for (std::size_t i = 0; i < n; ++i) isd[i] = 1.0 / std::sqrt(D[i]);
  auto applyX = [&](const std::vector<double>& x) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = isd[i] * x[i];
    y = adjacency_matvec(g, y);
    for (std::size_t i = 0; i < n; ++i) y[i] *= isd[i];
    return y;
  };
  // Deterministic start with mass on every vertex.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  double est = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    double nrm = 0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0) break;
    for (double& v : x) v /= nrm;
    std::vector<double> y = applyX(applyX(x));
    double ray = 0;
    for (std::size_t i = 0; i < n; ++i) ray += x[i] * y[i];
    const double next = std::sqrt(std::max(0.0, ray));
    x = std::move(y);
    if (it > 10 && std::abs(next - est) <= 1e-10 * std::max(next, 1e-300)) {
      est = next;
      break;
    }
    est = next;
  }
  return std::min(est, cap);
}

NewtonStep newton_sqrt_step(const SddmMatrix& m, double eps, const SparsifyConfig& cfg,
                            RngStream rng) {
  if (m.offdiag().num_edges() == 0) return {m, m};
  SparsifyConfig c = cfg;
  c.epsilon = eps;
  c.allow_disconnected = true;
  return {m, sparsify_sddm(m, cubic(), c, rng)};
}

SddmMatrix newton_sqrt_step_exact(const SddmMatrix& m) {
  if (m.offdiag().num_edges() == 0) return m;
  return from_dense(dense_poly(m, cubic(), m.size()));
}

// ---------------------------------------------------------------------------

FactorChain::FactorChain(std::vector<SddmMatrix> factors, SddmMatrix terminal, double eps_bound,
                         double terminal_rho)
    : factors_(std::move(factors)),
      terminal_(std::move(terminal)),
      eps_bound_(eps_bound),
      terminal_rho_(terminal_rho) {}

namespace {

// x + 1/2 A D^-1 x
std::vector<double> apply_ft(const SddmMatrix& m, std::span<const double> x) {
  std::vector<double> t(x.begin(), x.end());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] /= m.diag()[i];
  std::vector<double> y = adjacency_matvec(m.offdiag(), t);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + 0.5 * y[i];
  return y;
}

// x + 1/2 D^-1 A x
std::vector<double> apply_f(const SddmMatrix& m, std::span<const double> x) {
  std::vector<double> y = adjacency_matvec(m.offdiag(), x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + 0.5 * y[i] / m.diag()[i];
  return y;
}

}  // namespace

std::vector<double> FactorChain::apply(std::span<const double> x) const {
  require(x.size() == size(), ErrorKind::DimensionMismatch, "vector length mismatch");
  std::vector<double> y(x.begin(), x.end());
  for (const SddmMatrix& f : factors_) y = apply_ft(f, y);
  y = apply_ft(terminal_, y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= std::sqrt(terminal_.diag()[i]);
  return y;
}

std::vector<double> FactorChain::apply_transpose(std::span<const double> x) const {
  require(x.size() == size(), ErrorKind::DimensionMismatch, "vector length mismatch");
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= std::sqrt(terminal_.diag()[i]);
  y = apply_f(terminal_, y);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) y = apply_f(*it, y);
  return y;
}

DenseMatrix FactorChain::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  DenseMatrix C(n, n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    const auto col = apply(e);
    for (Eigen::Index i = 0; i < n; ++i) C(i, j) = col[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  return C;
}

FactorChain inv_sqrt_chain(const SddmMatrix& m, double eps_total, const SparsifyConfig& cfg,
                           RngStream rng, const NewtonOptions& opts) {
  require(eps_total > 0 && eps_total < 1, ErrorKind::InvalidArgument,
          "eps_total must lie in (0, 1)");
  require(m.positive_definite(), ErrorKind::InvalidMatrix,
          "inverse square root needs a positive definite SDDM matrix");
  double rho = spectral_radius_estimate(m);

  // Predicted number of steps from the scalar map.
  std::size_t k_pred = 0;
  for (double r = rho; r >= opts.rho_threshold && k_pred < opts.max_iters; ++k_pred)
    r = 0.75 * r * r + 0.25 * r * r * r;
  double step_eps = k_pred > 0 ? std::pow(1 + 0.8 * eps_total, 1.0 / static_cast<double>(k_pred)) - 1
                               : 0.0;

  std::vector<SddmMatrix> factors;
  SddmMatrix cur = m;
  double upper = 1, lower = 1;
  std::size_t step = 0;
  auto keep_going = [&]() {
    if (opts.fixed_steps) return step < *opts.fixed_steps;
    return rho >= opts.rho_threshold;
  };
  while (keep_going()) {
    require(step < opts.max_iters, ErrorKind::NotConverged,
            "Newton chain did not reach the radius threshold within " +
                std::to_string(opts.max_iters) + " steps (rho=" + std::to_string(rho) + ")");
    if (step >= k_pred) step_eps *= 0.5;
    SddmMatrix next;
    if (opts.dense_steps) {
      next = newton_sqrt_step_exact(cur);
    } else {
      next = newton_sqrt_step(cur, step_eps, cfg, rng.child(step)).next;
      upper *= 1 + step_eps;
      lower *= 1 - step_eps;
    }
    factors.push_back(std::move(cur));
    cur = std::move(next);
    rho = spectral_radius_estimate(cur);
    ++step;
  }
  const double tail = 0.75 * rho * rho + 0.25 * rho * rho * rho;
  upper *= 1 + tail;
  lower *= 1 - tail;
  const double bound = std::max(upper - 1, 1 - lower);
  return FactorChain(std::move(factors), std::move(cur), bound, rho);
}

}  // namespace rwpoly
