#include "rwpoly/dense_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rwpoly/error.hpp"

namespace rwpoly {

namespace {

void guard(std::size_t n, std::size_t max_n) {
  require(n <= max_n, ErrorKind::ThresholdExceeded,
          "dense oracle limited to n <= " + std::to_string(max_n) + " (got " +
              std::to_string(n) + ")");
}

DenseMatrix poly_from_split(const Eigen::VectorXd& d, const DenseMatrix& A,
                            const PolyCoeffs& alpha) {
  const Eigen::Index n = d.size();
  Eigen::VectorXd dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) dinv(i) = d(i) > 0 ? 1.0 / d(i) : 0.0;
  const DenseMatrix P = dinv.asDiagonal() * A;
  DenseMatrix out = d.asDiagonal();
  DenseMatrix T = A;  // D (D^-1 A)^r, starting at r = 1
  for (std::size_t r = 1; r <= alpha.degree(); ++r) {
    if (r > 1) T = T * P;
    if (alpha[r] != 0) out -= alpha[r] * T;
  }
  return 0.5 * (out + out.transpose());
}

std::vector<std::size_t> pattern_components(const DenseMatrix& L) {
  const std::size_t n = static_cast<std::size_t>(L.rows());
  const double tol = 1e-14 * std::max(1.0, L.cwiseAbs().maxCoeff());
  std::vector<std::size_t> label(n, n);
  std::size_t c = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    label[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v)
        if (v != u && label[v] == n && std::abs(L(u, v)) > tol) {
          label[v] = c;
          stack.push_back(v);
        }
    }
    ++c;
  }
  return label;
}

void check_symmetric(const DenseMatrix& X, const char* name) {
  require(X.rows() == X.cols(), ErrorKind::DimensionMismatch, std::string(name) + " is not square");
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  require((X - X.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale, ErrorKind::Asymmetric,
          std::string(name) + " is not symmetric");
}

SimilarityReport pencil(const DenseMatrix& Xin, const DenseMatrix& Yin) {
  check_symmetric(Xin, "X");
  check_symmetric(Yin, "Y");
  require(Xin.rows() == Yin.rows(), ErrorKind::DimensionMismatch, "X and Y differ in size");
  const DenseMatrix X = 0.5 * (Xin + Xin.transpose());
  const DenseMatrix Y = 0.5 * (Yin + Yin.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> ey(Y), ex(X);
  const auto& ly = ey.eigenvalues();
  const auto& lx = ex.eigenvalues();
  const double ny = std::max(std::abs(ly.minCoeff()), std::abs(ly.maxCoeff()));
  const double nx = std::max(std::abs(lx.minCoeff()), std::abs(lx.maxCoeff()));
  const double ty = 1e-9 * ny, tx = 1e-9 * nx;

  std::vector<Eigen::Index> range, kernel;
  for (Eigen::Index i = 0; i < ly.size(); ++i) (ly(i) > ty ? range : kernel).push_back(i);
  std::size_t rank_x = 0;
  for (Eigen::Index i = 0; i < lx.size(); ++i) rank_x += lx(i) > tx ? 1 : 0;

  SimilarityReport rep;
  rep.rank = range.size();
  rep.kernel_mismatch = rank_x != range.size();
  if (!kernel.empty() && !rep.kernel_mismatch) {
    DenseMatrix N(X.rows(), static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t j = 0; j < kernel.size(); ++j) N.col(j) = ey.eigenvectors().col(kernel[j]);
    if ((X * N).norm() > 1e-7 * std::max(nx, 1e-300)) rep.kernel_mismatch = true;
  }
  if (range.empty()) {
    rep.lambda_min = rep.lambda_max = 1.0;
    if (rank_x > 0) rep.kernel_mismatch = true;
  } else {
    DenseMatrix W(X.rows(), static_cast<Eigen::Index>(range.size()));
    for (std::size_t j = 0; j < range.size(); ++j)
      W.col(j) = ey.eigenvectors().col(range[j]) / std::sqrt(ly(range[j]));
    DenseMatrix S = W.transpose() * X * W;
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(S, Eigen::EigenvaluesOnly);
    rep.lambda_min = es.eigenvalues().minCoeff();
    rep.lambda_max = es.eigenvalues().maxCoeff();
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (rep.lambda_min <= 0) rep.eps_required = inf;
  else rep.eps_required = std::max(std::abs(std::log(rep.lambda_min)), std::abs(std::log(rep.lambda_max)));
  rep.linear_eps = std::max(1.0 - rep.lambda_min, rep.lambda_max - 1.0);
  if (rep.kernel_mismatch) {
    rep.eps_required = inf;
    rep.linear_eps = inf;
  }
  return rep;
}

}  // namespace

DenseMatrix dense_adjacency(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  DenseMatrix A = DenseMatrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    A(e.u, e.v) = e.w;
    A(e.v, e.u) = e.w;
  }
  return A;
}

DenseMatrix dense_laplacian(const WeightedGraph& g) {
  DenseMatrix L = -dense_adjacency(g);
  for (Vertex u = 0; u < g.num_vertices(); ++u) L(u, u) = g.degree(u);
  return L;
}

DenseMatrix dense_sddm(const SddmMatrix& m) {
  DenseMatrix M = -dense_adjacency(m.offdiag());
  for (std::size_t i = 0; i < m.size(); ++i)
    M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = m.diag()[i];
  return M;
}

DenseMatrix dense_poly(const WeightedGraph& g, const PolyCoeffs& alpha, std::size_t max_n) {
  guard(g.num_vertices(), max_n);
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(g.degrees().data(),
                                                        static_cast<Eigen::Index>(g.num_vertices()));
  return poly_from_split(d, dense_adjacency(g), alpha);
}

DenseMatrix dense_poly(const SddmMatrix& m, const PolyCoeffs& alpha, std::size_t max_n) {
  guard(m.size(), max_n);
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(m.diag().data(),
                                                        static_cast<Eigen::Index>(m.size()));
  return poly_from_split(d, dense_adjacency(m.offdiag()), alpha);
}

DenseMatrix dense_monomial(const WeightedGraph& g, std::size_t r, std::size_t max_n) {
  return dense_poly(g, PolyCoeffs::monomial(r), max_n);
}

bool is_laplacian(const DenseMatrix& L, std::span<const double> scale) {
  const Eigen::Index n = L.rows();
  if (L.cols() != n || static_cast<std::size_t>(n) != scale.size()) return false;
  double big = 0;
  for (double s : scale) big = std::max(big, s);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(L.row(i).sum()) > 1e-9 * std::max(scale[i], 1e-300)) {
      if (scale[i] > 0 || std::abs(L.row(i).sum()) > 1e-12) return false;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (L(i, j) > 1e-12 * big) return false;
      if (std::abs(L(i, j) - L(j, i)) > 1e-12 * big) return false;
    }
  }
  return true;
}

bool validate_poly_laplacian(const WeightedGraph& g, const PolyCoeffs& alpha, std::size_t max_n) {
  guard(g.num_vertices(), max_n);
  // Symmetrization inside dense_poly would hide asymmetry; rebuild unsymmetrized.
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(g.degrees().data(), n);
  const DenseMatrix A = dense_adjacency(g);
  Eigen::VectorXd dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) dinv(i) = d(i) > 0 ? 1.0 / d(i) : 0.0;
  const DenseMatrix P = dinv.asDiagonal() * A;
  DenseMatrix out = d.asDiagonal();
  DenseMatrix T = A;
  for (std::size_t r = 1; r <= alpha.degree(); ++r) {
    if (r > 1) T = T * P;
    if (alpha[r] != 0) out -= alpha[r] * T;
  }
  return is_laplacian(out, g.degrees());
}

WeightedGraph graph_from_laplacian(const DenseMatrix& L, double drop) {
  const Eigen::Index n = L.rows();
  const double tol = drop * std::max(1.0, L.cwiseAbs().maxCoeff());
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double w = -0.5 * (L(i, j) + L(j, i));
      if (w > tol) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), w});
    }
  return WeightedGraph::from_edges(static_cast<std::size_t>(n), edges);
}

std::string SimilarityReport::to_string() const {
  std::ostringstream os;
  os.precision(10);
  os << "lambda_min=" << lambda_min << " lambda_max=" << lambda_max
     << " eps_required=" << eps_required << " linear_eps=" << linear_eps << " eps=" << eps
     << " rank=" << rank << " kernel_mismatch=" << (kernel_mismatch ? "true" : "false")
     << " pass=" << (pass ? "true" : "false");
  return os.str();
}

// Eigen-solver roundoff allowance on the pass test.
constexpr double kRoundoff = 1e-10;

SimilarityReport similarity_check(const DenseMatrix& X, const DenseMatrix& Y, double eps) {
  require(eps >= 0, ErrorKind::InvalidArgument, "eps must be nonnegative");
  SimilarityReport r = pencil(X, Y);
  r.eps = eps;
  r.pass = !r.kernel_mismatch && r.eps_required <= eps + kRoundoff;
  return r;
}

SimilarityReport linear_similarity_check(const DenseMatrix& X, const DenseMatrix& Y, double eps) {
  require(eps >= 0, ErrorKind::InvalidArgument, "eps must be nonnegative");
  SimilarityReport r = pencil(X, Y);
  r.eps = eps;
  r.pass = !r.kernel_mismatch && r.linear_eps <= eps + kRoundoff;
  return r;
}

DenseMatrix pseudoinverse(const DenseMatrix& L) {
  check_symmetric(L, "L");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (L + L.transpose()));
  const auto& lam = es.eigenvalues();
  const double tol = 1e-9 * std::max(std::abs(lam.minCoeff()), std::abs(lam.maxCoeff()));
  Eigen::VectorXd inv(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) inv(i) = lam(i) > tol ? 1.0 / lam(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

DenseMatrix exact_er_matrix(const DenseMatrix& L) {
  const auto label = pattern_components(L);
  const DenseMatrix P = pseudoinverse(L);
  const Eigen::Index n = L.rows();
  DenseMatrix R(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      R(i, j) = i == j ? 0.0
                : label[i] != label[j] ? std::numeric_limits<double>::infinity()
                                       : P(i, i) + P(j, j) - 2 * P(i, j);
  return R;
}

double exact_er(const DenseMatrix& L, std::size_t u, std::size_t v) {
  const auto n = static_cast<std::size_t>(L.rows());
  require(u < n && v < n, ErrorKind::InvalidArgument, "vertex out of range");
  if (u == v) return 0.0;
  const auto label = pattern_components(L);
  if (label[u] != label[v]) return std::numeric_limits<double>::infinity();
  const DenseMatrix P = pseudoinverse(L);
  const auto a = static_cast<Eigen::Index>(u), b = static_cast<Eigen::Index>(v);
  return P(a, a) + P(b, b) - 2 * P(a, b);
}

SupportReport support_check(const WeightedGraph& g, std::size_t r, double slack,
                            std::size_t max_n) {
  require(r >= 1, ErrorKind::InvalidArgument, "r must be >= 1");
  guard(g.num_vertices(), max_n);
  SupportReport rep;
  const DenseMatrix Lr = dense_monomial(g, r, max_n);
  if (r % 2 == 1) {
    rep.lower = 0.5;
    rep.upper = static_cast<double>(r);
    rep.pencil = similarity_check(Lr, dense_laplacian(g), std::numeric_limits<double>::infinity());
  } else {
    rep.lower = 1.0;
    rep.upper = static_cast<double>(r) / 2.0;
    rep.pencil = similarity_check(Lr, dense_monomial(g, 2, max_n),
                                  std::numeric_limits<double>::infinity());
  }
  rep.pass = !rep.pencil.kernel_mismatch && rep.pencil.lambda_min >= rep.lower - slack &&
             rep.pencil.lambda_max <= rep.upper + slack;
  return rep;
}

Enumeration enumerate_paths(const WeightedGraph& g, std::size_t r, std::size_t max_n,
                            std::size_t max_r) {
  require(r >= 1, ErrorKind::InvalidArgument, "r must be >= 1");
  require(g.num_vertices() <= max_n && r <= max_r, ErrorKind::ThresholdExceeded,
          "path enumeration limited to n <= " + std::to_string(max_n) + ", r <= " +
              std::to_string(max_r));
  Enumeration out;
  std::vector<Vertex> walk;
  double sum = 0;
  auto rec = [&](auto&& self, double w, double z) -> void {
    if (walk.size() == r + 1) {
      out.walks.push_back({walk, w, z});
      sum += w * z;
      return;
    }
    const Vertex u = walk.back();
    const bool interior = walk.size() > 1;
    auto nb = g.neighbors(u);
    auto nw = g.neighbor_weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      walk.push_back(nb[k]);
      self(self, w * nw[k] / (interior ? g.degree(u) : 1.0), z + 2.0 / nw[k]);
      walk.pop_back();
    }
  };
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    walk.assign(1, s);
    rec(rec, 1.0, 0.0);
  }
  out.total_mass = 0.5 * sum;
  return out;
}

ScalarSuiteResult scalar_inequality_suite(std::size_t grid, std::size_t max_r) {
  ScalarSuiteResult res;
  std::vector<double> lam;
  lam.reserve(grid + 3);
  for (std::size_t i = 0; i < grid; ++i)
    lam.push_back(-1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(grid));
  lam.push_back(0.0);
  lam.push_back(1.0 - 1e-6);
  lam.push_back(-1.0 + 1e-6);
  const double eps_grid[] = {0.05, 0.1, 0.2, 0.25, 0.5, 0.75, 1.0};

  auto le = [&](double a, double b) {
    ++res.checks;
    if (a > b + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) ++res.violations;
  };
  for (double l : lam) {
    for (std::size_t r = 1; r <= max_r; ++r) {
      const double rd = static_cast<double>(r);
      const double odd = 1.0 - std::pow(l, 2.0 * rd + 1.0);
      le(0.5 * (1.0 - l), odd);
      le(odd, (2.0 * rd + 1.0) * (1.0 - l));
      const double even = 1.0 - std::pow(l, 2.0 * rd);
      le(1.0 - l * l, even);
      le(even, rd * (1.0 - l * l));
      const double e4 = 1.0 - std::pow(l, 4.0 * rd);
      const double e42 = 1.0 - std::pow(l, 4.0 * rd + 2.0);
      le(e4, e42);
      le(e42, (1.0 + 1.0 / (2.0 * rd)) * e4);
      for (double eps : eps_grid)
        if (rd * eps >= 1.0) le(e42, (1.0 + eps / 2.0) * e4);
    }
  }
  return res;
}

}  // namespace rwpoly
