#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rwpoly/graph.hpp"

namespace rwpoly {

using DenseMatrix = Eigen::MatrixXd;

/// Size guard for every O(n^3) routine below.
inline constexpr std::size_t kDenseLimit = 512;

DenseMatrix dense_adjacency(const WeightedGraph& g);
DenseMatrix dense_laplacian(const WeightedGraph& g);
DenseMatrix dense_sddm(const SddmMatrix& m);

/// D - sum_r alpha_r D (D^-1 A)^r, by repeated dense products. Rows with a
/// zero diagonal contribute nothing.
DenseMatrix dense_poly(const WeightedGraph& g, const PolyCoeffs& alpha,
                       std::size_t max_n = kDenseLimit);
DenseMatrix dense_poly(const SddmMatrix& m, const PolyCoeffs& alpha,
                       std::size_t max_n = kDenseLimit);
DenseMatrix dense_monomial(const WeightedGraph& g, std::size_t r, std::size_t max_n = kDenseLimit);

/// Zero row sums (|sum| <= 1e-9 D(i,i)), nonpositive off-diagonal, symmetric.
bool validate_poly_laplacian(const WeightedGraph& g, const PolyCoeffs& alpha,
                             std::size_t max_n = kDenseLimit);
bool is_laplacian(const DenseMatrix& L, std::span<const double> scale);

/// Graph whose Laplacian is L (off-diagonal entries below `drop` * max|L| are
/// treated as zero).
WeightedGraph graph_from_laplacian(const DenseMatrix& L, double drop = 1e-14);

struct SimilarityReport {
  double lambda_min = 0;
  double lambda_max = 0;
  /// max(|ln lambda_min|, |ln lambda_max|); infinite on a kernel mismatch.
  double eps_required = 0;
  /// max(1 - lambda_min, lambda_max - 1), for the (1 +- eps) form.
  double linear_eps = 0;
  double eps = 0;
  bool pass = false;
  bool kernel_mismatch = false;
  std::size_t rank = 0;

  /// "lambda_min=... lambda_max=... eps_required=... pass=..." on one line.
  std::string to_string() const;
};

/// Generalized eigenvalues of the pencil (X, Y) on the range of Y, by
/// projecting onto that range and whitening. pass iff the kernels agree and
/// every eigenvalue lies in [e^-eps, e^eps]. Throws Asymmetric.
SimilarityReport similarity_check(const DenseMatrix& X, const DenseMatrix& Y, double eps);
/// Same pencil, pass iff every eigenvalue lies in [1 - eps, 1 + eps].
SimilarityReport linear_similarity_check(const DenseMatrix& X, const DenseMatrix& Y, double eps);

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix.
DenseMatrix pseudoinverse(const DenseMatrix& L);
/// (e_u - e_v)^T L^+ (e_u - e_v); +inf when u and v lie in different
/// components of the off-diagonal pattern.
double exact_er(const DenseMatrix& L, std::size_t u, std::size_t v);
/// All pairwise resistances (inf across components).
DenseMatrix exact_er_matrix(const DenseMatrix& L);

/// Range check of the pencil used by the two-step support bounds:
///   odd r:  (L_{G_r}, L_G)   within [1/2, r]
///   even r: (L_{G_r}, L_{G_2}) within [1, r/2]
struct SupportReport {
  SimilarityReport pencil;
  double lower = 0;
  double upper = 0;
  bool pass = false;
};
SupportReport support_check(const WeightedGraph& g, std::size_t r, double slack = 1e-9,
                            std::size_t max_n = kDenseLimit);

struct EnumeratedWalk {
  std::vector<Vertex> vertices;
  double weight;
  double resistance_bound;
};

struct Enumeration {
  std::vector<EnumeratedWalk> walks;
  /// (1/2) sum of w(p) Z(p) over directed walks; equals 2 r m.
  double total_mass = 0;
};

/// Every length-r walk with exact w(p) and Z(p) = sum 2/A. Guard: n <= 8, r <= 5.
Enumeration enumerate_paths(const WeightedGraph& g, std::size_t r, std::size_t max_n = 8,
                            std::size_t max_r = 5);

struct ScalarSuiteResult {
  std::size_t checks = 0;
  std::size_t violations = 0;
  bool ok() const { return violations == 0; }
};

/// Checks on a 10^4 point grid of lambda in (-1, 1) and r <= 64:
///   1/2 (1-l) <= 1 - l^(2r+1) <= (2r+1)(1-l)
///   (1-l^2)   <= 1 - l^(2r)   <= r (1-l^2)
///   (1-l^(4r)) <= 1 - l^(4r+2) <= (1 + 1/(2r)) (1 - l^(4r))
/// and the (1 + eps/2) form of the last bound whenever r >= 1/eps.
ScalarSuiteResult scalar_inequality_suite(std::size_t grid = 10000, std::size_t max_r = 64);

}  // namespace rwpoly
