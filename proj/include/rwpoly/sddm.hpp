#pragma once

#include <vector>

#include "rwpoly/config.hpp"
#include "rwpoly/dense_oracle.hpp"
#include "rwpoly/graph.hpp"
#include "rwpoly/rng.hpp"

namespace rwpoly {

/// D - sum_r alpha_r D (D^-1 A)^r for M = D - A, checked to be SDDM
/// (nonpositive off-diagonal, nonnegative row slack). Throws InvalidMatrix.
DenseMatrix sddm_poly_dense(const SddmMatrix& m, const PolyCoeffs& alpha,
                            std::size_t max_n = kDenseLimit);

/// diag(M_alpha 1) from degree() sparse mat-vecs. With s_0 = 0 and
/// s_r = slack/D + D^-1 A s_{r-1}, the result is D * sum_r alpha_r s_r, a sum
/// of nonnegative terms.
std::vector<double> extra_diagonal(const SddmMatrix& m, const PolyCoeffs& alpha);

/// Split form of a sparsified M_alpha: a graph Laplacian plus a diagonal.
struct SddmPolyResult {
  WeightedGraph laplacian_part;
  std::vector<double> extra_diag;

  SddmMatrix assembled() const;
};

/// (1 - eps) M_alpha <= M~ <= (1 + eps) M_alpha. Walks are drawn on the
/// off-diagonal graph with its own degrees and reweighted by
/// prod_interior D_g / D, so the Laplacian part of M_alpha is estimated
/// without bias; the diagonal is restored exactly.
SddmPolyResult sparsify_sddm_split(const SddmMatrix& m, const PolyCoeffs& alpha,
                                   const SparsifyConfig& cfg, RngStream rng);
SddmMatrix sparsify_sddm(const SddmMatrix& m, const PolyCoeffs& alpha, const SparsifyConfig& cfg,
                         RngStream rng);

}  // namespace rwpoly
