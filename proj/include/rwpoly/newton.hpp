#pragma once

#include <optional>
#include <vector>

#include "rwpoly/config.hpp"
#include "rwpoly/dense_oracle.hpp"
#include "rwpoly/graph.hpp"
#include "rwpoly/rng.hpp"

namespace rwpoly {

/// Coefficients of (1 + x/(2q))^{2q} (1 - x) = 1 - sum_k alpha_k x^k.
struct QthRootReduction {
  std::size_t q = 1;
  /// Outer factor I + X/(2q): {1, 1/(2q)}.
  std::vector<double> outer;
  /// c_0 .. c_{2q+1} of the middle polynomial.
  std::vector<double> middle;
  /// alpha_k = -c_k, k = 1 .. 2q+1.
  std::vector<double> alpha;

  PolyCoeffs coeffs() const { return PolyCoeffs(alpha); }
  double evaluate_middle(double x) const;
};

/// Throws InvalidArgument for q = 0 and Refused if some alpha_k < 0.
QthRootReduction qth_root_reduce_step(std::size_t q);

/// Largest |eigenvalue| of D^-1 A by power iteration on X^2,
/// X = D^-1/2 A D^-1/2, capped by max_i A1(i)/D(i).
double spectral_radius_estimate(const SddmMatrix& m, std::size_t iterations = 300);

struct NewtonStep {
  /// M itself; the factor is F = I + 1/2 D^-1 A of this matrix.
  SddmMatrix factor;
  /// ~ D - (3/4 D (D^-1 A)^2 + 1/4 D (D^-1 A)^3), re-split by diagonal and
  /// off-diagonal part.
  SddmMatrix next;
};

NewtonStep newton_sqrt_step(const SddmMatrix& m, double eps, const SparsifyConfig& cfg,
                            RngStream rng);
/// Exact dense version of the step (no sampling).
SddmMatrix newton_sqrt_step_exact(const SddmMatrix& m);

struct NewtonOptions {
  double rho_threshold = 0.1;
  std::size_t max_iters = 30;
  /// Exact polynomial steps instead of sampled ones (small n only).
  bool dense_steps = false;
  /// Stop after exactly this many steps regardless of the radius.
  std::optional<std::size_t> fixed_steps;
};

/// C = C_term F_{k-1}^T ... F_0^T with F_j = I + 1/2 D_j^-1 A_j and
/// C_term = D_k^-1/2 (I + 1/2 A_k D_k^-1), so that C M C^T ~ I.
class FactorChain {
 public:
  FactorChain() = default;
  FactorChain(std::vector<SddmMatrix> factors, SddmMatrix terminal, double eps_bound,
              double terminal_rho);

  std::size_t length() const noexcept { return factors_.size(); }
  const std::vector<SddmMatrix>& factors() const noexcept { return factors_; }
  const SddmMatrix& terminal() const noexcept { return terminal_; }
  /// Bound on max |eig(C M C^T) - 1| from the per-step errors and the
  /// closed-form tail 3/4 rho^2 + 1/4 rho^3.
  double eps_bound() const noexcept { return eps_bound_; }
  double terminal_rho() const noexcept { return terminal_rho_; }
  std::size_t size() const noexcept { return terminal_.size(); }

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> x) const;
  DenseMatrix dense() const;

 private:
  std::vector<SddmMatrix> factors_;
  SddmMatrix terminal_;
  double eps_bound_ = 0;
  double terminal_rho_ = 0;
};

/// Iterates newton_sqrt_step until the radius estimate drops below the
/// threshold. Per-step error (1 + 0.8 eps_total)^{1/k} - 1 for the number of
/// steps k predicted by the scalar map rho -> 3/4 rho^2 + 1/4 rho^3; steps
/// beyond the prediction get half the previous error. Throws InvalidMatrix for
/// non-definite input and NotConverged past max_iters.
FactorChain inv_sqrt_chain(const SddmMatrix& m, double eps_total, const SparsifyConfig& cfg,
                           RngStream rng, const NewtonOptions& opts = {});

}  // namespace rwpoly
