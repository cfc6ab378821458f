#pragma once

// The integral operator
//   (M_h f)(x) = integral over [3a/2, 7a/2 - x] of K_h(x + t - a/2) f(t) dt,
//   K_h(s) = integral of h over [s, 3a]  (zero for s >= 3a),
// acting on functions on [3a/2, 2a]. For real h it is compact and self-adjoint.

#include <cstddef>
#include <vector>

#include "isospec/delay_solver.hpp"
#include "isospec/gridfn.hpp"

namespace isospec {

class FredholmOperator {
 public:
  /// `h` must cover [5a/2, 3a] and be real-valued; a in (0, pi/3).
  FredholmOperator(double a, const PiecewiseFunction& h);

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] const PiecewiseFunction& h() const noexcept { return h_; }
  /// Domain [3a/2, 2a] of the functions the operator acts on.
  [[nodiscard]] Interval interval() const { return {1.5 * a_, 2.0 * a_}; }

  /// K_h(s): constant for s <= 5a/2, zero for s >= 3a.
  [[nodiscard]] double kernel_at(double s) const;

  /// M_h f sampled on the grid of `f` (which must live on [3a/2, 2a]).
  [[nodiscard]] PiecewiseFunction apply(const PiecewiseFunction& f) const;

  [[nodiscard]] bool is_zero() const noexcept { return zero_; }

 private:
  double a_;
  PiecewiseFunction h_;
  bool zero_;
};

enum class NystromRule {
  /// Legendre-Galerkin matrix with exact triangle quadrature, written in the
  /// sqrt(weight)-scaled Gauss node basis. Converges spectrally.
  Projected,
  /// Plain sqrt(w_i) K(x_i + x_k - a/2) sqrt(w_k). Only second-order accurate
  /// because the kernel has a kink along x + t = 7a/2.
  Pointwise,
};

struct NystromMatrix {
  std::vector<double> nodes;
  std::vector<double> weights;
  /// Row-major n x n symmetric matrix.
  std::vector<double> entries;
  std::size_t n = 0;
  NystromRule rule = NystromRule::Projected;

  [[nodiscard]] double at(std::size_t i, std::size_t k) const { return entries[i * n + k]; }
};

/// Discretization on n Gauss-Legendre nodes of [3a/2, 2a]; n >= 16.
[[nodiscard]] NystromMatrix nystrom(const FredholmOperator& op, std::size_t n,
                                    NystromRule rule = NystromRule::Projected);

struct EigenPair {
  double eta;
  PiecewiseFunction e;  // on [3a/2, 2a], sup-norm 1, first sample with Re >= 0
  double residual;      // sup-norm of M_h e - eta e, recomputed with apply()
};

struct EigenOptions {
  NystromRule rule = NystromRule::Projected;
  std::size_t max_pairs = 8;
  int segment_nodes = 513;  // samples of each returned eigenfunction
};

/// Nonzero eigenvalues of the discretization, ordered by decreasing |eta|
/// (negative first on near-ties). Values below 1e-10 * max |eta| are dropped.
[[nodiscard]] std::vector<double> nystrom_eigenvalues(const FredholmOperator& op, std::size_t n,
                                                      NystromRule rule = NystromRule::Projected);

/// Leading eigenpairs in the same order. Throws NoEigenvalueError for h = 0.
[[nodiscard]] std::vector<EigenPair> eigenpairs(const FredholmOperator& op, std::size_t n,
                                                const EigenOptions& options = {});

/// Analytic eigenpair with eta = -1:
///   h(x) = (6 pi^2 / a^2) cos(pi sqrt(10) (3 - x/a))  on [5a/2, 3a],
///   e(x) = cos(4 pi x / a) - cos(2 pi x / a)           on [3a/2, 2a].
struct AnalyticPair {
  PiecewiseFunction h;
  PiecewiseFunction e;
  double eta;
};
[[nodiscard]] AnalyticPair analytic_pair(double a, const GridOptions& grid = {});

/// |integral of e| <= tol * sup|e| * length of the domain.
[[nodiscard]] bool zero_mean(const PiecewiseFunction& e, double tol = 1e-8);

}  // namespace isospec
