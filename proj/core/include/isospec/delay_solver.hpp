#pragma once

// Solutions of  -y''(x) + q(x) y(x - a) = lambda y(x),  0 < x < pi,
// with y^(j)(0) = delta_{nu,j}, computed three independent ways:
//
//   * DirectSolver: method of steps, classical RK4 on each delay interval;
//   * series_term / series_sum: the successive-approximation series, whose
//     k-th term vanishes on [0, k a] and therefore identically for k > N;
//   * ClosedForms: explicit single/double-integral forms of the first two
//     series terms and their x-derivatives.

#include <complex>
#include <utility>
#include <vector>

#include "isospec/gridfn.hpp"

namespace isospec {

/// Delay a in (0, pi), initial-condition type nu (0: cosine-type, 1:
/// sine-type) and the step count N with pi/(N+1) <= a < pi/N.
struct DelaySetup {
  double a;
  int nu;
  int steps;

  /// Validates a and nu and derives N.
  static DelaySetup make(double a, int nu);

  /// Same delay, other solution type.
  [[nodiscard]] DelaySetup with_nu(int other) const { return make(a, other); }
};

/// Sampling resolution for grids aligned to multiples of a/2.
struct GridOptions {
  int segment_nodes = 513;  // nodes per segment of length a/2 (odd)
  int steps_per_a = 0;      // RK4 steps per delay interval; 0 = automatic

  [[nodiscard]] double spacing(double a) const;
};

/// Breakpoints 0, a/2, a, ..., pi.
[[nodiscard]] std::vector<double> standard_breakpoints(double a);

/// Samples `f(x, side)` on [lo, hi] with breakpoints at multiples of a/2.
template <typename F>
[[nodiscard]] PiecewiseFunction sample_aligned(double a, double lo, double hi, const GridOptions& grid,
                                               F&& f) {
  const auto bps = aligned_breakpoints(0.5 * a, lo, hi);
  return PiecewiseFunction::sample(bps, grid.spacing(a), std::forward<F>(f));
}

struct SolutionTrace {
  DelaySetup setup;
  cplx lambda;
  PiecewiseFunction y;
  PiecewiseFunction yprime;
};

/// Method-of-steps integrator. Construction caches the potential at every
/// RK4 stage abscissa, so repeated solves for different lambda are cheap.
class DirectSolver {
 public:
  /// `q` must be defined on [0, pi] and vanish on (0, a) to 1e-12.
  DirectSolver(const PiecewiseFunction& q, DelaySetup setup, int steps_per_a = 0);

  /// (y(pi), y'(pi)).
  [[nodiscard]] std::pair<cplx, cplx> endpoint(cplx lambda) const;
  [[nodiscard]] SolutionTrace trace(cplx lambda) const;

  [[nodiscard]] const DelaySetup& setup() const noexcept { return setup_; }
  [[nodiscard]] int steps_per_a() const noexcept { return m_; }
  [[nodiscard]] double step() const noexcept { return dx_; }

 private:
  struct Run {
    std::vector<cplx> y;
    std::vector<cplx> yp;
  };
  [[nodiscard]] Run run(cplx lambda) const;
  [[nodiscard]] cplx hermite(const Run& r, cplx lambda, double x) const;
  [[nodiscard]] cplx hermite_prime(const Run& r, cplx lambda, double x) const;

  DelaySetup setup_;
  int m_;
  double dx_;
  std::size_t full_steps_;
  double tail_;
  // q at the RK4 stage abscissae of step i: start (right limit), midpoint, end (left limit).
  std::vector<double> xs_;
  std::vector<cplx> q_start_, q_mid_, q_end_;
};

[[nodiscard]] SolutionTrace solve_direct(const PiecewiseFunction& q, const DelaySetup& setup,
                                         cplx lambda, int steps_per_a = 0);

/// k-th successive-approximation term y_{nu,k} on the standard grid.
[[nodiscard]] PiecewiseFunction series_term(const PiecewiseFunction& q, const DelaySetup& setup,
                                            int k, cplx lambda, const GridOptions& grid = {});

/// Terms y_{nu,k} and their x-derivatives for k = 0..kmax (zero past N).
[[nodiscard]] std::vector<SolutionTrace> series_terms(const PiecewiseFunction& q,
                                                      const DelaySetup& setup, int kmax,
                                                      cplx lambda, const GridOptions& grid = {});

/// Sum of the series terms k = 0..N, with its derivative trace.
[[nodiscard]] SolutionTrace series_sum(const PiecewiseFunction& q, const DelaySetup& setup,
                                       cplx lambda, const GridOptions& grid = {});

/// Below this |lambda| the nu = 1 closed forms fall back to the series.
inline constexpr double kClosedFormFallback = 1e-3;

/// Closed forms of the first two series terms. Holds the potential and its
/// running integral omega(x) = integral of q from a to x.
class ClosedForms {
 public:
  ClosedForms(PiecewiseFunction q, DelaySetup setup, GridOptions grid = {});

  [[nodiscard]] cplx y1(cplx lambda, double x) const;
  [[nodiscard]] cplx y1_prime(cplx lambda, double x) const;
  [[nodiscard]] cplx y2(cplx lambda, double x) const;
  [[nodiscard]] cplx y2_prime(cplx lambda, double x) const;
  /// (y2, y2') sharing one pass over the kernel.
  [[nodiscard]] std::pair<cplx, cplx> y2_pair(cplx lambda, double x) const;

  /// Double-integral kernel of the second term, for 3a/2 <= t <= x - a/2 <= pi - a/2.
  [[nodiscard]] cplx p_kernel(double x, double t) const;

  /// omega(x) = integral of q over [a, x].
  [[nodiscard]] const PiecewiseFunction& omega() const noexcept { return omega_; }
  /// omega_1(x) = integral over [2a, x] of q(t) omega(t - a).
  [[nodiscard]] cplx omega1(double x) const;

  [[nodiscard]] const DelaySetup& setup() const noexcept { return setup_; }

 private:
  [[nodiscard]] std::pair<cplx, cplx> series_fallback(int k, cplx lambda, double x) const;
  [[nodiscard]] cplx running(double x) const;
  /// Quadrature pieces of [lo, hi]: q's breakpoints plus `extra`.
  [[nodiscard]] std::vector<double> cuts(double lo, double hi, std::vector<double> extra = {}) const;

  PiecewiseFunction q_;
  DelaySetup setup_;
  GridOptions grid_;
  PiecewiseFunction omega_;
  std::vector<double> qbreaks_;
};

[[nodiscard]] cplx y1_closed(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda, double x);
[[nodiscard]] cplx y1_closed_prime(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda,
                                   double x);
[[nodiscard]] cplx y2_closed(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda, double x);
[[nodiscard]] cplx y2_closed_prime(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda,
                                   double x);
[[nodiscard]] cplx p_kernel(const PiecewiseFunction& q, const DelaySetup& setup, double x, double t);

/// Largest |q| on the part of its domain inside [lo, hi].
[[nodiscard]] double max_abs_on(const PiecewiseFunction& q, double lo, double hi);

}  // namespace isospec
