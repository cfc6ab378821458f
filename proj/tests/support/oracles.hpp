#pragma once

// Reference values computed without the library's quadrature or solvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "isospec/delay_solver.hpp"
#include "isospec/family.hpp"
#include "isospec/fredholm.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kA = kPi / 4.0;

/// Analytic eigenpair h1, e1 and the closed-form antiderivatives used by the family.
inline double h1(double a, double x) {
  return 6.0 * kPi * kPi / (a * a) * std::cos(kPi * std::sqrt(10.0) * (3.0 - x / a));
}
inline double e1(double a, double x) { return std::cos(4.0 * kPi * x / a) - std::cos(2.0 * kPi * x / a); }
/// K_{h1}(s) = integral of h1 over [s, 3a] for s in [5a/2, 3a].
inline double k1(double a, double s) {
  const double c = kPi * std::sqrt(10.0);
  return 6.0 * kPi * kPi / (a * c) * std::sin(c * (3.0 - s / a));
}
/// Integral of e1 over [3a/2, y].
inline double e1_running(double a, double y) {
  return a / (4.0 * kPi) * std::sin(4.0 * kPi * y / a) - a / (2.0 * kPi) * std::sin(2.0 * kPi * y / a);
}
/// Integral of h1 over [5a/2, 3a].
inline double omega_h1(double a) { return k1(a, 2.5 * a); }

/// Family potential q_{alpha,nu} built from (h1, e1, eta = -1), right limits at jumps.
inline cplx family_q(double a, int nu, cplx alpha, double x) {
  const double sign = nu == 0 ? -1.0 : 1.0;  // h_nu = (-1)^nu h1 / (-1)
  if (x < 1.5 * a || x >= 3.0 * a) return 0.0;
  if (x < 2.0 * a) return alpha * e1(a, x);
  if (x < 2.5 * a) return -alpha * sign * k1(a, x + 0.5 * a) * e1_running(a, x - 0.5 * a);
  return sign * h1(a, x);
}

/// Composite Simpson on n (even) panels.
template <typename F>
auto simpson(F&& f, double lo, double hi, int n = 2000) {
  using R = decltype(f(lo));
  const double h = (hi - lo) / n;
  R s = f(lo) + f(hi);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
  return s * (h / 3.0);
}

/// Composite Simpson split at the given points. Piece ends are pulled inward
/// by 1e-12 so a jump at a cut is never sampled from the wrong side.
template <typename F>
auto simpson_split(F&& f, std::vector<double> cuts, int n = 400) {
  using R = decltype(f(cuts.front()));
  R s{};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k] + 1e-12, hi = cuts[k + 1] - 1e-12;
    if (hi > lo) s += simpson(f, lo, hi, n);
  }
  return s;
}

/// Q_nu(x) by a brute-force double midpoint sum, `cells` cells per unit of the
/// outer range, with the inner integral read off a fine midpoint prefix table.
inline cplx q_correction_bruteforce(const std::function<cplx(double)>& q, double a, int nu, double x,
                                    int cells = 10000) {
  // Prefix table of W(s) = integral of q over [a, s], s in [a, 3a].
  const int fine = 40 * cells;
  const double h = 2.0 * a / fine;
  std::vector<cplx> w(static_cast<std::size_t>(fine) + 1);
  for (int k = 0; k < fine; ++k) w[k + 1] = w[k] + h * q(a + (k + 0.5) * h);
  auto W = [&](double s) {
    s = std::clamp(s, a, 3.0 * a);
    const double u = (s - a) / h;
    const int k = std::min(static_cast<int>(u), fine - 1);
    return w[k] + (u - k) * (w[k + 1] - w[k]);
  };
  const cplx w3 = w.back();
  const double sign = nu == 0 ? 1.0 : -1.0;
  const double hi = 3.5 * a - x;
  // Outer cells split at multiples of a/2 so no cell straddles a jump of q.
  cplx outer{};
  double lo = a;
  while (lo < hi - 1e-15) {
    const double next = std::min(hi, (std::floor(lo / (0.5 * a) + 1e-9) + 1.0) * 0.5 * a);
    const int n = std::max(1, static_cast<int>(cells * (next - lo) / (2.0 * a)));
    const double d = (next - lo) / n;
    for (int k = 0; k < n; ++k) {
      const double t = lo + (k + 0.5) * d;
      outer += d * q(t) * (w3 - W(x + t - 0.5 * a));
    }
    lo = next;
  }
  return (w3 - W(x + 0.5 * a)) * W(x - 0.5 * a) - sign * outer;
}

/// Random real piecewise-constant potential on [0, pi], zero on [0, a), with
/// jumps at multiples of a/2.
inline isospec::PiecewiseFunction random_step_q(std::mt19937_64& rng, double a, double support_end = kPi,
                                               double amplitude = 3.0) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  const auto bps = isospec::aligned_breakpoints(0.5 * a, 0.0, kPi);
  std::vector<double> values(bps.size(), 0.0);
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    if (bps[k] >= a - 1e-12 && bps[k] < support_end - 1e-12) values[k] = u(rng);
  }
  return isospec::PiecewiseFunction::sample(bps, kPi / 2048.0, [&](double x, isospec::Side side) -> cplx {
    auto seg = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), x + 1e-12) - bps.begin()) - 1;
    if (side == isospec::Side::Left && seg > 0 && std::abs(x - bps[seg]) < 1e-12) --seg;
    return values[std::min(seg, bps.size() - 2)];
  });
}

/// Library family member from the analytic pair (eta = -1).
inline isospec::FamilyMember demo_member(int nu, cplx alpha, double a = kA, const isospec::GridOptions& grid = {}) {
  const auto pair = isospec::analytic_pair(a, grid);
  return isospec::build_member(pair.h, pair.eta, pair.e, nu, alpha, a, grid);
}

inline const std::vector<cplx>& demo_alphas() {
  static const std::vector<cplx> v{0.0, 1.0, -2.0, cplx{2.0, 3.0}};
  return v;
}

/// sup-norm-relative distance.
inline double rel_diff(cplx u, cplx v, double scale) { return std::abs(u - v) / std::max(scale, 1e-300); }

}  // namespace oracle
