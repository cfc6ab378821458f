#pragma once

#include <span>
#include <vector>

namespace isospec {

/// Gauss-Legendre rule on [lo, hi].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi], nodes ascending.
[[nodiscard]] GaussRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Orthonormal Legendre basis on [lo, hi] evaluated at x: out[k] = phi_k(x),
/// k < out.size(), with integral of phi_j phi_k over [lo, hi] = delta_jk.
void legendre_basis(double x, double lo, double hi, std::vector<double>& out);

/// Points offset + k*step lying strictly inside (lo, hi).
[[nodiscard]] std::vector<double> lattice_points(double step, double offset, double lo, double hi);

/// Sorted cut list {lo, c..., hi}, keeping only candidates strictly inside
/// (lo, hi) and merging near-duplicates.
[[nodiscard]] std::vector<double> make_cuts(double lo, double hi, std::vector<double> candidates);

/// Sum over consecutive pieces [cuts[i], cuts[i+1]] of the rule `unit`
/// (given on [-1, 1]) applied to f.
template <typename F>
[[nodiscard]] auto gauss_composite(std::span<const double> cuts, const GaussRule& unit, F&& f) {
  using R = decltype(f(0.0));
  R total{};
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
    const double half = 0.5 * (cuts[p + 1] - cuts[p]);
    R piece{};
    for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
      piece += unit.weights[i] * f(mid + half * unit.nodes[i]);
    }
    total += half * piece;
  }
  return total;
}

}  // namespace isospec
