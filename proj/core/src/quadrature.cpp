#include "isospec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "isospec/errors.hpp"

namespace isospec {

namespace {

// (P_n(z), P_n'(z)) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double z) {
  double p0 = 1.0, p1 = z;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace

GaussRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw PreconditionError("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, z);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, z).second;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

void legendre_basis(double x, double lo, double hi, std::vector<double>& out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  const double u = (2.0 * x - lo - hi) / (hi - lo);
  const double len = hi - lo;
  double p0 = 1.0, p1 = u;
  out[0] = std::sqrt(1.0 / len);
  if (n > 1) out[1] = std::sqrt(3.0 / len) * u;
  for (std::size_t k = 2; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * u * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
    out[k] = std::sqrt((2.0 * kk + 1.0) / len) * p2;
  }
}

std::vector<double> lattice_points(double step, double offset, double lo, double hi) {
  std::vector<double> out;
  if (!(step > 0.0) || !(hi > lo)) return out;
  const auto k0 = static_cast<long>(std::floor((lo - offset) / step));
  for (long k = k0; offset + static_cast<double>(k) * step < hi; ++k) {
    const double c = offset + static_cast<double>(k) * step;
    if (c > lo) out.push_back(c);
  }
  return out;
}

std::vector<double> make_cuts(double lo, double hi, std::vector<double> candidates) {
  const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  std::vector<double> cuts{lo};
  std::sort(candidates.begin(), candidates.end());
  for (double c : candidates) {
    if (c > cuts.back() + tol && c < hi - tol) cuts.push_back(c);
  }
  cuts.push_back(hi);
  return cuts;
}

}  // namespace isospec
