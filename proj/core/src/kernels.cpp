#include "isospec/kernels.hpp"

#include <cmath>

namespace isospec {

namespace {

constexpr int kSeriesTerms = 8;

// sum_{k<terms} z^k / (2k + offset)!  with offset 0 (cosine) or 1 (sine)
cplx series(cplx z, int offset) noexcept {
  cplx term = 1.0;
  cplx sum = term;
  for (int k = 1; k < kSeriesTerms; ++k) {
    const double d1 = 2.0 * k - 1.0 + offset;
    const double d2 = 2.0 * k + offset;
    term *= z / (d1 * d2);
    sum += term;
  }
  return sum;
}

bool use_series(cplx lambda, double x) noexcept {
  return std::abs(lambda) * x * x < kSeriesThreshold;
}

}  // namespace

cplx ckernel(cplx lambda, double x) noexcept {
  if (use_series(lambda, x)) return series(-lambda * x * x, 0);
  return std::cos(std::sqrt(lambda) * x);
}

cplx skernel(cplx lambda, double x) noexcept {
  if (use_series(lambda, x)) return x * series(-lambda * x * x, 1);
  const cplx rho = std::sqrt(lambda);
  return std::sin(rho * x) / rho;
}

KernelPair kernels(const SpectralPoint& p, double x) noexcept {
  if (use_series(p.lambda, x)) {
    const cplx z = -p.lambda * x * x;
    return {series(z, 0), x * series(z, 1)};
  }
  const cplx arg = p.rho * x;
  return {std::cos(arg), std::sin(arg) / p.rho};
}

std::pair<cplx, cplx> kernel_dlambda(cplx lambda, double x) noexcept {
  const cplx dc = -0.5 * x * skernel(lambda, x);
  const cplx z = -lambda * x * x;
  if (std::abs(z) < 1.0) {
    // dS/dlambda = -x^3 sum_{k>=1} k z^(k-1) / (2k+1)!
    cplx sum{};
    cplx zpow = 1.0;
    double fact = 6.0;  // 3!
    for (int k = 1; k <= 14; ++k) {
      sum += static_cast<double>(k) * zpow / fact;
      zpow *= z;
      fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
    }
    return {dc, -x * x * x * sum};
  }
  const cplx ds = (x * ckernel(lambda, x) - skernel(lambda, x)) / (2.0 * lambda);
  return {dc, ds};
}

}  // namespace isospec
