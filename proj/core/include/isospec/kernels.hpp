#pragma once

// Entire trigonometric kernels in the spectral parameter lambda = rho^2:
//   C(lambda, x) = cos(rho x),   S(lambda, x) = sin(rho x) / rho.
// Both are even in rho, so the branch of the square root never matters.

#include <complex>
#include <utility>

namespace isospec {

using cplx = std::complex<double>;

/// A spectral parameter with its principal square root.
struct SpectralPoint {
  cplx lambda;
  cplx rho;

  explicit SpectralPoint(cplx l) : lambda(l), rho(std::sqrt(l)) {}
};

/// Below this value of |lambda| x^2 the kernels use their Maclaurin series.
inline constexpr double kSeriesThreshold = 1e-3;

[[nodiscard]] cplx ckernel(cplx lambda, double x) noexcept;
[[nodiscard]] cplx skernel(cplx lambda, double x) noexcept;

/// (dC/dlambda, dS/dlambda) at (lambda, x).
[[nodiscard]] std::pair<cplx, cplx> kernel_dlambda(cplx lambda, double x) noexcept;

/// Kernel of solution type `nu`: nu = 0 gives C, nu = 1 gives S.
[[nodiscard]] inline cplx ykernel(int nu, cplx lambda, double x) noexcept {
  return nu == 0 ? ckernel(lambda, x) : skernel(lambda, x);
}

/// x-derivative of ykernel: C' = -lambda S, S' = C.
[[nodiscard]] inline cplx ykernel_dx(int nu, cplx lambda, double x) noexcept {
  return nu == 0 ? -lambda * skernel(lambda, x) : ckernel(lambda, x);
}

/// Both kernels at once from a shared square root; used in hot loops.
struct KernelPair {
  cplx c;
  cplx s;
};
[[nodiscard]] KernelPair kernels(const SpectralPoint& p, double x) noexcept;

}  // namespace isospec
