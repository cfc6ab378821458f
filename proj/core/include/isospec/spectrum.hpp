#pragma once

// Eigenvalues as zeros of an entire characteristic function: Newton
// refinement from asymptotic seeds, argument-principle counting on
// rectangles, and comparison of spectra.

#include <functional>
#include <iosfwd>
#include <vector>

#include "isospec/gridfn.hpp"

namespace isospec {

using CharFn = std::function<cplx(cplx)>;

/// Leading-order seeds: n^2 when j = nu ((n - 1)^2 for nu = j = 1, whose
/// unperturbed problem has the eigenvalue 0), (n - 1/2)^2 when j != nu.
[[nodiscard]] std::vector<cplx> initial_guesses(int nu, int j, int count);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// Newton iteration with a central-difference derivative. Throws
/// RefinementError (carrying the last iterate) if it does not converge.
[[nodiscard]] cplx refine_root(const CharFn& delta, cplx lambda0, const NewtonOptions& options = {});

/// Rectangle [lo.real(), hi.real()] x [lo.imag(), hi.imag()] in the lambda plane.
struct Rectangle {
  cplx lo;
  cplx hi;
};

struct CountOptions {
  int samples_per_edge = 256;
  int max_retries = 5;
  double dilation = 0.01;
};

/// Zeros of `delta` inside the rectangle, with multiplicity, by winding number.
/// Dilates the rectangle when the contour passes too close to a zero and
/// throws ContourError when that keeps happening.
[[nodiscard]] int count_roots(const CharFn& delta, Rectangle rect, const CountOptions& options = {});

struct SpectrumEntry {
  int n;
  cplx lambda;
  double residual;
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;  // sorted by (Re, Im)
  Rectangle window;
  int certified_count = 0;
};

struct SpectrumOptions {
  NewtonOptions newton;
  double im_window = 10.0;
  double re_floor = -50.0;  // the window extends at least this far left
};

/// First n_max eigenvalues, certified by counting zeros on a window that
/// ends halfway (in sqrt(lambda)) between seeds n_max and n_max + 1.
[[nodiscard]] Spectrum compute_spectrum(const CharFn& delta, int nu, int j, int n_max,
                                        const SpectrumOptions& options = {});

/// Largest |l1 - l2| / (1 + |l1|) over entries matched by order.
[[nodiscard]] double compare(const Spectrum& s1, const Spectrum& s2);

/// CSV with header `n,re_lambda,im_lambda,residual`.
void write_csv(std::ostream& out, const Spectrum& s);

}  // namespace isospec
