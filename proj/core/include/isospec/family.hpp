#pragma once

// One-parameter families of potentials sharing both spectra. From an
// eigenpair M_h e = eta e, with h_nu = (-1)^nu h / eta and e_nu = e:
//
//   q(x) = 0                                                  on (0, 3a/2)
//        = alpha e_nu(x)                                      on (3a/2, 2a)
//        = -alpha K_{h_nu}(x + a/2) * int_{3a/2}^{x-a/2} e_nu  on (2a, 5a/2)
//        = h_nu(x)                                            on (5a/2, 3a)
//        = 0                                                  on (3a, pi)

#include "isospec/delay_solver.hpp"
#include "isospec/gridfn.hpp"

namespace isospec {

struct FamilyMember {
  cplx alpha;
  int nu = 0;
  double a = 0.0;
  PiecewiseFunction q;     // on [0, pi]
  PiecewiseFunction hnu;   // on [5a/2, 3a]
  PiecewiseFunction enu;   // on [3a/2, 2a]
  bool e_zero_mean = false;

  [[nodiscard]] DelaySetup setup() const { return DelaySetup::make(a, nu); }
};

/// Assembles q_{alpha,nu}. `h` must cover [5a/2, 3a], `e` must cover [3a/2, 2a],
/// eta != 0, a in (0, pi/3). The eigen-relation itself is not checked, so
/// deliberately broken inputs can serve as negative controls.
[[nodiscard]] FamilyMember build_member(const PiecewiseFunction& h, double eta, const PiecewiseFunction& e,
                                        int nu, cplx alpha, double a, const GridOptions& grid = {});

/// Effective potential w_nu of a member, computed by the general construction
/// and by the shortcut valid when q vanishes on (a, 3a/2). Throws
/// ConsistencyError if they differ by more than `tol`; returns the general one.
[[nodiscard]] PiecewiseFunction w_of_member(const FamilyMember& member, const GridOptions& grid = {},
                                            double tol = 1e-8);

/// Shortcut form of w_nu alone (no cross-check).
[[nodiscard]] PiecewiseFunction w_shortcut(const FamilyMember& member, const GridOptions& grid = {});

/// omega = integral of q over [a, pi].
[[nodiscard]] cplx omega_of_member(const FamilyMember& member);

/// Double integral over x in [2a, 5a/2] of K_h(x + a/2) * int_{3a/2}^{x-a/2} e.
[[nodiscard]] cplx transfer_integral(const PiecewiseFunction& h, const PiecewiseFunction& e, double a);

}  // namespace isospec
