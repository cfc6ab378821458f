#include "isospec/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isospec/charfn.hpp"
#include "isospec/fredholm.hpp"
#include "isospec/quadrature.hpp"

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;

// Index r of the half-delay cell (r a/2, (r+1) a/2) that the `side` limit at x belongs to.
int half_cell(double x, double a, Side side) {
  const double u = x / (0.5 * a);
  const double tol = 1e-9;
  return side == Side::Right ? static_cast<int>(std::floor(u + tol))
                             : static_cast<int>(std::ceil(u - tol)) - 1;
}

void require_cover(const PiecewiseFunction& f, double lo, double hi, const char* what) {
  const Interval dom = f.domain();
  if (dom.lo() > lo + snap_tolerance(lo) || dom.hi() < hi - snap_tolerance(hi)) {
    throw PreconditionError(what);
  }
}

// Running integral of e from 3a/2 and K_h(s) = integral of h over [s, 3a].
cplx e_running(const PiecewiseFunction& e, double a, double y) {
  return integrate(e, 1.5 * a, std::clamp(y, 1.5 * a, 2.0 * a));
}
cplx k_of(const PiecewiseFunction& h, double a, double s) {
  return integrate(h, std::clamp(s, 2.5 * a, 3.0 * a), 3.0 * a);
}

}  // namespace

FamilyMember build_member(const PiecewiseFunction& h, double eta, const PiecewiseFunction& e, int nu,
                          cplx alpha, double a, const GridOptions& grid) {
  if (!(a > 0.0) || !(a < kPi / 3.0)) throw PreconditionError("build_member: a must lie in (0, pi/3)");
  if (nu != 0 && nu != 1) throw PreconditionError("build_member: nu must be 0 or 1");
  if (eta == 0.0 || !std::isfinite(eta)) throw PreconditionError("build_member: eta must be nonzero");
  require_cover(h, 2.5 * a, 3.0 * a, "build_member: h must cover [5a/2, 3a]");
  require_cover(e, 1.5 * a, 2.0 * a, "build_member: e must cover [3a/2, 2a]");

  FamilyMember m;
  m.alpha = alpha;
  m.nu = nu;
  m.a = a;
  const double scale = (nu == 0 ? 1.0 : -1.0) / eta;
  const PiecewiseFunction hr = h.domain().lo() < 2.5 * a - snap_tolerance(a) || h.domain().hi() > 3.0 * a + snap_tolerance(a)
                                   ? h.restrict(2.5 * a, 3.0 * a)
                                   : h;
  const PiecewiseFunction er = e.domain().lo() < 1.5 * a - snap_tolerance(a) || e.domain().hi() > 2.0 * a + snap_tolerance(a)
                                   ? e.restrict(1.5 * a, 2.0 * a)
                                   : e;
  m.hnu = cplx{scale} * hr;
  m.enu = er;
  m.e_zero_mean = zero_mean(er);

  m.q = sample_aligned(a, 0.0, kPi, grid, [&](double x, Side side) -> cplx {
    switch (half_cell(x, a, side)) {
      case 3:
        return alpha * m.enu.eval(x, side);
      case 4:
        return -alpha * k_of(m.hnu, a, x + 0.5 * a) * e_running(m.enu, a, x - 0.5 * a);
      case 5:
        return m.hnu.eval(x, side);
      default:
        return 0.0;
    }
  });
  return m;
}

PiecewiseFunction w_shortcut(const FamilyMember& member, const GridOptions& grid) {
  const double a = member.a;
  const auto& q = member.q;
  const double sign = member.nu == 0 ? 1.0 : -1.0;
  // M_q q on (3a/2, 2a); only q on (5a/2, 3a) enters the kernel.
  const FredholmOperator op(a, q.restrict(2.5 * a, 3.0 * a));
  const PiecewiseFunction mq = op.apply(q.restrict(1.5 * a, 2.0 * a));
  const PiecewiseFunction tail = q.restrict(2.5 * a, 3.0 * a);
  auto k_q = [&](double s) { return k_of(tail, a, s); };
  auto q_running = [&](double y) { return integrate(q, 1.5 * a, std::clamp(y, 1.5 * a, 2.0 * a)); };

  return sample_aligned(a, a, 3.0 * a, grid, [&](double x, Side side) -> cplx {
    const cplx qx = q.eval(x, side);
    switch (half_cell(x, a, side)) {
      case 3:
        return qx - sign * mq.eval(x, side);
      case 4:
        return qx + k_q(x + 0.5 * a) * q_running(x - 0.5 * a);
      default:
        return qx;
    }
  });
}

PiecewiseFunction w_of_member(const FamilyMember& member, const GridOptions& grid, double tol) {
  const DelaySetup setup = member.setup();
  if (max_abs_on(member.q, setup.a, 1.5 * setup.a) > 0.0) {
    throw PreconditionError("w_of_member: shortcut needs q = 0 on (a, 3a/2)");
  }
  PiecewiseFunction general = build_w(member.q, setup, 0, grid).w;
  const PiecewiseFunction special = w_shortcut(member, grid);
  const double diff = max_abs_diff(general, special);
  if (!(diff <= tol)) {
    throw ConsistencyError("w_of_member: general and shortcut w differ by " + std::to_string(diff));
  }
  return general;
}

cplx omega_of_member(const FamilyMember& member) { return integrate(member.q, member.a, kPi); }

cplx transfer_integral(const PiecewiseFunction& h, const PiecewiseFunction& e, double a) {
  require_cover(h, 2.5 * a, 3.0 * a, "transfer_integral: h must cover [5a/2, 3a]");
  require_cover(e, 1.5 * a, 2.0 * a, "transfer_integral: e must cover [3a/2, 2a]");
  static const GaussRule unit = gauss_legendre(24);
  const auto pieces = make_cuts(2.0 * a, 2.5 * a, lattice_points(a / 16.0, 0.0, 2.0 * a, 2.5 * a));
  return gauss_composite(pieces, unit, [&](double x) {
    return k_of(h, a, x + 0.5 * a) * e_running(e, a, x - 0.5 * a);
  });
}

}  // namespace isospec
