#include <algorithm>
#include <cmath>
#include <numbers>

#include "isospec/delay_solver.hpp"
#include "isospec/kernels.hpp"
#include "isospec/quadrature.hpp"

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussNodes = 24;

const GaussRule& unit_rule() {
  static const GaussRule rule = gauss_legendre(kGaussNodes);
  return rule;
}

double sign_of(int nu) { return nu == 0 ? 1.0 : -1.0; }

bool within(double x, double lo, double hi) {
  return x >= lo - snap_tolerance(lo) && x <= hi + snap_tolerance(hi);
}

}  // namespace

ClosedForms::ClosedForms(PiecewiseFunction q, DelaySetup setup, GridOptions grid)
    : q_(std::move(q)), setup_(setup), grid_(grid), omega_(cumulative(q_, setup.a)),
      qbreaks_(q_.breakpoints()) {}

std::vector<double> ClosedForms::cuts(double lo, double hi, std::vector<double> extra) const {
  extra.insert(extra.end(), qbreaks_.begin(), qbreaks_.end());
  return make_cuts(lo, hi, std::move(extra));
}

cplx ClosedForms::omega1(double x) const {
  const double a = setup_.a;
  if (x <= 2.0 * a) return 0.0;
  return integrate_product(q_, 2.0 * a, x, [&](double t, Side) { return running(t - a); });
}

cplx ClosedForms::running(double x) const {
  // Exact integral of the interpolant; avoids interpolating the sampled antiderivative.
  return integrate(q_, setup_.a, std::max(x, setup_.a));
}

std::pair<cplx, cplx> ClosedForms::series_fallback(int k, cplx lambda, double x) const {
  const auto terms = series_terms(q_, setup_, k, lambda, grid_);
  return {terms.back().y.eval(x), terms.back().yprime.eval(x)};
}

cplx ClosedForms::y1(cplx lambda, double x) const {
  const double a = setup_.a;
  if (!within(x, a, kPi)) throw DomainError("y1_closed: x must lie in [a, pi]");
  x = std::clamp(x, a, kPi);
  const auto pieces = cuts(a, x);
  if (setup_.nu == 0) {
    const cplx integral = gauss_composite(pieces, unit_rule(), [&](double t) {
      return q_.eval(t) * skernel(lambda, x - 2.0 * t + a);
    });
    return 0.5 * running(x) * skernel(lambda, x - a) + 0.5 * integral;
  }
  // (-omega(x) C(x - a) + int q C(x - 2t + a)) / (2 lambda), with the 1/lambda removed:
  // C(x - 2t + a) - C(x - a) = 2 lambda S(x - t) S(t - a).
  const SpectralPoint sp(lambda);
  return gauss_composite(pieces, unit_rule(), [&](double t) {
    return q_.eval(t) * kernels(sp, x - t).s * kernels(sp, t - a).s;
  });
}

cplx ClosedForms::y1_prime(cplx lambda, double x) const {
  const double a = setup_.a;
  if (!within(x, a, kPi)) throw DomainError("y1_closed_prime: x must lie in [a, pi]");
  x = std::clamp(x, a, kPi);
  const int nu = setup_.nu;
  const cplx w = running(x);
  const auto pieces = cuts(a, x);
  const cplx integral = gauss_composite(pieces, unit_rule(), [&](double t) {
    return q_.eval(t) * ykernel(nu, lambda, x - 2.0 * t + a);
  });
  return 0.5 * w * ykernel(nu, lambda, x - a) + 0.5 * sign_of(nu) * integral;
}

cplx ClosedForms::p_kernel(double x, double t) const {
  const double a = setup_.a;
  if (!within(t, 1.5 * a, x - 0.5 * a) || !within(x - 0.5 * a, t, kPi - 0.5 * a)) {
    throw DomainError("p_kernel: require 3a/2 <= t <= x - a/2 <= pi - a/2");
  }
  t = std::clamp(t, 1.5 * a, x - 0.5 * a);
  const cplx wx = running(x);
  const cplx first = (wx - running(t + 0.5 * a)) * running(t - 0.5 * a);
  const double upper = x - t + 0.5 * a;
  // omega(t + tau - a/2) has kinks where its argument crosses a multiple of a/2.
  const auto pieces = cuts(a, upper, lattice_points(0.5 * a, 0.5 * a - t, a, upper));
  const cplx second = gauss_composite(pieces, unit_rule(), [&](double tau) {
    return q_.eval(tau) * (wx - running(std::min(t + tau - 0.5 * a, x)));
  });
  return first + sign_of(setup_.nu) * second;
}

std::pair<cplx, cplx> ClosedForms::y2_pair(cplx lambda, double x) const {
  const double a = setup_.a;
  if (!within(x, 2.0 * a, kPi)) throw DomainError("y2_closed: x must lie in [2a, pi]");
  x = std::clamp(x, 2.0 * a, kPi);
  const int nu = setup_.nu;
  if (nu == 1 && std::abs(lambda) < kClosedFormFallback) return series_fallback(2, lambda, x);
  const double lo = 1.5 * a;
  const double hi = x - 0.5 * a;
  if (hi <= lo) return {0.0, 0.0};

  // P(x, .) is smooth between multiples of a/2 and the points x + a/2 - k a/2.
  auto extra = lattice_points(0.5 * a, 0.0, lo, hi);
  const auto moving = lattice_points(0.5 * a, x + 0.5 * a, lo, hi);
  extra.insert(extra.end(), moving.begin(), moving.end());
  const auto pieces = make_cuts(lo, hi, std::move(extra));

  const GaussRule& unit = unit_rule();
  cplx value{}, deriv{};
  for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
    const double mid = 0.5 * (pieces[p] + pieces[p + 1]);
    const double hw = 0.5 * (pieces[p + 1] - pieces[p]);
    for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
      const double t = mid + hw * unit.nodes[i];
      const double w = hw * unit.weights[i];
      const cplx pk = p_kernel(x, t);
      const double arg = x - 2.0 * t + a;
      value += w * pk * ykernel(1 - nu, lambda, arg);
      deriv += w * pk * ykernel(nu, lambda, arg);
    }
  }
  const cplx lam_nu = nu == 0 ? cplx{1.0} : lambda;
  return {value / (2.0 * lam_nu), 0.5 * sign_of(nu) * deriv};
}

cplx ClosedForms::y2(cplx lambda, double x) const { return y2_pair(lambda, x).first; }
cplx ClosedForms::y2_prime(cplx lambda, double x) const { return y2_pair(lambda, x).second; }

cplx y1_closed(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda, double x) {
  return ClosedForms(q, setup).y1(lambda, x);
}

cplx y1_closed_prime(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda, double x) {
  return ClosedForms(q, setup).y1_prime(lambda, x);
}

cplx y2_closed(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda, double x) {
  return ClosedForms(q, setup).y2(lambda, x);
}

cplx y2_closed_prime(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda, double x) {
  return ClosedForms(q, setup).y2_prime(lambda, x);
}

cplx p_kernel(const PiecewiseFunction& q, const DelaySetup& setup, double x, double t) {
  return ClosedForms(q, setup).p_kernel(x, t);
}

}  // namespace isospec
