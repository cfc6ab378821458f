#include "isospec/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isospec/kernels.hpp"
#include "isospec/quadrature.hpp"

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSupportTol = 1e-12;
constexpr int kGaussNodes = 24;

const GaussRule& unit_rule() {
  static const GaussRule rule = gauss_legendre(kGaussNodes);
  return rule;
}

void check_support(const PiecewiseFunction& q, const DelaySetup& setup, bool need_head) {
  const double a = setup.a;
  const Interval dom = q.domain();
  if (dom.lo() > a + snap_tolerance(a) || dom.hi() < 3.0 * a - snap_tolerance(3.0 * a)) {
    throw PreconditionError("potential must be defined on [a, 3a]");
  }
  if (dom.hi() > 3.0 * a && max_abs_on(q, 3.0 * a, kPi) > kSupportTol) {
    throw PreconditionError("potential must vanish on (3a, pi)");
  }
  if (need_head && dom.lo() < a && max_abs_on(q, 0.0, a) > kSupportTol) {
    throw PreconditionError("potential must vanish on (0, a)");
  }
}

// Q_nu on [3a/2, 5a/2] for a potential restricted to [a, 3a].
class Correction {
 public:
  Correction(const PiecewiseFunction& q, const DelaySetup& setup)
      : a_(setup.a),
        sign_(setup.nu == 0 ? 1.0 : -1.0),
        core_(q.restrict(setup.a, 3.0 * setup.a)),
        w3_(integrate(core_, setup.a, 3.0 * setup.a)),
        breaks_(core_.breakpoints()) {}

  [[nodiscard]] const PiecewiseFunction& core() const noexcept { return core_; }

  /// W(x) = integral of q over [a, x].
  [[nodiscard]] cplx running(double x) const { return integrate(core_, a_, std::clamp(x, a_, 3.0 * a_)); }

  [[nodiscard]] cplx operator()(double x) const {
    const double a = a_;
    const cplx first = (w3_ - running(x + 0.5 * a)) * running(x - 0.5 * a);
    const double upper = 3.5 * a - x;
    // W(x + t - a/2) has kinks where its argument crosses a multiple of a/2.
    auto extra = lattice_points(0.5 * a, 0.5 * a - x, a, upper);
    extra.insert(extra.end(), breaks_.begin(), breaks_.end());
    const auto pieces = make_cuts(a, upper, std::move(extra));
    const cplx second = gauss_composite(pieces, unit_rule(), [&](double t) {
      return core_.eval(t) * (w3_ - running(std::min(x + t - 0.5 * a, 3.0 * a)));
    });
    return first - sign_ * second;
  }

 private:
  double a_;
  double sign_;
  PiecewiseFunction core_;
  cplx w3_;
  std::vector<double> breaks_;
};

}  // namespace

cplx q_correction(const PiecewiseFunction& q, const DelaySetup& setup, double x) {
  const double a = setup.a;
  if (x < 1.5 * a - snap_tolerance(x) || x > 2.5 * a + snap_tolerance(x)) {
    throw DomainError("q_correction: x must lie in [3a/2, 5a/2]");
  }
  check_support(q, setup, false);
  return Correction(q, setup)(std::clamp(x, 1.5 * a, 2.5 * a));
}

CharData build_w(const PiecewiseFunction& q, const DelaySetup& setup, int j, const GridOptions& grid) {
  const double a = setup.a;
  if (!(a < kPi / 3.0)) throw PreconditionError("build_w: requires a < pi/3");
  if (j != 0 && j != 1) throw PreconditionError("build_w: j must be 0 or 1");
  const Interval dom = q.domain();
  if (dom.lo() > snap_tolerance(0.0) || dom.hi() < kPi - snap_tolerance(kPi)) {
    throw PreconditionError("build_w: potential must be defined on [0, pi]");
  }
  check_support(q, setup, true);

  const Correction correction(q, setup);
  const PiecewiseFunction& core = correction.core();

  auto w = sample_aligned(a, a, 3.0 * a, grid, [&](double x, Side side) -> cplx {
    const cplx qx = core.eval(x, side);
    const double tol = snap_tolerance(x);
    const bool after_lo = x > 1.5 * a + tol || (x >= 1.5 * a - tol && side == Side::Right);
    const bool before_hi = x < 2.5 * a - tol || (x <= 2.5 * a + tol && side == Side::Left);
    const bool inside = after_lo && before_hi;
    return inside ? qx + correction(std::clamp(x, 1.5 * a, 2.5 * a)) : qx;
  });
  return {setup, j, integrate(q, a, kPi), std::move(w)};
}

ClosedCharacteristic::ClosedCharacteristic(CharData data, DeltaForm form)
    : data_(std::move(data)), form_(form) {
  const double a = data_.setup.a;
  const GaussRule& unit = unit_rule();
  for (const auto& seg : data_.w.segments()) {
    const auto pieces = make_cuts(seg.interval().lo(), seg.interval().hi(),
                                  lattice_points(0.25 * a, 0.0, seg.interval().lo(), seg.interval().hi()));
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
      const double mid = 0.5 * (pieces[p] + pieces[p + 1]);
      const double half = 0.5 * (pieces[p + 1] - pieces[p]);
      for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
        const double x = mid + half * unit.nodes[i];
        nodes_.push_back(x);
        weighted_w_.push_back(half * unit.weights[i] * seg.eval(x));
      }
    }
  }
}

cplx ClosedCharacteristic::operator()(cplx lambda) const {
  const double a = data_.setup.a;
  const int nu = data_.setup.nu;
  const int j = data_.j;
  const cplx omega = data_.omega;
  const SpectralPoint sp(lambda);

  if (nu != j) {
    cplx sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum += weighted_w_[i] * kernels(sp, kPi - 2.0 * nodes_[i] + a).s;
    }
    const double sign = j == 0 ? 1.0 : -1.0;
    return kernels(sp, kPi).c + 0.5 * omega * kernels(sp, kPi - a).s + 0.5 * sign * sum;
  }
  if (nu == 1) {
    cplx sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum += weighted_w_[i] * kernels(sp, kPi - 2.0 * nodes_[i] + a).c;
    }
    return -lambda * kernels(sp, kPi).s + 0.5 * omega * kernels(sp, kPi - a).c + 0.5 * sum;
  }
  if (form_ == DeltaForm::Literal) {
    cplx sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum += weighted_w_[i] * kernels(sp, kPi - 2.0 * nodes_[i] + a).c;
    }
    return kernels(sp, kPi).s + (sum - omega * kernels(sp, kPi - a).c) / (2.0 * lambda);
  }
  // C(pi - a) - C(pi - 2x + a) = -2 lambda S(pi - x) S(x - a), with omega = integral of w.
  cplx sum{};
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    sum += weighted_w_[i] * kernels(sp, kPi - nodes_[i]).s * kernels(sp, nodes_[i] - a).s;
  }
  return kernels(sp, kPi).s + sum;
}

cplx delta_closed(const CharData& data, cplx lambda, DeltaForm form) {
  return ClosedCharacteristic(data, form)(lambda);
}

DirectCharacteristic::DirectCharacteristic(const PiecewiseFunction& q, const DelaySetup& setup, int j,
                                           int steps_per_a)
    : solver_(q, setup.with_nu(1 - setup.nu), steps_per_a), j_(j) {
  if (j != 0 && j != 1) throw PreconditionError("DirectCharacteristic: j must be 0 or 1");
}

cplx DirectCharacteristic::operator()(cplx lambda) const {
  const auto [y, yp] = solver_.endpoint(lambda);
  return j_ == 0 ? y : yp;
}

cplx delta_direct(const PiecewiseFunction& q, const DelaySetup& setup, int j, cplx lambda, int steps_per_a) {
  return DirectCharacteristic(q, setup, j, steps_per_a)(lambda);
}

cplx delta_series(const PiecewiseFunction& q, const DelaySetup& setup, int j, cplx lambda,
                  const GridOptions& grid) {
  if (j != 0 && j != 1) throw PreconditionError("delta_series: j must be 0 or 1");
  const auto sum = series_sum(q, setup.with_nu(1 - setup.nu), lambda, grid);
  return j == 0 ? sum.y.eval(kPi) : sum.yprime.eval(kPi);
}

}  // namespace isospec
