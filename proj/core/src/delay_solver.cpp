#include "isospec/delay_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isospec/kernels.hpp"
#include "isospec/quadrature.hpp"

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSupportTol = 1e-12;

const GaussRule& cell_rule() {
  static const GaussRule rule = gauss_legendre(4);
  return rule;
}

int auto_steps_per_a(double a) {
  // Smallest multiple of 4 with a/m <= pi/4096.
  int m = static_cast<int>(std::ceil(4096.0 * a / kPi - 1e-9));
  m = std::max(m, 4);
  return (m + 3) / 4 * 4;
}

}  // namespace

DelaySetup DelaySetup::make(double a, int nu) {
  if (!(a > 0.0) || !(a < kPi)) throw PreconditionError("DelaySetup: delay must lie in (0, pi)");
  if (nu != 0 && nu != 1) throw PreconditionError("DelaySetup: nu must be 0 or 1");
  // N with pi/(N+1) <= a < pi/N.
  int n = static_cast<int>(std::ceil(kPi / a)) - 1;
  while (n > 1 && !(a < kPi / n)) --n;
  while (!(kPi / (n + 1) <= a)) ++n;
  return {a, nu, std::max(n, 1)};
}

double GridOptions::spacing(double a) const {
  if (segment_nodes < 3 || segment_nodes % 2 == 0) {
    throw PreconditionError("GridOptions: segment_nodes must be odd and >= 3");
  }
  return 0.5 * a / static_cast<double>(segment_nodes - 1);
}

std::vector<double> standard_breakpoints(double a) { return aligned_breakpoints(0.5 * a, 0.0, kPi); }

double max_abs_on(const PiecewiseFunction& q, double lo, double hi) {
  double m = 0.0;
  for (const auto& seg : q.segments()) {
    const double a = std::max(lo, seg.interval().lo());
    const double b = std::min(hi, seg.interval().hi());
    if (b - a <= snap_tolerance(b)) continue;
    for (std::size_t k = 0; k < seg.count(); ++k) {
      const double x = seg.node(k);
      if (x >= a - snap_tolerance(a) && x <= b + snap_tolerance(b)) {
        m = std::max(m, std::abs(seg.samples()[k]));
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Method of steps

DirectSolver::DirectSolver(const PiecewiseFunction& q, DelaySetup setup, int steps_per_a)
    : setup_(setup), m_(steps_per_a > 0 ? steps_per_a : auto_steps_per_a(setup.a)) {
  if (m_ % 4 != 0) throw PreconditionError("DirectSolver: steps_per_a must be a multiple of 4");
  const Interval dom = q.domain();
  if (dom.lo() > snap_tolerance(0.0) || dom.hi() < kPi - snap_tolerance(kPi)) {
    throw PreconditionError("DirectSolver: potential must be defined on [0, pi]");
  }
  if (max_abs_on(q, 0.0, setup.a) > kSupportTol) {
    throw PreconditionError("DirectSolver: potential must vanish on (0, a)");
  }
  dx_ = setup.a / m_;
  full_steps_ = static_cast<std::size_t>(std::floor(kPi / dx_ + 1e-9));
  tail_ = kPi - static_cast<double>(full_steps_) * dx_;
  if (tail_ < 1e-12) tail_ = 0.0;

  const std::size_t total = full_steps_ + (tail_ > 0.0 ? 1 : 0);
  xs_.resize(total + 1);
  for (std::size_t i = 0; i <= full_steps_; ++i) xs_[i] = static_cast<double>(i) * dx_;
  if (tail_ > 0.0) xs_[total] = kPi;
  xs_.back() = std::min(xs_.back(), kPi);

  q_start_.assign(total, 0.0);
  q_mid_.assign(total, 0.0);
  q_end_.assign(total, 0.0);
  for (std::size_t i = static_cast<std::size_t>(m_); i < total; ++i) {
    const double x0 = xs_[i];
    const double x1 = xs_[i + 1];
    q_start_[i] = q.eval(x0, Side::Right);
    q_mid_[i] = q.eval(0.5 * (x0 + x1));
    q_end_[i] = q.eval(x1, Side::Left);
  }
}

cplx DirectSolver::hermite(const Run& r, cplx lambda, double x) const {
  if (x <= setup_.a) return ykernel(setup_.nu, lambda, x);
  const std::size_t last = xs_.size() - 1;
  std::size_t j = std::min(static_cast<std::size_t>(std::floor(x / dx_)), last - 1);
  if (x >= xs_[last - 1]) j = last - 1;
  const double h = xs_[j + 1] - xs_[j];
  const double u = (x - xs_[j]) / h;
  if (u <= 0.0) return r.y[j];
  if (u >= 1.0) return r.y[j + 1];
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * r.y[j] + (u3 - 2 * u2 + u) * h * r.yp[j] +
         (-2 * u3 + 3 * u2) * r.y[j + 1] + (u3 - u2) * h * r.yp[j + 1];
}

cplx DirectSolver::hermite_prime(const Run& r, cplx lambda, double x) const {
  if (x <= setup_.a) return ykernel_dx(setup_.nu, lambda, x);
  const std::size_t last = xs_.size() - 1;
  std::size_t j = std::min(static_cast<std::size_t>(std::floor(x / dx_)), last - 1);
  if (x >= xs_[last - 1]) j = last - 1;
  const double h = xs_[j + 1] - xs_[j];
  const double u = (x - xs_[j]) / h;
  if (u <= 0.0) return r.yp[j];
  if (u >= 1.0) return r.yp[j + 1];
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * r.y[j] + (-6 * u2 + 6 * u) * r.y[j + 1]) / h +
         (3 * u2 - 4 * u + 1) * r.yp[j] + (3 * u2 - 2 * u) * r.yp[j + 1];
}

DirectSolver::Run DirectSolver::run(cplx lambda) const {
  const std::size_t total = xs_.size() - 1;
  Run r;
  r.y.resize(total + 1);
  r.yp.resize(total + 1);
  const auto m = static_cast<std::size_t>(m_);
  const int nu = setup_.nu;
  for (std::size_t i = 0; i <= std::min(m, total); ++i) {
    r.y[i] = ykernel(nu, lambda, xs_[i]);
    r.yp[i] = ykernel_dx(nu, lambda, xs_[i]);
  }
  const double a = setup_.a;
  for (std::size_t i = m; i < total; ++i) {
    const double x0 = xs_[i];
    const double h = xs_[i + 1] - x0;
    // Delayed values; on the uniform part they sit on nodes and half-nodes.
    const cplx hist0 = r.y[i - m];
    const cplx histm = hermite(r, lambda, x0 + 0.5 * h - a);
    const cplx hist1 = i + 1 - m <= full_steps_ && h == dx_ ? r.y[i + 1 - m]
                                                             : hermite(r, lambda, xs_[i + 1] - a);
    const cplx f0 = q_start_[i] * hist0;
    const cplx fm = q_mid_[i] * histm;
    const cplx f1 = q_end_[i] * hist1;
    const cplx u = r.y[i], v = r.yp[i];
    // y'' = q(x) y(x - a) - lambda y
    const cplx k1u = v, k1v = f0 - lambda * u;
    const cplx k2u = v + 0.5 * h * k1v, k2v = fm - lambda * (u + 0.5 * h * k1u);
    const cplx k3u = v + 0.5 * h * k2v, k3v = fm - lambda * (u + 0.5 * h * k2u);
    const cplx k4u = v + h * k3v, k4v = f1 - lambda * (u + h * k3u);
    r.y[i + 1] = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    r.yp[i + 1] = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return r;
}

std::pair<cplx, cplx> DirectSolver::endpoint(cplx lambda) const {
  const Run r = run(lambda);
  return {r.y.back(), r.yp.back()};
}

SolutionTrace DirectSolver::trace(cplx lambda) const {
  const Run r = run(lambda);
  const auto bps = standard_breakpoints(setup_.a);
  auto y = PiecewiseFunction::sample(bps, dx_, [&](double x, Side) { return hermite(r, lambda, x); });
  auto yp = PiecewiseFunction::sample(bps, dx_,
                                      [&](double x, Side) { return hermite_prime(r, lambda, x); });
  return {setup_, lambda, std::move(y), std::move(yp)};
}

SolutionTrace solve_direct(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda,
                           int steps_per_a) {
  return DirectSolver(q, setup, steps_per_a).trace(lambda);
}

// ---------------------------------------------------------------------------
// Successive approximations

std::vector<SolutionTrace> series_terms(const PiecewiseFunction& q, const DelaySetup& setup,
                                        int kmax, cplx lambda, const GridOptions& grid) {
  if (kmax < 0) throw PreconditionError("series_terms: k must be nonnegative");
  const double a = setup.a;
  const SpectralPoint sp(lambda);
  const int nu = setup.nu;
  std::vector<SolutionTrace> out;
  auto zero = sample_aligned(a, 0.0, kPi, grid, [](double, Side) { return cplx{}; });

  out.push_back({setup, lambda,
                 sample_aligned(a, 0.0, kPi, grid, [&](double x, Side) { return ykernel(nu, lambda, x); }),
                 sample_aligned(a, 0.0, kPi, grid,
                                [&](double x, Side) { return ykernel_dx(nu, lambda, x); })});

  const GaussRule& unit = cell_rule();
  for (int k = 1; k <= kmax; ++k) {
    if (k > setup.steps) {
      out.push_back({setup, lambda, zero, zero});
      continue;
    }
    const PiecewiseFunction& prev = out.back().y;
    const double start = k * a;
    // g(t) = q(t) y_{k-1}(t - a) on [ka, pi]; y_k solves y'' + lambda y = g with zero data at ka.
    const auto g = sample_aligned(a, 0.0, kPi, grid, [&](double t, Side side) -> cplx {
      if (t < start - snap_tolerance(start) || (t <= start + snap_tolerance(start) && side == Side::Left)) {
        return 0.0;
      }
      return q.eval(t, side) * prev.eval(std::max(t - a, 0.0), side);
    });
    std::vector<SampledSegment> ys, yps;
    cplx u{}, v{};
    for (const auto& seg : g.segments()) {
      const std::size_t n = seg.count();
      std::vector<cplx> yv(n), ypv(n);
      const double h = seg.spacing();
      // Exact propagator over one cell and the Gauss weights of the forcing integrals.
      const auto kh = kernels(sp, h);
      std::vector<cplx> ws(unit.nodes.size()), wc(unit.nodes.size());
      for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
        const double tau = 0.5 * h * (1.0 + unit.nodes[i]);
        const auto kk = kernels(sp, h - tau);
        ws[i] = 0.5 * h * unit.weights[i] * kk.s;
        wc[i] = 0.5 * h * unit.weights[i] * kk.c;
      }
      const bool active = seg.interval().lo() >= start - snap_tolerance(start);
      yv[0] = u;
      ypv[0] = v;
      for (std::size_t c = 0; c + 1 < n; ++c) {
        if (active) {
          const double x0 = seg.node(c);
          cplx fs{}, fc{};
          for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
            const cplx gv = seg.eval(x0 + 0.5 * h * (1.0 + unit.nodes[i]));
            fs += ws[i] * gv;
            fc += wc[i] * gv;
          }
          const cplx u1 = kh.c * u + kh.s * v + fs;
          const cplx v1 = -lambda * kh.s * u + kh.c * v + fc;
          u = u1;
          v = v1;
        }
        yv[c + 1] = u;
        ypv[c + 1] = v;
      }
      ys.emplace_back(seg.interval(), std::move(yv));
      yps.emplace_back(seg.interval(), std::move(ypv));
    }
    out.push_back({setup, lambda, PiecewiseFunction(std::move(ys)), PiecewiseFunction(std::move(yps))});
  }
  return out;
}

PiecewiseFunction series_term(const PiecewiseFunction& q, const DelaySetup& setup, int k, cplx lambda,
                              const GridOptions& grid) {
  return std::move(series_terms(q, setup, k, lambda, grid).back().y);
}

SolutionTrace series_sum(const PiecewiseFunction& q, const DelaySetup& setup, cplx lambda,
                         const GridOptions& grid) {
  auto terms = series_terms(q, setup, setup.steps, lambda, grid);
  SolutionTrace sum = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) {
    sum.y = sum.y + terms[k].y;
    sum.yprime = sum.yprime + terms[k].yprime;
  }
  return sum;
}

}  // namespace isospec
