#include "isospec/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace isospec {

namespace {

constexpr double kGaussOffset = 0.57735026918962576451;  // 1/sqrt(3)

std::size_t stencil_size(std::size_t n) noexcept { return std::min<std::size_t>(4, n); }

std::size_t cell_of(std::size_t n, double t) noexcept {
  if (!(t > 0.0)) return 0;
  const auto c = static_cast<std::size_t>(std::floor(t));
  return std::min(c, n - 2);
}

std::size_t stencil_start(std::size_t n, std::size_t cell) noexcept {
  const std::size_t m = stencil_size(n);
  const std::size_t s = cell == 0 ? 0 : cell - 1;
  return std::min(s, n - m);
}

// Lagrange interpolation on m (3 or 4) unit-spaced nodes at local coordinate u.
cplx lagrange(std::span<const cplx> y, std::size_t s, std::size_t m, double u) noexcept {
  if (m == 4) {
    const double u0 = u, u1 = u - 1.0, u2 = u - 2.0, u3 = u - 3.0;
    const double l0 = -u1 * u2 * u3 / 6.0;
    const double l1 = u0 * u2 * u3 / 2.0;
    const double l2 = -u0 * u1 * u3 / 2.0;
    const double l3 = u0 * u1 * u2 / 6.0;
    return l0 * y[s] + l1 * y[s + 1] + l2 * y[s + 2] + l3 * y[s + 3];
  }
  const double u0 = u, u1 = u - 1.0, u2 = u - 2.0;
  return (u1 * u2 / 2.0) * y[s] - (u0 * u2) * y[s + 1] + (u0 * u1 / 2.0) * y[s + 2];
}

cplx interp_at(std::span<const cplx> y, double x0, double h, double x) noexcept {
  const std::size_t n = y.size();
  const double t = (x - x0) / h;
  const double r = std::round(t);
  if (std::abs(t - r) < 1e-10 && r >= 0.0 && r <= static_cast<double>(n - 1)) {
    return y[static_cast<std::size_t>(r)];
  }
  const std::size_t c = cell_of(n, t);
  const std::size_t s = stencil_start(n, c);
  return lagrange(y, s, stencil_size(n), t - static_cast<double>(s));
}

// Integral over [p, q] contained in one cell; two-point Gauss is exact for cubics.
cplx cell_integral(std::span<const cplx> y, double x0, double h, std::size_t cell, double p,
                   double q) noexcept {
  if (q <= p) return {};
  const std::size_t n = y.size();
  const std::size_t s = stencil_start(n, cell);
  const std::size_t m = stencil_size(n);
  const double mid = 0.5 * (p + q);
  const double half = 0.5 * (q - p);
  const double u1 = (mid - half * kGaussOffset - x0) / h - static_cast<double>(s);
  const double u2 = (mid + half * kGaussOffset - x0) / h - static_cast<double>(s);
  return half * (lagrange(y, s, m, u1) + lagrange(y, s, m, u2));
}

}  // namespace

// ---------------------------------------------------------------------------

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw PreconditionError("Interval: require finite lo < hi");
  }
}

double snap_tolerance(double x) noexcept { return 1e-12 * std::max(1.0, std::abs(x)); }

std::size_t nodes_for(double length, double spacing) {
  if (!(length > 0.0) || !(spacing > 0.0)) throw PreconditionError("nodes_for: nonpositive size");
  auto cells = static_cast<std::size_t>(std::ceil(length / spacing - 1e-9));
  cells = std::max<std::size_t>(cells, 2);
  if (cells % 2 != 0) ++cells;
  return cells + 1;
}

std::vector<double> aligned_breakpoints(double step, double lo, double hi) {
  if (!(step > 0.0) || !(lo < hi)) throw PreconditionError("aligned_breakpoints: bad range");
  std::vector<double> bps{lo};
  const auto kmin = static_cast<long>(std::floor(lo / step)) + 1;
  for (long k = kmin;; ++k) {
    const double x = static_cast<double>(k) * step;
    if (x >= hi - snap_tolerance(hi)) break;
    if (x > lo + snap_tolerance(lo)) bps.push_back(x);
  }
  bps.push_back(hi);
  return bps;
}

// ---------------------------------------------------------------------------

SampledSegment::SampledSegment(Interval interval, std::vector<cplx> samples)
    : interval_(interval), samples_(std::move(samples)), spacing_(0.0) {
  if (samples_.size() < 3 || samples_.size() % 2 == 0) {
    throw PreconditionError("SampledSegment: sample count must be odd and >= 3");
  }
  spacing_ = interval_.length() / static_cast<double>(samples_.size() - 1);
  prefix_.resize(samples_.size());
  prefix_[0] = 0.0;
  for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
    prefix_[k + 1] =
        prefix_[k] + cell_integral(samples_, interval_.lo(), spacing_, k, node(k), node(k + 1));
  }
}

double SampledSegment::node(std::size_t i) const noexcept {
  if (i + 1 == samples_.size()) return interval_.hi();
  return interval_.lo() + static_cast<double>(i) * spacing_;
}

cplx SampledSegment::eval(double x) const noexcept {
  x = std::clamp(x, interval_.lo(), interval_.hi());
  return interp_at(samples_, interval_.lo(), spacing_, x);
}

cplx SampledSegment::antiderivative(double x) const noexcept {
  x = std::clamp(x, interval_.lo(), interval_.hi());
  const std::size_t n = samples_.size();
  const std::size_t c = cell_of(n, (x - interval_.lo()) / spacing_);
  return prefix_[c] + cell_integral(samples_, interval_.lo(), spacing_, c, node(c), x);
}

// ---------------------------------------------------------------------------

PiecewiseFunction::PiecewiseFunction(std::vector<SampledSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw PreconditionError("PiecewiseFunction: no segments");
  for (std::size_t s = 1; s < segments_.size(); ++s) {
    const double prev = segments_[s - 1].interval().hi();
    const double cur = segments_[s].interval().lo();
    if (std::abs(prev - cur) > snap_tolerance(cur)) {
      throw PreconditionError("PiecewiseFunction: segments must abut");
    }
  }
}

PiecewiseFunction PiecewiseFunction::join(std::span<const PiecewiseFunction> parts) {
  std::vector<SampledSegment> segs;
  for (const auto& p : parts) {
    for (const auto& s : p.segments()) segs.push_back(s);
  }
  return PiecewiseFunction(std::move(segs));
}

Interval PiecewiseFunction::domain() const {
  if (segments_.empty()) throw DomainError("PiecewiseFunction: empty function");
  return {segments_.front().interval().lo(), segments_.back().interval().hi()};
}

std::vector<double> PiecewiseFunction::breakpoints() const {
  std::vector<double> bps;
  if (segments_.empty()) return bps;
  bps.push_back(segments_.front().interval().lo());
  for (const auto& s : segments_) bps.push_back(s.interval().hi());
  return bps;
}

std::size_t PiecewiseFunction::node_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : segments_) n += s.count();
  return n;
}

std::size_t PiecewiseFunction::locate(double x, Side side) const {
  const Interval dom = domain();
  if (!dom.contains(x, snap_tolerance(x))) {
    std::ostringstream msg;
    msg << "PiecewiseFunction: x=" << x << " outside [" << dom.lo() << ", " << dom.hi() << "]";
    throw DomainError(msg.str());
  }
  const std::size_t last = segments_.size() - 1;
  // First segment whose right end is >= x (with snapping).
  std::size_t lo = 0, hi = last;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const double right = segments_[mid].interval().hi();
    if (right < x - snap_tolerance(x)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  std::size_t idx = lo;
  const double right = segments_[idx].interval().hi();
  if (side == Side::Right && idx < last && std::abs(x - right) <= snap_tolerance(x)) ++idx;
  return idx;
}

cplx PiecewiseFunction::eval(double x, Side side) const {
  const std::size_t idx = locate(x, side);
  return segments_[idx].eval(x);
}

PiecewiseFunction PiecewiseFunction::restrict(double lo, double hi) const {
  std::vector<SampledSegment> segs;
  bool lo_ok = false, hi_ok = false;
  for (const auto& s : segments_) {
    const Interval& iv = s.interval();
    if (std::abs(iv.lo() - lo) <= snap_tolerance(lo)) lo_ok = true;
    if (std::abs(iv.hi() - hi) <= snap_tolerance(hi)) hi_ok = true;
    if (iv.lo() >= lo - snap_tolerance(lo) && iv.hi() <= hi + snap_tolerance(hi)) {
      segs.push_back(s);
    }
  }
  if (!lo_ok || !hi_ok || segs.empty()) {
    throw DomainError("restrict: range ends must be breakpoints of the function");
  }
  return PiecewiseFunction(std::move(segs));
}

double PiecewiseFunction::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& s : segments_) {
    for (const auto& v : s.samples()) m = std::max(m, std::abs(v));
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace detail {

cplx interpolate_samples(std::span<const cplx> y, double x0, double h, double x) noexcept {
  return interp_at(y, x0, h, x);
}

void stencil_window(std::size_t n, double x0, double h, double lo, double hi, std::size_t& first,
                    std::size_t& last) noexcept {
  const std::size_t m = stencil_size(n);
  const std::size_t c0 = cell_of(n, (lo - x0) / h);
  const std::size_t c1 = cell_of(n, (hi - x0) / h);
  first = stencil_start(n, c0);
  last = stencil_start(n, c1) + m - 1;
}

cplx integrate_samples(std::span<const cplx> y, double x0, double h, double lo,
                       double hi) noexcept {
  const std::size_t n = y.size();
  const double xend = x0 + h * static_cast<double>(n - 1);
  lo = std::clamp(lo, x0, xend);
  hi = std::clamp(hi, x0, xend);
  if (hi <= lo) return {};
  const std::size_t c0 = cell_of(n, (lo - x0) / h);
  const std::size_t c1 = cell_of(n, (hi - x0) / h);
  auto node = [&](std::size_t k) { return x0 + static_cast<double>(k) * h; };
  if (c0 == c1) return cell_integral(y, x0, h, c0, lo, hi);
  cplx total = cell_integral(y, x0, h, c0, lo, node(c0 + 1));
  for (std::size_t c = c0 + 1; c < c1; ++c) total += cell_integral(y, x0, h, c, node(c), node(c + 1));
  total += cell_integral(y, x0, h, c1, node(c1), hi);
  return total;
}

}  // namespace detail

// ---------------------------------------------------------------------------

cplx eval(const PiecewiseFunction& f, double x) { return f.eval(x); }

namespace {

// Integral from the domain's left end to x.
cplx running_integral(const PiecewiseFunction& f, double x) {
  const std::size_t idx = f.locate(x, Side::Left);
  cplx acc{};
  const auto segs = f.segments();
  for (std::size_t s = 0; s < idx; ++s) acc += segs[s].total();
  return acc + segs[idx].antiderivative(x);
}

}  // namespace

cplx integrate(const PiecewiseFunction& f, double lo, double hi) {
  const Interval dom = f.domain();
  if (!dom.contains(lo, snap_tolerance(lo)) || !dom.contains(hi, snap_tolerance(hi))) {
    throw DomainError("integrate: range outside domain");
  }
  if (lo > hi + snap_tolerance(hi)) throw DomainError("integrate: lo > hi");
  if (hi <= lo) return {};
  const std::size_t s0 = f.locate(lo, Side::Right);
  const std::size_t s1 = f.locate(hi, Side::Left);
  const auto segs = f.segments();
  if (s0 > s1) return {};
  if (s0 == s1) return segs[s0].antiderivative(hi) - segs[s0].antiderivative(lo);
  cplx total = segs[s0].total() - segs[s0].antiderivative(lo);
  for (std::size_t s = s0 + 1; s < s1; ++s) total += segs[s].total();
  return total + segs[s1].antiderivative(hi);
}

PiecewiseFunction cumulative(const PiecewiseFunction& f, double anchor) {
  const Interval dom = f.domain();
  if (!dom.contains(anchor, snap_tolerance(anchor))) {
    throw DomainError("cumulative: anchor outside domain");
  }
  const cplx base = running_integral(f, anchor);
  std::vector<SampledSegment> segs;
  cplx offset{};
  for (const auto& seg : f.segments()) {
    const std::size_t n = seg.count();
    std::vector<cplx> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = offset + seg.antiderivative(seg.node(k)) - base;
    offset += seg.total();
    segs.emplace_back(seg.interval(), std::move(y));
  }
  return PiecewiseFunction(std::move(segs));
}

namespace {

void require_same_grid(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  const auto a = f.segments();
  const auto b = g.segments();
  bool same = a.size() == b.size();
  for (std::size_t s = 0; same && s < a.size(); ++s) {
    same = a[s].count() == b[s].count() &&
           std::abs(a[s].interval().lo() - b[s].interval().lo()) <= snap_tolerance(a[s].interval().lo()) &&
           std::abs(a[s].interval().hi() - b[s].interval().hi()) <= snap_tolerance(a[s].interval().hi());
  }
  if (!same) throw PreconditionError("functions are not sampled on a common grid");
}

}  // namespace

PiecewiseFunction combine(cplx alpha, const PiecewiseFunction& f, cplx beta,
                          const PiecewiseFunction& g) {
  require_same_grid(f, g);
  std::vector<SampledSegment> segs;
  const auto a = f.segments();
  const auto b = g.segments();
  for (std::size_t s = 0; s < a.size(); ++s) {
    std::vector<cplx> y(a[s].count());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = alpha * a[s].samples()[k] + beta * b[s].samples()[k];
    segs.emplace_back(a[s].interval(), std::move(y));
  }
  return PiecewiseFunction(std::move(segs));
}

PiecewiseFunction operator+(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  return combine(1.0, f, 1.0, g);
}

PiecewiseFunction operator-(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  return combine(1.0, f, -1.0, g);
}

PiecewiseFunction operator*(cplx c, const PiecewiseFunction& f) {
  return f.map([c](double, cplx v, Side) { return c * v; });
}

double max_abs_diff(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  return (f - g).max_abs();
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& out, const PiecewiseFunction& f) {
  out << "x,re,im\n";
  char line[96];
  for (const auto& seg : f.segments()) {
    for (std::size_t k = 0; k < seg.count(); ++k) {
      const cplx v = seg.samples()[k];
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", seg.node(k), v.real(), v.imag());
      out << line;
    }
  }
}

PiecewiseFunction read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,re,im", 0) != 0) {
    throw PreconditionError("read_csv: missing `x,re,im` header");
  }
  std::vector<SampledSegment> segs;
  std::vector<double> xs;
  std::vector<cplx> ys;
  auto flush = [&] {
    if (xs.empty()) return;
    segs.emplace_back(Interval(xs.front(), xs.back()), std::move(ys));
    xs.clear();
    ys = {};
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x = 0, re = 0, im = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3) {
      throw PreconditionError("read_csv: malformed row: " + line);
    }
    if (!xs.empty() && x == xs.back()) flush();
    xs.push_back(x);
    ys.emplace_back(re, im);
  }
  flush();
  return PiecewiseFunction(std::move(segs));
}

}  // namespace isospec
