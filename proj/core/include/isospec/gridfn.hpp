#pragma once

// Sampled piecewise functions on subintervals of [0, pi].
//
// A PiecewiseFunction is a sequence of abutting segments, each carrying
// complex samples on a uniform grid that includes both endpoints. Inside a
// segment the function is the local cubic Lagrange interpolant; interpolation
// never crosses a breakpoint, so jumps are represented exactly. Integrals are
// exact integrals of that piecewise cubic, which makes them additive over
// adjacent ranges and fourth-order accurate for smooth data.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "isospec/errors.hpp"

namespace isospec {

using cplx = std::complex<double>;

/// Closed interval [lo, hi] with lo < hi.
class Interval {
 public:
  Interval(double lo, double hi);

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }
  [[nodiscard]] double length() const noexcept { return hi_ - lo_; }
  [[nodiscard]] bool contains(double x, double tol = 0.0) const noexcept {
    return x >= lo_ - tol && x <= hi_ + tol;
  }

 private:
  double lo_;
  double hi_;
};

/// Which one-sided limit to take at a breakpoint.
enum class Side { Left, Right };

/// Uniformly sampled complex function on one interval.
class SampledSegment {
 public:
  /// `samples.size()` must be odd and at least 3.
  SampledSegment(Interval interval, std::vector<cplx> samples);

  [[nodiscard]] const Interval& interval() const noexcept { return interval_; }
  [[nodiscard]] std::size_t count() const noexcept { return samples_.size(); }
  [[nodiscard]] double spacing() const noexcept { return spacing_; }
  [[nodiscard]] double node(std::size_t i) const noexcept;
  [[nodiscard]] std::span<const cplx> samples() const noexcept { return samples_; }

  /// Cubic interpolant; `x` is clamped into the interval.
  [[nodiscard]] cplx eval(double x) const noexcept;
  /// Integral of the interpolant from the left endpoint to `x`.
  [[nodiscard]] cplx antiderivative(double x) const noexcept;
  /// Integral of the whole segment.
  [[nodiscard]] cplx total() const noexcept { return prefix_.back(); }

 private:
  Interval interval_;
  std::vector<cplx> samples_;
  double spacing_;
  std::vector<cplx> prefix_;  // prefix_[k] = integral over [lo, node(k)]
};

/// Ordered, contiguous union of sampled segments.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;
  explicit PiecewiseFunction(std::vector<SampledSegment> segments);

  /// Samples `f(x, side)` on the segments delimited by `breakpoints`. Each
  /// segment gets an odd node count whose spacing does not exceed `spacing`.
  /// The first node of a segment is sampled with Side::Right, the last with
  /// Side::Left.
  template <typename F>
  static PiecewiseFunction sample(std::span<const double> breakpoints, double spacing, F&& f);

  /// Concatenates functions whose domains abut, in order.
  static PiecewiseFunction join(std::span<const PiecewiseFunction> parts);

  [[nodiscard]] bool empty() const noexcept { return segments_.empty(); }
  [[nodiscard]] Interval domain() const;
  [[nodiscard]] std::span<const SampledSegment> segments() const noexcept { return segments_; }
  [[nodiscard]] std::vector<double> breakpoints() const;
  [[nodiscard]] std::size_t node_count() const noexcept;

  /// Value at `x`. At an interior breakpoint the `side` limit is used.
  /// Throws DomainError outside the domain.
  [[nodiscard]] cplx eval(double x, Side side = Side::Right) const;
  [[nodiscard]] cplx operator()(double x) const { return eval(x); }

  /// Restriction to [lo, hi]; both ends must be breakpoints.
  [[nodiscard]] PiecewiseFunction restrict(double lo, double hi) const;

  /// Same grid, samples replaced by `g(x, value, side)`.
  template <typename G>
  [[nodiscard]] PiecewiseFunction map(G&& g) const;

  /// Largest sample modulus.
  [[nodiscard]] double max_abs() const noexcept;

  /// Index of the segment used for `x` under the `side` convention.
  [[nodiscard]] std::size_t locate(double x, Side side = Side::Right) const;

 private:
  std::vector<SampledSegment> segments_;
};

/// Tolerance for snapping abscissae onto breakpoints and domain ends.
[[nodiscard]] double snap_tolerance(double x) noexcept;

/// Smallest odd node count (>= 3) whose spacing on `length` is <= `spacing`.
[[nodiscard]] std::size_t nodes_for(double length, double spacing);

/// {lo} + every k*step strictly inside (lo, hi) + {hi}.
[[nodiscard]] std::vector<double> aligned_breakpoints(double step, double lo, double hi);

[[nodiscard]] cplx eval(const PiecewiseFunction& f, double x);

/// Integral of `f` over [lo, hi].
[[nodiscard]] cplx integrate(const PiecewiseFunction& f, double lo, double hi);

/// Integral of f(x)*weight(x, side) over [lo, hi]; the product is sampled at
/// the nodes of `f` and integrated with the same piecewise-cubic rule.
template <typename W>
[[nodiscard]] cplx integrate_product(const PiecewiseFunction& f, double lo, double hi, W&& weight);

/// x -> integral of `f` from `anchor` to x, on the grid of `f`.
[[nodiscard]] PiecewiseFunction cumulative(const PiecewiseFunction& f, double anchor);

/// alpha*f + beta*g on a common grid.
[[nodiscard]] PiecewiseFunction combine(cplx alpha, const PiecewiseFunction& f, cplx beta,
                                        const PiecewiseFunction& g);
[[nodiscard]] PiecewiseFunction operator+(const PiecewiseFunction& f, const PiecewiseFunction& g);
[[nodiscard]] PiecewiseFunction operator-(const PiecewiseFunction& f, const PiecewiseFunction& g);
[[nodiscard]] PiecewiseFunction operator*(cplx c, const PiecewiseFunction& f);

/// Largest node-wise |f - g| on a common grid.
[[nodiscard]] double max_abs_diff(const PiecewiseFunction& f, const PiecewiseFunction& g);

/// CSV with header `x,re,im`; breakpoint nodes appear twice (left then right).
void write_csv(std::ostream& out, const PiecewiseFunction& f);
[[nodiscard]] PiecewiseFunction read_csv(std::istream& in);

namespace detail {

/// Integral of the piecewise-cubic interpolant of uniformly spaced values
/// `y` (first node at `x0`, spacing `h`, `y.size()` >= 3) over [lo, hi].
/// `lo` and `hi` are clamped into the sampled range.
cplx integrate_samples(std::span<const cplx> y, double x0, double h, double lo, double hi) noexcept;

/// Cubic interpolant of the same samples at x.
cplx interpolate_samples(std::span<const cplx> y, double x0, double h, double x) noexcept;

/// Node index range [first, last] whose stencils cover [lo, hi].
void stencil_window(std::size_t n, double x0, double h, double lo, double hi, std::size_t& first,
                    std::size_t& last) noexcept;

}  // namespace detail

// ---------------------------------------------------------------------------

template <typename F>
PiecewiseFunction PiecewiseFunction::sample(std::span<const double> breakpoints, double spacing,
                                            F&& f) {
  if (breakpoints.size() < 2) throw PreconditionError("sample: need at least two breakpoints");
  std::vector<SampledSegment> segs;
  segs.reserve(breakpoints.size() - 1);
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    const Interval iv(breakpoints[s], breakpoints[s + 1]);
    const std::size_t n = nodes_for(iv.length(), spacing);
    const double h = iv.length() / static_cast<double>(n - 1);
    std::vector<cplx> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = k + 1 == n ? iv.hi() : iv.lo() + static_cast<double>(k) * h;
      y[k] = f(x, k + 1 == n ? Side::Left : Side::Right);
    }
    segs.emplace_back(iv, std::move(y));
  }
  return PiecewiseFunction(std::move(segs));
}

template <typename G>
PiecewiseFunction PiecewiseFunction::map(G&& g) const {
  std::vector<SampledSegment> segs;
  segs.reserve(segments_.size());
  for (const auto& seg : segments_) {
    const std::size_t n = seg.count();
    std::vector<cplx> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      y[k] = g(seg.node(k), seg.samples()[k], k + 1 == n ? Side::Left : Side::Right);
    }
    segs.emplace_back(seg.interval(), std::move(y));
  }
  return PiecewiseFunction(std::move(segs));
}

template <typename W>
cplx integrate_product(const PiecewiseFunction& f, double lo, double hi, W&& weight) {
  const Interval dom = f.domain();
  if (lo > hi + snap_tolerance(hi)) throw DomainError("integrate_product: lo > hi");
  if (!dom.contains(lo, snap_tolerance(lo)) || !dom.contains(hi, snap_tolerance(hi))) {
    throw DomainError("integrate_product: range outside domain");
  }
  if (hi <= lo) return {};
  cplx total{};
  std::vector<cplx> buf;
  for (const auto& seg : f.segments()) {
    const double a = std::max(lo, seg.interval().lo());
    const double b = std::min(hi, seg.interval().hi());
    if (b <= a) continue;
    const std::size_t n = seg.count();
    std::size_t first = 0, last = 0;
    detail::stencil_window(n, seg.interval().lo(), seg.spacing(), a, b, first, last);
    buf.resize(last - first + 1);
    for (std::size_t k = first; k <= last; ++k) {
      const Side side = k + 1 == n ? Side::Left : Side::Right;
      buf[k - first] = seg.samples()[k] * weight(seg.node(k), side);
    }
    total += detail::integrate_samples(buf, seg.node(first), seg.spacing(), a, b);
  }
  return total;
}

}  // namespace isospec
