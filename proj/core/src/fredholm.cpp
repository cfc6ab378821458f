#include "isospec/fredholm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "isospec/quadrature.hpp"

namespace isospec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDropRatio = 1e-10;
constexpr int kApplyNodes = 24;

void check_a(double a, const char* who) {
  if (!(a > 0.0) || !(a < kPi / 3.0)) {
    throw PreconditionError(std::string(who) + ": a must lie in (0, pi/3)");
  }
}

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix to_matrix(const NystromMatrix& m) {
  return Eigen::Map<const Matrix>(m.entries.data(), static_cast<Eigen::Index>(m.n),
                                  static_cast<Eigen::Index>(m.n));
}

// Projected discretization: G_mn = double integral of phi_m(x) K(x + t - a/2) phi_n(t)
// over the triangle t <= 7a/2 - x, then A = Q G Q^T with Q_ik = sqrt(w_i) phi_k(x_i).
Matrix projected_matrix(const FredholmOperator& op, const GaussRule& rule) {
  const double a = op.a();
  const double lo = 1.5 * a, hi = 2.0 * a;
  const std::size_t n = rule.nodes.size();
  const std::size_t nq = n + 32;
  const GaussRule outer = gauss_legendre(static_cast<int>(nq), lo, hi);
  const GaussRule unit = gauss_legendre(static_cast<int>(nq));

  Matrix phi_x(nq, n);  // phi_k at the outer nodes
  Matrix inner(nq, n);  // sum over inner nodes of v K phi_k(t)
  std::vector<double> basis(n);
  for (std::size_t i = 0; i < nq; ++i) {
    const double x = outer.nodes[i];
    legendre_basis(x, lo, hi, basis);
    for (std::size_t k = 0; k < n; ++k) phi_x(i, k) = basis[k];
    const double upper = std::min(hi, 3.5 * a - x);
    const double mid = 0.5 * (lo + upper), half = 0.5 * (upper - lo);
    for (std::size_t k = 0; k < n; ++k) inner(i, k) = 0.0;
    for (std::size_t l = 0; l < nq; ++l) {
      const double t = mid + half * unit.nodes[l];
      const double wk = half * unit.weights[l] * op.kernel_at(x + t - 0.5 * a);
      legendre_basis(t, lo, hi, basis);
      for (std::size_t k = 0; k < n; ++k) inner(i, k) += wk * basis[k];
    }
  }
  Eigen::VectorXd wout(nq);
  for (std::size_t i = 0; i < nq; ++i) wout[i] = outer.weights[i];
  Matrix g = phi_x.transpose() * wout.asDiagonal() * inner;
  g = 0.5 * (g + g.transpose()).eval();

  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    legendre_basis(rule.nodes[i], lo, hi, basis);
    const double sw = std::sqrt(rule.weights[i]);
    for (std::size_t k = 0; k < n; ++k) q(i, k) = sw * basis[k];
  }
  return q * g * q.transpose();
}

struct Decomposition {
  NystromMatrix matrix;
  Eigen::VectorXd values;
  Matrix vectors;
  std::vector<Eigen::Index> order;  // selected indices, sorted
};

Decomposition decompose(const FredholmOperator& op, std::size_t n, NystromRule rule) {
  Decomposition d{nystrom(op, n, rule), {}, {}, {}};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(to_matrix(d.matrix));
  d.values = solver.eigenvalues();
  d.vectors = solver.eigenvectors();
  const double top = d.values.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < d.values.size(); ++i) {
    if (top > 0.0 && std::abs(d.values[i]) >= kDropRatio * top) d.order.push_back(i);
  }
  std::sort(d.order.begin(), d.order.end(), [&](Eigen::Index u, Eigen::Index v) {
    const double au = std::abs(d.values[u]), av = std::abs(d.values[v]);
    if (std::abs(au - av) > 1e-9 * std::max(au, av)) return au > av;
    return d.values[u] < d.values[v];
  });
  return d;
}

}  // namespace

FredholmOperator::FredholmOperator(double a, const PiecewiseFunction& h) : a_(a) {
  check_a(a, "FredholmOperator");
  const Interval dom = h.domain();
  if (dom.lo() > 2.5 * a + snap_tolerance(a) || dom.hi() < 3.0 * a - snap_tolerance(a)) {
    throw PreconditionError("FredholmOperator: h must cover [5a/2, 3a]");
  }
  h_ = (dom.lo() < 2.5 * a - snap_tolerance(a) || dom.hi() > 3.0 * a + snap_tolerance(a))
           ? h.restrict(2.5 * a, 3.0 * a)
           : h;
  double max_re = 0.0, max_im = 0.0;
  for (const auto& seg : h_.segments()) {
    for (const cplx v : seg.samples()) {
      max_re = std::max(max_re, std::abs(v.real()));
      max_im = std::max(max_im, std::abs(v.imag()));
    }
  }
  if (max_im > 1e-12 * (1.0 + max_re)) throw PreconditionError("FredholmOperator: h must be real-valued");
  zero_ = max_re == 0.0;
}

double FredholmOperator::kernel_at(double s) const {
  const double hi = 3.0 * a_;
  if (s >= hi) return 0.0;
  return integrate(h_, std::max(s, 2.5 * a_), hi).real();
}

PiecewiseFunction FredholmOperator::apply(const PiecewiseFunction& f) const {
  const Interval dom = f.domain();
  const double lo = 1.5 * a_, hi = 2.0 * a_;
  if (std::abs(dom.lo() - lo) > snap_tolerance(lo) || std::abs(dom.hi() - hi) > snap_tolerance(hi)) {
    throw DomainError("FredholmOperator::apply: f must live on [3a/2, 2a]");
  }
  static const GaussRule unit = gauss_legendre(kApplyNodes);
  const auto fb = f.breakpoints();
  return f.map([&](double x, cplx, Side) -> cplx {
    const double upper = std::min(hi, 3.5 * a_ - x);
    auto extra = lattice_points(0.0625 * a_, lo, lo, upper);
    extra.insert(extra.end(), fb.begin(), fb.end());
    const auto pieces = make_cuts(lo, upper, std::move(extra));
    return gauss_composite(pieces, unit, [&](double t) { return kernel_at(x + t - 0.5 * a_) * f.eval(t); });
  });
}

NystromMatrix nystrom(const FredholmOperator& op, std::size_t n, NystromRule rule) {
  if (n < 16) throw PreconditionError("nystrom: n must be at least 16");
  const double a = op.a();
  const GaussRule gl = gauss_legendre(static_cast<int>(n), 1.5 * a, 2.0 * a);
  NystromMatrix out;
  out.nodes = gl.nodes;
  out.weights = gl.weights;
  out.n = n;
  out.rule = rule;
  out.entries.assign(n * n, 0.0);
  if (op.is_zero()) return out;

  if (rule == NystromRule::Pointwise) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i; k < n; ++k) {
        const double v = std::sqrt(gl.weights[i]) * op.kernel_at(gl.nodes[i] + gl.nodes[k] - 0.5 * a) *
                         std::sqrt(gl.weights[k]);
        out.entries[i * n + k] = v;
        out.entries[k * n + i] = v;
      }
    }
    return out;
  }
  const Matrix m = projected_matrix(op, gl);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      const double v = 0.5 * (m(i, k) + m(k, i));
      out.entries[i * n + k] = v;
      out.entries[k * n + i] = v;
    }
  }
  return out;
}

std::vector<double> nystrom_eigenvalues(const FredholmOperator& op, std::size_t n, NystromRule rule) {
  const Decomposition d = decompose(op, n, rule);
  std::vector<double> out;
  out.reserve(d.order.size());
  for (const auto i : d.order) out.push_back(d.values[i]);
  return out;
}

std::vector<EigenPair> eigenpairs(const FredholmOperator& op, std::size_t n, const EigenOptions& options) {
  if (op.is_zero()) throw NoEigenvalueError("eigenpairs: h vanishes identically");
  const Decomposition d = decompose(op, n, options.rule);
  if (d.order.empty()) throw NoEigenvalueError("eigenpairs: no nonzero eigenvalue");

  const double a = op.a();
  const double lo = 1.5 * a, hi = 2.0 * a;
  const std::vector<double> bps{lo, hi};
  const double spacing = (hi - lo) / static_cast<double>(std::max(options.segment_nodes, 3) - 1);
  const auto& mat = d.matrix;

  std::vector<EigenPair> out;
  std::vector<double> basis(n);
  for (const auto idx : d.order) {
    if (out.size() >= options.max_pairs) break;
    const double eta = d.values[idx];
    const Eigen::VectorXd v = d.vectors.col(idx);
    PiecewiseFunction e;
    if (options.rule == NystromRule::Projected) {
      // Legendre coefficients c = Q^T v.
      Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        legendre_basis(mat.nodes[i], lo, hi, basis);
        const double sw = std::sqrt(mat.weights[i]) * v[static_cast<Eigen::Index>(i)];
        for (std::size_t k = 0; k < n; ++k) c[static_cast<Eigen::Index>(k)] += sw * basis[k];
      }
      e = PiecewiseFunction::sample(bps, spacing, [&](double x, Side) -> cplx {
        legendre_basis(x, lo, hi, basis);
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += c[static_cast<Eigen::Index>(k)] * basis[k];
        return s;
      });
    } else {
      e = PiecewiseFunction::sample(bps, spacing, [&](double x, Side) -> cplx {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          s += std::sqrt(mat.weights[k]) * op.kernel_at(x + mat.nodes[k] - 0.5 * a) *
               v[static_cast<Eigen::Index>(k)];
        }
        return s / eta;
      });
    }
    const double scale = e.max_abs();
    const double sign = e.segments().front().samples().front().real() < 0.0 ? -1.0 : 1.0;
    e = cplx{sign / scale} * e;
    const PiecewiseFunction me = op.apply(e);
    const double residual = max_abs_diff(me, cplx{eta} * e);
    out.push_back({eta, std::move(e), residual});
  }
  return out;
}

AnalyticPair analytic_pair(double a, const GridOptions& grid) {
  check_a(a, "analytic_pair");
  const double c = 6.0 * kPi * kPi / (a * a);
  const double k = kPi * std::sqrt(10.0);
  const double spacing = grid.spacing(a);
  const std::vector<double> hb{2.5 * a, 3.0 * a};
  const std::vector<double> eb{1.5 * a, 2.0 * a};
  auto h = PiecewiseFunction::sample(hb, spacing, [&](double x, Side) -> cplx {
    return c * std::cos(k * (3.0 - x / a));
  });
  auto e = PiecewiseFunction::sample(eb, spacing, [&](double x, Side) -> cplx {
    return std::cos(4.0 * kPi * x / a) - std::cos(2.0 * kPi * x / a);
  });
  return {std::move(h), std::move(e), -1.0};
}

bool zero_mean(const PiecewiseFunction& e, double tol) {
  const Interval dom = e.domain();
  const double mean = std::abs(integrate(e, dom.lo(), dom.hi()));
  return mean <= tol * e.max_abs() * dom.length();
}

}  // namespace isospec
