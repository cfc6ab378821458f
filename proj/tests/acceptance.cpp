// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "isospec/charfn.hpp"
#include "isospec/delay_solver.hpp"
#include "isospec/family.hpp"
#include "isospec/fredholm.hpp"
#include "isospec/spectrum.hpp"
#include "support/oracles.hpp"

using namespace isospec;
using oracle::kA;
using oracle::kPi;

namespace {

struct Outcome {
  bool pass;
  std::string metrics;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::vector<cplx> lambda_grid() {
  std::vector<cplx> out;
  for (int k = 0; k < 60; ++k) out.emplace_back(-20.0 + 420.0 * k / 59.0, 0.0);
  for (int k = 0; k < 5; ++k) {
    out.emplace_back(-20.0 + 105.0 * k, 5.0);
    out.emplace_back(-20.0 + 105.0 * k, -5.0);
  }
  return out;
}

PiecewiseFunction zero_potential() {
  return PiecewiseFunction::sample(standard_breakpoints(kA), 0.01, [](double, Side) { return cplx{}; });
}

CharFn closed_fn(const PiecewiseFunction& q, int nu, int j) {
  return ClosedCharacteristic(build_w(q, DelaySetup::make(kA, nu), j));
}

Outcome eigenpair() {
  const auto p = analytic_pair(kA);
  const FredholmOperator op(kA, p.h);
  const double apply_gap = max_abs_diff(op.apply(p.e), -1.0 * p.e);

  // Matrix acting on sqrt(w_i) e(x_i); dividing by sqrt(w_i) returns point values.
  const auto m = nystrom(op, 256);
  double matrix_gap = 0.0;
  for (std::size_t i = 0; i < m.n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m.n; ++k) acc += m.at(i, k) * std::sqrt(m.weights[k]) * oracle::e1(kA, m.nodes[k]);
    matrix_gap = std::max(matrix_gap, std::abs(acc / std::sqrt(m.weights[i]) + oracle::e1(kA, m.nodes[i])));
  }
  double eta_gap = INFINITY;
  for (const double eta : nystrom_eigenvalues(op, 256)) eta_gap = std::min(eta_gap, std::abs(eta + 1.0));
  const double mean = std::abs(integrate(p.e, 1.5 * kA, 2 * kA));
  const bool ok = apply_gap <= 1e-6 && matrix_gap <= 1e-6 && eta_gap <= 1e-6 && mean <= 1e-10;
  return {ok, "quadrature=" + fmt("%.2e", apply_gap) + " nystrom=" + fmt("%.2e", matrix_gap) +
                  " |eta+1|=" + fmt("%.2e", eta_gap) + " (tol 1e-06); |mean|=" + fmt("%.2e", mean) + " (tol 1e-10)"};
}

Outcome closed_forms() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = 1e-4;
  auto fd = [h](auto&& f, double x) { return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h); };
  auto near_cut = [h](double x) {
    const double r = x / (0.5 * kA);
    return std::abs(r - std::round(r)) * 0.5 * kA < 4 * h || x > kPi - 4 * h;
  };
  double series_err = 0.0, fd_err = 0.0;
  for (int nu = 0; nu <= 1; ++nu) {
    const auto m = oracle::demo_member(nu, cplx{2, 3});
    const ClosedForms cf(m.q, m.setup());
    for (int k = 0; k < 20; ++k) {
      cplx l;
      do l = {-400.0 + 800.0 * unit(rng), -400.0 + 800.0 * unit(rng)};
      while (std::abs(l) > 400.0);
      double x1, x2;
      do x1 = kA + (kPi - kA) * unit(rng);
      while (near_cut(x1));
      do x2 = 2 * kA + (kPi - 2 * kA) * unit(rng);
      while (near_cut(x2));
      const auto terms = series_terms(m.q, m.setup(), 2, l);
      const double s1 = terms[1].y.max_abs(), s1p = terms[1].yprime.max_abs();
      const double s2 = terms[2].y.max_abs(), s2p = terms[2].yprime.max_abs();
      series_err = std::max({series_err, std::abs(cf.y1(l, x1) - terms[1].y.eval(x1)) / s1,
                             std::abs(cf.y1_prime(l, x1) - terms[1].yprime.eval(x1)) / s1p,
                             std::abs(cf.y2(l, x2) - terms[2].y.eval(x2)) / s2,
                             std::abs(cf.y2_prime(l, x2) - terms[2].yprime.eval(x2)) / s2p});
      fd_err = std::max({fd_err, std::abs(fd([&](double x) { return cf.y1(l, x); }, x1) - cf.y1_prime(l, x1)) / s1p,
                         std::abs(fd([&](double x) { return cf.y2(l, x); }, x2) - cf.y2_prime(l, x2)) / s2p});
    }
  }
  return {series_err <= 1e-7 && fd_err <= 1e-7,
          "series=" + fmt("%.2e", series_err) + " fd=" + fmt("%.2e", fd_err) + " (tol 1e-07)"};
}

Outcome cross_validation() {
  double worst = 0.0, omega_gap = 0.0;
  for (int nu = 0; nu <= 1; ++nu) {
    for (const cplx alpha : oracle::demo_alphas()) {
      const auto m = oracle::demo_member(nu, alpha);
      for (int j = 0; j <= 1; ++j) {
        const CharData data = build_w(m.q, m.setup(), j);
        if (nu == 0) omega_gap = std::max(omega_gap, std::abs(data.omega - integrate(data.w, kA, 3 * kA)));
        const ClosedCharacteristic closed(data);
        const DirectCharacteristic direct(m.q, m.setup(), j);
        for (const cplx l : lambda_grid()) {
          const cplx c = closed(l);
          worst = std::max(worst, std::abs(c - direct(l)) / (1.0 + std::abs(c)));
        }
      }
    }
  }
  return {worst <= 1e-6 && omega_gap <= 1e-9,
          "closed_vs_direct=" + fmt("%.2e", worst) + " (tol 1e-06); omega_gap=" + fmt("%.2e", omega_gap) +
              " (tol 1e-09)"};
}

Outcome w_invariance() {
  double worst = 0.0;
  for (int nu = 0; nu <= 1; ++nu) {
    const auto w0 = w_of_member(oracle::demo_member(nu, 0.0));
    for (const cplx alpha : oracle::demo_alphas()) {
      worst = std::max(worst, max_abs_diff(w_of_member(oracle::demo_member(nu, alpha)), w0));
    }
  }
  return {worst <= 1e-8, "max|w_alpha - w_0|=" + fmt("%.2e", worst) + " (tol 1e-08)"};
}

Outcome isospectral(int nu) {
  double across = 0.0, methods = 0.0;
  int min_count = 1 << 30, max_count = 0;
  for (int j = 0; j <= 1; ++j) {
    std::vector<Spectrum> spectra;
    for (const cplx alpha : oracle::demo_alphas()) {
      const auto m = oracle::demo_member(nu, alpha);
      spectra.push_back(compute_spectrum(closed_fn(m.q, nu, j), nu, j, 20));
      min_count = std::min(min_count, spectra.back().certified_count);
      max_count = std::max(max_count, spectra.back().certified_count);
      across = std::max(across, compare(spectra.front(), spectra.back()));
    }
    // Same spectrum from the method-of-steps characteristic function.
    const auto m = oracle::demo_member(nu, cplx{2, 3});
    const CharFn direct = DirectCharacteristic(m.q, m.setup(), j);
    methods = std::max(methods, compare(spectra.back(), compute_spectrum(direct, nu, j, 20)));
  }
  const bool ok = across <= 1e-6 && methods <= 1e-6 && min_count == 20 && max_count == 20;
  return {ok, "max_rel_diff=" + fmt("%.2e", across) + " closed_vs_direct=" + fmt("%.2e", methods) +
                  " (tol 1e-06); certified=" + std::to_string(min_count) + ".." + std::to_string(max_count) +
                  " (need 20)"};
}

Outcome negative_control() {
  const auto p = analytic_pair(kA);
  const auto e = p.e.map([](double, cplx v, Side) { return v + 0.5; });
  const auto m0 = build_member(p.h, p.eta, e, 1, 0.0, kA);
  const auto m1 = build_member(p.h, p.eta, e, 1, 1.0, kA);
  const double omega_shift = std::abs(omega_of_member(m1) - omega_of_member(m0));
  double spectrum_shift = 0.0;
  for (int j = 0; j <= 1; ++j) {
    spectrum_shift = std::max(spectrum_shift, compare(compute_spectrum(closed_fn(m0.q, 1, j), 1, j, 20),
                                                      compute_spectrum(closed_fn(m1.q, 1, j), 1, j, 20)));
  }
  return {omega_shift > 1e-3 && spectrum_shift > 1e-4,
          "omega_shift=" + fmt("%.3e", omega_shift) + " (need >1e-03) spectrum_shift=" + fmt("%.3e", spectrum_shift) +
              " (need >1e-04)"};
}

Outcome classical_baseline() {
  const auto q = zero_potential();
  double worst = 0.0;
  bool counts = true;
  for (int nu = 0; nu <= 1; ++nu) {
    for (int j = 0; j <= 1; ++j) {
      const auto s = compute_spectrum(closed_fn(q, nu, j), nu, j, 20);
      counts = counts && s.entries.size() == 20 && s.certified_count == 20;
      for (std::size_t k = 0; k < s.entries.size(); ++k) {
        const double n = static_cast<double>(k + 1);
        const double exact = nu != j ? (n - 0.5) * (n - 0.5) : (nu == 1 ? (n - 1) * (n - 1) : n * n);
        worst = std::max(worst, std::abs(s.entries[k].lambda - exact));
      }
    }
  }
  return {counts && worst <= 1e-10, "max|lambda_n - exact|=" + fmt("%.2e", worst) + " (tol 1e-10)" +
                                        (counts ? "" : " count mismatch")};
}

Outcome hygiene() {
  // Fourth-order rule: integral of cos(pi x / a) over [3a/2, 7a/4] on 65 and 129 nodes.
  auto quad_err = [](std::size_t nodes) {
    const double lo = 1.5 * kA, hi = 1.75 * kA;
    const std::vector<double> cuts{lo, hi};
    const auto f = PiecewiseFunction::sample(cuts, (hi - lo) / static_cast<double>(nodes - 1),
                                             [](double x, Side) { return cplx{std::cos(kPi * x / kA)}; });
    const double exact = kA / kPi * (std::sin(kPi * hi / kA) - std::sin(kPi * lo / kA));
    return std::abs(integrate(f, lo, hi) - exact);
  };
  const double order = std::log2(quad_err(65) / quad_err(129));

  GridOptions fine;
  fine.segment_nodes = 4097;
  const FredholmOperator op(kA, analytic_pair(kA, fine).h);
  auto gap = [&](std::size_t n) {
    double best = INFINITY;
    for (const double eta : nystrom_eigenvalues(op, n)) best = std::min(best, std::abs(eta + 1.0));
    return best;
  };
  const double g64 = gap(64), g128 = gap(128);
  const bool nystrom_ok = g128 <= 1e-10 || g64 / g128 >= 10.0;

  double jump = 0.0;
  for (int nu = 0; nu <= 1; ++nu) {
    const auto m = oracle::demo_member(nu, 1.0);
    for (int j = 0; j <= 1; ++j) {
      const ClosedCharacteristic f(build_w(m.q, m.setup(), j));
      const double big = 1e-3, eps = 1e-6;
      const cplx slope = (f(big) - f(-big)) / (2 * big), f0 = f(0.0);
      for (const cplx s : {cplx{eps}, cplx{-eps}, cplx{0.0, eps}, cplx{0.0, -eps}}) {
        jump = std::max(jump, std::abs(f(s) - f0 - s * slope));
      }
    }
  }
  return {order >= 3.5 && nystrom_ok && jump <= 1e-8,
          "quad_order=" + fmt("%.2f", order) + " (need >=3.5) nystrom |eta+1| 64->128: " + fmt("%.2e", g64) + "->" +
              fmt("%.2e", g128) + " (need x10 or <=1e-10) continuity=" + fmt("%.2e", jump) + " (tol 1e-08)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"eigenpair", eigenpair},
      {"closed_forms", closed_forms},
      {"characteristic_cross_validation", cross_validation},
      {"effective_potential_invariance", w_invariance},
      {"isospectral_nu0", [] { return isospectral(0); }},
      {"isospectral_nu1", [] { return isospectral(1); }},
      {"negative_control", negative_control},
      {"classical_baseline", classical_baseline},
      {"numerics_hygiene", hygiene},
  };
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %zu %s %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name, o.metrics.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures, criteria.size(), secs);
  return failures == 0 ? 0 : 1;
}
