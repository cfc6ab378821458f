#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "isospec/delay_solver.hpp"
#include "isospec/family.hpp"
#include "isospec/fredholm.hpp"
#include "isospec/gridfn.hpp"
#include "support/oracles.hpp"

using namespace isospec;
using oracle::kA;
using oracle::kPi;

namespace {

PiecewiseFunction sampled(std::vector<double> bps, double spacing, const std::function<cplx(double)>& f) {
  return PiecewiseFunction::sample(bps, spacing, [&](double x, Side) { return f(x); });
}

PiecewiseFunction random_smooth(std::mt19937_64& rng, std::vector<double> bps) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c0 = u(rng), c1 = u(rng), c2 = u(rng), f1 = 1 + 3 * std::abs(u(rng));
  return sampled(bps, 0.01, [=](double x) { return cplx{c0 + c1 * std::sin(f1 * x), c2 * std::cos(x * x)}; });
}

}  // namespace

TEST(Interval, RejectsEmptyOrInverted) {
  EXPECT_THROW(Interval(1.0, 1.0), PreconditionError);
  EXPECT_THROW(Interval(2.0, 1.0), PreconditionError);
  EXPECT_NO_THROW(Interval(0.0, 1.0));
}

TEST(SampledSegment, RequiresOddCount) {
  EXPECT_THROW(SampledSegment(Interval(0, 1), std::vector<cplx>(4)), PreconditionError);
  EXPECT_THROW(SampledSegment(Interval(0, 1), std::vector<cplx>(1)), PreconditionError);
  SampledSegment s(Interval(0, 1), std::vector<cplx>(5));
  EXPECT_DOUBLE_EQ(s.spacing(), 0.25);
}

TEST(Eval, SineAtMidpoint) {
  const auto f = sampled({0.0, kPi}, kPi / 512, [](double x) { return std::sin(x); });
  EXPECT_NEAR(std::abs(f.eval(kPi / 2) - 1.0), 0.0, 1e-9);
}

TEST(Eval, JumpUsesRightSegmentByDefault) {
  const double a = kA;
  const auto f = PiecewiseFunction::sample(std::vector<double>{a, 2 * a, 3 * a}, 0.01,
                                           [&](double x, Side s) { return x < 2 * a || (x == 2 * a && s == Side::Left) ? 1.0 : 5.0; });
  EXPECT_EQ(f.eval(2 * a), cplx(5.0));
  EXPECT_EQ(f.eval(2 * a, Side::Left), cplx(1.0));
}

TEST(Eval, AnalyticEigenfunctionValue) {
  const auto pair = analytic_pair(kA);
  EXPECT_NEAR(std::abs(pair.e.eval(1.75 * kA) - (-1.0)), 0.0, 1e-9);
}

TEST(Eval, OutsideDomainThrows) {
  const auto f = sampled({0.0, 1.0}, 0.1, [](double) { return 1.0; });
  EXPECT_THROW((void)f.eval(1.5), DomainError);
  EXPECT_THROW((void)integrate(f, -0.5, 0.5), DomainError);
  EXPECT_THROW((void)cumulative(f, 2.0), DomainError);
}

TEST(Integrate, SineOnFullRange) {
  const auto f = sampled({0.0, kPi}, kPi / 1024, [](double x) { return std::sin(x); });
  EXPECT_NEAR(std::abs(integrate(f, 0, kPi) - 2.0), 0.0, 1e-10);
}

TEST(Integrate, EigenfunctionHasZeroMean) {
  const auto pair = analytic_pair(kA);
  EXPECT_LT(std::abs(integrate(pair.e, 1.5 * kA, 2 * kA)), 1e-10);
}

TEST(Integrate, FamilyOmegaEqualsIntegralOfH) {
  const auto pair = analytic_pair(kA);
  const auto m = build_member(pair.h, pair.eta, pair.e, 1, 1.0, kA);
  const cplx lhs = integrate(m.q, kA, kPi);
  const cplx rhs = integrate(pair.h, 2.5 * kA, 3 * kA);
  EXPECT_LT(std::abs(lhs - rhs), 1e-9);
  EXPECT_LT(std::abs(rhs - oracle::omega_h1(kA)), 1e-9 * (1 + std::abs(rhs)));
}

TEST(Cumulative, ZeroFunction) {
  const auto f = sampled({0.0, 1.0, 2.0}, 0.1, [](double) { return 0.0; });
  EXPECT_EQ(cumulative(f, 0.5).max_abs(), 0.0);
}

TEST(Cumulative, RunningIntegralOfPotential) {
  const auto m = oracle::demo_member(1, 1.0);
  const auto w = cumulative(m.q, kA);
  EXPECT_LT(std::abs(w.eval(kPi) - integrate(m.q, kA, kPi)), 1e-12);
  EXPECT_LT(std::abs(w.eval(kA)), 1e-15);
}

TEST(Cumulative, NodeDifferencesRecoverIntegrandAtSecondOrder) {
  // Central node differences of the running integral at x = 11a/4 on two grids.
  const double x = 2.75 * kA;
  double errs[2];
  for (int level = 0; level < 2; ++level) {
    GridOptions grid;
    grid.segment_nodes = level == 0 ? 129 : 257;
    const auto m = oracle::demo_member(1, 1.0, kA, grid);
    const auto w = cumulative(m.q, kA);
    const double h = 0.5 * kA / (grid.segment_nodes - 1);
    errs[level] = std::abs((w.eval(x + h) - w.eval(x - h)) / (2 * h) - m.q.eval(x));
  }
  EXPECT_GE(errs[0] / errs[1], 3.5);
}

TEST(Cumulative, KernelOfAnalyticH) {
  const auto pair = analytic_pair(kA);
  const auto k = cumulative(pair.h, 3 * kA);  // -K(x)
  for (const double s : {2.5 * kA, 2.8 * kA}) {
    const double ref = oracle::k1(kA, s);
    EXPECT_LT(std::abs(-k.eval(s) - ref), 1e-9 * (1 + pair.h.max_abs() * kA));
  }
}

TEST(GridProperties, LinearityAndAdditivity) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> bps{0.0, 0.7, 1.3, 2.0};
    const auto f = random_smooth(rng, bps), g = random_smooth(rng, bps);
    const cplx al{0.3, -1.2}, be{2.0, 0.5};
    const cplx lhs = integrate(al * f + be * g, 0.1, 1.9);
    const cplx rhs = al * integrate(f, 0.1, 1.9) + be * integrate(g, 0.1, 1.9);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1 + std::abs(rhs)));
    std::uniform_real_distribution<double> u(0.0, 2.0);
    double lo = u(rng), mid = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    mid = std::clamp(mid, lo, hi);
    const cplx whole = integrate(f, lo, hi);
    EXPECT_LE(std::abs(whole - integrate(f, lo, mid) - integrate(f, mid, hi)), 1e-12 * (1 + std::abs(whole)));
  }
}

TEST(GridProperties, FourthOrderConvergence) {
  const double exact = (std::exp(kPi) + 1.0) * 0.1;  // integral of e^x cos 3x over [0, pi] is -(e^pi + 1)/10
  double prev = 0.0;
  for (int n = 8; n <= 128; n *= 2) {
    const auto f = sampled({0.0, kPi}, kPi / n, [](double x) { return std::exp(x) * std::cos(3 * x); });
    const double err = std::abs(integrate(f, 0, kPi) + exact);
    if (prev > 0 && prev > 1e-11) {
      EXPECT_GE(prev / err, 8.0) << "n=" << n;
    }
    prev = err;
  }
}

TEST(Restrict, KeepsSamples) {
  const auto f = sampled({0.0, 1.0, 2.0, 3.0}, 0.05, [](double x) { return x * x; });
  const auto g = f.restrict(1.0, 2.0);
  EXPECT_EQ(g.domain().lo(), 1.0);
  EXPECT_EQ(g.domain().hi(), 2.0);
  EXPECT_EQ(g.eval(1.5), f.eval(1.5));
  EXPECT_THROW((void)f.restrict(0.5, 2.0), DomainError);
}

TEST(Csv, RoundTripIsExact) {
  const auto m = oracle::demo_member(1, cplx{2, 3});
  std::stringstream s;
  write_csv(s, m.q);
  const auto back = read_csv(s);
  EXPECT_EQ(back.segments().size(), m.q.segments().size());
  EXPECT_EQ(max_abs_diff(back, m.q), 0.0);
}

TEST(Csv, RejectsMalformedInput) {
  std::stringstream s("x,re,im\n0,1\n");
  EXPECT_THROW((void)read_csv(s), Error);
}
