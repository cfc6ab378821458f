#pragma once

// Characteristic functions Delta_{nu,j}(lambda) of the boundary value problems
// y^(nu)(0) = y^(j)(pi) = 0 for  -y'' + q(x) y(x - a) = lambda y,  a < pi/3.
// Their zeros, with multiplicity, are the eigenvalues.

#include <vector>

#include "isospec/delay_solver.hpp"

namespace isospec {

/// Everything Delta_{nu,j} depends on: the effective potential w on (a, 3a)
/// and the total integral omega of q over (a, pi).
struct CharData {
  DelaySetup setup;
  int j = 0;
  cplx omega;
  PiecewiseFunction w;
};

/// Quadratic correction Q_nu(x), x in [3a/2, 5a/2]:
///   (W(3a) - W(x + a/2)) W(x - a/2)
///     - (-1)^nu * integral_a^{7a/2 - x} q(t) (W(3a) - W(x + t - a/2)) dt,
/// where W(x) = integral of q over [a, x]. Requires q = 0 on (3a, pi).
[[nodiscard]] cplx q_correction(const PiecewiseFunction& q, const DelaySetup& setup, double x);

/// w = q + Q_nu on (3a/2, 5a/2), w = q elsewhere on (a, 3a); omega = integral of q over (a, pi).
/// Requires a < pi/3 and q = 0 on (0, a) and on (3a, pi).
[[nodiscard]] CharData build_w(const PiecewiseFunction& q, const DelaySetup& setup, int j,
                               const GridOptions& grid = {});

enum class DeltaForm {
  Stable,   // cancellation-free near lambda = 0
  Literal,  // direct transcription with explicit 1/lambda (nu = j = 0 only differs)
};

/// Delta_{nu,j}(lambda) from the effective potential.
[[nodiscard]] cplx delta_closed(const CharData& data, cplx lambda, DeltaForm form = DeltaForm::Stable);

/// Delta_{nu,j}(lambda) = y_{1-nu}^{(j)}(pi) from the method of steps.
[[nodiscard]] cplx delta_direct(const PiecewiseFunction& q, const DelaySetup& setup, int j, cplx lambda,
                                int steps_per_a = 0);

/// A characteristic function that can be evaluated repeatedly.
class CharacteristicFunction {
 public:
  virtual ~CharacteristicFunction() = default;
  [[nodiscard]] virtual cplx operator()(cplx lambda) const = 0;
};

/// delta_closed bound to fixed data; precomputes the w samples on Gauss nodes.
class ClosedCharacteristic final : public CharacteristicFunction {
 public:
  explicit ClosedCharacteristic(CharData data, DeltaForm form = DeltaForm::Stable);
  [[nodiscard]] cplx operator()(cplx lambda) const override;
  [[nodiscard]] const CharData& data() const noexcept { return data_; }

 private:
  CharData data_;
  DeltaForm form_;
  std::vector<double> nodes_;
  std::vector<cplx> weighted_w_;  // quadrature weight times w at each node
};

/// delta_direct bound to a fixed potential; the solver caches q at stage points.
class DirectCharacteristic final : public CharacteristicFunction {
 public:
  DirectCharacteristic(const PiecewiseFunction& q, const DelaySetup& setup, int j, int steps_per_a = 0);
  [[nodiscard]] cplx operator()(cplx lambda) const override;

 private:
  DirectSolver solver_;
  int j_;
};

/// Delta from the successive-approximation series (valid for any a in (0, pi)).
[[nodiscard]] cplx delta_series(const PiecewiseFunction& q, const DelaySetup& setup, int j, cplx lambda,
                                const GridOptions& grid = {});

}  // namespace isospec
