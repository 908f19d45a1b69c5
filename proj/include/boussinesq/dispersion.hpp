// Phase function m(r) = sqrt(r^2 + beta r^4 + r^6) of the sixth-order
// Boussinesq equation, its radial derivatives, and comparability checks.
#pragma once

#include <cmath>
#include <span>
#include <string_view>

#include "boussinesq/common.hpp"

namespace boussinesq {

namespace detail {
/// Fault-injection hook for the verification suite's mutation smoke test:
/// -1 flips the sign of m everywhere. Always 1 outside that test.
inline Real phase_fault_sign = 1;
}  // namespace detail

/// Sign of the fourth-order term. beta = 0 is a 1D-only variant; operations
/// that do not support it call require_signed().
class DispersionParams {
 public:
  constexpr DispersionParams() = default;

  /// Throws DomainError unless beta is -1, 0 or 1.
  explicit DispersionParams(int beta);

  constexpr int beta() const { return beta_; }
  constexpr bool is_signed() const { return beta_ != 0; }

  /// Throws DomainError when beta == 0.
  void require_signed(std::string_view operation) const;

  friend constexpr bool operator==(DispersionParams, DispersionParams) = default;

 private:
  int beta_ = 1;
};

/// Inhomogeneous weight <r> = 1 + r.
template <typename Scalar>
constexpr Scalar bracket(Scalar r) {
  return Scalar(1) + r;
}

/// m(r) = r sqrt(1 + beta r^2 + r^4), written in factored form so that small
/// r does not lose precision.
template <typename Scalar>
Scalar phase(DispersionParams params, Scalar r) {
  using std::sqrt;
  if (!(r >= Scalar(0)) || !std::isfinite(static_cast<double>(r)))
    throw DomainError("phase: r must be finite and nonnegative");
  const Scalar r2 = r * r;
  return Scalar(detail::phase_fault_sign) * r * sqrt(Scalar(1) + Scalar(params.beta()) * r2 + r2 * r2);
}

/// Unchecked variant for inner loops over known-valid frequencies.
inline Real phase_unchecked(int beta, Real r) {
  const Real r2 = r * r;
  return detail::phase_fault_sign * r * std::sqrt(1.0 + beta * r2 + r2 * r2);
}

/// d^order m / dr^order for order in 1..6. Orders 1 and 2 are the classical
/// closed forms; 3..6 are frozen symbolic derivatives. All are written as
/// polynomial / (1 + beta r^2 + r^4)^{order - 1/2}, so r = 0 is regular
/// (m'(0) = 1).
Real phase_derivative(DispersionParams params, Real r, int order);

/// Comparability statements checked by comparability_report.
enum class ComparabilityBound {
  kPhaseVsCubicWeight,     ///< m(r) / (r <r>^2); any beta, any r > 0
  kFirstVsLinearWeight,    ///< m'(r) / <r>^2; beta = +1
  kSecondUpperPlusOne,     ///< m''(r) / r; beta = +1
  kSecondLowerPlusOne,     ///< m''(r) / (r^3 <r>^-2); beta = +1
  kFirstVsSquare,          ///< m'(r) / r^2; beta = -1, r >= 1
  kSecondVsLinear,         ///< m''(r) / r; beta = -1, r >= 1
  kThirdDerivative,        ///< |m'''(r)| / r^0; beta = -1, r >= 1
  kFourthDerivative,       ///< |m^(4)(r)| r; beta = -1, r >= 1
  kFifthDerivative,        ///< |m^(5)(r)| r^2; beta = -1, r >= 1
  kSixthDerivative,        ///< |m^(6)(r)| r^3; beta = -1, r >= 1
};

std::string_view to_string(ComparabilityBound bound);

struct RatioStats {
  Real min = 0;
  Real max = 0;
  Real argmin = 0;
  Real argmax = 0;
};

/// Ratio of the bounded quantity to its comparison weight, minimised and
/// maximised over r_grid. Throws PreconditionError on an empty grid or when
/// the grid or beta violates the regime of the bound.
RatioStats comparability_report(DispersionParams params, ComparabilityBound bound,
                                std::span<const Real> r_grid);

/// Calibrated comparability windows; a grid sweep must land inside them.
struct ComparabilityWindow {
  Real lower;
  Real upper;
};
ComparabilityWindow calibrated_window(ComparabilityBound bound);

}  // namespace boussinesq
