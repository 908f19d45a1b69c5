#include "boussinesq/dispersion.hpp"

#include <array>
#include <limits>
#include <string>

namespace boussinesq {

DispersionParams::DispersionParams(int beta) : beta_(beta) {
  if (beta < -1 || beta > 1) throw DomainError("beta must be -1, 0, or 1");
}

void DispersionParams::require_signed(std::string_view operation) const {
  if (beta_ == 0)
    throw DomainError(std::string(operation) + ": beta = 0 is only supported by the 1D uniform-decay variant");
}

namespace {

// Evaluates sum_k c[k] r^k.
template <std::size_t N>
Real horner(const std::array<Real, N>& c, Real r) {
  Real acc = 0;
  for (std::size_t k = N; k-- > 0;) acc = acc * r + c[k];
  return acc;
}

// Numerators of d^j m / dr^j * Q^{j - 1/2}, Q = 1 + b r^2 + r^4, in
// ascending powers of r. Generated once with a computer algebra system.
Real derivative_numerator(Real b, Real r, int order) {
  const Real b2 = b * b, b3 = b2 * b, b4 = b2 * b2;
  switch (order) {
    case 1:
      return horner(std::array<Real, 5>{1, 0, 2 * b, 0, 3}, r);
    case 2:
      return horner(std::array<Real, 8>{0, 3 * b, 0, 2 * b2 + 10, 0, 9 * b, 0, 6}, r);
    case 3:
      return horner(std::array<Real, 11>{3 * b, 0, 30, 0, 30 * b, 0, 12 * b2 + 12, 0, 15 * b, 0, 6}, r);
    case 4:
      return horner(std::array<Real, 10>{0, 60 - 15 * b2, 0, 0, 0, 42 * b2 - 168, 0, 12 * b3 - 48 * b, 0,
                                         12 - 3 * b2},
                    r);
    case 5:
      return horner(std::array<Real, 13>{60 - 15 * b2, 0, 90 * b3 - 360 * b, 0, 405 * b2 - 1620, 0, 0, 0,
                                         1620 - 405 * b2, 0, -90 * b3 + 360 * b, 0, 15 * b2 - 60},
                    r);
    case 6:
      return horner(std::array<Real, 16>{0, 315 * b3 - 1260 * b, 0, -630 * b4 + 4410 * b2 - 7560, 0,
                                         -3465 * b3 + 13860 * b, 0, 35640 - 8910 * b2, 0,
                                         -495 * b3 + 1980 * b, 0, -90 * b4 + 4590 * b2 - 16920, 0,
                                         765 * b3 - 3060 * b, 0, 360 - 90 * b2},
                    r);
    default:
      throw DomainError("phase_derivative: order must be in 1..6");
  }
}

}  // namespace

Real phase_derivative(DispersionParams params, Real r, int order) {
  if (order < 1 || order > 6) throw DomainError("phase_derivative: order must be in 1..6");
  if (!(r >= 0) || !std::isfinite(r)) throw DomainError("phase_derivative: r must be finite and nonnegative");
  const Real b = params.beta();
  const Real r2 = r * r;
  const Real q = 1.0 + b * r2 + r2 * r2;
  return derivative_numerator(b, r, order) / std::pow(q, order - 0.5);
}

std::string_view to_string(ComparabilityBound bound) {
  switch (bound) {
    case ComparabilityBound::kPhaseVsCubicWeight: return "m/(r<r>^2)";
    case ComparabilityBound::kFirstVsLinearWeight: return "m'/<r>^2";
    case ComparabilityBound::kSecondUpperPlusOne: return "m''/r (beta=+1)";
    case ComparabilityBound::kSecondLowerPlusOne: return "m''/(r^3<r>^-2)";
    case ComparabilityBound::kFirstVsSquare: return "m'/r^2";
    case ComparabilityBound::kSecondVsLinear: return "m''/r (beta=-1)";
    case ComparabilityBound::kThirdDerivative: return "|m'''|";
    case ComparabilityBound::kFourthDerivative: return "|m''''| r";
    case ComparabilityBound::kFifthDerivative: return "|m^(5)| r^2";
    case ComparabilityBound::kSixthDerivative: return "|m^(6)| r^3";
  }
  return "unknown";
}

namespace {

struct BoundRegime {
  int beta;          // required beta, 0 = any signed beta
  Real min_r;        // grid lower limit (exclusive of 0 when 0)
};

BoundRegime regime(ComparabilityBound bound) {
  switch (bound) {
    case ComparabilityBound::kPhaseVsCubicWeight: return {0, 0};
    case ComparabilityBound::kFirstVsLinearWeight:
    case ComparabilityBound::kSecondUpperPlusOne:
    case ComparabilityBound::kSecondLowerPlusOne: return {1, 0};
    default: return {-1, 1};
  }
}

Real bound_ratio(DispersionParams p, ComparabilityBound bound, Real r) {
  const Real w = bracket(r);
  switch (bound) {
    case ComparabilityBound::kPhaseVsCubicWeight: return phase(p, r) / (r * w * w);
    case ComparabilityBound::kFirstVsLinearWeight: return phase_derivative(p, r, 1) / (w * w);
    case ComparabilityBound::kSecondUpperPlusOne: return phase_derivative(p, r, 2) / r;
    case ComparabilityBound::kSecondLowerPlusOne: return phase_derivative(p, r, 2) * w * w / (r * r * r);
    case ComparabilityBound::kFirstVsSquare: return phase_derivative(p, r, 1) / (r * r);
    case ComparabilityBound::kSecondVsLinear: return phase_derivative(p, r, 2) / r;
    case ComparabilityBound::kThirdDerivative: return std::abs(phase_derivative(p, r, 3));
    case ComparabilityBound::kFourthDerivative: return std::abs(phase_derivative(p, r, 4)) * r;
    case ComparabilityBound::kFifthDerivative: return std::abs(phase_derivative(p, r, 5)) * r * r;
    case ComparabilityBound::kSixthDerivative: return std::abs(phase_derivative(p, r, 6)) * r * r * r;
  }
  return 0;
}

}  // namespace

RatioStats comparability_report(DispersionParams params, ComparabilityBound bound,
                                std::span<const Real> r_grid) {
  if (r_grid.empty()) throw PreconditionError("comparability_report: empty grid");
  params.require_signed("comparability_report");
  const BoundRegime reg = regime(bound);
  if (reg.beta != 0 && params.beta() != reg.beta)
    throw PreconditionError("comparability_report: bound " + std::string(to_string(bound)) +
                            " requires beta = " + std::to_string(reg.beta));
  RatioStats stats{std::numeric_limits<Real>::infinity(), -std::numeric_limits<Real>::infinity(), 0, 0};
  for (Real r : r_grid) {
    if (!(r > 0) || r < reg.min_r)
      throw PreconditionError("comparability_report: grid point " + std::to_string(r) +
                              " outside the regime of " + std::string(to_string(bound)));
    const Real v = bound_ratio(params, bound, r);
    if (v < stats.min) stats.min = v, stats.argmin = r;
    if (v > stats.max) stats.max = v, stats.argmax = r;
  }
  return stats;
}

ComparabilityWindow calibrated_window(ComparabilityBound bound) {
  // Dense sweeps (2e5 log-spaced points on [1e-3, 1e3], or [1, 1e3] for
  // beta = -1) with a small margin on each side.
  constexpr Real inf = std::numeric_limits<Real>::infinity();
  switch (bound) {
    case ComparabilityBound::kPhaseVsCubicWeight: return {0.2, 1.0};
    case ComparabilityBound::kFirstVsLinearWeight: return {0.6, 3.0};
    case ComparabilityBound::kSecondUpperPlusOne: return {2.9, 6.1};
    case ComparabilityBound::kSecondLowerPlusOne: return {5.9, inf};
    case ComparabilityBound::kFirstVsSquare: return {1.9, 3.1};
    case ComparabilityBound::kSecondVsLinear: return {5.9, 6.5};
    case ComparabilityBound::kThirdDerivative: return {0, 12.1};
    case ComparabilityBound::kFourthDerivative: return {0, 36.5};
    case ComparabilityBound::kFifthDerivative: return {0, 177.5};
    case ComparabilityBound::kSixthDerivative: return {0, 2160.5};
  }
  return {0, inf};
}

}  // namespace boussinesq
