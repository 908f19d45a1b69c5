// Littlewood-Paley machinery: the smooth cutoff chi, the annular bump
// rho(s) = chi(s) - chi(2s), dyadic projections and Bernstein ratios.
#pragma once

#include <cmath>
#include <vector>

#include "boussinesq/grid.hpp"

namespace boussinesq {

/// chi(s) = 1 on |s| <= 1, 0 on |s| >= 2, and
/// psi(2-|s|) / (psi(2-|s|) + psi(|s|-1)), psi(x) = exp(-1/x), in between.
template <typename Scalar>
Scalar cutoff_chi(Scalar s) {
  using std::abs;
  using std::exp;
  const Scalar a = abs(s);
  if (a <= Scalar(1)) return Scalar(1);
  if (a >= Scalar(2)) return Scalar(0);
  const Scalar left = exp(Scalar(-1) / (Scalar(2) - a));
  const Scalar right = exp(Scalar(-1) / (a - Scalar(1)));
  return left / (left + right);
}

/// rho(s) = chi(s) - chi(2s); supported on 1/2 <= |s| <= 2, rho(1) = 1.
template <typename Scalar>
Scalar annulus_rho(Scalar s) {
  return cutoff_chi(s) - cutoff_chi(Scalar(2) * s);
}

/// A dyadic frequency scale lambda in 2^Z.
class DyadicBand {
 public:
  /// Throws DomainError unless lambda is a positive power of two.
  explicit DyadicBand(Real lambda);
  static DyadicBand from_exponent(int j) { return DyadicBand(std::ldexp(1.0, j)); }

  Real lambda() const { return lambda_; }
  Real lower() const { return lambda_ / 2; }
  Real upper() const { return 2 * lambda_; }
  /// True when the closed annulus lies strictly below the grid Nyquist magnitude.
  bool fits(const GridSpec& grid) const { return upper() < grid.nyquist(); }

 private:
  Real lambda_;
};

/// P_lambda f: multiply by rho(|xi| / lambda). Throws DomainError when the
/// band reaches the grid Nyquist magnitude.
SpectralField dyadic_project(const SpectralField& field, DyadicBand band);

/// Every band that fits the grid, starting at the largest power of two not
/// exceeding the fundamental frequency 2 pi / L.
std::vector<DyadicBand> dyadic_ladder(const GridSpec& grid);

/// |D|^k f, i.e. multiplication by |xi|^k (k >= 0).
SpectralField fractional_derivative(const SpectralField& field, Real k);

/// ||D^k P_l f||_q / (l^{k + n(1/r - 1/q)} ||P_l f||_r) with discrete
/// Lebesgue norms. Requires 1 <= r <= q <= inf and k >= 0; throws
/// DomainError when P_l f vanishes.
Real bernstein_ratio(const SpectralField& field, DyadicBand band, Real k, Real q, Real r);

}  // namespace boussinesq
