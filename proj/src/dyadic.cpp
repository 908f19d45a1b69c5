#include "boussinesq/dyadic.hpp"

#include <string>

#include "boussinesq/propagator.hpp"

namespace boussinesq {

DyadicBand::DyadicBand(Real lambda) : lambda_(lambda) {
  int exponent = 0;
  if (!(lambda > 0) || !std::isfinite(lambda) || std::frexp(lambda, &exponent) != 0.5)
    throw DomainError("DyadicBand: lambda must be a power of two, got " + std::to_string(lambda));
}

SpectralField dyadic_project(const SpectralField& field, DyadicBand band) {
  if (!band.fits(field.grid()))
    throw DomainError("dyadic_project: band 2*lambda = " + std::to_string(band.upper()) +
                      " reaches the Nyquist magnitude " + std::to_string(field.grid().nyquist()));
  const Real inv = 1.0 / band.lambda();
  return apply_multiplier(field, [inv](Real r) { return annulus_rho(r * inv); });
}

std::vector<DyadicBand> dyadic_ladder(const GridSpec& grid) {
  std::vector<DyadicBand> ladder;
  int exponent = 0;
  std::frexp(grid.frequency_unit(), &exponent);
  for (DyadicBand band = DyadicBand::from_exponent(exponent - 1); band.fits(grid);
       band = DyadicBand(2 * band.lambda()))
    ladder.push_back(band);
  return ladder;
}

SpectralField fractional_derivative(const SpectralField& field, Real k) {
  if (!(k >= 0)) throw DomainError("fractional_derivative: order must be nonnegative");
  if (k == 0) return field;
  return apply_multiplier(field, [k](Real r) { return r == 0 ? 0.0 : std::pow(r, k); });
}

Real bernstein_ratio(const SpectralField& field, DyadicBand band, Real k, Real q, Real r) {
  if (!(r >= 1) || !(q >= r)) throw DomainError("bernstein_ratio: need 1 <= r <= q <= inf");
  if (!(k >= 0)) throw DomainError("bernstein_ratio: k must be nonnegative");
  const SpectralField projected = dyadic_project(field, band);
  const GridSpec& grid = field.grid();
  const Real denom_norm = lebesgue_norm(grid, synthesize(projected), r);
  if (denom_norm == 0) throw DomainError("bernstein_ratio: P_lambda f vanishes, ratio undefined");
  const Real numer = lebesgue_norm(grid, synthesize(fractional_derivative(projected, k)), q);
  const Real inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const Real inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  const Real exponent = k + grid.dimension() * (inv_r - inv_q);
  return numer / (std::pow(band.lambda(), exponent) * denom_norm);
}

}  // namespace boussinesq
