// Fourier multipliers and the exact linear flow of
//   u_tt = Delta(u - beta Delta u + Delta^2 u),
// whose symbol is -m(|xi|)^2.
#pragma once

#include <cmath>
#include <string>

#include "boussinesq/dispersion.hpp"
#include "boussinesq/grid.hpp"

namespace boussinesq {

/// Which coefficients a multiplier is evaluated on. kNonzeroOnly skips
/// coefficients that are exactly zero, which matters for band-limited fields
/// on large grids.
enum class MultiplierSupport { kAll, kNonzeroOnly };

/// c(k) -> mult(|xi_k|) c(k). Radial multipliers are even in xi, so a real
/// field stays real exactly when every multiplier value is real. Throws
/// DomainError on a non-finite multiplier value.
template <typename Multiplier>
SpectralField apply_multiplier(SpectralField field, Multiplier&& mult,
                               MultiplierSupport support = MultiplierSupport::kAll) {
  const auto table = frequency_magnitudes(field.grid());
  const ArrayXr& mags = *table;
  ArrayXc& c = field.coeffs();
  bool real_valued = true;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (support == MultiplierSupport::kNonzeroOnly && c[i] == Complex(0)) continue;
    const Complex value(mult(mags[i]));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw DomainError("apply_multiplier: non-finite multiplier at |xi| = " + std::to_string(mags[i]));
    if (value.imag() != 0) real_valued = false;
    c[i] *= value;
  }
  field.set_real(field.real() && real_valued);
  return field;
}

/// sin(t m) / m, with the removable singularity and a cancellation-free
/// series for |t m| < 1e-4.
Real sine_over_phase(Real t, Real m);

/// S_m(t) = exp(i t m(D)).
SpectralField half_wave(DispersionParams params, const SpectralField& field, Real t,
                        MultiplierSupport support = MultiplierSupport::kAll);

/// W_m(t) = sin(t m(D)) / m(D); multiplication by t on the mean mode.
SpectralField wave_sine(DispersionParams params, const SpectralField& field, Real t);

/// d/dt W_m(t) = cos(t m(D)).
SpectralField wave_cosine(DispersionParams params, const SpectralField& field, Real t);

/// (u, u_t) at a common time.
struct EvolutionState {
  SpectralField u;
  SpectralField ut;
  Real time = 0;
};

/// Exact solution of the linear problem with data (u0, u1) at time t:
///   u   = cos(t m) u0 + sin(t m)/m u1,
///   u_t = -m sin(t m) u0 + cos(t m) u1.
EvolutionState linear_evolve(DispersionParams params, const SpectralField& u0, const SpectralField& u1, Real t);

/// Advances an existing state by dt with the linear flow.
EvolutionState linear_advance(DispersionParams params, const EvolutionState& state, Real dt);

}  // namespace boussinesq
