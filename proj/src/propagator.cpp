#include "boussinesq/propagator.hpp"

namespace boussinesq {

Real sine_over_phase(Real t, Real m) {
  const Real x = t * m;
  if (std::abs(x) < 1e-4) {
    const Real x2 = x * x;
    return t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sin(x) / m;
}

SpectralField half_wave(DispersionParams params, const SpectralField& field, Real t, MultiplierSupport support) {
  params.require_signed("half_wave");
  const int beta = params.beta();
  return apply_multiplier(
      field, [&](Real r) { return std::polar(1.0, t * phase_unchecked(beta, r)); }, support);
}

SpectralField wave_sine(DispersionParams params, const SpectralField& field, Real t) {
  params.require_signed("wave_sine");
  const int beta = params.beta();
  return apply_multiplier(field, [&](Real r) { return sine_over_phase(t, phase_unchecked(beta, r)); });
}

SpectralField wave_cosine(DispersionParams params, const SpectralField& field, Real t) {
  params.require_signed("wave_cosine");
  const int beta = params.beta();
  return apply_multiplier(field, [&](Real r) { return std::cos(t * phase_unchecked(beta, r)); });
}

EvolutionState linear_evolve(DispersionParams params, const SpectralField& u0, const SpectralField& u1, Real t) {
  params.require_signed("linear_evolve");
  require_same_grid(u0, u1, "linear_evolve");
  const auto table = frequency_magnitudes(u0.grid());
  const ArrayXr& mags = *table;
  SpectralField u(u0.grid(), u0.real() && u1.real());
  SpectralField ut(u0.grid(), u0.real() && u1.real());
  const ArrayXc& a = u0.coeffs();
  const ArrayXc& b = u1.coeffs();
  ArrayXc& cu = u.coeffs();
  ArrayXc& cut = ut.coeffs();
  const int beta = params.beta();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Real m = phase_unchecked(beta, mags[i]);
    const Real c = std::cos(t * m);
    const Real s = std::sin(t * m);
    cu[i] = c * a[i] + sine_over_phase(t, m) * b[i];
    cut[i] = -m * s * a[i] + c * b[i];
  }
  return {std::move(u), std::move(ut), t};
}

EvolutionState linear_advance(DispersionParams params, const EvolutionState& state, Real dt) {
  EvolutionState next = linear_evolve(params, state.u, state.ut, dt);
  next.time = state.time + dt;
  return next;
}

}  // namespace boussinesq
