// Radius of spatial analyticity: cosh-smoothed fields v = cosh(sigma |D|) u,
// the modified energy, the commutator term of its time derivative, the cosh
// product inequality and a norm-budget tracker for sigma(t).
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "boussinesq/kernels.hpp"
#include "boussinesq/norms.hpp"
#include "boussinesq/solver.hpp"

namespace boussinesq {

/// cosh(sigma |D|) u. Throws DomainError when sigma max|xi| exceeds the
/// Gevrey overflow guard or sigma < 0.
SpectralField cosh_smooth(const SpectralField& field, Real sigma);
/// sech(sigma |D|) u, the inverse of cosh_smooth.
SpectralField sech_smooth(const SpectralField& field, Real sigma);

/// energy() of (cosh(sigma|D|) u, cosh(sigma|D|) u_t); the quartic term is
/// that of the smoothed field. nl must be cubic or kNone (no quartic term).
Real modified_energy(DispersionParams params, const EvolutionState& state, Real sigma, Nonlinearity nl);

struct CoshInequality {
  Real lhs = 0;
  Real rhs = 0;
};

/// lhs = |1 - cosh|xi| prod sech|xi_j||, xi = sum xi_j, and
/// rhs = 2^p sum over ordered pairs j != k of |xi_j||xi_k|, p = xi.size().
/// Requires p in {2, 3} and every |xi_j|, |xi| <= 700.
CoshInequality cosh_inequality_check(std::span<const Real> xi);

/// int v_t (f(v) - cosh(sigma|D|) f(sech(sigma|D|) v)) dx by the rectangle
/// rule, f applied with dealiasing. nl must be cubic.
Real commutator_residual(DispersionParams params, const SpectralField& v, const SpectralField& vt, Real sigma,
                         Nonlinearity nl);

/// |commutator_residual| / (sigma^2 ||v||_{H^2}^3 || |D|^{-1} v_t ||_2), the
/// |D|^{-1} weight taken on the mean-free part. Throws PreconditionError when
/// v_t has nonzero mean or a denominator factor vanishes.
Real commutator_ratio(DispersionParams params, const SpectralField& v, const SpectralField& vt, Real sigma,
                      Nonlinearity nl);

/// || |D|^{-1} f || over the nonzero modes.
Real inverse_derivative_norm(const SpectralField& field);

/// Largest sigma in [0, sigma_hi] with ||u||_{H^{sigma,s}} (cosh weight) <= M,
/// by bisection to relative width 1e-3. Throws PreconditionError when M is
/// below the sigma = 0 norm, DomainError when sigma_hi breaks the overflow
/// guard.
Real radius_estimate(const SpectralField& u, Real s, Real budget, Real sigma_hi);

struct RadiusTrackConfig {
  int points = 256;          ///< grid points, n = 1
  Real period = 0;           ///< box length; 0 selects 8 pi
  int beta = 1;
  Real sigma0 = 1;
  Real amplitude = 0.5;      ///< ||u0||_{H^2}
  Real s = 2;
  Real dt = 1e-3;
  Real final_time = 100;
  int samples = 41;          ///< log-spaced sample times on [t_first, final_time]
  Real t_first = 0.1;
  Real fit_lo = 1;
  Real fit_hi = 100;
  std::uint64_t seed = 0;
  Nonlinearity nl = Nonlinearity::kPlusCube;
};

struct RadiusSample {
  Real t = 0;
  Real sigma = 0;
  Real e_sigma = 0;
  Real commutator_ratio = 0;   ///< NaN when undefined (sigma = 0)
  Real h2_norm = 0;
};

struct RadiusReport {
  std::vector<RadiusSample> samples;
  Real budget = 0;
  bool fit_valid = false;    ///< at least six post-crossover samples in the fit window
  DecayFitResult fit;
  bool blew_up = false;
};

/// Initial data of the tracker: u0 with Fourier modulus proportional to
/// e^{-sigma0 |xi|} <xi>^{-4} and seeded random phases, scaled to the given
/// H^2 norm; u1 = 0.
EvolutionState gevrey_initial_data(const GridSpec& grid, const RadiusTrackConfig& config);

/// Evolves with step_evolve (n = 1, cubic), estimates sigma(t) with the budget
/// M = ||u0||_{H^{sigma0,s}}, and fits the tail over the fit window on the
/// samples where sigma has left the sigma0 cap.
RadiusReport radius_decay_report(const RadiusTrackConfig& config);

/// CSV with header t,sigma_estimate,E_sigma,commutator_ratio,H2_norm.
void write_radius_csv(const std::filesystem::path& path, std::span<const RadiusSample> samples);

}  // namespace boussinesq
