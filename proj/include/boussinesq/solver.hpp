// Nonlinear evolution of u_tt = Delta(u - beta Delta u + Delta^2 u + f(u)):
// dealiased nonlinearities, the Duhamel integral, Picard iteration, an
// exponential-integrator stepper and the conserved energy.
#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "boussinesq/propagator.hpp"

namespace boussinesq {

/// f(u) = +-u^2 or +-u^3. kNone (f = 0) selects the linear problem.
enum class Nonlinearity { kNone, kPlusSquare, kMinusSquare, kPlusCube, kMinusCube };

int degree(Nonlinearity nl);
Real sign(Nonlinearity nl);
bool is_cubic(Nonlinearity nl);
std::string_view to_string(Nonlinearity nl);
/// Accepts "none", "plus_square", "minus_square", "plus_cube", "minus_cube".
Nonlinearity parse_nonlinearity(std::string_view name);

/// Largest retained |k_i| for products of the given degree: floor(N/3) for
/// quadratic, N/4 - 1 for cubic, so no retained triad or quartet aliases.
int dealias_cutoff(const GridSpec& grid, int degree);

/// Zeroes every coefficient with some |k_i| above dealias_cutoff.
SpectralField dealias(SpectralField field, int degree);

/// f(u) evaluated in physical space between two dealiasing passes.
/// Requires a real field.
SpectralField apply_nonlinearity(const SpectralField& u, Nonlinearity nl);

/// Composite Simpson weights for samples 0..count-1 with spacing h; a 3/8
/// panel closes odd interval counts. Throws PreconditionError for count < 3.
std::vector<Real> simpson_weights(std::size_t count, Real h);

/// int_0^t W_m(t - t') Delta f(u(t')) dt' by composite Simpson on a uniform
/// history u(t'_j), t'_j = j t / (M - 1). The Laplacian is the multiplier
/// -|xi|^2. Throws PreconditionError for fewer than three samples.
SpectralField duhamel_rhs(DispersionParams params, std::span<const SpectralField> history, Nonlinearity nl, Real t);

struct PicardResult {
  std::vector<Real> times;
  std::vector<SpectralField> u;
  int iterations = 0;
  Real residual = 0;   ///< sup over samples of the L2 change in the last sweep
  bool converged = false;
};

/// Fixed point of u = dW(t) u0 + W(t) u1 + int_0^t W(t - s) Delta f(u(s)) ds
/// on samples 0, h, ..., T with h = T / intervals. Starts from the linear
/// solution; one iteration is one application of the map. Throws
/// ConvergenceError when the residual grows on three consecutive iterations.
PicardResult picard_solve(DispersionParams params, const SpectralField& u0, const SpectralField& u1,
                          Nonlinearity nl, Real T, Real tol, int max_iter, int intervals = 200);

struct StepOptions {
  int record_every = 1;            ///< store every k-th state (the final state is always stored)
  Real blowup_threshold = 1e12;    ///< sup-norm bound treated as blow-up
};

struct StepResult {
  std::vector<EvolutionState> trajectory;   ///< includes the initial state
  bool blew_up = false;
  int steps_taken = 0;
};

/// One step: exact linear flow over dt plus the Duhamel correction by
/// two-point Gauss quadrature, with u inside the integral replaced by the
/// linearly propagated state. Second order in dt. On a non-finite or
/// over-threshold state the run stops and keeps the last good state.
StepResult step_evolve(DispersionParams params, const EvolutionState& state, Nonlinearity nl, Real dt, int steps,
                       const StepOptions& options = {});

/// Single step of step_evolve (no blow-up handling).
EvolutionState evolve_step(DispersionParams params, const EvolutionState& state, Nonlinearity nl, Real dt);

/// E = 1/2 int |(-Delta)^{-1/2} u_t|^2 + u^2 + beta |grad u|^2 + (Delta u)^2
///     +- 1/4 int u^4 (cubic kinds only, sign of f).
/// Throws PreconditionError when the mean of u_t is not zero.
Real energy(DispersionParams params, const EvolutionState& state, Nonlinearity nl);

/// Quadratic part of energy() (no potential term).
Real quadratic_energy(DispersionParams params, const SpectralField& u, const SpectralField& ut);

/// Rectangle-rule integral of u^4 over the box.
Real quartic_integral(const SpectralField& u);

/// Mean value of a field (its zero coefficient).
Complex field_mean(const SpectralField& field);

/// CSV with header time,L2_norm,H2_norm,energy,sup_norm.
void write_trajectory_csv(const std::filesystem::path& path, DispersionParams params, Nonlinearity nl,
                          std::span<const EvolutionState> trajectory);

}  // namespace boussinesq
