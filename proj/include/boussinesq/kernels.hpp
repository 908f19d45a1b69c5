// The localized dispersive kernel
//   I_lambda(x, t) = lambda^n int e^{i lambda x.xi + i t m(lambda xi)} rho(|xi|) dxi,
// its sup over x, Bessel utilities, the unlocalized one-dimensional integral,
// the Van der Corput bound and log-log decay fits.
#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "boussinesq/dispersion.hpp"

namespace boussinesq {

/// J_k(r) for k in {-1/2, 0, 1/2, 1, 3/2, 2} and r > 0. Half-integer orders
/// use the elementary closed forms, integer orders std::cyl_bessel_j.
/// Throws DomainError for other orders or r <= 0.
Real bessel_j(Real order, Real r);

/// z^{-(n-2)/2} J_{(n-2)/2}(z) with its finite value at z = 0; n in {1,2,3}.
Real radial_bessel_factor(int n, Real z);

/// Panel count of the composite 8-point Gauss-Legendre rule on [1/2, 2]:
/// 16 plus the number of 2 pi turns of the total phase t m(lambda r) +
/// lambda x r across the interval, so every oscillation gets at least 8
/// nodes.
int kernel_panel_count(DispersionParams params, Real lambda, Real x, Real t);

/// I_lambda at |x| = x through the radial Bessel form
///   (2 pi)^{n/2} lambda^n int e^{i t m(lambda r)} (lambda r x)^{-(n-2)/2}
///   J_{(n-2)/2}(lambda r x) r^{n-1} rho(r) dr,
/// which for n = 1 is 2 lambda int cos(lambda x r) e^{i t m(lambda r)} rho(r) dr.
/// Panels double until two successive values agree to 1e-8 relative (with an
/// absolute floor of 1e-12 lambda^n); ConvergenceError after 3 doublings.
/// Requires lambda >= 4 and x >= 0.
Complex kernel_radial(DispersionParams params, int n, Real lambda, Real x, Real t);

struct SupScanOptions {
  int log_points = 512;      ///< log-spaced radii on [4 / lambda, 4 lambda^2 |t|]
  int origin_points = 32;    ///< uniform radii on [0, 4 / lambda)
  bool cross_check = true;   ///< recompute the maximiser with kernel_radial
  int threads = 1;           ///< radii are split across this many threads
};

struct SupScanResult {
  Real sup = 0;
  Real argmax = 0;
  int panels = 0;
};

/// max over the radius grid of |I_lambda(x, t)|. All radii share one node set
/// sized for the largest radius; Bessel factors of large argument come from
/// the Hankel expansion and the plane-wave factors from per-panel rotations.
/// The maximiser is then re-evaluated with doubled panels (and, with
/// cross_check, by kernel_radial); a relative change above 1e-6 throws
/// ConvergenceError. Requires t != 0.
SupScanResult sup_scan(DispersionParams params, int n, Real lambda, Real t, const SupScanOptions& options = {});

struct DecayFitResult {
  Real exponent = 0;
  Real log_prefactor = 0;
  Real residual_rms = 0;
  std::pair<Real, Real> sample_range{0, 0};
};

/// Least squares of log(value) against log(variable). Needs at least six
/// samples with positive variable and value, not all at one variable.
DecayFitResult decay_fit(std::span<const Real> variable, std::span<const Real> value);

/// sup over x of |int e^{i (t m(xi) + x xi)} chi(xi / R) dxi| in one
/// dimension (any beta). R starts at 2 and doubles until the sup moves by
/// less than 1e-6 relative; ConvergenceError past R = 64. Requires t != 0.
Real uniform_1d_decay(DispersionParams params, Real t);

/// (A t)^{-1/2} (|g(b)| + int_a^b |g'|) with C = 1, for g sampled uniformly on
/// [a, b] (total variation of the sampled values). Throws DomainError unless
/// A > 0, t > 0 and a < b, PreconditionError for fewer than two samples.
Real corput_bound(std::span<const Real> g, Real A, Real t, Real a, Real b);

struct KernelSweepRow {
  int n = 1;
  int beta = 0;
  Real lambda = 0;
  Real t = 0;
  Real sup_abs = 0;
  Real scaled_value = 0;   ///< sup_abs (lambda |t|)^{n/2}
};

/// CSV with header n,beta,lambda,t,sup_abs,scaled_value.
void write_kernel_sweep_csv(const std::filesystem::path& path, std::span<const KernelSweepRow> rows);

}  // namespace boussinesq
