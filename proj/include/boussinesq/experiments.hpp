// Parameter sweeps shared by the command-line runner and the acceptance
// suite: kernel decay series, Strichartz scaling and estimate-ratio draws.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "boussinesq/kernels.hpp"
#include "boussinesq/norms.hpp"

namespace boussinesq {

/// Real field with a smooth random profile in s = |xi| / lambda on the
/// annulus 1/2 < s < 2 (a cosine series in s with eight seeded
/// coefficients, times a seeded trigonometric polynomial in the angle for
/// n >= 2). The same generator state gives the same shape at every lambda.
SpectralField band_profile(const GridSpec& grid, Real lambda, std::mt19937_64& rng);

/// S_m(t) f at each time, evaluated only on the support of f.
std::vector<SpectralField> half_wave_trajectory(DispersionParams params, const SpectralField& f,
                                                std::span<const Real> times);

/// 0 followed by count - 1 times geometric in s = lambda^3 t from
/// s_min / lambda^3 up to T.
std::vector<Real> dispersive_time_grid(Real lambda, Real T, int count, Real s_min);

/// j T / count for j < count.
std::vector<Real> uniform_time_grid(Real T, int count);

/// sup_scan at every t, with the scaled value sup (lambda t)^{n/2}.
std::vector<KernelSweepRow> kernel_decay_sweep(DispersionParams params, int n, Real lambda, std::span<const Real> times,
                                               const SupScanOptions& options = {});

/// sup over x of the unlocalized 1D integral at every t; scaled_value is
/// sup |t|^{1/3}, lambda is reported as 0.
std::vector<KernelSweepRow> uniform_decay_sweep(DispersionParams params, std::span<const Real> times);

struct EstimateRow {
  int n = 1;
  int beta = 0;
  std::vector<Real> lambdas;   ///< one to three entries
  Real q = 0, r = 0, b = 0;    ///< 0 where not applicable
  Real T = 0;
  int draw = 0;
  EstimateRatio value;
};

struct StrichartzSettings {
  std::vector<Real> lambdas{8, 16, 32, 64, 128};
  Exponent q = Exponent::integer(4);
  Exponent r = Exponent::infinity();
  Real T = 8;
  int time_samples = 400;
  Real s_min = 1e-3;
  std::uint64_t seed = 0;
};

struct StrichartzSweep {
  std::vector<EstimateRow> rows;
  DecayFitResult slope;   ///< log lhs against log lambda, ||P_lambda f||_2 = 1
  Real spread = 0;        ///< max / min of the ratio
};

/// One fixed profile shape, rescaled to each lambda and normalised so that
/// ||P_lambda f||_2 = 1. The slope comes from loglog_fit (two or more
/// lambdas).
StrichartzSweep strichartz_sweep(DispersionParams params, const GridSpec& grid, const StrichartzSettings& settings);

struct EstimateSettings {
  std::vector<Real> fixed{4};                     ///< one entry (bilinear) or two (trilinear)
  std::vector<Real> sweep{8, 16, 32, 64, 128};
  int draws = 20;
  Real b = 0.6;
  Real T = 1;
  int time_samples = 64;
  EstimateRegime regime = EstimateRegime::kHighFrequency;
  std::uint64_t seed = 0;
};

struct EstimateSweep {
  std::vector<EstimateRow> rows;
  Real spread = 0;   ///< max / min of the ratio over every row
};

/// Half-wave trajectories of independent random band profiles for each draw
/// and swept lambda; bilinear when settings.fixed has one entry, trilinear
/// with two.
EstimateSweep estimate_sweep(DispersionParams params, const GridSpec& grid, const EstimateSettings& settings);

/// CSV with header n,beta,lambda1,lambda2,lambda3,q,r,b,T,lhs,rhs,ratio
/// (0 marks an unused column).
void write_estimate_csv(const std::filesystem::path& path, std::span<const EstimateRow> rows);

/// Ordinary least squares slope and intercept of log y against log x (two or
/// more points).
DecayFitResult loglog_fit(std::span<const Real> x, std::span<const Real> y);

}  // namespace boussinesq
