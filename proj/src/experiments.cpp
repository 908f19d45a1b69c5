#include "boussinesq/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/QR>

#include "csv.hpp"

namespace boussinesq {

SpectralField band_profile(const GridSpec& grid, Real lambda, std::mt19937_64& rng) {
  std::normal_distribution<Real> normal(0, 1);
  std::array<Complex, 8> radial;
  for (auto& c : radial) {
    const Real re = normal(rng);
    c = Complex(re, normal(rng));
  }
  std::array<Real, 6> angular;
  for (auto& c : angular) c = 0.5 * normal(rng);

  const auto table = frequency_magnitudes(grid);
  SpectralField field(grid, false);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Real s = (*table)[static_cast<Eigen::Index>(i)] / lambda;
    if (s <= 0.5 || s >= 2) continue;
    Complex value = 0;
    for (int j = 0; j < 8; ++j) value += radial[j] * std::cos(j * kPi * (s - 0.5) / 1.5);
    if (grid.dimension() >= 2) {
      const auto k = grid.wavevector(i);
      const Real theta = std::atan2(static_cast<Real>(k[1]), static_cast<Real>(k[0]));
      Real ang = 1;
      for (int l = 1; l <= 3; ++l) ang += angular[2 * l - 2] * std::cos(l * theta) + angular[2 * l - 1] * std::sin(l * theta);
      value *= ang;
    }
    field.coeffs()[static_cast<Eigen::Index>(i)] = value;
  }
  enforce_hermitian(field);
  return field;
}

std::vector<SpectralField> half_wave_trajectory(DispersionParams params, const SpectralField& f,
                                                std::span<const Real> times) {
  const auto table = frequency_magnitudes(f.grid());
  std::vector<Eigen::Index> support;
  std::vector<Real> phases;
  for (Eigen::Index i = 0; i < f.coeffs().size(); ++i)
    if (f.coeffs()[i] != Complex(0)) {
      support.push_back(i);
      phases.push_back(phase_unchecked(params.beta(), (*table)[i]));
    }
  std::vector<SpectralField> out;
  out.reserve(times.size());
  for (Real t : times) {
    SpectralField g(f.grid(), false);
    for (std::size_t q = 0; q < support.size(); ++q)
      g.coeffs()[support[q]] = std::polar(1.0, t * phases[q]) * f.coeffs()[support[q]];
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Real> dispersive_time_grid(Real lambda, Real T, int count, Real s_min) {
  if (count < 3) throw PreconditionError("dispersive_time_grid: need at least three samples");
  const Real scale = lambda * lambda * lambda;
  const Real first = s_min / scale;
  if (!(first < T)) throw PreconditionError("dispersive_time_grid: s_min too large for T");
  std::vector<Real> times{0};
  const Real ratio = std::log(T / first);
  for (int i = 0; i < count - 1; ++i) times.push_back(first * std::exp(ratio * i / (count - 2)));
  times.back() = T;
  return times;
}

std::vector<Real> uniform_time_grid(Real T, int count) {
  std::vector<Real> times(count);
  for (int j = 0; j < count; ++j) times[j] = T * j / count;
  return times;
}

std::vector<KernelSweepRow> kernel_decay_sweep(DispersionParams params, int n, Real lambda, std::span<const Real> times,
                                               const SupScanOptions& options) {
  std::vector<KernelSweepRow> rows;
  for (Real t : times) {
    const SupScanResult scan = sup_scan(params, n, lambda, t, options);
    rows.push_back({n, params.beta(), lambda, t, scan.sup, scan.sup * std::pow(lambda * std::abs(t), n / 2.0)});
  }
  return rows;
}

std::vector<KernelSweepRow> uniform_decay_sweep(DispersionParams params, std::span<const Real> times) {
  std::vector<KernelSweepRow> rows;
  for (Real t : times) {
    const Real sup = uniform_1d_decay(params, t);
    rows.push_back({1, params.beta(), 0, t, sup, sup * std::cbrt(std::abs(t))});
  }
  return rows;
}

DecayFitResult loglog_fit(std::span<const Real> x, std::span<const Real> y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("loglog_fit: need two or more paired samples");
  Eigen::MatrixXd design(x.size(), 2);
  Eigen::VectorXd rhs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw DomainError("loglog_fit: samples must be positive");
    design(i, 0) = std::log(x[i]);
    design(i, 1) = 1;
    rhs[i] = std::log(y[i]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  DecayFitResult fit;
  fit.exponent = coef[0];
  fit.log_prefactor = coef[1];
  fit.residual_rms = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<Real>(x.size()));
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  fit.sample_range = {*lo, *hi};
  return fit;
}

namespace {
Real spread_of(const std::vector<EstimateRow>& rows) {
  Real lo = std::numeric_limits<Real>::infinity(), hi = 0;
  for (const auto& row : rows) {
    lo = std::min(lo, row.value.ratio);
    hi = std::max(hi, row.value.ratio);
  }
  return lo > 0 ? hi / lo : std::numeric_limits<Real>::infinity();
}
}  // namespace

StrichartzSweep strichartz_sweep(DispersionParams params, const GridSpec& grid, const StrichartzSettings& settings) {
  const AdmissiblePair pair(grid.dimension(), settings.q, settings.r);
  StrichartzSweep sweep;
  std::vector<Real> lambdas, lhs;
  for (Real lambda : settings.lambdas) {
    std::mt19937_64 rng(settings.seed);
    const DyadicBand band(lambda);
    SpectralField f = band_profile(grid, lambda, rng);
    f *= 1 / dyadic_project(f, band).l2_norm();
    const auto times = dispersive_time_grid(lambda, settings.T, settings.time_samples, settings.s_min);
    EstimateRow row;
    row.n = grid.dimension();
    row.beta = params.beta();
    row.lambdas = {lambda};
    row.q = settings.q.value();
    row.r = settings.r.value();
    row.T = settings.T;
    row.value = strichartz_ratio(params, band, f, pair, times);
    sweep.rows.push_back(row);
    lambdas.push_back(lambda);
    lhs.push_back(row.value.lhs);
  }
  sweep.slope = loglog_fit(lambdas, lhs);
  sweep.spread = spread_of(sweep.rows);
  return sweep;
}

EstimateSweep estimate_sweep(DispersionParams params, const GridSpec& grid, const EstimateSettings& settings) {
  if (settings.fixed.empty() || settings.fixed.size() > 2)
    throw PreconditionError("estimate_sweep: one (bilinear) or two (trilinear) fixed frequencies");
  std::mt19937_64 rng(settings.seed);
  const auto times = uniform_time_grid(settings.T, settings.time_samples);
  EstimateSweep sweep;
  for (int draw = 0; draw < settings.draws; ++draw)
    for (Real lambda : settings.sweep) {
      std::vector<Real> lambdas = settings.fixed;
      lambdas.push_back(lambda);
      std::vector<std::vector<SpectralField>> trajectories;
      for (Real l : lambdas) trajectories.push_back(half_wave_trajectory(params, band_profile(grid, l, rng), times));
      EstimateRow row;
      row.n = grid.dimension();
      row.beta = params.beta();
      row.lambdas = lambdas;
      row.b = settings.b;
      row.T = settings.T;
      row.draw = draw;
      if (lambdas.size() == 2)
        row.value = bilinear_ratio(params, DyadicBand(lambdas[0]), DyadicBand(lambdas[1]), trajectories[0],
                                   trajectories[1], times, settings.b, settings.regime);
      else
        row.value = trilinear_ratio(params, DyadicBand(lambdas[0]), DyadicBand(lambdas[1]), DyadicBand(lambdas[2]),
                                    trajectories[0], trajectories[1], trajectories[2], times, settings.b,
                                    settings.regime);
      sweep.rows.push_back(row);
    }
  sweep.spread = spread_of(sweep.rows);
  return sweep;
}

void write_estimate_csv(const std::filesystem::path& path, std::span<const EstimateRow> rows) {
  detail::CsvWriter csv(path, {"n", "beta", "lambda1", "lambda2", "lambda3", "q", "r", "b", "T", "lhs", "rhs", "ratio"});
  for (const auto& row : rows) {
    std::array<Real, 3> l{0, 0, 0};
    for (std::size_t i = 0; i < row.lambdas.size() && i < 3; ++i) l[i] = row.lambdas[i];
    csv.row({static_cast<Real>(row.n), static_cast<Real>(row.beta), l[0], l[1], l[2], row.q, row.r, row.b, row.T,
             row.value.lhs, row.value.rhs, row.value.ratio});
  }
}

}  // namespace boussinesq
