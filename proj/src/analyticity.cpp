#include "boussinesq/analyticity.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "csv.hpp"

namespace boussinesq {

namespace {

void require_guard(const GridSpec& grid, Real sigma, const char* operation) {
  if (!(sigma >= 0)) throw DomainError(std::string(operation) + ": sigma must be nonnegative");
  const Real top = sigma * frequency_magnitudes(grid)->maxCoeff();
  if (top > kGevreyExponentLimit)
    throw DomainError(std::string(operation) + ": sigma max|xi| = " + std::to_string(top) +
                      " exceeds the overflow guard");
}

void require_cubic(Nonlinearity nl, const char* operation) {
  if (!is_cubic(nl)) throw PreconditionError(std::string(operation) + ": needs a cubic nonlinearity");
}

}  // namespace

SpectralField cosh_smooth(const SpectralField& field, Real sigma) {
  require_guard(field.grid(), sigma, "cosh_smooth");
  if (sigma == 0) return field;
  return apply_multiplier(field, [sigma](Real r) { return std::cosh(sigma * r); });
}

SpectralField sech_smooth(const SpectralField& field, Real sigma) {
  require_guard(field.grid(), sigma, "sech_smooth");
  if (sigma == 0) return field;
  return apply_multiplier(field, [sigma](Real r) { return 1 / std::cosh(sigma * r); });
}

Real modified_energy(DispersionParams params, const EvolutionState& state, Real sigma, Nonlinearity nl) {
  if (nl != Nonlinearity::kNone) require_cubic(nl, "modified_energy");
  const EvolutionState smoothed{cosh_smooth(state.u, sigma), cosh_smooth(state.ut, sigma), state.time};
  return energy(params, smoothed, nl);
}

CoshInequality cosh_inequality_check(std::span<const Real> xi) {
  const std::size_t p = xi.size();
  if (p != 2 && p != 3) throw PreconditionError("cosh_inequality_check: needs two or three frequencies");
  Real parent = 0;
  for (Real x : xi) {
    if (!(std::abs(x) <= kGevreyExponentLimit)) throw DomainError("cosh_inequality_check: |xi_j| exceeds 700");
    parent += x;
  }
  if (std::abs(parent) > kGevreyExponentLimit) throw DomainError("cosh_inequality_check: |xi| exceeds 700");
  Real product = std::cosh(std::abs(parent));
  for (Real x : xi) product /= std::cosh(std::abs(x));
  CoshInequality out;
  out.lhs = std::abs(1 - product);
  Real pairs = 0;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k)
      if (j != k) pairs += std::abs(xi[j]) * std::abs(xi[k]);
  out.rhs = std::ldexp(pairs, static_cast<int>(p));
  return out;
}

Real commutator_residual(DispersionParams, const SpectralField& v, const SpectralField& vt, Real sigma,
                         Nonlinearity nl) {
  require_cubic(nl, "commutator_residual");
  require_same_grid(v, vt, "commutator_residual");
  if (!v.real() || !vt.real()) throw PreconditionError("commutator_residual: fields must be real");
  const SpectralField direct = apply_nonlinearity(v, nl);
  const SpectralField smoothed = cosh_smooth(apply_nonlinearity(sech_smooth(v, sigma), nl), sigma);
  const ArrayXr difference = synthesize_real(direct - smoothed);
  const ArrayXr velocity = synthesize_real(vt);
  return v.grid().cell_volume() * (velocity * difference).sum();
}

Real inverse_derivative_norm(const SpectralField& field) {
  const auto table = frequency_magnitudes(field.grid());
  Real sum = 0;
  for (Eigen::Index i = 1; i < field.coeffs().size(); ++i) {
    const Real r = (*table)[i];
    if (r > 0) sum += std::norm(field.coeffs()[i]) / (r * r);
  }
  return std::sqrt(field.grid().volume() * sum);
}

Real commutator_ratio(DispersionParams params, const SpectralField& v, const SpectralField& vt, Real sigma,
                      Nonlinearity nl) {
  if (std::abs(field_mean(vt)) > 1e-12 * std::max(1.0, vt.coeffs().abs().maxCoeff()))
    throw PreconditionError("commutator_ratio: v_t must have zero mean");
  const Real h2 = spatial_norm(v, NormSpec::sobolev(2));
  const Real dv = inverse_derivative_norm(vt);
  const Real denominator = sigma * sigma * h2 * h2 * h2 * dv;
  if (!(denominator > 0)) throw PreconditionError("commutator_ratio: zero denominator (sigma, v or v_t vanishes)");
  return std::abs(commutator_residual(params, v, vt, sigma, nl)) / denominator;
}

Real radius_estimate(const SpectralField& u, Real s, Real budget, Real sigma_hi) {
  require_guard(u.grid(), sigma_hi, "radius_estimate");
  auto norm_at = [&](Real sigma) { return spatial_norm(u, NormSpec::gevrey(sigma, s, GevreyWeight::kCosh)); };
  if (norm_at(0) > budget) throw PreconditionError("radius_estimate: budget is below the sigma = 0 norm");
  if (norm_at(sigma_hi) <= budget) return sigma_hi;
  Real lo = 0, hi = sigma_hi;
  while (hi - lo > 1e-3 * hi) {
    const Real mid = 0.5 * (lo + hi);
    (norm_at(mid) <= budget ? lo : hi) = mid;
  }
  return lo;
}

EvolutionState gevrey_initial_data(const GridSpec& grid, const RadiusTrackConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<Real> angle(0, 2 * kPi);
  SpectralField u0(grid, true);
  const int cutoff = dealias_cutoff(grid, 3);
  for (int k = 1; k <= cutoff; ++k) {
    const Real xi = grid.frequency_unit() * k;
    const Real modulus = std::exp(-config.sigma0 * xi) * std::pow(bracket(xi), -4.0);
    u0.set_mode({k, 0, 0}, std::polar(modulus, angle(rng)));
  }
  const Real h2 = spatial_norm(u0, NormSpec::sobolev(2));
  u0 *= config.amplitude / h2;
  return {u0, SpectralField(grid, true), 0.0};
}

RadiusReport radius_decay_report(const RadiusTrackConfig& config) {
  require_cubic(config.nl, "radius_decay_report");
  if (config.samples < 2 || !(config.t_first > 0) || !(config.final_time > config.t_first))
    throw PreconditionError("radius_decay_report: bad sample schedule");
  if (!(config.dt > 0)) throw PreconditionError("radius_decay_report: dt must be positive");
  const GridSpec grid(1, config.period > 0 ? config.period : 8 * kPi, config.points);
  const DispersionParams params(config.beta);
  EvolutionState state = gevrey_initial_data(grid, config);

  RadiusReport report;
  report.budget = spatial_norm(state.u, NormSpec::gevrey(config.sigma0, config.s, GevreyWeight::kCosh));

  auto record = [&](const EvolutionState& s) {
    RadiusSample sample;
    sample.t = s.time;
    // An H^s norm above the budget leaves no admissible sigma; recorded as 0.
    try {
      sample.sigma = radius_estimate(s.u, config.s, report.budget, config.sigma0);
    } catch (const PreconditionError&) {
      sample.sigma = 0;
    }
    sample.e_sigma = modified_energy(params, s, sample.sigma, config.nl);
    sample.commutator_ratio = std::numeric_limits<Real>::quiet_NaN();
    const SpectralField v = cosh_smooth(s.u, sample.sigma);
    const SpectralField vt = cosh_smooth(s.ut, sample.sigma);
    if (sample.sigma > 0 && inverse_derivative_norm(vt) > 0)
      sample.commutator_ratio = commutator_ratio(params, v, vt, sample.sigma, config.nl);
    sample.h2_norm = spatial_norm(s.u, NormSpec::sobolev(2));
    report.samples.push_back(sample);
  };

  const Real ratio = std::log(config.final_time / config.t_first);
  for (int i = 0; i < config.samples; ++i) {
    const Real target = config.t_first * std::exp(ratio * i / (config.samples - 1));
    const int steps = std::max(1, static_cast<int>(std::ceil((target - state.time) / config.dt - 1e-9)));
    const Real step = (target - state.time) / steps;
    StepOptions options;
    options.record_every = steps;
    StepResult run = step_evolve(params, state, config.nl, step, steps, options);
    state = run.trajectory.back();
    if (run.blew_up) {
      report.blew_up = true;
      break;
    }
    state.time = target;
    record(state);
  }

  std::vector<Real> ts, sigmas;
  for (const auto& s : report.samples)
    if (s.t >= config.fit_lo && s.t <= config.fit_hi && s.sigma < config.sigma0 * (1 - 1e-3) && s.sigma > 0) {
      ts.push_back(s.t);
      sigmas.push_back(s.sigma);
    }
  if (ts.size() >= 6) {
    report.fit = decay_fit(ts, sigmas);
    report.fit_valid = true;
  }
  return report;
}

void write_radius_csv(const std::filesystem::path& path, std::span<const RadiusSample> samples) {
  detail::CsvWriter csv(path, {"t", "sigma_estimate", "E_sigma", "commutator_ratio", "H2_norm"});
  for (const auto& s : samples) csv.row({s.t, s.sigma, s.e_sigma, s.commutator_ratio, s.h2_norm});
}

}  // namespace boussinesq
