#include "boussinesq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "boussinesq/norms.hpp"
#include "csv.hpp"

namespace boussinesq {

int degree(Nonlinearity nl) {
  switch (nl) {
    case Nonlinearity::kNone: return 0;
    case Nonlinearity::kPlusSquare:
    case Nonlinearity::kMinusSquare: return 2;
    case Nonlinearity::kPlusCube:
    case Nonlinearity::kMinusCube: return 3;
  }
  return 0;
}

Real sign(Nonlinearity nl) {
  switch (nl) {
    case Nonlinearity::kMinusSquare:
    case Nonlinearity::kMinusCube: return -1;
    case Nonlinearity::kNone: return 0;
    default: return 1;
  }
}

bool is_cubic(Nonlinearity nl) { return degree(nl) == 3; }

std::string_view to_string(Nonlinearity nl) {
  switch (nl) {
    case Nonlinearity::kNone: return "none";
    case Nonlinearity::kPlusSquare: return "plus_square";
    case Nonlinearity::kMinusSquare: return "minus_square";
    case Nonlinearity::kPlusCube: return "plus_cube";
    case Nonlinearity::kMinusCube: return "minus_cube";
  }
  return "none";
}

Nonlinearity parse_nonlinearity(std::string_view name) {
  for (auto nl : {Nonlinearity::kNone, Nonlinearity::kPlusSquare, Nonlinearity::kMinusSquare,
                  Nonlinearity::kPlusCube, Nonlinearity::kMinusCube})
    if (name == to_string(nl)) return nl;
  throw DomainError("unknown nonlinearity '" + std::string(name) + "'");
}

int dealias_cutoff(const GridSpec& grid, int degree) {
  const int n = grid.points();
  if (degree <= 1) return n / 2;
  if (degree == 2) return n / 3;
  if (degree == 3) return n / 4 - 1;
  throw DomainError("dealias_cutoff: unsupported degree " + std::to_string(degree));
}

SpectralField dealias(SpectralField field, int degree) {
  const GridSpec& grid = field.grid();
  const int cutoff = dealias_cutoff(grid, degree);
  ArrayXc& c = field.coeffs();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = grid.wavevector(i);
    if (std::abs(k[0]) > cutoff || std::abs(k[1]) > cutoff || std::abs(k[2]) > cutoff)
      c[static_cast<Eigen::Index>(i)] = 0;
  }
  return field;
}

SpectralField apply_nonlinearity(const SpectralField& u, Nonlinearity nl) {
  if (!u.real()) throw PreconditionError("apply_nonlinearity: field must be real");
  if (nl == Nonlinearity::kNone) return SpectralField(u.grid(), true);
  const int p = degree(nl);
  ArrayXr samples = synthesize(dealias(u, p)).real();
  samples = (p == 2) ? ArrayXr(samples.square()) : ArrayXr(samples.cube());
  samples *= sign(nl);
  return dealias(analyze(u.grid(), samples), p);
}

std::vector<Real> simpson_weights(std::size_t count, Real h) {
  if (count < 3) throw PreconditionError("simpson_weights: need at least three samples");
  std::vector<Real> w(count, 0.0);
  const std::size_t intervals = count - 1;
  const std::size_t simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
  for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
    w[j] += h / 3;
    w[j + 1] += 4 * h / 3;
    w[j + 2] += h / 3;
  }
  if (intervals % 2 == 1) {
    const std::size_t s = simpson_end;
    w[s] += 3 * h / 8;
    w[s + 1] += 9 * h / 8;
    w[s + 2] += 9 * h / 8;
    w[s + 3] += 3 * h / 8;
  }
  return w;
}

namespace {

// -|xi|^2 f(u): the Laplacian of the nonlinearity.
SpectralField laplacian_of_nonlinearity(const SpectralField& u, Nonlinearity nl) {
  return apply_multiplier(apply_nonlinearity(u, nl), [](Real r) { return -r * r; });
}

// Indices of modes that can carry a nonzero Laplacian of f(u).
std::vector<Eigen::Index> active_modes(const GridSpec& grid, int degree) {
  std::vector<Eigen::Index> modes;
  const int cutoff = dealias_cutoff(grid, std::max(degree, 2));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto k = grid.wavevector(i);
    if (std::abs(k[0]) <= cutoff && std::abs(k[1]) <= cutoff && std::abs(k[2]) <= cutoff)
      modes.push_back(static_cast<Eigen::Index>(i));
  }
  return modes;
}

SpectralField project_data(const SpectralField& f, Nonlinearity nl) {
  return nl == Nonlinearity::kNone ? f : dealias(f, degree(nl));
}

}  // namespace

SpectralField duhamel_rhs(DispersionParams params, std::span<const SpectralField> history, Nonlinearity nl, Real t) {
  params.require_signed("duhamel_rhs");
  if (history.size() < 3) throw PreconditionError("duhamel_rhs: need at least three history samples");
  const GridSpec& grid = history.front().grid();
  SpectralField out(grid, true);
  if (nl == Nonlinearity::kNone || t == 0) return out;
  const std::size_t count = history.size();
  const Real h = t / static_cast<Real>(count - 1);
  const auto w = simpson_weights(count, h);
  const auto table = frequency_magnitudes(grid);
  for (std::size_t j = 0; j < count; ++j) {
    require_same_grid(history[j], history.front(), "duhamel_rhs");
    const Real lag = t - static_cast<Real>(j) * h;
    const SpectralField lf = laplacian_of_nonlinearity(history[j], nl);
    for (Eigen::Index i = 0; i < out.coeffs().size(); ++i) {
      if (lf.coeffs()[i] == Complex(0)) continue;
      const Real m = phase_unchecked(params.beta(), (*table)[i]);
      out.coeffs()[i] += w[j] * sine_over_phase(lag, m) * lf.coeffs()[i];
    }
  }
  return out;
}

PicardResult picard_solve(DispersionParams params, const SpectralField& u0_in, const SpectralField& u1_in,
                          Nonlinearity nl, Real T, Real tol, int max_iter, int intervals) {
  params.require_signed("picard_solve");
  require_same_grid(u0_in, u1_in, "picard_solve");
  if (intervals < 2) throw PreconditionError("picard_solve: need at least two time intervals");
  if (!(T > 0)) throw PreconditionError("picard_solve: T must be positive");
  const SpectralField u0 = project_data(u0_in, nl);
  const SpectralField u1 = project_data(u1_in, nl);
  const GridSpec& grid = u0.grid();
  const auto samples = static_cast<std::size_t>(intervals) + 1;
  const Real h = T / intervals;

  PicardResult result;
  std::vector<SpectralField> linear;
  for (std::size_t i = 0; i < samples; ++i) {
    result.times.push_back(static_cast<Real>(i) * h);
    linear.push_back(linear_evolve(params, u0, u1, result.times.back()).u);
  }
  result.u = linear;

  const auto table = frequency_magnitudes(grid);
  const auto modes = active_modes(grid, degree(nl));
  std::vector<Real> phase_of(modes.size());
  for (std::size_t q = 0; q < modes.size(); ++q) phase_of[q] = phase_unchecked(params.beta(), (*table)[modes[q]]);

  // Per-target quadrature weights over samples 0..max(i, 2).
  std::vector<std::vector<Real>> weights(samples);
  for (std::size_t i = 1; i < samples; ++i)
    weights[i] = (i == 1) ? std::vector<Real>{5 * h / 12, 8 * h / 12, -h / 12} : simpson_weights(i + 1, h);

  std::vector<Real> history;
  int growth_streak = 0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::vector<SpectralField> lf;
    lf.reserve(samples);
    for (const auto& u : result.u) lf.push_back(laplacian_of_nonlinearity(u, nl));

    std::vector<SpectralField> next = linear;
    for (std::size_t i = 1; i < samples; ++i) {
      ArrayXc& c = next[i].coeffs();
      const auto& w = weights[i];
      for (std::size_t j = 0; j < w.size(); ++j) {
        const Real lag = result.times[i] - static_cast<Real>(j) * h;
        const ArrayXc& src = lf[j].coeffs();
        for (std::size_t q = 0; q < modes.size(); ++q) {
          const Eigen::Index k = modes[q];
          c[k] += w[j] * sine_over_phase(lag, phase_of[q]) * src[k];
        }
      }
    }

    Real residual = 0;
    for (std::size_t i = 0; i < samples; ++i) residual = std::max(residual, (next[i] - result.u[i]).l2_norm());
    result.u = std::move(next);
    result.iterations = iter;
    result.residual = residual;

    if (!history.empty() && residual > history.back()) {
      if (++growth_streak >= 3) {
        std::ostringstream msg;
        msg << "picard_solve: residual grew on 3 consecutive iterations (last ratio "
            << residual / history.back() << "); the map is not contracting on [0, " << T << "]";
        throw ConvergenceError(msg.str());
      }
    } else {
      growth_streak = 0;
    }
    history.push_back(residual);
    if (residual <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

EvolutionState evolve_step(DispersionParams params, const EvolutionState& state, Nonlinearity nl, Real dt) {
  EvolutionState next = linear_advance(params, state, dt);
  if (nl == Nonlinearity::kNone) return next;
  static const Real offset = 0.5 / std::sqrt(3.0);
  const Real nodes[2] = {dt * (0.5 - offset), dt * (0.5 + offset)};
  const auto table = frequency_magnitudes(state.u.grid());
  const int beta = params.beta();
  for (Real s : nodes) {
    const SpectralField predicted = linear_evolve(params, state.u, state.ut, s).u;
    const SpectralField lf = laplacian_of_nonlinearity(predicted, nl);
    const Real lag = dt - s;
    const ArrayXc& src = lf.coeffs();
    ArrayXc& cu = next.u.coeffs();
    ArrayXc& cut = next.ut.coeffs();
    for (Eigen::Index i = 0; i < src.size(); ++i) {
      if (src[i] == Complex(0)) continue;
      const Real m = phase_unchecked(beta, (*table)[i]);
      cu[i] += 0.5 * dt * sine_over_phase(lag, m) * src[i];
      cut[i] += 0.5 * dt * std::cos(lag * m) * src[i];
    }
  }
  return next;
}

Complex field_mean(const SpectralField& field) { return field.coeffs()[0]; }

namespace {
bool finite_and_bounded(const EvolutionState& s, Real threshold) {
  if (!s.u.coeffs().allFinite() || !s.ut.coeffs().allFinite()) return false;
  // sum |c_k| bounds the sup norm of u.
  return s.u.coeffs().abs().sum() < threshold;
}
}  // namespace

StepResult step_evolve(DispersionParams params, const EvolutionState& state_in, Nonlinearity nl, Real dt,
                       int steps, const StepOptions& options) {
  params.require_signed("step_evolve");
  require_same_grid(state_in.u, state_in.ut, "step_evolve");
  if (!(dt > 0)) throw PreconditionError("step_evolve: dt must be positive");
  EvolutionState state{project_data(state_in.u, nl), project_data(state_in.ut, nl), state_in.time};
  const Complex mean_ut = field_mean(state.ut);
  const Real mean_scale = std::max(1.0, state.ut.coeffs().abs().maxCoeff());

  StepResult result;
  result.trajectory.push_back(state);
  const int stride = std::max(1, options.record_every);
  for (int n = 1; n <= steps; ++n) {
    EvolutionState next = evolve_step(params, state, nl, dt);
    next.time = state_in.time + n * dt;
    if (!finite_and_bounded(next, options.blowup_threshold)) {
      result.blew_up = true;
      if (result.trajectory.back().time != state.time) result.trajectory.push_back(state);
      return result;
    }
    if (std::abs(field_mean(next.ut) - mean_ut) > 1e-10 * mean_scale)
      throw std::logic_error("step_evolve: mean of u_t drifted");
    state = std::move(next);
    result.steps_taken = n;
    if (n % stride == 0 || n == steps) result.trajectory.push_back(state);
  }
  return result;
}

Real quadratic_energy(DispersionParams params, const SpectralField& u, const SpectralField& ut) {
  require_same_grid(u, ut, "energy");
  const GridSpec& grid = u.grid();
  const auto table = frequency_magnitudes(grid);
  const ArrayXr& r = *table;
  const ArrayXr r2 = r.square();
  const Real beta = params.beta();
  const ArrayXr potential_weight = 1.0 + beta * r2 + r2.square();
  Real kinetic = 0;
  for (Eigen::Index i = 1; i < r.size(); ++i) kinetic += std::norm(ut.coeffs()[i]) / r2[i];
  const Real potential = (potential_weight * u.coeffs().abs2()).sum();
  return 0.5 * grid.volume() * (kinetic + potential);
}

Real quartic_integral(const SpectralField& u) {
  const ArrayXr samples = synthesize(u).real();
  return u.grid().cell_volume() * samples.square().square().sum();
}

Real energy(DispersionParams params, const EvolutionState& state, Nonlinearity nl) {
  const Real scale = std::max(1e-300, state.ut.coeffs().abs().maxCoeff());
  if (std::abs(field_mean(state.ut)) > 1e-12 * std::max(1.0, scale))
    throw PreconditionError("energy: u_t must have zero mean for the (-Delta)^{-1/2} term");
  Real e = quadratic_energy(params, state.u, state.ut);
  if (is_cubic(nl)) e += sign(nl) * 0.25 * quartic_integral(state.u);
  return e;
}

void write_trajectory_csv(const std::filesystem::path& path, DispersionParams params, Nonlinearity nl,
                          std::span<const EvolutionState> trajectory) {
  detail::CsvWriter csv(path, {"time", "L2_norm", "H2_norm", "energy", "sup_norm"});
  for (const auto& s : trajectory) {
    const ArrayXc samples = synthesize(s.u);
    csv.row({s.time, s.u.l2_norm(), spatial_norm(s.u, NormSpec::sobolev(2)), energy(params, s, nl),
             lebesgue_norm(s.u.grid(), samples, std::numeric_limits<Real>::infinity())});
  }
}

}  // namespace boussinesq
