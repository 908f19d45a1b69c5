#include "boussinesq/norms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "fft_engine.hpp"

namespace boussinesq {

NormSpec NormSpec::sobolev(Real s) {
  NormSpec spec;
  spec.kind_ = Kind::kSobolev;
  spec.s_ = s;
  return spec;
}

NormSpec NormSpec::gevrey(Real sigma, Real s, GevreyWeight weight) {
  if (!(sigma >= 0) || !std::isfinite(sigma)) throw DomainError("gevrey: sigma must be finite and nonnegative");
  NormSpec spec;
  spec.kind_ = Kind::kGevrey;
  spec.sigma_ = sigma;
  spec.s_ = s;
  spec.weight_ = weight;
  return spec;
}

NormSpec NormSpec::bourgain(Real s, Real b) {
  if (!(b > 0.5)) throw DomainError("bourgain: b must exceed 1/2");
  NormSpec spec;
  spec.kind_ = Kind::kBourgain;
  spec.s_ = s;
  spec.b_ = b;
  return spec;
}

NormSpec NormSpec::mixed(Real q, Real r, Real T) {
  if (!(q > 2) || !std::isfinite(q)) throw DomainError("mixed: q must satisfy 2 < q < inf");
  if (!(r >= 2)) throw DomainError("mixed: r must satisfy r >= 2");
  if (!(T > 0)) throw DomainError("mixed: T must be positive");
  NormSpec spec;
  spec.kind_ = Kind::kMixed;
  spec.q_ = q;
  spec.r_ = r;
  spec.T_ = T;
  return spec;
}

Real fourier_weight(const NormSpec& spec, Real xi) {
  Real w = std::pow(bracket(xi), spec.s());
  if (spec.kind() == NormSpec::Kind::kGevrey) {
    const Real x = spec.sigma() * xi;
    if (x > kGevreyExponentLimit) throw DomainError("gevrey weight: sigma |xi| exceeds the overflow guard");
    w *= spec.weight() == GevreyWeight::kExp ? std::exp(x) : std::cosh(x);
  }
  return w;
}

Real spatial_norm(const SpectralField& field, const NormSpec& spec) {
  if (spec.kind() != NormSpec::Kind::kSobolev && spec.kind() != NormSpec::Kind::kGevrey)
    throw PreconditionError("spatial_norm: needs a Sobolev or Gevrey spec");
  const auto table = frequency_magnitudes(field.grid());
  const ArrayXr& r = *table;
  if (spec.kind() == NormSpec::Kind::kGevrey && spec.sigma() * r.maxCoeff() > kGevreyExponentLimit)
    throw DomainError("spatial_norm: sigma * max|xi| = " + std::to_string(spec.sigma() * r.maxCoeff()) +
                      " exceeds the overflow guard " + std::to_string(kGevreyExponentLimit));
  const ArrayXr a2 = field.coeffs().abs2();
  Real sum = 0;
  for (Eigen::Index i = 0; i < a2.size(); ++i) {
    if (a2[i] == 0) continue;
    const Real w = fourier_weight(spec, r[i]);
    sum += w * w * a2[i];
  }
  return std::sqrt(field.grid().volume() * sum);
}

Real time_window(Real t, Real T) { return cutoff_chi((t - T / 2) / (T / 4)); }

namespace {

Real uniform_step(std::span<const Real> times, std::size_t count) {
  if (times.size() != count) throw PreconditionError("xsb_norm: one time per sample required");
  if (count < 8 || (count & (count - 1)) != 0)
    throw PreconditionError("xsb_norm: sample count must be a power of two >= 8");
  const Real dt = (times.back() - times.front()) / static_cast<Real>(count - 1);
  if (!(dt > 0)) throw PreconditionError("xsb_norm: times must increase");
  const Real tol = 1e-9 * std::max(1.0, std::abs(times.back()));
  for (std::size_t j = 0; j < count; ++j)
    if (std::abs(times[j] - (times.front() + static_cast<Real>(j) * dt)) > tol)
      throw PreconditionError("xsb_norm: samples must be uniform in time");
  return dt;
}

}  // namespace

Real xsb_norm_weighted(DispersionParams params, std::span<const SpectralField> trajectory, std::span<const Real> times,
                       Real s, Real b, TemporalCentering centering) {
  if (!(b >= 0)) throw DomainError("xsb_norm: b must be nonnegative");
  const std::size_t count = trajectory.size();
  const Real dt = uniform_step(times, count);
  const GridSpec& grid = trajectory.front().grid();
  for (const auto& f : trajectory) require_same_grid(f, trajectory.front(), "xsb_norm");
  const Real T = dt * static_cast<Real>(count);
  const Real t0 = times.front();
  const GridSpec time_grid(1, T, static_cast<int>(count));

  std::vector<Real> window(count);
  for (std::size_t j = 0; j < count; ++j) window[j] = time_window(times[j] - t0, T);

  const auto table = frequency_magnitudes(grid);
  std::vector<Complex> buffer(count);
  Real sum = 0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(grid.size()); ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < count; ++j) {
      buffer[j] = window[j] * trajectory[j].coeffs()[i];
      nonzero = nonzero || buffer[j] != Complex(0);
    }
    if (!nonzero) continue;
    const Real xi = (*table)[i];
    const Real m = phase_unchecked(params.beta(), xi);
    const Real center = centering == TemporalCentering::kDispersion ? m : 0;
    if (center != 0)
      for (std::size_t j = 0; j < count; ++j) buffer[j] *= std::polar(1.0, -center * (times[j] - t0));
    detail::fft_inplace(time_grid, buffer.data(), detail::FftDirection::kForward);
    const Real space_weight = std::pow(bracket(xi), 2 * s);
    for (std::size_t l = 0; l < count; ++l) {
      const Real tau = center + time_grid.frequency_unit() * time_grid.wavenumber(static_cast<int>(l));
      const Real w = b == 0 ? 1.0 : std::pow(bracket(std::abs(std::abs(tau) - m)), 2 * b);
      sum += space_weight * w * std::norm(buffer[l]);
    }
  }
  return std::sqrt(grid.volume() * dt / static_cast<Real>(count) * sum);
}

Real xsb_norm(DispersionParams params, std::span<const SpectralField> trajectory, std::span<const Real> times,
              const NormSpec& spec, TemporalCentering centering) {
  if (spec.kind() != NormSpec::Kind::kBourgain) throw PreconditionError("xsb_norm: needs a Bourgain spec");
  return xsb_norm_weighted(params, trajectory, times, spec.s(), spec.b(), centering);
}

Real mixed_norm_from_slices(std::span<const Real> times, std::span<const Real> slice_norms, Real q, Real T) {
  if (times.size() != slice_norms.size() || times.empty())
    throw PreconditionError("mixed_norm: one slice norm per time required");
  if (std::abs(times.front()) > 1e-12 * std::max(1.0, T)) throw PreconditionError("mixed_norm: samples must start at t = 0");
  if (times.back() > T * (1 + 1e-12)) throw PreconditionError("mixed_norm: samples extend beyond T");
  Real sum = 0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const Real next = j + 1 < times.size() ? times[j + 1] : T;
    const Real w = next - times[j];
    if (w < 0) throw PreconditionError("mixed_norm: times must increase");
    sum += w * std::pow(slice_norms[j], q);
  }
  return std::pow(sum, 1 / q);
}

Real mixed_norm(std::span<const SpectralField> trajectory, std::span<const Real> times, const NormSpec& spec) {
  if (spec.kind() != NormSpec::Kind::kMixed) throw PreconditionError("mixed_norm: needs a mixed spec");
  std::vector<Real> slices;
  slices.reserve(trajectory.size());
  for (const auto& f : trajectory) slices.push_back(lebesgue_norm(f.grid(), synthesize(f), spec.r()));
  return mixed_norm_from_slices(times, slices, spec.q(), spec.T());
}

Exponent Exponent::ratio(long long num, long long den) {
  if (num <= 0 || den <= 0) throw DomainError("exponent must be a positive rational");
  const long long g = std::gcd(num, den);
  Exponent e;
  e.num_ = num / g;
  e.den_ = den / g;
  return e;
}

Exponent Exponent::infinity() {
  Exponent e;
  e.infinite_ = true;
  e.num_ = 1;
  e.den_ = 0;
  return e;
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinity();
  const auto slash = text.find('/');
  auto to_int = [&](std::string_view part) {
    long long v = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size())
      throw DomainError("cannot parse exponent '" + text + "'");
    return v;
  };
  const std::string_view view(text);
  if (slash == std::string::npos) return integer(to_int(view));
  return ratio(to_int(view.substr(0, slash)), to_int(view.substr(slash + 1)));
}

Real Exponent::value() const {
  return infinite_ ? std::numeric_limits<Real>::infinity() : static_cast<Real>(num_) / static_cast<Real>(den_);
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

bool AdmissiblePair::admissible(int n, Exponent q, Exponent r) {
  if (n < 1 || q.infinite()) return false;
  // q = a/b > 2 and r = c/d >= 2.
  const long long a = q.num(), b = q.den();
  if (a <= 2 * b) return false;
  if (r.infinite()) return 2 * 2 * b == n * a;  // 2/q = n/2
  const long long c = r.num(), d = r.den();
  if (c < 2 * d) return false;
  // 2b/a + n d/c = n/2  <=>  2 (2 b c + n d a) = n a c
  return 2 * (2 * b * c + n * d * a) == n * a * c;
}

AdmissiblePair::AdmissiblePair(int n, Exponent q, Exponent r) : n_(n), q_(q), r_(r) {
  if (!admissible(n, q, r))
    throw DomainError("(q, r) = (" + q.to_string() + ", " + r.to_string() + ") is not admissible in dimension " +
                      std::to_string(n));
}

EstimateRatio strichartz_ratio(DispersionParams params, DyadicBand band, const SpectralField& f,
                               const AdmissiblePair& pair, std::span<const Real> times) {
  if (band.lambda() < 4) throw PreconditionError("strichartz_ratio: lambda must be at least 4");
  if (pair.dimension() != f.grid().dimension())
    throw PreconditionError("strichartz_ratio: pair dimension does not match the grid");
  if (times.empty()) throw PreconditionError("strichartz_ratio: no time samples");
  const SpectralField projected = dyadic_project(f, band);
  const Real norm = projected.l2_norm();
  if (!(norm > 0)) throw DomainError("strichartz_ratio: P_lambda f vanishes");

  const GridSpec& grid = f.grid();
  const auto table = frequency_magnitudes(grid);
  std::vector<Eigen::Index> support;
  std::vector<Real> phases;
  for (Eigen::Index i = 0; i < projected.coeffs().size(); ++i) {
    if (projected.coeffs()[i] == Complex(0)) continue;
    support.push_back(i);
    phases.push_back(phase_unchecked(params.beta(), (*table)[i]));
  }
  const Real r = pair.r().value();
  std::vector<Real> slices;
  slices.reserve(times.size());
  SpectralField evolved(grid, false);
  for (Real t : times) {
    for (std::size_t q = 0; q < support.size(); ++q)
      evolved.coeffs()[support[q]] = std::polar(1.0, t * phases[q]) * projected.coeffs()[support[q]];
    slices.push_back(lebesgue_norm(grid, synthesize(evolved), r));
  }
  const Real q = pair.q().value();
  EstimateRatio out;
  out.lhs = mixed_norm_from_slices(times, slices, q, times.back());
  out.rhs = std::pow(band.lambda(), -1 / q) * norm;
  out.ratio = out.lhs / out.rhs;
  return out;
}

Real bilinear_bound(int n, Real lambda1, Real lambda2, EstimateRegime regime, Real delta) {
  const Real lo = std::min(lambda1, lambda2), hi = std::max(lambda1, lambda2);
  switch (regime) {
    case EstimateRegime::kGeneral: return std::pow(lo, n / 2.0);
    case EstimateRegime::kHighFrequency:
      if (n == 1) return std::pow(hi, -0.25);
      return std::pow(lo, n / 2.0 - 1 + 2 * delta) * std::pow(hi, -0.5 + delta);
    case EstimateRegime::kHighMedian: break;
  }
  throw DomainError("bilinear_bound: the high-median regime applies to trilinear products only");
}

Real trilinear_bound(int n, Real lambda1, Real lambda2, Real lambda3, EstimateRegime regime, Real delta) {
  std::array<Real, 3> l{lambda1, lambda2, lambda3};
  std::sort(l.begin(), l.end());
  const Real lo = l[0], med = l[1], hi = l[2];
  switch (regime) {
    case EstimateRegime::kGeneral: return std::pow(lo * med, n / 2.0);
    case EstimateRegime::kHighFrequency:
      if (n == 1) return std::sqrt(lo) * std::pow(hi, -0.25);
      return std::pow(lo, n / 2.0) * std::pow(med, n / 2.0 - 1 + 2 * delta) * std::pow(hi, -0.5 + delta);
    case EstimateRegime::kHighMedian:
      if (n != 1) throw DomainError("trilinear_bound: the high-median regime is one-dimensional");
      return std::pow(med * hi, -0.25);
  }
  return 0;
}

namespace {

std::vector<SpectralField> project_trajectory(std::span<const SpectralField> u, DyadicBand band) {
  std::vector<SpectralField> out;
  out.reserve(u.size());
  for (const auto& f : u) out.push_back(dyadic_project(f, band));
  return out;
}

EstimateRatio product_ratio(DispersionParams params, std::span<const DyadicBand> bands,
                            std::span<const std::span<const SpectralField>> factors, std::span<const Real> times,
                            Real b, Real bound) {
  const std::size_t count = times.size();
  for (const auto& f : factors)
    if (f.size() != count) throw PreconditionError("estimate ratio: trajectories must share the time samples");
  const GridSpec& grid = factors[0].front().grid();
  Real edge_sum = 0;
  for (const auto& band : bands) edge_sum += band.upper();
  if (edge_sum >= grid.nyquist())
    throw PreconditionError("estimate ratio: the product of the bands aliases on this grid");

  std::vector<std::vector<SpectralField>> projected;
  for (std::size_t k = 0; k < factors.size(); ++k) projected.push_back(project_trajectory(factors[k], bands[k]));

  const Real dt = uniform_step(times, count);
  Real lhs2 = 0;
  for (std::size_t j = 0; j < count; ++j) {
    ArrayXc product = synthesize(projected[0][j]);
    for (std::size_t k = 1; k < projected.size(); ++k) product *= synthesize(projected[k][j]);
    lhs2 += dt * grid.cell_volume() * product.abs2().sum();
  }
  EstimateRatio out;
  out.lhs = std::sqrt(lhs2);
  Real rhs = bound;
  for (const auto& traj : projected) rhs *= xsb_norm(params, traj, times, NormSpec::bourgain(0, b));
  out.rhs = rhs;
  out.ratio = rhs > 0 ? out.lhs / rhs : 0;
  return out;
}

}  // namespace

EstimateRatio bilinear_ratio(DispersionParams params, DyadicBand l1, DyadicBand l2,
                             std::span<const SpectralField> u1, std::span<const SpectralField> u2,
                             std::span<const Real> times, Real b, EstimateRegime regime) {
  if (regime == EstimateRegime::kHighFrequency && std::max(l1.lambda(), l2.lambda()) < 8)
    throw PreconditionError("bilinear_ratio: the high-frequency regime needs max(lambda) >= 8");
  if (u1.empty()) throw PreconditionError("bilinear_ratio: empty trajectory");
  const int n = u1.front().grid().dimension();
  const std::array<DyadicBand, 2> bands{l1, l2};
  const std::array<std::span<const SpectralField>, 2> factors{u1, u2};
  return product_ratio(params, bands, factors, times, b, bilinear_bound(n, l1.lambda(), l2.lambda(), regime));
}

EstimateRatio trilinear_ratio(DispersionParams params, DyadicBand l1, DyadicBand l2, DyadicBand l3,
                              std::span<const SpectralField> u1, std::span<const SpectralField> u2,
                              std::span<const SpectralField> u3, std::span<const Real> times, Real b,
                              EstimateRegime regime) {
  if (regime == EstimateRegime::kHighFrequency && std::max({l1.lambda(), l2.lambda(), l3.lambda()}) < 8)
    throw PreconditionError("trilinear_ratio: the high-frequency regime needs max(lambda) >= 8");
  if (u1.empty()) throw PreconditionError("trilinear_ratio: empty trajectory");
  const int n = u1.front().grid().dimension();
  const std::array<DyadicBand, 3> bands{l1, l2, l3};
  const std::array<std::span<const SpectralField>, 3> factors{u1, u2, u3};
  return product_ratio(params, bands, factors, times, b,
                       trilinear_bound(n, l1.lambda(), l2.lambda(), l3.lambda(), regime));
}

}  // namespace boussinesq
