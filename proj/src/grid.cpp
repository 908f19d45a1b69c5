#include "boussinesq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <string>

#include "fft_engine.hpp"

namespace boussinesq {

namespace {
bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }
}  // namespace

GridSpec::GridSpec(int dimension, Real period, int points)
    : dimension_(dimension), period_(period), points_(points), size_(1) {
  if (dimension < 1 || dimension > 3) throw DomainError("GridSpec: dimension must be 1, 2 or 3");
  if (!(period > 0) || !std::isfinite(period)) throw DomainError("GridSpec: period must be positive");
  if (points < 8 || !is_power_of_two(points))
    throw DomainError("GridSpec: points per axis must be a power of two >= 8, got " + std::to_string(points));
  for (int d = 0; d < dimension; ++d) size_ *= static_cast<std::size_t>(points);
}

Real GridSpec::cell_volume() const { return std::pow(spacing(), dimension_); }
Real GridSpec::volume() const { return std::pow(period_, dimension_); }

std::array<int, 3> GridSpec::wavevector(std::size_t flat) const {
  std::array<int, 3> k{0, 0, 0};
  const auto n = static_cast<std::size_t>(points_);
  for (int d = dimension_ - 1; d >= 0; --d) {
    k[static_cast<std::size_t>(d)] = wavenumber(static_cast<int>(flat % n));
    flat /= n;
  }
  return k;
}

std::size_t GridSpec::flat_index(const std::array<int, 3>& k) const {
  std::size_t flat = 0;
  for (int d = 0; d < dimension_; ++d)
    flat = flat * static_cast<std::size_t>(points_) + static_cast<std::size_t>(storage_index(k[static_cast<std::size_t>(d)]));
  return flat;
}

std::size_t GridSpec::mirror(std::size_t flat) const {
  auto k = wavevector(flat);
  for (auto& c : k) c = -c;
  return flat_index(k);
}

std::shared_ptr<const ArrayXr> frequency_magnitudes(const GridSpec& grid) {
  static std::mutex mutex;
  static std::deque<std::pair<GridSpec, std::shared_ptr<const ArrayXr>>> cache;
  {
    std::lock_guard lock(mutex);
    for (const auto& [g, table] : cache)
      if (g == grid) return table;
  }
  auto table = std::make_shared<ArrayXr>(static_cast<Eigen::Index>(grid.size()));
  const Real unit = grid.frequency_unit();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = grid.wavevector(i);
    const Real k2 = Real(k[0]) * k[0] + Real(k[1]) * k[1] + Real(k[2]) * k[2];
    (*table)[static_cast<Eigen::Index>(i)] = unit * std::sqrt(k2);
  }
  std::lock_guard lock(mutex);
  cache.emplace_back(grid, table);
  if (cache.size() > 6) cache.pop_front();
  return table;
}

SpectralField::SpectralField(const GridSpec& grid, bool real)
    : grid_(grid), coeffs_(ArrayXc::Zero(static_cast<Eigen::Index>(grid.size()))), real_(real) {}

SpectralField::SpectralField(const GridSpec& grid, ArrayXc coeffs, bool real)
    : grid_(grid), coeffs_(std::move(coeffs)), real_(real) {
  if (static_cast<std::size_t>(coeffs_.size()) != grid.size())
    throw PreconditionError("SpectralField: coefficient count does not match grid");
}

void SpectralField::set_mode(const std::array<int, 3>& k, Complex value) {
  const std::size_t i = grid_.flat_index(k);
  coeffs_[static_cast<Eigen::Index>(i)] = value;
  if (real_) {
    const std::size_t j = grid_.mirror(i);
    coeffs_[static_cast<Eigen::Index>(j)] = (i == j) ? Complex(value.real(), 0) : std::conj(value);
  }
}

Real SpectralField::l2_norm() const { return std::sqrt(grid_.volume() * coeffs_.abs2().sum()); }

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* operation) {
  if (!(a.grid() == b.grid())) throw PreconditionError(std::string(operation) + ": grid mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*this, other, "operator+=");
  coeffs_ += other.coeffs_;
  real_ = real_ && other.real_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*this, other, "operator-=");
  coeffs_ -= other.coeffs_;
  real_ = real_ && other.real_;
  return *this;
}

SpectralField& SpectralField::operator*=(Real scale) {
  coeffs_ *= scale;
  return *this;
}

SpectralField& SpectralField::operator*=(Complex scale) {
  coeffs_ *= scale;
  if (scale.imag() != 0) real_ = false;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(Real s, SpectralField a) { return a *= s; }
SpectralField operator*(Complex s, SpectralField a) { return a *= s; }

Real hermitian_defect(const SpectralField& field) {
  const auto& c = field.coeffs();
  const Real scale = c.abs().maxCoeff();
  if (scale == 0) return 0;
  Real worst = 0;
  for (std::size_t i = 0; i < field.grid().size(); ++i) {
    const std::size_t j = field.grid().mirror(i);
    worst = std::max(worst, std::abs(c[static_cast<Eigen::Index>(j)] - std::conj(c[static_cast<Eigen::Index>(i)])));
  }
  return worst / scale;
}

void enforce_hermitian(SpectralField& field) {
  auto& c = field.coeffs();
  for (std::size_t i = 0; i < field.grid().size(); ++i) {
    const std::size_t j = field.grid().mirror(i);
    if (j < i) continue;
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    const Complex avg = 0.5 * (c[ii] + std::conj(c[jj]));
    c[ii] = avg;
    c[jj] = std::conj(avg);
  }
  field.set_real(true);
}

ArrayXc synthesize(const SpectralField& field) {
  ArrayXc samples = field.coeffs();
  detail::fft_inplace(field.grid(), samples.data(), detail::FftDirection::kBackward);
  return samples;
}

ArrayXr synthesize_real(const SpectralField& field) {
  if (!field.real()) throw PreconditionError("synthesize_real: field is not real");
  return synthesize(field).real();
}

SpectralField analyze(const GridSpec& grid, const ArrayXc& samples) {
  if (static_cast<std::size_t>(samples.size()) != grid.size())
    throw PreconditionError("analyze: sample count " + std::to_string(samples.size()) +
                            " does not match grid size " + std::to_string(grid.size()));
  ArrayXc coeffs = samples;
  detail::fft_inplace(grid, coeffs.data(), detail::FftDirection::kForward);
  coeffs /= static_cast<Real>(grid.size());
  return SpectralField(grid, std::move(coeffs), false);
}

SpectralField analyze(const GridSpec& grid, const ArrayXr& samples) {
  SpectralField field = analyze(grid, ArrayXc(samples.cast<Complex>()));
  field.set_real(true);
  return field;
}

namespace {
template <typename Samples>
Real lebesgue_impl(const GridSpec& grid, const Samples& samples, Real p) {
  if (!(p >= 1)) throw DomainError("lebesgue_norm: exponent must be >= 1");
  const ArrayXr mod = samples.abs();
  if (std::isinf(p)) return mod.size() ? mod.maxCoeff() : 0.0;
  if (p == 2) return std::sqrt(grid.cell_volume() * mod.square().sum());
  return std::pow(grid.cell_volume() * mod.pow(p).sum(), 1.0 / p);
}
}  // namespace

Real lebesgue_norm(const GridSpec& grid, const ArrayXc& samples, Real p) { return lebesgue_impl(grid, samples, p); }
Real lebesgue_norm(const GridSpec& grid, const ArrayXr& samples, Real p) { return lebesgue_impl(grid, samples, p); }

std::array<Real, 3> sample_position(const GridSpec& grid, std::size_t flat) {
  std::array<Real, 3> x{0, 0, 0};
  const auto n = static_cast<std::size_t>(grid.points());
  for (int d = grid.dimension() - 1; d >= 0; --d) {
    x[static_cast<std::size_t>(d)] = static_cast<Real>(flat % n) * grid.spacing();
    flat /= n;
  }
  return x;
}

}  // namespace boussinesq
