// Periodic grids, Fourier coefficient fields and the transform contract.
//
// Convention: samples u(x_j), x_j = j L / N, relate to coefficients c_k by
//   u(x_j) = sum_k c_k exp(i xi_k . x_j),   xi_k = 2 pi k / L,
// so that Parseval reads ||u||^2_{L^2(box)} = L^n sum_k |c_k|^2.
#pragma once

#include <array>
#include <cstddef>
#include <memory>

#include "boussinesq/common.hpp"

namespace boussinesq {

class GridSpec {
 public:
  /// Throws DomainError unless dimension in {1,2,3}, period > 0 and points a
  /// power of two >= 8.
  GridSpec(int dimension, Real period, int points);

  int dimension() const { return dimension_; }
  Real period() const { return period_; }
  int points() const { return points_; }

  /// Total number of grid points N^n.
  std::size_t size() const { return size_; }
  Real spacing() const { return period_ / points_; }
  Real cell_volume() const;
  Real volume() const;
  /// Physical frequency of unit wavenumber, 2 pi / L.
  Real frequency_unit() const { return 2 * kPi / period_; }
  /// Largest representable axis frequency magnitude pi N / L.
  Real nyquist() const { return kPi * points_ / period_; }

  /// Signed wavenumber of a per-axis storage index (N/2 maps to -N/2).
  int wavenumber(int index) const { return index < points_ / 2 ? index : index - points_; }
  /// Storage index of a signed wavenumber.
  int storage_index(int k) const { return ((k % points_) + points_) % points_; }

  /// Per-axis wavenumbers of a flat storage index (unused axes are 0).
  std::array<int, 3> wavevector(std::size_t flat) const;
  std::size_t flat_index(const std::array<int, 3>& k) const;
  /// Flat index of -k.
  std::size_t mirror(std::size_t flat) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dimension_;
  Real period_;
  int points_;
  std::size_t size_;
};

/// |xi_k| for every flat index. Tables are cached and shared.
std::shared_ptr<const ArrayXr> frequency_magnitudes(const GridSpec& grid);

/// Complex Fourier coefficients on a periodic grid. real() marks fields whose
/// coefficients are Hermitian, c(-k) = conj(c(k)).
class SpectralField {
 public:
  explicit SpectralField(const GridSpec& grid, bool real = true);
  SpectralField(const GridSpec& grid, ArrayXc coeffs, bool real);

  const GridSpec& grid() const { return grid_; }
  bool real() const { return real_; }
  void set_real(bool real) { real_ = real; }

  const ArrayXc& coeffs() const { return coeffs_; }
  ArrayXc& coeffs() { return coeffs_; }

  Complex coeff(const std::array<int, 3>& k) const { return coeffs_[grid_.flat_index(k)]; }
  /// Sets c(k); for real fields also sets c(-k) = conj(value).
  void set_mode(const std::array<int, 3>& k, Complex value);

  /// Physical-space L2 norm via Parseval.
  Real l2_norm() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Real scale);
  SpectralField& operator*=(Complex scale);

 private:
  GridSpec grid_;
  ArrayXc coeffs_;
  bool real_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(Real s, SpectralField a);
SpectralField operator*(Complex s, SpectralField a);

/// Throws PreconditionError when the two fields live on different grids.
void require_same_grid(const SpectralField& a, const SpectralField& b, const char* operation);

/// Largest |c(-k) - conj c(k)| relative to max |c|; zero for exact symmetry.
Real hermitian_defect(const SpectralField& field);
/// Projects onto Hermitian-symmetric coefficients and sets real().
void enforce_hermitian(SpectralField& field);

/// Inverse transform: physical samples on the N^n grid, row-major.
ArrayXc synthesize(const SpectralField& field);
/// Real part of synthesize(); the field must be real().
ArrayXr synthesize_real(const SpectralField& field);

/// Forward transform, the inverse of synthesize. Throws PreconditionError when
/// the sample count does not match the grid.
SpectralField analyze(const GridSpec& grid, const ArrayXc& samples);
SpectralField analyze(const GridSpec& grid, const ArrayXr& samples);

/// Rectangle-rule L^p norm of grid samples with cell volume (L/N)^n;
/// p = infinity gives the grid maximum.
Real lebesgue_norm(const GridSpec& grid, const ArrayXc& samples, Real p);
Real lebesgue_norm(const GridSpec& grid, const ArrayXr& samples, Real p);

/// Physical coordinates of the flat sample index (unused axes are 0).
std::array<Real, 3> sample_position(const GridSpec& grid, std::size_t flat);

}  // namespace boussinesq
