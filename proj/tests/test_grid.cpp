#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "boussinesq/dyadic.hpp"
#include "boussinesq/field_io.hpp"
#include "boussinesq/propagator.hpp"

using namespace boussinesq;

namespace {

SpectralField random_field(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal;
  const auto table = frequency_magnitudes(grid);
  SpectralField f(grid);
  for (Eigen::Index i = 1; i < f.coeffs().size(); ++i) {
    const Real re = normal(rng);
    f.coeffs()[i] = Complex(re, normal(rng)) * std::exp(-0.5 * (*table)[i]);
  }
  enforce_hermitian(f);
  return f;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("grid contracts") {
  CHECK_THROWS(GridSpec(1, 1, 100));
  CHECK_THROWS(GridSpec(4, 1, 8));
  CHECK_THROWS(GridSpec(1, -1, 8));
  const GridSpec g(2, 4 * kPi, 16);
  CHECK(g.size() == 256);
  CHECK(g.nyquist() == doctest::Approx(4.0));
  CHECK(g.wavenumber(9) == -7);
  CHECK(g.storage_index(-1) == 15);
  CHECK(g.flat_index(g.wavevector(37)) == 37);
}

TEST_CASE("single mode synthesizes to a cosine") {
  const GridSpec g(1, 2 * kPi, 16);
  SpectralField f(g);
  f.set_mode({3, 0, 0}, 0.5);
  f.set_mode({-3, 0, 0}, 0.5);
  const ArrayXr u = synthesize_real(f);
  for (int j = 0; j < 16; ++j) CHECK(u[j] == doctest::Approx(std::cos(3 * 2 * kPi * j / 16)).scale(1));
}

TEST_CASE("Parseval and round trip in three dimensions") {
  const GridSpec g(3, 3, 8);
  const SpectralField f = random_field(g, 4);
  const ArrayXr u = synthesize_real(f);
  CHECK(lebesgue_norm(g, u, 2) == doctest::Approx(f.l2_norm()).epsilon(1e-13));
  CHECK((analyze(g, u).coeffs() - f.coeffs()).abs().maxCoeff() < 1e-14);
  CHECK(hermitian_defect(f) < 1e-15);
}

TEST_CASE("field arithmetic refuses mixed grids") {
  SpectralField a(GridSpec(1, 1, 8)), b(GridSpec(1, 2, 8));
  CHECK_THROWS(a += b);
}

TEST_CASE("field serialization round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "boussinesq-grid-test";
  std::filesystem::create_directories(dir);
  const SpectralField f = random_field(GridSpec(2, 5.5, 8), 9);
  write_field(f, dir / "f");
  const SpectralField g = read_field(dir / "f");
  CHECK(g.grid() == f.grid());
  CHECK((g.coeffs() == f.coeffs()).all());
  std::filesystem::resize_file(dir / "f.bin", 100);
  CHECK_THROWS(read_field(dir / "f"));
  std::filesystem::remove_all(dir);
}

}

TEST_SUITE("dyadic") {

TEST_CASE("bump and annulus") {
  CHECK(cutoff_chi(1.5) == doctest::Approx(0.5));
  CHECK(annulus_rho(1.0) == 1.0);
  CHECK(annulus_rho(0.25) == 0.0);
  CHECK(annulus_rho(2.0) == 0.0);
  // A telescoping sum of annuli is one wherever the outer bump is one.
  for (Real s = 1; s < 16; s *= 1.07) {
    Real sum = 0;
    for (int j = 0; j < 5; ++j) sum += annulus_rho(s / std::ldexp(1.0, j));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("Bernstein ratio is bounded for band-limited data") {
  const GridSpec g(1, 32 * kPi, 1024);
  const SpectralField f = random_field(g, 2);
  for (Real lambda : {2.0, 4.0, 8.0}) {
    const Real ratio = bernstein_ratio(f, DyadicBand(lambda), 1, 8, 2);
    CHECK(ratio > 0.05);
    CHECK(ratio < 20);
  }
  CHECK_THROWS_AS(DyadicBand(6), DomainError);
}

}

TEST_SUITE("propagator") {

TEST_CASE("linear flow solves the wave equation mode by mode") {
  const DispersionParams p(1);
  const GridSpec g(1, 8 * kPi, 64);
  SpectralField u0(g), u1(g);
  u0.set_mode({2, 0, 0}, Complex(0.3, 0.1));
  u1.set_mode({2, 0, 0}, Complex(-0.2, 0.4));
  const Real xi = 2 * g.frequency_unit(), m = phase(p, xi), t = 1.3;
  const EvolutionState s = linear_evolve(p, u0, u1, t);
  const Complex expect = std::cos(m * t) * Complex(0.3, 0.1) + std::sin(m * t) / m * Complex(-0.2, 0.4);
  CHECK(std::abs(s.u.coeff({2, 0, 0}) - expect) < 1e-15);
  const Complex expect_t = -m * std::sin(m * t) * Complex(0.3, 0.1) + std::cos(m * t) * Complex(-0.2, 0.4);
  CHECK(std::abs(s.ut.coeff({2, 0, 0}) - expect_t) < 1e-14);
}

TEST_CASE("mean mode moves linearly") {
  const GridSpec g(1, 2 * kPi, 16);
  SpectralField u0(g), u1(g);
  u0.coeffs()[0] = 1;
  u1.coeffs()[0] = 2;
  const EvolutionState s = linear_evolve(DispersionParams(-1), u0, u1, 0.5);
  CHECK(s.u.coeffs()[0].real() == doctest::Approx(2.0));
  CHECK(sine_over_phase(0.5, 0) == 0.5);
}

TEST_CASE("advance composes") {
  const DispersionParams p(-1);
  const SpectralField f = random_field(GridSpec(2, 2 * kPi, 16), 3);
  const SpectralField g = random_field(GridSpec(2, 2 * kPi, 16), 5);
  EvolutionState s{f, g, 0};
  for (int i = 0; i < 4; ++i) s = linear_advance(p, s, 0.25);
  const EvolutionState d = linear_evolve(p, f, g, 1.0);
  CHECK((s.u - d.u).l2_norm() < 1e-13);
  CHECK((s.ut - d.ut).l2_norm() < 1e-12);
}

}
