#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "boussinesq/kernels.hpp"

using namespace boussinesq;

TEST_SUITE("kernels") {

// Reference values from 30-digit arithmetic.
TEST_CASE("Bessel values") {
  CHECK(bessel_j(0, 7) == doctest::Approx(0.3000792705195556).epsilon(1e-14));
  CHECK(bessel_j(1, 50) == doctest::Approx(-0.097511828125175138).epsilon(1e-13));
  CHECK(bessel_j(2, 0.1) == doctest::Approx(0.0012489586587999188).epsilon(1e-14));
  CHECK(bessel_j(0.5, 3) == doctest::Approx(0.065008182877375778).epsilon(1e-13));
  CHECK(bessel_j(-0.5, 3) == doctest::Approx(-0.45604882079463318).epsilon(1e-14));
  CHECK(bessel_j(1.5, 12) == doctest::Approx(-0.20466344849652969).epsilon(1e-14));
  CHECK(std::abs(bessel_j(0.5, kPi)) < 1e-16);
  CHECK_THROWS_AS(bessel_j(0, 0), DomainError);
  CHECK_THROWS_AS(bessel_j(3, 1), DomainError);
}

TEST_CASE("Bessel recurrence and bounds on [0.1, 50]") {
  for (Real r = 0.1; r <= 50; r += 0.01) {
    CHECK(std::abs(bessel_j(-0.5, r) + bessel_j(1.5, r) - bessel_j(0.5, r) / r) <= 1e-8);
    CHECK(std::abs(bessel_j(0, r) + bessel_j(2, r) - 2 * bessel_j(1, r) / r) <= 1e-8);
    for (Real k : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0}) {
      if (k >= 0) CHECK(std::abs(bessel_j(k, r)) <= 1);
      CHECK(std::abs(bessel_j(k, r)) * std::sqrt(r) <= 1);
    }
  }
}

TEST_CASE("radial factor is continuous at zero") {
  for (int n = 1; n <= 3; ++n) CHECK(radial_bessel_factor(n, 1e-9) == doctest::Approx(radial_bessel_factor(n, 0)));
  CHECK(radial_bessel_factor(2, 0) == 1.0);
}

TEST_CASE("panel count") {
  CHECK(kernel_panel_count(DispersionParams(0), 8, 0, 0) == 16);
  CHECK(kernel_panel_count(DispersionParams(1), 8, 0, 10) > kernel_panel_count(DispersionParams(1), 8, 0, 1));
}

// Reference values: 30-digit adaptive quadrature of the radial form.
TEST_CASE("kernel against reference quadrature") {
  struct Row {
    int n, beta;
    Real lambda, x, t, re, im;
  };
  const Row rows[] = {
      {1, -1, 8, 1.9, 0.01, -3.528185693887655, 0.57407870741820851},
      {2, -1, 8, 1.9, 0.01, -14.243248034912475, -11.126584844669475},
      {3, -1, 8, 1.9, 0.01, -9.2054378078479841, -92.156775317840821},
      {1, 0, 4, 0, 0, 6.0, 0.0},
      {3, 1, 4, 0.5, 0.3, 0.055827415415676049, 1.2422968865802035},
      {2, 1, 16, 7.7, 0.01, 4.3169788071653414, 8.3117593267866435},
  };
  for (const Row& r : rows) {
    CAPTURE(r.n);
    CAPTURE(r.x);
    const Complex k = kernel_radial(DispersionParams(r.beta), r.n, r.lambda, r.x, r.t);
    CHECK(std::abs(k - Complex(r.re, r.im)) <= 1e-8 * std::abs(Complex(r.re, r.im)));
  }
  CHECK_THROWS_AS(kernel_radial(DispersionParams(1), 1, 2, 0, 1), PreconditionError);
}

TEST_CASE("sup scan matches the reference path") {
  for (int n : {1, 2, 3}) {
    const SupScanResult r = sup_scan(DispersionParams(1), n, 8, 1);
    CAPTURE(n);
    CHECK(r.sup == doctest::Approx(std::abs(kernel_radial(DispersionParams(1), n, 8, r.argmax, 1))).epsilon(1e-6));
    // The maximiser of a scan can only beat the sampled origin.
    CHECK(r.sup >= std::abs(kernel_radial(DispersionParams(1), n, 8, 0, 1)) * (1 - 1e-9));
  }
}

TEST_CASE("decay fit") {
  std::vector<Real> t, v;
  for (int i = 0; i < 8; ++i) t.push_back(1 + i), v.push_back(2.5 * std::pow(1.0 + i, -1.25));
  const DecayFitResult fit = decay_fit(t, v);
  CHECK(fit.exponent == doctest::Approx(-1.25).epsilon(1e-13));
  CHECK(std::exp(fit.log_prefactor) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(fit.residual_rms < 1e-13);
  CHECK(fit.sample_range.second == 8);
  CHECK_THROWS(decay_fit(std::vector<Real>(t.begin(), t.begin() + 5), std::vector<Real>(v.begin(), v.begin() + 5)));
}

TEST_CASE("van der Corput bound") {
  const std::vector<Real> g{1, 0.5, 2};
  CHECK(corput_bound(g, 1, 4, 0, 1) == doctest::Approx(0.5 * (2 + 2)));
  CHECK_THROWS_AS(corput_bound(g, 0, 4, 0, 1), DomainError);
}

TEST_CASE("kernel sweep CSV") {
  const auto path = std::filesystem::temp_directory_path() / "boussinesq-kernel-sweep.csv";
  const std::vector<KernelSweepRow> rows{{1, -1, 16, 2, 0.5, 1.25}};
  write_kernel_sweep_csv(path, rows);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header == "n,beta,lambda,t,sup_abs,scaled_value");
  CHECK(line == "1,-1,16,2,0.5,1.25");
  std::filesystem::remove(path);
}

}
