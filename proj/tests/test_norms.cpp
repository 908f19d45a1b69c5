#include <doctest.h>

#include <cmath>
#include <random>

#include "boussinesq/experiments.hpp"

using namespace boussinesq;

TEST_SUITE("norms") {

TEST_CASE("spec factories enforce their ranges") {
  CHECK_THROWS_AS(NormSpec::gevrey(-1, 0, GevreyWeight::kExp), DomainError);
  CHECK_THROWS_AS(NormSpec::bourgain(0, 0.5), DomainError);
  CHECK_THROWS(NormSpec::mixed(2, 4, 1));
  CHECK_THROWS(NormSpec::mixed(std::numeric_limits<Real>::infinity(), 4, 1));
  CHECK_NOTHROW(NormSpec::mixed(4, std::numeric_limits<Real>::infinity(), 1));
  CHECK(fourier_weight(NormSpec::sobolev(2), 1.0) == doctest::Approx(4.0));
  CHECK(fourier_weight(NormSpec::gevrey(1, 0, GevreyWeight::kCosh), 2.0) == doctest::Approx(std::cosh(2.0)));
}

TEST_CASE("exponents and admissible pairs") {
  CHECK(Exponent::parse("10/3").to_string() == "10/3");
  CHECK(Exponent::parse("inf").infinite());
  CHECK_THROWS(Exponent::parse("x"));
  CHECK(AdmissiblePair::admissible(2, Exponent::integer(4), Exponent::integer(4)));
  CHECK(AdmissiblePair::admissible(1, Exponent::integer(4), Exponent::infinity()));
  CHECK(AdmissiblePair::admissible(3, Exponent::integer(4), Exponent::integer(3)));
  CHECK_FALSE(AdmissiblePair::admissible(2, Exponent::integer(2), Exponent::infinity()));
  CHECK_THROWS_AS(AdmissiblePair(1, Exponent::integer(4), Exponent::integer(4)), DomainError);
}

TEST_CASE("rectangle-rule mixed norm") {
  const std::vector<Real> t{0, 0.5}, v{1, 2};
  CHECK(mixed_norm_from_slices(t, v, 4, 1) == doctest::Approx(std::pow(8.5, 0.25)));
  CHECK_THROWS(mixed_norm_from_slices(std::vector<Real>{0.1}, std::vector<Real>{1}, 4, 1));
}

TEST_CASE("time window") {
  CHECK(time_window(0.5, 1) == 1.0);
  CHECK(time_window(0.0, 1) == 0.0);
  CHECK(time_window(1.0, 1) == 0.0);
}

TEST_CASE("X^{s,b} of a free wave does not depend on the dispersion sign") {
  // After demodulation a free wave is the windowed data, for any m.
  const GridSpec g(1, 32 * kPi, 2048);
  std::mt19937_64 rng(1);
  const SpectralField f = band_profile(g, 16, rng);
  const auto times = uniform_time_grid(4, 64);
  const Real a = xsb_norm(DispersionParams(1), half_wave_trajectory(DispersionParams(1), f, times), times,
                          NormSpec::bourgain(1, 0.7));
  const Real b = xsb_norm(DispersionParams(-1), half_wave_trajectory(DispersionParams(-1), f, times), times,
                          NormSpec::bourgain(1, 0.7));
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
  CHECK_THROWS_AS(xsb_norm(DispersionParams(1), half_wave_trajectory(DispersionParams(1), f, times),
                           std::vector<Real>(times.begin(), times.begin() + 5), NormSpec::bourgain(1, 0.7)),
                  PreconditionError);
}

TEST_CASE("estimate bounds") {
  CHECK(bilinear_bound(1, 4, 64, EstimateRegime::kHighFrequency) == doctest::Approx(std::pow(64.0, -0.25)));
  CHECK(trilinear_bound(1, 4, 16, 64, EstimateRegime::kHighMedian) == doctest::Approx(std::pow(16.0 * 64, -0.25)));
  CHECK(trilinear_bound(1, 4, 16, 64, EstimateRegime::kHighFrequency) == doctest::Approx(2 * std::pow(64.0, -0.25)));
  CHECK(bilinear_bound(2, 4, 64, EstimateRegime::kGeneral) == doctest::Approx(4.0));
  CHECK_THROWS(bilinear_bound(1, 4, 64, EstimateRegime::kHighMedian));
}

TEST_CASE("Strichartz ratio of a band profile is order one") {
  const GridSpec g(1, 64 * kPi, 4096);
  std::mt19937_64 rng(3);
  const SpectralField f = band_profile(g, 16, rng);
  const auto times = dispersive_time_grid(16, 8, 200, 1e-3);
  const EstimateRatio r = strichartz_ratio(DispersionParams(-1), DyadicBand(16), f,
                                           AdmissiblePair(1, Exponent::integer(4), Exponent::infinity()), times);
  CHECK(r.ratio > 0.05);
  CHECK(r.ratio < 20);
  CHECK(r.ratio == doctest::Approx(r.lhs / r.rhs));
}

TEST_CASE("estimate sweeps are reproducible") {
  const GridSpec g(1, 16 * kPi, 2048);
  EstimateSettings s;
  s.sweep = {8, 16, 32};
  s.draws = 3;
  s.time_samples = 32;
  const EstimateSweep a = estimate_sweep(DispersionParams(1), g, s), b = estimate_sweep(DispersionParams(1), g, s);
  REQUIRE(a.rows.size() == 9);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].value.ratio == b.rows[i].value.ratio);
  CHECK(a.spread >= 1);
  s.fixed = {4, 8};
  s.regime = EstimateRegime::kHighMedian;
  s.sweep = {32};
  const EstimateSweep t = estimate_sweep(DispersionParams(1), g, s);
  CHECK(t.rows.front().lambdas.size() == 3);
}

TEST_CASE("loglog fit") {
  const std::vector<Real> x{2, 4, 8}, y{0.5, 0.25, 0.125};
  CHECK(loglog_fit(x, y).exponent == doctest::Approx(-1.0));
  CHECK_THROWS(loglog_fit(std::vector<Real>{1}, std::vector<Real>{1}));
}

}
