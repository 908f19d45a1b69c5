#include <doctest.h>

#include <cmath>

#include "boussinesq/norms.hpp"
#include "boussinesq/solver.hpp"

using namespace boussinesq;

namespace {

SpectralField packet(const GridSpec& g, Real h2) {
  ArrayXr v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Real x = sample_position(g, i)[0] - g.period() / 2;
    v[static_cast<Eigen::Index>(i)] = std::exp(-(x / 6) * (x / 6)) * std::cos(0.5 * x);
  }
  SpectralField f = dealias(analyze(g, v), 3);
  f *= h2 / spatial_norm(f, NormSpec::sobolev(2));
  return f;
}

Real sup_diff(const SpectralField& a, const SpectralField& b) {
  return (synthesize_real(a) - synthesize_real(b)).abs().maxCoeff();
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("nonlinearity helpers") {
  CHECK(degree(Nonlinearity::kMinusSquare) == 2);
  CHECK(sign(Nonlinearity::kMinusCube) == -1);
  CHECK(parse_nonlinearity("plus_cube") == Nonlinearity::kPlusCube);
  CHECK(to_string(Nonlinearity::kNone) == "none");
  CHECK_THROWS(parse_nonlinearity("u^3"));
}

TEST_CASE("dealiased cube of a single mode") {
  const GridSpec g(1, 2 * kPi, 64);
  SpectralField u(g);
  u.set_mode({15, 0, 0}, 0.5);
  u.set_mode({-15, 0, 0}, 0.5);
  const SpectralField c = apply_nonlinearity(u, Nonlinearity::kPlusCube);
  // cos^3 = 3/4 cos + 1/4 cos 3x; the triple harmonic is removed.
  CHECK(c.coeff({15, 0, 0}).real() == doctest::Approx(0.375).epsilon(1e-14));
  Real rest = 0;
  for (Eigen::Index i = 0; i < c.coeffs().size(); ++i) rest += std::abs(c.coeffs()[i]);
  CHECK(rest == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(dealias_cutoff(g, 2) == 21);
  CHECK(dealias_cutoff(g, 3) == 15);
  CHECK(dealias_cutoff(g, 1) == 32);
}

TEST_CASE("energy of a cosine") {
  const GridSpec g(1, 2 * kPi, 32);
  const Real A = 0.7;
  SpectralField u(g);
  u.set_mode({1, 0, 0}, A / 2);
  u.set_mode({-1, 0, 0}, A / 2);
  const SpectralField ut(g);
  // (1 + beta + 1) A^2 pi / 2
  CHECK(quadratic_energy(DispersionParams(-1), u, ut) == doctest::Approx(A * A * kPi / 2).epsilon(1e-14));
  CHECK(quadratic_energy(DispersionParams(1), u, ut) == doctest::Approx(3 * A * A * kPi / 2).epsilon(1e-14));
  CHECK(quartic_integral(u) == doctest::Approx(3 * kPi / 4 * std::pow(A, 4)).epsilon(1e-14));
  const EvolutionState s{u, ut, 0};
  CHECK(energy(DispersionParams(-1), s, Nonlinearity::kMinusCube) ==
        doctest::Approx(A * A * kPi / 2 - 3 * kPi / 16 * std::pow(A, 4)).epsilon(1e-14));
}

TEST_CASE("Simpson weights") {
  const auto w = simpson_weights(7, 0.5);
  Real sum = 0;
  for (Real x : w) sum += x;
  CHECK(sum == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS(simpson_weights(1, 0.1));
}

TEST_CASE("Picard and stepper agree on small cubic data") {
  const DispersionParams p(-1);
  const GridSpec g(1, 64 * kPi, 256);
  const SpectralField u0 = packet(g, 0.1), zero(g);
  const PicardResult r = picard_solve(p, u0, zero, Nonlinearity::kPlusCube, 0.1, 1e-14, 30, 200);
  CHECK(r.converged);
  const StepResult s = step_evolve(p, {u0, zero, 0}, Nonlinearity::kPlusCube, 1e-4, 1000);
  CHECK(s.steps_taken == 1000);
  CHECK(sup_diff(r.u.back(), s.trajectory.back().u) < 1e-8);
}

TEST_CASE("stepper order two") {
  const DispersionParams p(-1);
  const GridSpec g(1, 64 * kPi, 256);
  const SpectralField u0 = packet(g, 1.0), zero(g);
  const auto final_u = [&](int steps) {
    return step_evolve(p, {u0, zero, 0}, Nonlinearity::kPlusCube, 1.0 / steps, steps).trajectory.back().u;
  };
  const SpectralField ref = final_u(1600);
  const Real e1 = sup_diff(final_u(50), ref), e2 = sup_diff(final_u(100), ref);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("energy conservation") {
  const DispersionParams p(-1);
  const GridSpec g(1, 64 * kPi, 512);
  const SpectralField u0 = packet(g, 0.5), zero(g);
  const StepResult cubic = step_evolve(p, {u0, zero, 0}, Nonlinearity::kPlusCube, 1e-3, 1000, {1000});
  const Real e0 = energy(p, cubic.trajectory.front(), Nonlinearity::kPlusCube);
  CHECK(std::abs(energy(p, cubic.trajectory.back(), Nonlinearity::kPlusCube) - e0) / e0 < 1e-6);
  const StepResult linear = step_evolve(p, {u0, zero, 0}, Nonlinearity::kNone, 1e-3, 1000, {1000});
  const Real l0 = energy(p, linear.trajectory.front(), Nonlinearity::kNone);
  CHECK(std::abs(energy(p, linear.trajectory.back(), Nonlinearity::kNone) - l0) / l0 < 1e-12);
}

TEST_CASE("large data: Picard diverges, focusing stepper blows up") {
  const DispersionParams p(1);
  const GridSpec g(1, 8 * kPi, 64);
  const SpectralField u0 = packet(g, 200), zero(g);
  CHECK_THROWS_AS(picard_solve(p, u0, zero, Nonlinearity::kMinusCube, 2.0, 1e-12, 50, 100), ConvergenceError);
  const StepResult s = step_evolve(p, {u0, zero, 0}, Nonlinearity::kMinusCube, 1e-2, 2000);
  CHECK(s.blew_up);
  CHECK(s.steps_taken < 2000);
}

}
