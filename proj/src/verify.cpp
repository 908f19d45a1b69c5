#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "boussinesq/analyticity.hpp"
#include "boussinesq/dyadic.hpp"
#include "boussinesq/experiments.hpp"
#include "boussinesq/field_io.hpp"
#include "boussinesq/runner.hpp"

namespace boussinesq::cli {

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

Outcome near(Real value, Real expected, Real tol) {
  std::ostringstream d;
  d << std::setprecision(6) << "got " << value << ", want " << expected;
  return {std::abs(value - expected) <= tol, d.str()};
}

Outcome at_most(Real value, Real bound) {
  std::ostringstream d;
  d << std::setprecision(6) << value << " <= " << bound;
  return {value <= bound, d.str()};
}

class Suite {
 public:
  explicit Suite(std::ostream& out) : out_(out) {}

  void check(const std::string& name, const std::function<Outcome()>& body) {
    CheckResult result{name, false, ""};
    try {
      const Outcome o = body();
      result.passed = o.passed;
      result.detail = o.detail;
    } catch (const std::exception& e) {
      result.detail = std::string("threw: ") + e.what();
    }
    out_ << (result.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(64) << name << result.detail << '\n';
    results_.push_back(std::move(result));
  }

  template <class E>
  void rejects(const std::string& name, const std::function<void()>& body) {
    check(name, [&]() -> Outcome {
      try {
        body();
      } catch (const E& e) {
        return {true, e.what()};
      }
      return {false, "no exception"};
    });
  }

  std::vector<CheckResult> results() const { return results_; }

 private:
  std::ostream& out_;
  std::vector<CheckResult> results_;
};

// Smooth random real field with zero mean, Fourier modulus ~ e^{-|xi|}.
SpectralField smooth_random(const GridSpec& grid, std::mt19937_64& rng, Real decay = 1) {
  std::normal_distribution<Real> normal(0, 1);
  const auto table = frequency_magnitudes(grid);
  SpectralField f(grid);
  for (Eigen::Index i = 1; i < f.coeffs().size(); ++i) {
    const Real re = normal(rng);
    f.coeffs()[i] = Complex(re, normal(rng)) * std::exp(-decay * (*table)[i]);
  }
  enforce_hermitian(f);
  f.coeffs()[0] = 0;
  return f;
}

SpectralField gaussian_packet(const GridSpec& grid, Real width, Real carrier, Real h2) {
  ArrayXr samples(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Real x = sample_position(grid, i)[0] - grid.period() / 2;
    samples[static_cast<Eigen::Index>(i)] = std::exp(-(x * x) / (width * width)) * std::cos(carrier * x);
  }
  SpectralField f = dealias(analyze(grid, samples), 3);
  f *= h2 / spatial_norm(f, NormSpec::sobolev(2));
  return f;
}

Real sup_difference(const SpectralField& a, const SpectralField& b) {
  return (synthesize_real(a) - synthesize_real(b)).abs().maxCoeff();
}

std::vector<Real> log_grid(Real lo, Real hi, int count) {
  std::vector<Real> r(count);
  for (int i = 0; i < count; ++i) r[i] = lo * std::pow(hi / lo, static_cast<Real>(i) / (count - 1));
  return r;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kMinimalConfig =
    "[grid]\ndimension = 1\npoints = 256\nperiod = 64pi\n"
    "[dispersion]\nbeta = -1\n"
    "[experiment]\ntype = decay\nlambda = 16\n";

void dispersion_checks(Suite& s) {
  const DispersionParams plus(1), minus(-1), zero(0);
  s.check("phase at r=1 equals sqrt3 (beta=+1)", [&] { return near(phase(plus, 1.0), std::sqrt(3.0), 1e-15); });
  s.check("phase at r=2 equals 2 sqrt13 (beta=-1)", [&] { return near(phase(minus, 2.0), 2 * std::sqrt(13.0), 1e-14); });
  s.check("phase vanishes at r=0", [&] { return near(phase(zero, 0.0), 0, 0); });
  s.rejects<DomainError>("phase rejects negative r", [&] { phase(plus, -1.0); });
  s.rejects<DomainError>("dispersion params reject beta=2", [] { DispersionParams(2); });
  s.check("phase derivative at r=0 equals 1", [&] { return near(phase_derivative(minus, 0, 1), 1, 1e-15); });
  s.check("phase derivatives match central differences", [&] {
    Real worst = 0;
    for (int beta : {-1, 0, 1})
      for (Real r : {0.3, 1.0, 2.5})
        for (int k = 1; k <= 6; ++k) {
          const Real h = 1e-3 * (1 + r);
          const DispersionParams p(beta);
          const auto lower = [&](Real x) { return k == 1 ? phase(p, x) : phase_derivative(p, x, k - 1); };
          const Real fd = (8 * (lower(r + h) - lower(r - h)) - (lower(r + 2 * h) - lower(r - 2 * h))) / (12 * h);
          const Real exact = phase_derivative(p, r, k);
          worst = std::max(worst, std::abs(fd - exact) / (1 + std::abs(exact)));
        }
    return at_most(worst, 1e-5);
  });
  s.check("m / (r <r>^2) inside its calibrated window", [&] {
    const auto grid = log_grid(1e-3, 1e3, 2000);
    const RatioStats st = comparability_report(plus, ComparabilityBound::kPhaseVsCubicWeight, grid);
    const auto w = calibrated_window(ComparabilityBound::kPhaseVsCubicWeight);
    return Outcome{st.min >= w.lower && st.max <= w.upper, "range [" + std::to_string(st.min) + ", " + std::to_string(st.max) + "]"};
  });
  s.check("m' / r^2 inside its calibrated window (beta=-1)", [&] {
    const auto grid = log_grid(1, 1e3, 2000);
    const RatioStats st = comparability_report(minus, ComparabilityBound::kFirstVsSquare, grid);
    const auto w = calibrated_window(ComparabilityBound::kFirstVsSquare);
    return Outcome{st.min >= w.lower && st.max <= w.upper, "range [" + std::to_string(st.min) + ", " + std::to_string(st.max) + "]"};
  });
  s.rejects<PreconditionError>("comparability report rejects mismatched beta", [&] {
    const std::vector<Real> grid{1, 2};
    comparability_report(plus, ComparabilityBound::kFirstVsSquare, grid);
  });
}

void grid_checks(Suite& s, std::mt19937_64& rng) {
  s.rejects<std::exception>("grid rejects N=100", [] { GridSpec(1, 1, 100); });
  s.check("synthesize/analyze round trip (n=1)", [&] {
    const GridSpec g(1, 2 * kPi, 64);
    const SpectralField f = smooth_random(g, rng, 0.1);
    return at_most((analyze(g, synthesize_real(f)).coeffs() - f.coeffs()).abs().maxCoeff(), 1e-14);
  });
  s.check("synthesize/analyze round trip (n=2)", [&] {
    const GridSpec g(2, 2 * kPi, 16);
    const SpectralField f = smooth_random(g, rng, 0.1);
    return at_most((analyze(g, synthesize_real(f)).coeffs() - f.coeffs()).abs().maxCoeff(), 1e-14);
  });
  s.check("Parseval: coefficient norm equals sample norm", [&] {
    const GridSpec g(1, 10, 128);
    const SpectralField f = smooth_random(g, rng);
    const Real samples = lebesgue_norm(g, synthesize_real(f), 2);
    return near(f.l2_norm(), samples, 1e-12 * samples);
  });
  s.check("analysis of real samples is Hermitian", [&] {
    const GridSpec g(2, 3, 8);
    std::normal_distribution<Real> normal;
    ArrayXr v(64);
    for (auto& x : v) x = normal(rng);
    return at_most(hermitian_defect(analyze(g, v)), 1e-15);
  });
  s.check("mirror is an involution", [&] {
    const GridSpec g(3, 1, 8);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.mirror(g.mirror(i)) != i) return Outcome{false, "index " + std::to_string(i)};
    return Outcome{true, "all indices"};
  });
  s.check("frequency magnitude of mode k is 2 pi k / L", [&] {
    const GridSpec g(1, 5, 32);
    return near((*frequency_magnitudes(g))[3], 2 * kPi * 3 / 5, 1e-15);
  });
}

void dyadic_checks(Suite& s) {
  s.check("chi is 1 on [0,1] and 0 beyond 2", [] {
    return Outcome{cutoff_chi(0.5) == 1 && cutoff_chi(1.0) == 1 && cutoff_chi(2.0) == 0 && cutoff_chi(3.0) == 0,
                   "plateau and support"};
  });
  s.check("dyadic pieces sum to one on [1, 64]", [] {
    Real worst = 0;
    for (Real x = 1; x <= 64; x *= 1.01) {
      Real sum = 0;
      for (int j = 0; j <= 7; ++j) sum += annulus_rho(x / std::ldexp(1.0, j));
      worst = std::max(worst, std::abs(sum - 1));
    }
    return at_most(worst, 1e-14);
  });
  s.check("projection keeps |xi|=lambda, removes |xi|=4 lambda", [] {
    const GridSpec g(1, 2 * kPi, 128);
    SpectralField f(g);
    f.set_mode({8, 0, 0}, 1);
    f.set_mode({32, 0, 0}, 1);
    const SpectralField p = dyadic_project(f, DyadicBand(8));
    return Outcome{std::abs(p.coeff({8, 0, 0}) - 1.0) < 1e-15 && p.coeff({32, 0, 0}) == Complex(0), "mode 8 kept, 32 dropped"};
  });
  s.rejects<DomainError>("dyadic band rejects lambda=3", [] { DyadicBand(3); });
}

void propagator_checks(Suite& s, std::mt19937_64& rng) {
  const DispersionParams p(-1);
  const GridSpec g(1, 16 * kPi, 64);
  s.check("half-wave preserves the L2 norm", [&] {
    const SpectralField f = smooth_random(g, rng);
    return near(half_wave(p, f, 3.7).l2_norm(), f.l2_norm(), 1e-13 * f.l2_norm());
  });
  s.check("half-wave group law S(a)S(b) = S(a+b)", [&] {
    const SpectralField f = smooth_random(g, rng);
    return at_most((half_wave(p, half_wave(p, f, 0.3), 1.1) - half_wave(p, f, 1.4)).l2_norm(), 1e-13);
  });
  s.check("linear flow of a single mode is cos/sin in m", [&] {
    SpectralField u0(g), u1(g);
    u0.set_mode({5, 0, 0}, 1);
    u0.set_mode({-5, 0, 0}, 1);
    const Real t = 0.9, m = phase(p, g.frequency_unit() * 5);
    const EvolutionState st = linear_evolve(p, u0, u1, t);
    return near(st.u.coeff({5, 0, 0}).real(), std::cos(m * t), 1e-14);
  });
  s.check("sine over phase is continuous at m=0", [] { return near(sine_over_phase(2.0, 1e-9), 2.0, 1e-15); });
  s.check("linear energy conserved by linear_advance", [&] {
    EvolutionState st{smooth_random(g, rng), smooth_random(g, rng), 0};
    const Real e0 = energy(p, st, Nonlinearity::kNone);
    for (int i = 0; i < 20; ++i) st = linear_advance(p, st, 0.37);
    return at_most(std::abs(energy(p, st, Nonlinearity::kNone) - e0) / e0, 1e-13);
  });
}

void io_checks(Suite& s, std::mt19937_64& rng, const fs::path& scratch) {
  s.check("field write/read round trip is exact", [&] {
    const GridSpec g(2, 7, 16);
    const SpectralField f = smooth_random(g, rng);
    write_field(f, scratch / "field");
    const SpectralField h = read_field(scratch / "field");
    return Outcome{h.grid() == g && h.real() && (h.coeffs() == f.coeffs()).all(), "bitwise"};
  });
  s.rejects<std::exception>("field read rejects a missing sidecar", [&] { read_field(scratch / "absent"); });
}

void solver_checks(Suite& s) {
  const DispersionParams p(-1);
  const GridSpec g(1, 16 * kPi, 64);
  s.check("dealias cutoffs N/3 and N/4-1", [&] {
    return Outcome{dealias_cutoff(g, 2) == 21 && dealias_cutoff(g, 3) == 15,
                   std::to_string(dealias_cutoff(g, 2)) + ", " + std::to_string(dealias_cutoff(g, 3))};
  });
  s.check("Simpson weights integrate cubics exactly", [] {
    Real worst = 0;
    for (std::size_t count : {5u, 6u, 9u, 10u}) {
      const Real h = 1.0 / (count - 1);
      const auto w = simpson_weights(count, h);
      Real sum = 0;
      for (std::size_t i = 0; i < count; ++i) sum += w[i] * std::pow(i * h, 3);
      worst = std::max(worst, std::abs(sum - 0.25));
    }
    return at_most(worst, 1e-15);
  });
  s.rejects<std::exception>("Simpson weights need three nodes", [] { simpson_weights(2, 0.1); });
  s.rejects<std::exception>("nonlinearity names are validated", [] { parse_nonlinearity("cube"); });
  const SpectralField u0 = gaussian_packet(g, 6, 0.5, 0.1);
  const SpectralField zero(g);
  s.check("Picard with f=0 reproduces the linear flow", [&] {
    const PicardResult r = picard_solve(p, u0, zero, Nonlinearity::kNone, 0.5, 1e-13, 5, 50);
    return at_most(sup_difference(r.u.back(), linear_evolve(p, u0, zero, 0.5).u), 1e-14);
  });
  s.check("Picard agrees with the stepper (cubic, small data)", [&] {
    const PicardResult r = picard_solve(p, u0, zero, Nonlinearity::kPlusCube, 0.1, 1e-14, 30, 200);
    const StepResult st = step_evolve(p, {u0, zero, 0}, Nonlinearity::kPlusCube, 1e-4, 1000);
    return at_most(sup_difference(r.u.back(), st.trajectory.back().u), 1e-8);
  });
  s.check("stepper converges at second order", [&] {
    const SpectralField big = gaussian_packet(g, 6, 0.5, 1.0);
    const auto run = [&](int steps) {
      return step_evolve(p, {big, zero, 0}, Nonlinearity::kPlusCube, 0.5 / steps, steps).trajectory.back().u;
    };
    const SpectralField ref = run(640);
    const Real e1 = sup_difference(run(20), ref), e2 = sup_difference(run(40), ref);
    const Real order = std::log2(e1 / e2);
    return Outcome{order >= 1.8 && order <= 2.2, "order " + std::to_string(order)};
  });
  s.check("cubic energy drift below 1e-6", [&] {
    const SpectralField a = gaussian_packet(g, 6, 0.5, 0.5);
    const StepResult st = step_evolve(p, {a, zero, 0}, Nonlinearity::kPlusCube, 1e-3, 500, {100});
    const Real e0 = energy(p, st.trajectory.front(), Nonlinearity::kPlusCube);
    return at_most(std::abs(energy(p, st.trajectory.back(), Nonlinearity::kPlusCube) - e0) / e0, 1e-6);
  });
  s.check("linear energy drift below 1e-12", [&] {
    const StepResult st = step_evolve(p, {u0, zero, 0}, Nonlinearity::kNone, 1e-3, 500, {100});
    const Real e0 = energy(p, st.trajectory.front(), Nonlinearity::kNone);
    return at_most(std::abs(energy(p, st.trajectory.back(), Nonlinearity::kNone) - e0) / e0, 1e-12);
  });
  s.rejects<PreconditionError>("energy rejects u_t with nonzero mean", [&] {
    SpectralField ut(g);
    ut.coeffs()[0] = 1;
    energy(p, {u0, ut, 0}, Nonlinearity::kNone);
  });
}

void norm_checks(Suite& s, std::mt19937_64& rng) {
  const DispersionParams p(1);
  const GridSpec g(1, 8 * kPi, 64);
  const SpectralField f = smooth_random(g, rng);
  s.check("H^0 norm equals the L2 norm", [&] { return near(spatial_norm(f, NormSpec::sobolev(0)), f.l2_norm(), 1e-14); });
  s.check("Gevrey norm at sigma=0 equals Sobolev", [&] {
    return near(spatial_norm(f, NormSpec::gevrey(0, 2, GevreyWeight::kExp)), spatial_norm(f, NormSpec::sobolev(2)), 1e-13);
  });
  s.check("cosh weight never exceeds exp weight", [&] {
    return at_most(spatial_norm(f, NormSpec::gevrey(0.5, 1, GevreyWeight::kCosh)),
                   spatial_norm(f, NormSpec::gevrey(0.5, 1, GevreyWeight::kExp)));
  });
  s.rejects<DomainError>("Gevrey spec rejects sigma<0", [] { NormSpec::gevrey(-0.1, 0, GevreyWeight::kExp); });
  s.rejects<DomainError>("Bourgain spec rejects b=1/2", [] { NormSpec::bourgain(0, 0.5); });
  s.check("(4, inf) admissible in 1D, (4, 4) not", [] {
    return Outcome{AdmissiblePair::admissible(1, Exponent::integer(4), Exponent::infinity()) &&
                       !AdmissiblePair::admissible(1, Exponent::integer(4), Exponent::integer(4)),
                   "integer arithmetic"};
  });
  s.check("exponent parses 10/3", [] { return near(Exponent::parse("10/3").value(), 10.0 / 3, 1e-15); });
  s.rejects<std::exception>("mixed norm rejects q = inf", [] { NormSpec::mixed(std::numeric_limits<Real>::infinity(), 2, 1); });
  const auto times = uniform_time_grid(1, 16);
  const auto traj = half_wave_trajectory(p, f, times);
  s.check("X^{0,0} equals the windowed space-time L2 norm", [&] {
    Real sum = 0;
    for (std::size_t j = 0; j < times.size(); ++j)
      sum += std::pow(time_window(times[j], 1) * traj[j].l2_norm(), 2) * (times[1] - times[0]);
    return near(xsb_norm_weighted(p, traj, times, 0, 0), std::sqrt(sum), 1e-12);
  });
  s.check("X^{s,b} grows with b", [&] {
    return at_most(xsb_norm_weighted(p, traj, times, 1, 0.2), xsb_norm_weighted(p, traj, times, 1, 0.8));
  });
  s.rejects<PreconditionError>("Strichartz ratio rejects lambda < 4", [&] {
    const std::vector<Real> t{0, 0.5, 1};
    strichartz_ratio(p, DyadicBand(2), f, AdmissiblePair(1, Exponent::integer(4), Exponent::infinity()), t);
  });
  s.rejects<PreconditionError>("bilinear ratio rejects aliased products", [&] {
    const auto a = half_wave_trajectory(p, f, std::vector<Real>(times.begin(), times.end()));
    bilinear_ratio(p, DyadicBand(4), DyadicBand(2), a, a, times, 0.6, EstimateRegime::kGeneral);
  });
}

void kernel_checks(Suite& s) {
  const DispersionParams p(-1);
  s.check("J_{1/2}(pi) vanishes", [] { return near(bessel_j(0.5, kPi), 0, 1e-16); });
  s.check("Bessel three-term recurrence", [] {
    Real worst = 0;
    for (Real r : {0.1, 1.0, 7.0, 50.0}) {
      worst = std::max(worst, std::abs(bessel_j(-0.5, r) + bessel_j(1.5, r) - bessel_j(0.5, r) / r));
      worst = std::max(worst, std::abs(bessel_j(0, r) + bessel_j(2, r) - 2 * bessel_j(1, r) / r));
    }
    return at_most(worst, 1e-8);
  });
  s.rejects<DomainError>("Bessel rejects order 5/2", [] { bessel_j(2.5, 1.0); });
  s.check("1D kernel matches a direct Fourier quadrature", [&] {
    const Real lambda = 8, x = 0.3, t = 0.5;
    const int count = 40000;
    const Real h = 4.0 / count;
    Complex direct = 0;
    for (int i = 0; i < count; ++i) {
      const Real xi = -2 + (i + 0.5) * h;
      direct += std::polar(annulus_rho(std::abs(xi)), lambda * x * xi + t * phase(p, lambda * std::abs(xi)));
    }
    direct *= lambda * h;
    const Complex radial = kernel_radial(p, 1, lambda, x, t);
    return at_most(std::abs(direct - radial), 1e-6 * lambda);
  });
  s.check("sup scan agrees with the reference kernel at its maximiser", [&] {
    SupScanOptions o;
    o.log_points = 128;
    const SupScanResult r = sup_scan(p, 1, 8, 1, o);
    return near(r.sup, std::abs(kernel_radial(p, 1, 8, r.argmax, 1)), 1e-6 * r.sup);
  });
  s.check("decay fit recovers an exact power law", [] {
    std::vector<Real> t, v;
    for (int i = 0; i < 7; ++i) t.push_back(std::ldexp(1.0, i)), v.push_back(3 * std::pow(t.back(), -0.5));
    return near(decay_fit(t, v).exponent, -0.5, 1e-12);
  });
  s.check("van der Corput bound formula", [] {
    const std::vector<Real> g{1, 2, 3};
    return near(corput_bound(g, 4, 1, 0, 1), 2.5, 1e-15);
  });
}

void analyticity_checks(Suite& s, std::mt19937_64& rng) {
  s.check("cosh inequality example (1, -1)", [] {
    const std::vector<Real> xi{1, -1};
    const CoshInequality c = cosh_inequality_check(xi);
    const Real sech = 1 / std::cosh(1.0);
    return Outcome{std::abs(c.lhs - (1 - sech * sech)) < 1e-15 && c.rhs == 8, "lhs " + std::to_string(c.lhs)};
  });
  s.check("cosh inequality holds on random tuples", [&] {
    std::uniform_real_distribution<Real> u(-20, 20);
    int violations = 0;
    for (int i = 0; i < 2000; ++i) {
      std::vector<Real> xi(2 + i % 2);
      for (auto& x : xi) x = u(rng);
      const CoshInequality c = cosh_inequality_check(xi);
      violations += c.lhs > c.rhs;
    }
    return Outcome{violations == 0, std::to_string(violations) + " violations"};
  });
  const DispersionParams p(1);
  const GridSpec g(1, 8 * kPi, 64);
  const SpectralField v = smooth_random(g, rng), vt = smooth_random(g, rng);
  s.check("commutator residual scales like sigma^2", [&] {
    const Real a = commutator_residual(p, v, vt, 1e-2, Nonlinearity::kPlusCube) / 1e-4;
    const Real b = commutator_residual(p, v, vt, 1e-3, Nonlinearity::kPlusCube) / 1e-6;
    return at_most(std::abs(a - b) / std::abs(b), 0.05);
  });
  s.check("modified energy at sigma=0 equals the energy", [&] {
    const EvolutionState st{v, vt, 0};
    const Real e = energy(p, st, Nonlinearity::kPlusCube);
    return near(modified_energy(p, st, 0, Nonlinearity::kPlusCube), e, 1e-13 * std::abs(e));
  });
  s.check("radius estimate recovers the budget radius", [&] {
    const Real budget = spatial_norm(v, NormSpec::gevrey(0.5, 2, GevreyWeight::kCosh));
    return near(radius_estimate(v, 2, budget, 1), 0.5, 1e-3);
  });
  s.check("sech smoothing inverts cosh smoothing", [&] {
    return at_most((sech_smooth(cosh_smooth(v, 0.7), 0.7) - v).l2_norm(), 1e-13);
  });
}

void config_checks(Suite& s, const fs::path& scratch) {
  s.check("minimal decay config accepted", [] {
    const ExperimentConfig c = parse_config_text(kMinimalConfig);
    return Outcome{c.type == ExperimentType::kDecay && c.beta == -1 && c.reals("times").size() == 7, "7 default times"};
  });
  s.check("beta=2 rejected with its message", [] {
    try {
      parse_config_text("[dispersion]\nbeta = 2\n[experiment]\ntype = decay\n");
    } catch (const ConfigError& e) {
      return Outcome{std::string(e.what()).find("beta must be -1, 0, or 1") != std::string::npos && e.line() == 2, e.what()};
    }
    return Outcome{false, "accepted"};
  });
  s.rejects<ConfigError>("N=100 rejected", [] {
    parse_config_text("[grid]\npoints = 100\n[dispersion]\nbeta = 1\n[experiment]\ntype = decay\n");
  });
  s.check("unknown key rejected by name", [] {
    try {
      parse_config_text("[dispersion]\nbeta = 1\n[experiment]\ntype = decay\nlamda = 4\n");
    } catch (const ConfigError& e) {
      return Outcome{std::string(e.what()).find("experiment.lamda") != std::string::npos, e.what()};
    }
    return Outcome{false, "accepted"};
  });
  s.check("syntax error reports its line", [] {
    try {
      parse_config_text("[grid]\ndimension = 1\nnot a key value pair\n");
    } catch (const ConfigError& e) {
      return Outcome{e.line() == 3, e.what()};
    }
    return Outcome{false, "accepted"};
  });
  s.check("manifest JSON round-trips to the config", [] {
    ExperimentConfig c = parse_config_text(
        "[grid]\ndimension = 1\npoints = 512\nperiod = 2.5pi\n[dispersion]\nbeta = 1\n"
        "[experiment]\ntype = gevrey-track\nseed = 18446744073709551615\nfit_lo = 0.3\nexpect_max = -0.35\n");
    return Outcome{config_from_json(to_json(c)) == c, "equal after round trip"};
  });
  s.check("dry run writes only the manifest", [&] {
    RunOptions o;
    o.output = scratch / "dry";
    o.dry_run = true;
    const RunOutcome r = run_experiment(parse_config_text(kMinimalConfig), o);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(r.directory)) ++files;
    return Outcome{files == 1 && fs::exists(r.directory / "manifest.json"), std::to_string(files) + " files"};
  });
}

void determinism_checks(Suite& s, std::uint64_t seed, const fs::path& scratch) {
  s.check("band profile is deterministic for a fixed seed", [&] {
    const GridSpec g(2, 2 * kPi, 64);
    std::mt19937_64 a(seed), b(seed);
    return Outcome{(band_profile(g, 8, a).coeffs() == band_profile(g, 8, b).coeffs()).all(), "bitwise"};
  });
  s.check("estimate CSV is byte-identical on re-run", [&] {
    const GridSpec g(1, 16 * kPi, 1024);
    EstimateSettings settings;
    settings.sweep = {8, 16};
    settings.draws = 2;
    settings.time_samples = 16;
    settings.seed = seed;
    for (const char* name : {"a.csv", "b.csv"})
      write_estimate_csv(scratch / name, estimate_sweep(DispersionParams(1), g, settings).rows);
    const std::string a = read_bytes(scratch / "a.csv");
    return Outcome{!a.empty() && a == read_bytes(scratch / "b.csv"), std::to_string(a.size()) + " bytes"};
  });
}

}  // namespace

std::vector<CheckResult> verify_all(std::ostream& out, std::uint64_t seed) {
  Suite suite(out);
  std::mt19937_64 rng(seed);
  const fs::path scratch = fs::temp_directory_path() / ("boussinesq-verify-" + std::to_string(::getpid()));
  fs::create_directories(scratch);

  dispersion_checks(suite);
  grid_checks(suite, rng);
  dyadic_checks(suite);
  propagator_checks(suite, rng);
  io_checks(suite, rng, scratch);
  solver_checks(suite);
  norm_checks(suite, rng);
  kernel_checks(suite);
  analyticity_checks(suite, rng);
  config_checks(suite, scratch);
  determinism_checks(suite, seed, scratch);

  std::error_code ignored;
  fs::remove_all(scratch, ignored);
  const auto results = suite.results();
  std::size_t failed = 0;
  for (const auto& r : results) failed += !r.passed;
  out << results.size() << " checks, " << failed << " failed\n";
  return results;
}

}  // namespace boussinesq::cli
