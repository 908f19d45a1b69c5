#include "boussinesq/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <thread>

#include <Eigen/QR>

#include "boussinesq/dyadic.hpp"
#include "boussinesq/grid.hpp"
#include "csv.hpp"
#include "fft_engine.hpp"

namespace boussinesq {

namespace {

constexpr std::array<Real, 8> kGaussNodes{-0.9602898564975362, -0.7966664774136267, -0.525532409916329,
                                          -0.18343464249564978, 0.18343464249564978, 0.525532409916329,
                                          0.7966664774136267,  0.9602898564975362};
constexpr std::array<Real, 8> kGaussWeights{0.10122853629037669, 0.22238103445337434, 0.31370664587788705,
                                            0.36268378337836177, 0.36268378337836177, 0.31370664587788705,
                                            0.22238103445337434, 0.10122853629037669};
constexpr Real kRadialLo = 0.5;
constexpr Real kRadialHi = 2.0;
// Hankel expansion of J_0 is used from this argument on (truncation error
// below 1e-9 relative); below it J_0 comes from a piecewise Chebyshev table.
constexpr Real kHankelThreshold = 30;

// J_0 on [0, 32] as 256 Chebyshev pieces of degree 9 built from
// std::cyl_bessel_j.
class J0Table {
 public:
  static constexpr int kPieces = 256;
  static constexpr int kDegree = 10;
  static constexpr Real kWidth = 0.125;

  J0Table() {
    for (int piece = 0; piece < kPieces; ++piece) {
      const Real mid = (piece + 0.5) * kWidth;
      std::array<Real, kDegree> values;
      for (int j = 0; j < kDegree; ++j) {
        const Real u = std::cos(kPi * (j + 0.5) / kDegree);
        values[j] = std::cyl_bessel_j(0.0, mid + 0.5 * kWidth * u);
      }
      for (int k = 0; k < kDegree; ++k) {
        Real c = 0;
        for (int j = 0; j < kDegree; ++j) c += values[j] * std::cos(kPi * k * (j + 0.5) / kDegree);
        coeffs_[piece][k] = (k == 0 ? 1.0 : 2.0) * c / kDegree;
      }
    }
  }

  Real operator()(Real z) const {
    const int piece = std::min(kPieces - 1, static_cast<int>(z / kWidth));
    const Real u = (z - (piece + 0.5) * kWidth) / (0.5 * kWidth);
    const auto& c = coeffs_[piece];
    Real b1 = 0, b2 = 0;
    for (int k = kDegree - 1; k >= 1; --k) {
      const Real b0 = 2 * u * b1 - b2 + c[k];
      b2 = b1;
      b1 = b0;
    }
    return u * b1 - b2 + c[0];
  }

 private:
  std::array<std::array<Real, kDegree>, kPieces> coeffs_;
};

const J0Table& j0_table() {
  static const J0Table table;
  return table;
}

// Below this argument a panel falls back to direct Bessel factors.
Real slow_threshold(int n) {
  if (n == 2) return kHankelThreshold;
  return n == 3 ? 1e-2 : 0;
}

void require_dimension(int n) {
  if (n < 1 || n > 3) throw DomainError("dimension must be 1, 2 or 3");
}

Real max_group_speed(DispersionParams params, Real lambda) {
  Real best = 0;
  for (int i = 0; i <= 64; ++i) {
    const Real r = kRadialLo + (kRadialHi - kRadialLo) * i / 64.0;
    best = std::max(best, std::abs(phase_derivative(params, lambda * r, 1)));
  }
  return lambda * best;
}

Real dimension_prefactor(int n, Real lambda) { return std::pow(2 * kPi, n / 2.0) * std::pow(lambda, n); }

// Node r of panel p, Gauss point q, for panels of width h.
inline Real panel_node(int p, int q, Real h) { return kRadialLo + h * (p + 0.5 * (1 + kGaussNodes[q])); }

Complex reference_sum(DispersionParams params, int n, Real lambda, Real x, Real t, int panels) {
  const Real h = (kRadialHi - kRadialLo) / panels;
  Complex sum = 0;
  for (int p = 0; p < panels; ++p) {
    Complex panel_sum = 0;
    for (int q = 0; q < 8; ++q) {
      const Real r = panel_node(p, q, h);
      const Real amplitude = annulus_rho(r) * std::pow(r, n - 1) * radial_bessel_factor(n, lambda * r * x);
      panel_sum += kGaussWeights[q] * amplitude * std::polar(1.0, t * phase_unchecked(params.beta(), lambda * r));
    }
    sum += panel_sum;
  }
  return dimension_prefactor(n, lambda) * 0.5 * h * sum;
}

// Node data shared by every radius of a scan, stored as separate arrays so
// the per-panel loops vectorise. (re, im) hold
// weight * rho * r^{n-1} * e^{i t m} times the radial power the large-argument
// Bessel form needs (1, r^{-1/2}, r^{-1} for n = 1, 2, 3).
struct NodeSet {
  int panels = 0;
  Real h = 0;
  std::vector<Real> re, im, inv_r;
};

inline Real fold_power(int n, Real inv_r) {
  if (n == 1) return 1;
  return n == 2 ? std::sqrt(inv_r) : inv_r;
}

NodeSet build_nodes(DispersionParams params, int n, Real lambda, Real t, int panels) {
  NodeSet set;
  set.panels = panels;
  set.h = (kRadialHi - kRadialLo) / panels;
  const std::size_t count = static_cast<std::size_t>(panels) * 8;
  set.re.resize(count);
  set.im.resize(count);
  set.inv_r.resize(count);
  for (int p = 0; p < panels; ++p)
    for (int q = 0; q < 8; ++q) {
      const std::size_t i = static_cast<std::size_t>(p) * 8 + q;
      const Real r = panel_node(p, q, set.h);
      set.inv_r[i] = 1 / r;
      const Complex g = 0.5 * set.h * kGaussWeights[q] * annulus_rho(r) * std::pow(r, n - 1) *
                        fold_power(n, set.inv_r[i]) *
                        std::polar(1.0, t * phase_unchecked(params.beta(), lambda * r));
      set.re[i] = g.real();
      set.im[i] = g.imag();
    }
  return set;
}

// Sum over the node set at radius x. Plane-wave factors come from per-panel
// rotations re-seeded every 64 panels; for n = 2 and large argument J_0 comes
// from the Hankel expansion
//   J_0(z) = sqrt(2 / (pi z)) (P cos(z - pi/4) - Q sin(z - pi/4)).
template <int n>
Complex fast_sum_impl(const NodeSet& set, Real lambda, Real x) {
  constexpr Real kRoot2OverPi = 0.79788456080286535588;
  constexpr Real kHalfRoot2 = 0.70710678118654752440;
  const Real omega = lambda * x;
  alignas(64) Real off_re[8], off_im[8];
  for (int q = 0; q < 8; ++q) {
    const Complex o = std::polar(1.0, omega * set.h * 0.5 * (1 + kGaussNodes[q]));
    off_re[q] = o.real();
    off_im[q] = o.imag();
  }
  const Complex step = std::polar(1.0, omega * set.h);
  const Real inv_omega = omega > 0 ? 1 / omega : 0;
  Real amplitude = kRoot2OverPi;
  if constexpr (n == 2) amplitude = std::sqrt(2 * inv_omega / kPi);
  if constexpr (n == 3) amplitude = kRoot2OverPi * inv_omega;
  const Real threshold = slow_threshold(n);

  Complex base;
  Complex slow = 0;
  Real sum_re = 0, sum_im = 0;
  for (int p = 0; p < set.panels; ++p) {
    const Real a = kRadialLo + p * set.h;
    base = (p % 64 == 0) ? std::polar(1.0, omega * a) : base * step;
    const std::size_t first = static_cast<std::size_t>(p) * 8;
    const Real* g_re = set.re.data() + first;
    const Real* g_im = set.im.data() + first;
    const Real* inv_r = set.inv_r.data() + first;
    if (omega * a < threshold) {
      const J0Table& j0 = j0_table();
      for (int q = 0; q < 8; ++q) {
        const Real z = omega / inv_r[q];
        const Real factor = n == 2 ? j0(z) : radial_bessel_factor(n, z);
        slow += Complex(g_re[q], g_im[q]) / fold_power(n, inv_r[q]) * factor;
      }
      continue;
    }
    const Real b_re = base.real(), b_im = base.imag();
    Real acc_re = 0, acc_im = 0;
#pragma GCC ivdep
    for (int q = 0; q < 8; ++q) {
      const Real e_re = b_re * off_re[q] - b_im * off_im[q];
      const Real e_im = b_re * off_im[q] + b_im * off_re[q];
      Real factor;
      if constexpr (n == 1) {
        factor = e_re;
      } else if constexpr (n == 3) {
        factor = e_im;
      } else {
        const Real iz = inv_omega * inv_r[q], iz2 = iz * iz;
        const Real P = 1 - iz2 * (9.0 / 128 - iz2 * (3675.0 / 32768));
        const Real Q = iz * (-1.0 / 8 + iz2 * (75.0 / 1024 - iz2 * (59535.0 / 262144)));
        factor = kHalfRoot2 * ((P + Q) * e_re + (P - Q) * e_im);
      }
      acc_re += g_re[q] * factor;
      acc_im += g_im[q] * factor;
    }
    sum_re += acc_re;
    sum_im += acc_im;
  }
  return dimension_prefactor(n, lambda) * (amplitude * Complex(sum_re, sum_im) + slow);
}

Complex fast_sum(const NodeSet& set, int n, Real lambda, Real x) {
  if (n == 1) return fast_sum_impl<1>(set, lambda, x);
  if (n == 2) return fast_sum_impl<2>(set, lambda, x);
  return fast_sum_impl<3>(set, lambda, x);
}

bool agree(Complex a, Complex b, Real rel, Real floor) { return std::abs(a - b) <= rel * std::abs(b) + floor; }

}  // namespace

Real bessel_j(Real order, Real r) {
  if (!(r > 0) || !std::isfinite(r)) throw DomainError("bessel_j: r must be positive and finite");
  const Real root = std::sqrt(2 / (kPi * r));
  if (order == -0.5) return root * std::cos(r);
  if (order == 0.5) return root * std::sin(r);
  if (order == 1.5) return root * (std::sin(r) / r - std::cos(r));
  if (order == 0 || order == 1 || order == 2) return std::cyl_bessel_j(order, r);
  std::ostringstream msg;
  msg << "bessel_j: unsupported order " << order;
  throw DomainError(msg.str());
}

Real radial_bessel_factor(int n, Real z) {
  require_dimension(n);
  constexpr Real kRoot2OverPi = 0.79788456080286535588;
  if (n == 1) return kRoot2OverPi * std::cos(z);
  if (n == 2) return z == 0 ? 1.0 : bessel_j(0, z);
  if (std::abs(z) < 1e-4) return kRoot2OverPi * (1 - z * z / 6);
  return std::sqrt(z) * bessel_j(0.5, z) / z;
}

int kernel_panel_count(DispersionParams params, Real lambda, Real x, Real t) {
  const Real span = kRadialHi - kRadialLo;
  const Real turns = (std::abs(t) * max_group_speed(params, lambda) * span + lambda * x * span) / (2 * kPi);
  return 16 + static_cast<int>(std::ceil(turns));
}

Complex kernel_radial(DispersionParams params, int n, Real lambda, Real x, Real t) {
  require_dimension(n);
  if (!(lambda >= 4)) throw PreconditionError("kernel_radial: lambda must be at least 4");
  if (!(x >= 0)) throw PreconditionError("kernel_radial: radius must be nonnegative");
  int panels = kernel_panel_count(params, lambda, x, t);
  const Real floor = 1e-12 * std::pow(lambda, n);
  Complex coarse = reference_sum(params, n, lambda, x, t, panels);
  for (int doubling = 1; doubling <= 3; ++doubling) {
    panels *= 2;
    const Complex fine = reference_sum(params, n, lambda, x, t, panels);
    if (agree(coarse, fine, 1e-8, floor)) return fine;
    coarse = fine;
  }
  std::ostringstream msg;
  msg << "kernel_radial: no convergence after 3 panel doublings (lambda " << lambda << ", x " << x << ", t " << t
      << ")";
  throw ConvergenceError(msg.str());
}

SupScanResult sup_scan(DispersionParams params, int n, Real lambda, Real t, const SupScanOptions& options) {
  require_dimension(n);
  if (t == 0) throw PreconditionError("sup_scan: t must be nonzero");
  if (!(lambda >= 4)) throw PreconditionError("sup_scan: lambda must be at least 4");
  if (options.log_points < 2 || options.origin_points < 1)
    throw PreconditionError("sup_scan: radius grid too small");
  const Real near = 4 / lambda;
  const Real far = 4 * lambda * lambda * std::abs(t);
  std::vector<Real> radii;
  for (int i = 0; i < options.origin_points; ++i) radii.push_back(near * i / options.origin_points);
  const Real ratio = std::log(far / near);
  for (int i = 0; i < options.log_points; ++i)
    radii.push_back(near * std::exp(ratio * i / (options.log_points - 1)));

  SupScanResult result;
  result.panels = kernel_panel_count(params, lambda, far, t);
  {
    const NodeSet nodes = build_nodes(params, n, lambda, t, result.panels);
    std::vector<Real> values(radii.size());
    const int workers = std::max(1, std::min<int>(options.threads, static_cast<int>(radii.size())));
    auto work = [&](int w) {
      for (std::size_t i = w; i < radii.size(); i += workers) values[i] = std::abs(fast_sum(nodes, n, lambda, radii[i]));
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < radii.size(); ++i)
      if (values[i] > result.sup) {
        result.sup = values[i];
        result.argmax = radii[i];
      }
  }
  const NodeSet doubled = build_nodes(params, n, lambda, t, 2 * result.panels);
  const Real refined = std::abs(fast_sum(doubled, n, lambda, result.argmax));
  if (std::abs(refined - result.sup) > 1e-6 * result.sup)
    throw ConvergenceError("sup_scan: panel doubling moved the maximum beyond 1e-6");
  if (options.cross_check) {
    const Real reference = std::abs(kernel_radial(params, n, lambda, result.argmax, t));
    if (std::abs(reference - result.sup) > 1e-6 * result.sup)
      throw ConvergenceError("sup_scan: fast evaluation disagrees with kernel_radial at the maximiser");
  }
  return result;
}

DecayFitResult decay_fit(std::span<const Real> variable, std::span<const Real> value) {
  if (variable.size() != value.size()) throw PreconditionError("decay_fit: sample lists differ in length");
  const std::size_t count = variable.size();
  if (count < 6) throw PreconditionError("decay_fit: need at least six samples");
  Eigen::MatrixXd design(count, 2);
  Eigen::VectorXd rhs(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(variable[i] > 0) || !(value[i] > 0)) throw DomainError("decay_fit: samples must be positive");
    design(i, 0) = std::log(variable[i]);
    design(i, 1) = 1;
    rhs[i] = std::log(value[i]);
  }
  const auto [lo, hi] = std::minmax_element(variable.begin(), variable.end());
  if (!(*lo < *hi)) throw PreconditionError("decay_fit: variable range is degenerate");
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  DecayFitResult fit;
  fit.exponent = coef[0];
  fit.log_prefactor = coef[1];
  fit.residual_rms = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<Real>(count));
  fit.sample_range = {*lo, *hi};
  return fit;
}

namespace {

struct UniformSample {
  Real d_xi = 0;
  std::vector<Complex> h;   // integrand at xi_j = (j - K) d_xi
  int K = 0;
};

Complex direct_integral(const UniformSample& s, Real x) {
  Complex sum = 0;
  for (std::size_t j = 0; j < s.h.size(); ++j)
    sum += s.h[j] * std::polar(1.0, x * (static_cast<Real>(j) - s.K) * s.d_xi);
  return s.d_xi * sum;
}

// Golden-section refinement of |I| on [a, b].
Real refine_peak(const UniformSample& s, Real a, Real b) {
  const Real g = 0.5 * (std::sqrt(5.0) - 1);
  Real c = b - g * (b - a), d = a + g * (b - a);
  Real fc = std::abs(direct_integral(s, c)), fd = std::abs(direct_integral(s, d));
  for (int it = 0; it < 60 && (b - a) > 1e-12 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a);
      fc = std::abs(direct_integral(s, c));
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a);
      fd = std::abs(direct_integral(s, d));
    }
  }
  return std::max(fc, fd);
}

Real truncated_sup(DispersionParams params, Real t, Real R) {
  // Stationary points lie in |x| <= X; the x-period 2 pi / d_xi covers them
  // with a margin so the trapezoid (Poisson) aliases are negligible.
  Real speed = 0;
  for (int i = 0; i <= 256; ++i) speed = std::max(speed, std::abs(phase_derivative(params, 2 * R * i / 256.0, 1)));
  const Real X = std::abs(t) * speed + 1;
  UniformSample s;
  s.d_xi = 2 * kPi / (2.5 * X + 64);
  s.K = static_cast<int>(std::ceil(2 * R / s.d_xi));
  s.h.resize(2 * static_cast<std::size_t>(s.K) + 1);
  for (int j = -s.K; j <= s.K; ++j) {
    const Real xi = j * s.d_xi;
    s.h[j + s.K] = cutoff_chi(xi / R) * std::polar(1.0, t * phase_unchecked(params.beta(), std::abs(xi)));
  }
  int points = 8;
  while (points < 8 * static_cast<int>(s.h.size())) points *= 2;
  const GridSpec transform(1, 1.0, points);
  std::vector<Complex> buffer(points, Complex(0));
  for (int j = -s.K; j <= s.K; ++j) buffer[transform.storage_index(j)] = s.h[j + s.K];
  detail::fft_inplace(transform, buffer.data(), detail::FftDirection::kBackward);
  const Real dx = 2 * kPi / (points * s.d_xi);

  // Refine the three largest grid peaks.
  std::vector<std::pair<Real, int>> peaks;
  for (int k = 0; k < points; ++k) {
    const Real v = std::abs(buffer[k]);
    if (v >= std::abs(buffer[(k + 1) % points]) && v >= std::abs(buffer[(k + points - 1) % points]))
      peaks.emplace_back(v, k);
  }
  std::partial_sort(peaks.begin(), peaks.begin() + std::min<std::size_t>(3, peaks.size()), peaks.end(),
                    [](auto& a, auto& b) { return a.first > b.first; });
  Real best = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, peaks.size()); ++i) {
    const Real x = transform.wavenumber(peaks[i].second) * dx;
    best = std::max(best, refine_peak(s, x - dx, x + dx));
  }
  return best;
}

}  // namespace

Real uniform_1d_decay(DispersionParams params, Real t) {
  if (t == 0 || !std::isfinite(t)) throw PreconditionError("uniform_1d_decay: t must be finite and nonzero");
  Real R = 2;
  Real previous = truncated_sup(params, t, R);
  while (R < 64) {
    R *= 2;
    const Real current = truncated_sup(params, t, R);
    if (std::abs(current - previous) <= 1e-6 * current) return current;
    previous = current;
  }
  throw ConvergenceError("uniform_1d_decay: truncation radius did not settle by R = 64");
}

Real corput_bound(std::span<const Real> g, Real A, Real t, Real a, Real b) {
  if (!(A > 0)) throw DomainError("corput_bound: A must be positive");
  if (!(t > 0)) throw DomainError("corput_bound: t must be positive");
  if (!(a < b)) throw DomainError("corput_bound: need a < b");
  if (g.size() < 2) throw PreconditionError("corput_bound: need at least two samples of g");
  Real variation = 0;
  for (std::size_t i = 1; i < g.size(); ++i) variation += std::abs(g[i] - g[i - 1]);
  return (std::abs(g.back()) + variation) / std::sqrt(A * t);
}

void write_kernel_sweep_csv(const std::filesystem::path& path, std::span<const KernelSweepRow> rows) {
  detail::CsvWriter csv(path, {"n", "beta", "lambda", "t", "sup_abs", "scaled_value"});
  for (const auto& row : rows)
    csv.row({static_cast<Real>(row.n), static_cast<Real>(row.beta), row.lambda, row.t, row.sup_abs, row.scaled_value});
}

}  // namespace boussinesq
