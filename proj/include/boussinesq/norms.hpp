// Sobolev and Gevrey norms, the Bourgain X^{s,b} norm of sampled
// trajectories, mixed space-time Lebesgue norms, Strichartz admissibility and
// the localized bilinear and trilinear estimate ratios.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "boussinesq/dyadic.hpp"
#include "boussinesq/propagator.hpp"

namespace boussinesq {

/// exp(sigma |xi|) or cosh(sigma |xi|).
enum class GevreyWeight { kExp, kCosh };

/// Largest sigma |xi| accepted by the Gevrey weights.
inline constexpr Real kGevreyExponentLimit = 700;

class NormSpec {
 public:
  enum class Kind { kSobolev, kGevrey, kBourgain, kMixed };

  static NormSpec sobolev(Real s);
  /// Throws DomainError for sigma < 0.
  static NormSpec gevrey(Real sigma, Real s, GevreyWeight weight);
  /// Throws DomainError unless b > 1/2.
  static NormSpec bourgain(Real s, Real b);
  /// Throws DomainError unless 2 < q < inf, 2 <= r <= inf and T > 0.
  static NormSpec mixed(Real q, Real r, Real T);

  Kind kind() const { return kind_; }
  Real s() const { return s_; }
  Real sigma() const { return sigma_; }
  GevreyWeight weight() const { return weight_; }
  Real b() const { return b_; }
  Real q() const { return q_; }
  Real r() const { return r_; }
  Real T() const { return T_; }

 private:
  NormSpec() = default;
  Kind kind_ = Kind::kSobolev;
  Real s_ = 0, sigma_ = 0, b_ = 0, q_ = 0, r_ = 0, T_ = 0;
  GevreyWeight weight_ = GevreyWeight::kExp;
};

/// Spatial Fourier weight <xi>^s (times e^{sigma xi} or cosh(sigma xi)).
Real fourier_weight(const NormSpec& spec, Real xi);

/// ||w(xi) c||, Parseval-scaled. Sobolev and Gevrey specs only. Throws
/// DomainError when sigma * max|xi| exceeds kGevreyExponentLimit.
Real spatial_norm(const SpectralField& field, const NormSpec& spec);

/// The chi bump moved to [0, T] with plateau [T/4, 3T/4].
Real time_window(Real t, Real T);

/// kDispersion demodulates each mode by exp(-i m(xi) t) before the time
/// transform, so the discrete tau-window is centered on tau = m(xi) and the
/// half-wave S_m(t) never aliases. kZero transforms the raw samples.
enum class TemporalCentering { kDispersion, kZero };

/// X^{s,b} norm of samples u(t0 + j dt), j < M, M a power of two >= 8, on the
/// window [t0, t0 + M dt). Normalised so that b = 0 gives the rectangle-rule
/// L^2_{t,x} norm of the windowed trajectory. Throws PreconditionError for
/// non-uniform times or a bad sample count.
Real xsb_norm(DispersionParams params, std::span<const SpectralField> trajectory, std::span<const Real> times,
              const NormSpec& spec, TemporalCentering centering = TemporalCentering::kDispersion);

/// Same weight without the b > 1/2 restriction (b >= 0), for diagnostics.
Real xsb_norm_weighted(DispersionParams params, std::span<const SpectralField> trajectory, std::span<const Real> times,
                       Real s, Real b, TemporalCentering centering = TemporalCentering::kDispersion);

/// Rectangle rule in time: sample j carries weight t_{j+1} - t_j and the last
/// sample T - t_last. times must be increasing, start at 0 and end at or
/// before T.
Real mixed_norm_from_slices(std::span<const Real> times, std::span<const Real> slice_norms, Real q, Real T);

/// L^q_t L^r_x norm of a sampled trajectory (L^inf_x is the grid maximum).
Real mixed_norm(std::span<const SpectralField> trajectory, std::span<const Real> times, const NormSpec& spec);

/// Lebesgue exponent: a positive rational or infinity.
class Exponent {
 public:
  static Exponent ratio(long long num, long long den);
  static Exponent integer(long long value) { return ratio(value, 1); }
  static Exponent infinity();
  /// "4", "10/3" or "inf".
  static Exponent parse(const std::string& text);

  bool infinite() const { return infinite_; }
  long long num() const { return num_; }
  long long den() const { return den_; }
  Real value() const;
  std::string to_string() const;

 private:
  long long num_ = 1, den_ = 1;
  bool infinite_ = false;
};

/// q > 2, r >= 2 and 2/q + n/r = n/2, checked in integer arithmetic.
class AdmissiblePair {
 public:
  /// Throws DomainError when the pair is not admissible.
  AdmissiblePair(int n, Exponent q, Exponent r);
  static bool admissible(int n, Exponent q, Exponent r);

  int dimension() const { return n_; }
  Exponent q() const { return q_; }
  Exponent r() const { return r_; }

 private:
  int n_;
  Exponent q_, r_;
};

struct EstimateRatio {
  Real lhs = 0;
  Real rhs = 0;
  Real ratio = 0;
};

/// ||S_m(t) P_l f||_{L^q([0,T]) L^r} / (l^{-1/q} ||P_l f||_2) with the time
/// integral over the given samples (times[0] = 0, T = last time). Requires
/// l >= 4 and the band to fit the grid; throws DomainError when P_l f = 0.
EstimateRatio strichartz_ratio(DispersionParams params, DyadicBand band, const SpectralField& f,
                               const AdmissiblePair& pair, std::span<const Real> times);

/// kGeneral: B = min^{n/2} (bilinear), (min med)^{n/2} (trilinear).
/// kHighFrequency: the large-max forms; kHighMedian: the n = 1 trilinear form
/// (med max)^{-1/4} for a large median frequency.
enum class EstimateRegime { kGeneral, kHighFrequency, kHighMedian };

inline constexpr Real kEstimateDelta = 0.01;

Real bilinear_bound(int n, Real lambda1, Real lambda2, EstimateRegime regime, Real delta = kEstimateDelta);
Real trilinear_bound(int n, Real lambda1, Real lambda2, Real lambda3, EstimateRegime regime,
                     Real delta = kEstimateDelta);

/// ||P_l1 u1 P_l2 u2||_{L^2_T L^2} / (B ||P_l1 u1||_{X^{0,b}} ||P_l2 u2||_{X^{0,b}})
/// over uniform samples spanning [t0, t0 + M dt). A zero factor gives ratio 0.
/// kHighFrequency requires max(l1, l2) >= 8. Throws PreconditionError when
/// the product can alias on the grid (sum of upper band edges >= Nyquist).
EstimateRatio bilinear_ratio(DispersionParams params, DyadicBand l1, DyadicBand l2,
                             std::span<const SpectralField> u1, std::span<const SpectralField> u2,
                             std::span<const Real> times, Real b, EstimateRegime regime);

EstimateRatio trilinear_ratio(DispersionParams params, DyadicBand l1, DyadicBand l2, DyadicBand l3,
                              std::span<const SpectralField> u1, std::span<const SpectralField> u2,
                              std::span<const SpectralField> u3, std::span<const Real> times, Real b,
                              EstimateRegime regime);

}  // namespace boussinesq
