#pragma once

#include <vector>

#include "chronofrft/signal.hpp"

namespace chronofrft {

enum class FrftMethod { lens_sequence, direct_kernel };

struct LensCoefficients {
  double d_t = 0.0;
  double d_omega = 0.0;
};

/// One temporal-spectral-temporal lens triple realizing a rotation by `phi`.
struct LensStage {
  double phi = 0.0;
  double d_t = 0.0;
  double d_omega = 0.0;
};

struct FrftPlan {
  double phi = 0.0;
  std::vector<LensStage> stages;
  FrftMethod method = FrftMethod::lens_sequence;
};

enum class LensKind { temporal, spectral };

struct LensSpec {
  LensKind kind = LensKind::temporal;
  double power = 0.0;
};

/// d_t = tan(phi/2), d_omega = sin(phi). Only valid on (-pi, pi); throws
/// DomainError otherwise.
LensCoefficients lens_coefficients(double phi);

/// Reduces phi into (-pi, pi] and splits it into equal stages of at most
/// pi/2 each. The stage angles sum to phi modulo 2 pi.
std::vector<double> decompose_angle(double phi);

/// With split = false the lens plan is a single stage at phi itself, which
/// must lie in (-pi, pi).
FrftPlan make_plan(double phi, FrftMethod method = FrftMethod::lens_sequence, bool split = true);

// Lens guards. A positive margin means the lens output stays resolvable:
//   temporal: pi/dt - (|d_t| R_t + R_w)      (instantaneous frequency vs Nyquist)
//   spectral: T/2   - (|d_omega| R_w + R_t)  (delayed support vs half window)
// with R_t, R_w the time and frequency support radii of the input.
double temporal_lens_margin(const SampledEnvelope& e, double d_t);
double spectral_lens_margin(const SampledEnvelope& e, double d_omega);

/// E(q) -> E(q) exp(-i d_t q^2 / 2). Throws DomainError on a negative margin.
SampledEnvelope apply_temporal_lens(const SampledEnvelope& e, double d_t);

/// E~(w) -> E~(w) exp(-i d_omega w^2 / 2). Throws DomainError on a negative margin.
SampledEnvelope apply_spectral_lens(const SampledEnvelope& e, double d_omega);

SampledEnvelope apply_lens(const SampledEnvelope& e, const LensSpec& lens);

/// Temporal(d_t) -> spectral(d_omega) -> temporal(d_t) per stage. Realizes
/// the rotation up to an angle-dependent global phase.
SampledEnvelope frft_lens_sequence(const SampledEnvelope& e, const FrftPlan& plan);
SampledEnvelope frft_lens_sequence(const SampledEnvelope& e, double phi, bool split = true);

/// Orthonormalized Hermite-Gaussian basis sampled on a grid.
class HermiteBasis {
 public:
  HermiteBasis(const TimeGrid& grid, int n_max = 256, double center = 0.0, double width = 1.0);

  const TimeGrid& grid() const { return grid_; }
  int n_max() const { return n_max_; }
  double center() const { return center_; }
  double width() const { return width_; }
  const std::vector<double>& mode(int n) const { return rows_.at(static_cast<std::size_t>(n)); }

  std::vector<Complex> coefficients(const SampledEnvelope& e) const;
  SampledEnvelope synthesize(const std::vector<Complex>& coeffs) const;

  /// ||e - P e|| / ||e|| with P the projector onto the basis span.
  double residual(const SampledEnvelope& e) const;

 private:
  TimeGrid grid_;
  int n_max_;
  double center_;
  double width_;
  std::vector<std::vector<double>> rows_;
};

inline constexpr double kDirectKernelResidualTolerance = 1e-9;

/// 256, reduced on grids too small for that many modes to stay resolved
/// in both time and frequency (5 tau-units of headroom beyond the turning
/// point of the highest mode).
int default_basis_size(const TimeGrid& grid);

/// Spectral definition: expand in H^G_n, multiply by exp(-i n phi),
/// resynthesize. Any real phi. Throws DomainError when the input leaves more
/// than 1e-9 of its norm outside the basis span.
SampledEnvelope frft_direct_kernel(const SampledEnvelope& e, double phi, const HermiteBasis& basis);
SampledEnvelope frft_direct_kernel(const SampledEnvelope& e, double phi);

/// Dispatches on plan.method.
SampledEnvelope frft(const SampledEnvelope& e, const FrftPlan& plan);

}  // namespace chronofrft
