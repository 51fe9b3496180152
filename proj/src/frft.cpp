#include "chronofrft/frft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "chronofrft/errors.hpp"

namespace chronofrft {
namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

LensCoefficients lens_coefficients(double phi) {
  if (!std::isfinite(phi) || std::abs(phi) >= kPi) {
    throw DomainError("lens coefficients d_t = tan(phi/2), d_omega = sin(phi) hold only for "
                      "phi in (-pi, pi); got phi = " + fmt_double(phi) +
                      " (use a split plan for larger angles)");
  }
  return {std::tan(0.5 * phi), std::sin(phi)};
}

std::vector<double> decompose_angle(double phi) {
  double r = std::remainder(phi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (std::abs(r) <= 0.5 * kPi) return {r};
  const int stages = static_cast<int>(std::ceil(std::abs(r) / (0.5 * kPi)));
  return std::vector<double>(static_cast<std::size_t>(stages), r / stages);
}

FrftPlan make_plan(double phi, FrftMethod method, bool split) {
  if (!std::isfinite(phi)) throw InvalidArgument("FrFT angle must be finite");
  FrftPlan plan;
  plan.phi = phi;
  plan.method = method;
  std::vector<double> angles = split ? decompose_angle(phi) : std::vector<double>{phi};
  for (double a : angles) {
    auto c = lens_coefficients(a);
    plan.stages.push_back({a, c.d_t, c.d_omega});
  }
  return plan;
}

double temporal_lens_margin(const SampledEnvelope& e, double d_t) {
  const double rt = support_radius(e);
  const double rw = support_radius(to_spectrum(e));
  return kPi / e.grid.dt - (std::abs(d_t) * rt + rw);
}

double spectral_lens_margin(const SampledEnvelope& e, double d_omega) {
  const double rt = support_radius(e);
  const double rw = support_radius(to_spectrum(e));
  return e.grid.half_span() - (std::abs(d_omega) * rw + rt);
}

SampledEnvelope apply_temporal_lens(const SampledEnvelope& e, double d_t) {
  if (d_t == 0.0) return e;
  const double margin = temporal_lens_margin(e, d_t);
  if (margin < 0.0) {
    throw DomainError("temporal lens d_t = " + fmt_double(d_t) +
                      " pushes the instantaneous frequency past Nyquist (margin " +
                      fmt_double(margin) + "); refine dt or split the angle");
  }
  SampledEnvelope out = e;
  for (std::size_t j = 0; j < out.samples.size(); ++j) {
    const double q = e.grid.time(j);
    out.samples[j] *= std::polar(1.0, -0.5 * d_t * q * q);
  }
  return out;
}

SampledEnvelope apply_spectral_lens(const SampledEnvelope& e, double d_omega) {
  if (d_omega == 0.0) return e;
  const double margin = spectral_lens_margin(e, d_omega);
  if (margin < 0.0) {
    throw DomainError("spectral lens d_omega = " + fmt_double(d_omega) +
                      " delays the signal past the time window (margin " + fmt_double(margin) +
                      "); widen the grid");
  }
  SpectralEnvelope s = to_spectrum(e);
  for (std::size_t k = 0; k < s.samples.size(); ++k) {
    const double w = s.grid.omega(k);
    s.samples[k] *= std::polar(1.0, -0.5 * d_omega * w * w);
  }
  return from_spectrum(s);
}

SampledEnvelope apply_lens(const SampledEnvelope& e, const LensSpec& lens) {
  if (!std::isfinite(lens.power)) throw InvalidArgument("lens power must be finite");
  return lens.kind == LensKind::temporal ? apply_temporal_lens(e, lens.power)
                                         : apply_spectral_lens(e, lens.power);
}

SampledEnvelope frft_lens_sequence(const SampledEnvelope& e, const FrftPlan& plan) {
  SampledEnvelope out = e;
  for (const auto& st : plan.stages) {
    out = apply_temporal_lens(out, st.d_t);
    out = apply_spectral_lens(out, st.d_omega);
    out = apply_temporal_lens(out, st.d_t);
  }
  return out;
}

SampledEnvelope frft_lens_sequence(const SampledEnvelope& e, double phi, bool split) {
  return frft_lens_sequence(e, make_plan(phi, FrftMethod::lens_sequence, split));
}

HermiteBasis::HermiteBasis(const TimeGrid& grid, int n_max, double center, double width)
    : grid_(grid), n_max_(n_max), center_(center), width_(width) {
  if (n_max < 0) throw InvalidArgument("basis size must be non-negative");
  if (!(width > 0.0)) throw InvalidArgument("basis width must be positive");
  std::vector<double> x(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) x[j] = (grid.time(j) - center) / width;
  rows_ = hermite_function_table(n_max, x);

  // Modified Gram-Schmidt in the dt-weighted inner product.
  const double scale = 1.0 / std::sqrt(width);
  for (auto& row : rows_) {
    for (auto& v : row) v *= scale;
  }
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    auto& vk = rows_[k];
    for (std::size_t i = 0; i < k; ++i) {
      const auto& vi = rows_[i];
      double dot = 0.0;
      for (std::size_t j = 0; j < vk.size(); ++j) dot += vi[j] * vk[j];
      dot *= grid.dt;
      for (std::size_t j = 0; j < vk.size(); ++j) vk[j] -= dot * vi[j];
    }
    double nrm = 0.0;
    for (double v : vk) nrm += v * v;
    nrm = std::sqrt(nrm * grid.dt);
    if (!(nrm > 1e-6)) {
      throw DomainError("Hermite basis mode " + std::to_string(k) +
                        " is not resolved on this grid");
    }
    for (double& v : vk) v /= nrm;
  }
}

std::vector<Complex> HermiteBasis::coefficients(const SampledEnvelope& e) const {
  if (!(e.grid == grid_)) throw InvalidArgument("envelope grid differs from basis grid");
  std::vector<Complex> c(rows_.size());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const auto& row = rows_[k];
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * e.samples[j];
    c[k] = acc * grid_.dt;
  }
  return c;
}

SampledEnvelope HermiteBasis::synthesize(const std::vector<Complex>& coeffs) const {
  if (coeffs.size() > rows_.size()) throw InvalidArgument("more coefficients than basis modes");
  SampledEnvelope out = zeros(grid_);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const auto& row = rows_[k];
    const Complex ck = coeffs[k];
    if (ck == Complex{}) continue;
    for (std::size_t j = 0; j < row.size(); ++j) out.samples[j] += ck * row[j];
  }
  return out;
}

double HermiteBasis::residual(const SampledEnvelope& e) const {
  const double nrm = e.norm();
  if (nrm == 0.0) return 0.0;
  return l2_distance(e, synthesize(coefficients(e))) / nrm;
}

SampledEnvelope frft_direct_kernel(const SampledEnvelope& e, double phi, const HermiteBasis& basis) {
  if (!std::isfinite(phi)) throw InvalidArgument("FrFT angle must be finite");
  auto c = basis.coefficients(e);
  const double nrm = e.norm();
  if (nrm > 0.0) {
    const double res = l2_distance(e, basis.synthesize(c)) / nrm;
    if (res > kDirectKernelResidualTolerance) {
      throw DomainError("input is not representable in the Hermite basis up to n = " +
                        std::to_string(basis.n_max()) + " (residual " + fmt_double(res) + ")");
    }
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] *= std::polar(1.0, -static_cast<double>(k) * std::remainder(phi, 2.0 * kPi));
  }
  return basis.synthesize(c);
}

int default_basis_size(const TimeGrid& grid) {
  const double reach = std::min(grid.half_span(), kPi / grid.dt) - 5.0;
  if (reach <= 1.0) return 0;
  const int fit = static_cast<int>(std::floor((reach * reach - 1.0) / 2.0));
  return std::clamp(fit, 0, 256);
}

SampledEnvelope frft_direct_kernel(const SampledEnvelope& e, double phi) {
  HermiteBasis basis(e.grid, default_basis_size(e.grid));
  return frft_direct_kernel(e, phi, basis);
}

SampledEnvelope frft(const SampledEnvelope& e, const FrftPlan& plan) {
  if (plan.method == FrftMethod::direct_kernel) return frft_direct_kernel(e, plan.phi);
  return frft_lens_sequence(e, plan);
}

}  // namespace chronofrft
