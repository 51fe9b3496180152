#include "chronofrft/wigner.hpp"

#include <algorithm>
#include <cmath>

#include "chronofrft/errors.hpp"
#include "chronofrft/fft.hpp"

namespace chronofrft {
namespace {

bool same_axis(const Axis& a, const Axis& b) {
  const double tol = 1e-9 * std::max(std::abs(a.step), std::abs(b.step));
  return a.count == b.count && std::abs(a.start - b.start) <= tol &&
         std::abs(a.step - b.step) <= 1e-12 * std::abs(a.step);
}

void require_same_axes(const WignerMap& a, const WignerMap& b) {
  if (!same_axis(a.time_axis, b.time_axis) || !same_axis(a.freq_axis, b.freq_axis)) {
    throw InvalidArgument("Wigner maps are sampled on different axes");
  }
}

std::pair<std::size_t, std::size_t> index_range(double start, double step, std::size_t count,
                                                double lo, double hi) {
  std::size_t first = count, last = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = start + static_cast<double>(i) * step;
    if (x >= lo - 1e-12 && x <= hi + 1e-12) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  if (first == count) throw InvalidArgument("Wigner window excludes every sample");
  return {first, last + 1};
}

double sample_bilinear(const WignerMap& w, double q, double p) {
  const Axis& ta = w.time_axis;
  const Axis& fa = w.freq_axis;
  const double fi = (q - ta.start) / ta.step;
  const double fj = (p - fa.start) / fa.step;
  const double last_i = static_cast<double>(ta.count - 1);
  const double last_j = static_cast<double>(fa.count - 1);
  if (fi < 0.0 || fj < 0.0 || fi > last_i || fj > last_j) return 0.0;
  auto i0 = static_cast<std::size_t>(std::min(std::floor(fi), last_i - 1.0));
  auto j0 = static_cast<std::size_t>(std::min(std::floor(fj), last_j - 1.0));
  const double u = fi - static_cast<double>(i0);
  const double v = fj - static_cast<double>(j0);
  return (1 - u) * (1 - v) * w.at(i0, j0) + u * (1 - v) * w.at(i0 + 1, j0) +
         (1 - u) * v * w.at(i0, j0 + 1) + u * v * w.at(i0 + 1, j0 + 1);
}

}  // namespace

double WignerMap::integral() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * time_axis.step * freq_axis.step;
}

WignerMap wigner(const SampledEnvelope& e, const WignerOptions& opts) {
  const std::size_t n = e.grid.n;
  const std::size_t pad = opts.pad_factor;
  if (pad == 0 || (pad & (pad - 1)) != 0) {
    throw InvalidArgument("Wigner pad factor must be a power of two");
  }
  const std::size_t m_len = n * pad;
  const double dt = e.grid.dt;
  const double dw = kPi / (static_cast<double>(m_len) * dt);
  const double w_start = -0.5 * static_cast<double>(m_len) * dw;

  auto [t_first, t_end] = index_range(e.grid.t_start, dt, n, opts.t_min, opts.t_max);
  auto [w_first, w_end] = index_range(w_start, dw, m_len, opts.w_min, opts.w_max);

  WignerMap out;
  out.time_axis = Axis{e.grid.time(t_first), dt, t_end - t_first};
  out.freq_axis = Axis{w_start + static_cast<double>(w_first) * dw, dw, w_end - w_first};
  out.values.assign(out.time_axis.count * out.freq_axis.count, 0.0);

  const auto& s = e.samples;
  const long half = static_cast<long>(m_len / 2);
  std::vector<Complex> lag(m_len);
  double max_re = 0.0, max_im = 0.0;
  const double pref = dt / kPi;
  for (std::size_t j = t_first; j < t_end; ++j) {
    std::fill(lag.begin(), lag.end(), Complex{});
    const long jl = static_cast<long>(j);
    const long kmax = std::min({jl, static_cast<long>(n) - 1 - jl, half - 1});
    for (long k = -kmax; k <= kmax; ++k) {
      Complex r = s[static_cast<std::size_t>(jl + k)] * std::conj(s[static_cast<std::size_t>(jl - k)]);
      if (k & 1) r = -r;
      lag[static_cast<std::size_t>((k + static_cast<long>(m_len)) % static_cast<long>(m_len))] = r;
    }
    fft::transform(lag, fft::Direction::backward);
    const std::size_t row = j - t_first;
    for (std::size_t m = w_first; m < w_end; ++m) {
      const double re = pref * lag[m].real();
      const double im = pref * lag[m].imag();
      out.at(row, m - w_first) = re;
      max_re = std::max(max_re, std::abs(re));
      max_im = std::max(max_im, std::abs(im));
    }
  }
  out.imag_residue = max_re > 0.0 ? max_im / max_re : 0.0;
  return out;
}

WignerMap wigner_square(const SampledEnvelope& e, double half_extent, std::size_t pad_factor) {
  if (!(half_extent > 0.0)) throw InvalidArgument("map extent must be positive");
  WignerOptions opts;
  opts.t_min = opts.w_min = -half_extent;
  opts.t_max = opts.w_max = half_extent;
  opts.pad_factor = pad_factor;
  return wigner(e, opts);
}

std::vector<double> time_marginal(const WignerMap& w) {
  std::vector<double> m(w.time_axis.count, 0.0);
  for (std::size_t i = 0; i < w.time_axis.count; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.freq_axis.count; ++j) acc += w.at(i, j);
    m[i] = acc * w.freq_axis.step;
  }
  return m;
}

std::vector<double> frequency_marginal(const WignerMap& w) {
  std::vector<double> m(w.freq_axis.count, 0.0);
  for (std::size_t i = 0; i < w.time_axis.count; ++i) {
    for (std::size_t j = 0; j < w.freq_axis.count; ++j) m[j] += w.at(i, j);
  }
  for (double& v : m) v *= w.time_axis.step;
  return m;
}

WignerMap rotate_map(const WignerMap& w, double phi) {
  const Axis& ta = w.time_axis;
  const Axis& fa = w.freq_axis;
  const double tol = std::max(ta.step, fa.step);
  if (std::abs(ta.start - fa.start) > tol || std::abs(ta.back() - fa.back()) > tol) {
    throw InvalidArgument("rotate_map needs equal time and frequency extents");
  }
  WignerMap out = w;
  const double c = std::cos(phi), s = std::sin(phi);
  for (std::size_t i = 0; i < ta.count; ++i) {
    const double q = ta.at(i);
    for (std::size_t j = 0; j < fa.count; ++j) {
      const double p = fa.at(j);
      out.at(i, j) = sample_bilinear(w, q * c + p * s, -q * s + p * c);
    }
  }
  return out;
}

double map_fidelity(const WignerMap& a, const WignerMap& b) {
  require_same_axes(a, b);
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    ab += a.values[i] * b.values[i];
    aa += a.values[i] * a.values[i];
    bb += b.values[i] * b.values[i];
  }
  if (aa <= 0.0 || bb <= 0.0) return 0.0;
  return std::clamp(ab / std::sqrt(aa * bb), 0.0, 1.0);
}

double state_fidelity(const SampledEnvelope& a, const SampledEnvelope& b) {
  const double na = a.norm_squared(), nb = b.norm_squared();
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return std::norm(overlap(a, b)) / (na * nb);
}

double map_l2_difference(const WignerMap& a, const WignerMap& b) {
  require_same_axes(a, b);
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    diff += d * d;
    ref += b.values[i] * b.values[i];
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

WignerMap bin_map(const WignerMap& w, std::size_t max_t, std::size_t max_w) {
  if (max_t == 0 || max_w == 0) throw InvalidArgument("bin counts must be positive");
  const std::size_t ft = (w.time_axis.count + max_t - 1) / max_t;
  const std::size_t fw = (w.freq_axis.count + max_w - 1) / max_w;
  if (ft == 1 && fw == 1) return w;
  WignerMap out;
  out.time_axis = Axis{w.time_axis.start + 0.5 * (ft - 1) * w.time_axis.step,
                       w.time_axis.step * ft, w.time_axis.count / ft};
  out.freq_axis = Axis{w.freq_axis.start + 0.5 * (fw - 1) * w.freq_axis.step,
                       w.freq_axis.step * fw, w.freq_axis.count / fw};
  out.imag_residue = w.imag_residue;
  out.values.assign(out.time_axis.count * out.freq_axis.count, 0.0);
  const double inv = 1.0 / static_cast<double>(ft * fw);
  for (std::size_t i = 0; i < out.time_axis.count; ++i) {
    for (std::size_t j = 0; j < out.freq_axis.count; ++j) {
      double acc = 0.0;
      for (std::size_t a = 0; a < ft; ++a) {
        for (std::size_t b = 0; b < fw; ++b) acc += w.at(i * ft + a, j * fw + b);
      }
      out.at(i, j) = acc * inv;
    }
  }
  return out;
}

}  // namespace chronofrft
