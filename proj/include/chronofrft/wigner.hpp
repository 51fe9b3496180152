#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "chronofrft/signal.hpp"

namespace chronofrft {

struct Axis {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double back() const { return at(count - 1); }
};

/// Chronocyclic Wigner function sampled on (time, frequency). Values are
/// row-major: values[i_t * freq_axis.count + i_w].
struct WignerMap {
  Axis time_axis;
  Axis freq_axis;
  std::vector<double> values;
  /// max |Im W| / max |Re W| left over by the transform.
  double imag_residue = 0.0;

  double at(std::size_t it, std::size_t iw) const { return values[it * freq_axis.count + iw]; }
  double& at(std::size_t it, std::size_t iw) { return values[it * freq_axis.count + iw]; }
  double integral() const;
};

struct WignerOptions {
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  double w_min = -std::numeric_limits<double>::infinity();
  double w_max = std::numeric_limits<double>::infinity();
  /// Zero-padding of the lag transform (power of two). Refines the
  /// frequency step without changing the marginals.
  std::size_t pad_factor = 1;
};

// W(w, q) = 1/(2 pi) integral dxi E(q + xi/2) E*(q - xi/2) exp(+i w xi).
// The lag xi runs in steps of 2 dt, so the frequency axis covers
// [-pi/(2 dt), pi/(2 dt)) with step pi / (pad * n * dt). On the uncropped
// map both marginals are exact for signals band-limited below pi/(2 dt).
WignerMap wigner(const SampledEnvelope& e, const WignerOptions& opts = {});

/// Map cropped to [-half_extent, half_extent]^2, ready for rotate_map.
WignerMap wigner_square(const SampledEnvelope& e, double half_extent, std::size_t pad_factor = 2);

/// integral W dw per time row.
std::vector<double> time_marginal(const WignerMap& w);
/// integral W dq per frequency column.
std::vector<double> frequency_marginal(const WignerMap& w);

/// Rigid counter-clockwise rotation in the (q, w) plane, bilinear
/// interpolation, zero outside the source domain:
///   W'(q, w) = W(q cos phi + w sin phi, -q sin phi + w cos phi).
/// Requires equal extents on both axes.
WignerMap rotate_map(const WignerMap& w, double phi);

/// Normalized cross-correlation  int ab / sqrt(int a^2 int b^2), clipped to
/// [0, 1]. For pure states it coincides with state_fidelity.
double map_fidelity(const WignerMap& a, const WignerMap& b);

/// |<a|b>|^2 / (<a|a><b|b>).
double state_fidelity(const SampledEnvelope& a, const SampledEnvelope& b);

/// ||a - b|| / ||b|| over the common sample grid.
double map_l2_difference(const WignerMap& a, const WignerMap& b);

/// Block-averages the map down to at most max_t x max_w samples.
WignerMap bin_map(const WignerMap& w, std::size_t max_t = 512, std::size_t max_w = 512);

}  // namespace chronofrft
