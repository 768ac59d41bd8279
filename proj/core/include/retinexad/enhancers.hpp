#pragma once

#include <variant>
#include <vector>

#include "retinexad/image.hpp"

namespace retinexad {

struct TileGrid {
  int rows = 8;
  int cols = 8;
};

struct StretchRange {
  double lo = 0.01;
  double hi = 0.99;
};

/// Configuration of the contrast-enhancement driver and its building blocks.
struct EnhancerConfig {
  /// Gaussian surround scales in pixels. Empty means the resolution-relative
  /// defaults {min_dim/60, min_dim/12, min_dim/3}.
  std::vector<double> msr_scales;
  /// Per-scale weights. Empty means equal weights.
  std::vector<double> msr_weights;
  TileGrid clahe_tiles;
  /// Histogram bin cap as a fraction of the tile pixel count; 1.0 disables clipping.
  double clahe_clip = 0.01;
  StretchRange stretch;
  int bins = 256;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// Scales actually used for a plane of the given size.
std::vector<double> resolved_msr_scales(const EnhancerConfig& cfg, int width, int height);

/// Global histogram equalization: each pixel maps to the cumulative fraction of
/// pixels whose bin is at or below its own. A plane occupying a single bin is
/// returned unchanged.
Plane global_he(const Plane& p, int bins = 256);

/// Contrast limited adaptive histogram equalization. Per-tile clipped
/// histograms (excess redistributed uniformly) give tile CDF mappings that are
/// bilinearly interpolated between tile centres.
Plane clahe(const Plane& p, TileGrid tiles, double clip, int bins = 256);

/// Separable Gaussian blur, kernel truncated at +-ceil(3 sigma) and normalized
/// to unit sum, replicate boundary. sigma = 0 is the identity.
Plane gaussian_surround(const Plane& p, double sigma);

/// Weighted multi-scale Retinex log ratio sum_k w_k [ln(p+eps) - ln(G_k * p + eps)].
Plane msr_reflectance(const Plane& p, const EnhancerConfig& cfg, double eps = kDefaultLogEpsilon);

/// Local-global drive target for the log-domain evolution: MSR reflectance,
/// percentile stretch, then CLAHE, returned in the log domain.
Plane guided_enhance(const Plane& i_log, const EnhancerConfig& cfg, double eps = kDefaultLogEpsilon);

/// Spatial homomorphic filter: gamma_low scales the Gaussian-smoothed log
/// image, gamma_high the residual detail.
Plane homomorphic_filter(const Plane& p, double gamma_low, double gamma_high, double sigma_c,
                         double eps = kDefaultLogEpsilon);

namespace gain {
struct MinMax {};
struct MeanStd {
  double k = 2.0;
};
struct Percentile {
  double lo = 0.01;
  double hi = 0.99;
};
}  // namespace gain

using GainOffsetMode = std::variant<gain::MinMax, gain::MeanStd, gain::Percentile>;

/// Affine contrast stretch selected by `mode`, clamped to [0,1]. Degenerate
/// inputs (zero range) map to 0.5.
Plane gain_offset(const Plane& p, const GainOffsetMode& mode);

}  // namespace retinexad
