#pragma once

#include <span>
#include <string>
#include <vector>

#include "retinexad/image.hpp"

namespace retinexad {

/// Shannon entropy in bits of the 256-bin histogram of a [0,1] plane.
double entropy(const Plane& p, int bins = 256);

struct EntropySlopes {
  std::vector<double> first;   // n-1 values
  std::vector<double> second;  // n-2 values
};

/// Forward differences of an entropy series smoothed by a centred mean over
/// +-window/2 neighbours (window shrinks symmetrically at the ends), and the
/// forward differences of that. Throws InvalidArgument for fewer than 3 values.
EntropySlopes entropy_derivatives(std::span<const double> series, int window);

/// Causal variant used while a run is in progress: entry n is the mean of the
/// last `window` forward differences ending at n (0 for n = 0). Same length as
/// the series.
std::vector<double> trailing_entropy_slope(std::span<const double> series, int window);

/// Features of the blockiness/activity/zero-crossing quality model, averaged
/// over the horizontal and vertical passes (8-bit luminance scale).
struct PqmFeatures {
  double blockiness = 0.0;
  double activity = 0.0;
  double zero_crossing = 0.0;
};

PqmFeatures pqm_features(const ColourImage& rgb);

/// No-reference perceptual quality score a + b B^g1 A^g2 Z^g3 of the luminance.
/// Throws InvalidArgument("image too small for PQM") below 16x16.
double pqm(const ColourImage& rgb);

/// Opponent-axis colourfulness sqrt(s_rg^2 + s_yb^2) + 0.3 sqrt(m_rg^2 + m_yb^2).
double colourfulness(const ColourImage& rgb);
/// The standard-deviation part of colourfulness only.
double colourfulness_spread(const ColourImage& rgb);

inline constexpr double kRatioSentinel = 1e6;

/// enh/orig with x/0 -> kRatioSentinel and 0/0 -> 1, both flagged.
struct Ratio {
  double value = 1.0;
  bool guarded = false;
};

Ratio guarded_ratio(double enhanced, double original);

/// Colourfulness ratio enhanced/original.
Ratio rc(const ColourImage& orig, const ColourImage& enh);
/// Contrast enhancement factor: colourfulness_spread ratio.
Ratio cef(const ColourImage& orig, const ColourImage& enh);

/// Mean over a block_rows x block_cols grid of 20 log10((max m + eps)/(min m + eps)),
/// m = sqrt(R^2+G^2+B^2).
double emec(const ColourImage& rgb, int block_rows = 8, int block_cols = 8, double eps = 1e-4);

/// Mean of sqrt((dx^2+dy^2)/2) over pixels with forward neighbours in both axes.
double avg_gradient(const Plane& p);

struct HueDeviation {
  double degrees = 0.0;
  bool no_pixels = false;
};

/// Mean circular HSV hue distance over pixels saturated (>= s_min) in both.
HueDeviation hdi(const ColourImage& orig, const ColourImage& enh, double s_min = 0.05);

/// Standard deviation of the Prewitt gradient-magnitude similarity map.
double gmsd(const Plane& a, const Plane& b, double c = 0.0026);

struct MetricConfig {
  int emec_block_rows = 8;
  int emec_block_cols = 8;
  double emec_eps = 1e-4;
  double hdi_s_min = 0.05;
};

/// Absolute metrics and enhanced/original ratios for one image pair.
/// Luminance-based fields use (R+G+B)/3.
struct MetricReport {
  double RC = 1.0;
  double F = 1.0;
  double PQM = 0.0;
  double REMEC = 1.0;
  double RM = 1.0;
  double RSD = 1.0;
  double RE = 1.0;
  double RAG = 1.0;
  double HDI = 0.0;
  double EMEC_2 = 0.0;
  double EMEC_1 = 0.0;
  double GMSD = 0.0;
  double E_orig = 0.0;
  double E_enh = 0.0;
  double AG_orig = 0.0;
  double AG_enh = 0.0;
  double C_orig = 0.0;
  double C_enh = 0.0;
  /// Names of fields whose value came from a division guard or an empty HDI set.
  std::vector<std::string> flags;
};

MetricReport metric_report(const ColourImage& orig, const ColourImage& enh, const MetricConfig& cfg = {});

/// Numeric columns in serialization order; the first ten follow the table layout
/// RC,F,PQM,REMEC,RM,RSD,RE,RAG,HDI,EMEC_2.
std::vector<std::string> report_columns();
std::vector<double> report_values(const MetricReport& r);

/// Header plus one data row, LF line endings.
std::string report_to_csv(const MetricReport& r);
std::string report_to_json(const MetricReport& r);

/// Shortest round-trip decimal rendering used in every CSV this library writes.
std::string format_number(double v);

}  // namespace retinexad
