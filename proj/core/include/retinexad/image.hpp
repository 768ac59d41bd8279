#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace retinexad {

/// Default offset added before taking logarithms: one 8-bit quantum.
inline constexpr double kDefaultLogEpsilon = 1.0 / 255.0;

/// Single-channel row-major raster of real values.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);
  Plane(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int x, int y) { return data_[index(x, y)]; }
  double operator()(int x, int y) const { return data_[index(x, y)]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::span<double> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
  std::span<const double> row(int y) const {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  bool same_shape(const Plane& other) const { return width_ == other.width_ && height_ == other.height_; }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

enum class ColourSpace { kRGB, kHSI, kHSV };

/// Three equally sized planes tagged with their colour space. In HSI/HSV the
/// planes are (H, S, I|V) with H normalized to [0,1).
struct ColourImage {
  std::array<Plane, 3> planes;
  ColourSpace space = ColourSpace::kRGB;

  ColourImage() = default;
  ColourImage(Plane c0, Plane c1, Plane c2, ColourSpace space = ColourSpace::kRGB);

  int width() const { return planes[0].width(); }
  int height() const { return planes[0].height(); }
  Plane& operator[](std::size_t c) { return planes[c]; }
  const Plane& operator[](std::size_t c) const { return planes[c]; }

  friend bool operator==(const ColourImage&, const ColourImage&) = default;
};

struct ChannelStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
};

/// Mean, population standard deviation, min and max, summed in row-major order.
ChannelStats channel_stats(const Plane& p);

/// ln(p + eps) elementwise.
Plane to_log(const Plane& p, double eps = kDefaultLogEpsilon);

/// exp(p) - eps elementwise, clamped to [0,1].
Plane from_log(const Plane& p, double eps = kDefaultLogEpsilon);

/// exp(p) - eps without clamping; the exact inverse of to_log.
Plane from_log_unclamped(const Plane& p, double eps = kDefaultLogEpsilon);

/// Nearest-rank quantile: the ceil(q*n)-th smallest value (q=0 gives the minimum).
double quantile(std::span<const double> values, double q);

/// Affine map sending the p_lo quantile to 0 and the p_hi quantile to 1,
/// clamped to [0,1]. When both quantiles coincide every pixel maps to 0.5.
Plane normalize_percentile(const Plane& p, double p_lo, double p_hi);

/// Mean of the three RGB planes, i.e. the HSI intensity.
Plane luminance(const ColourImage& rgb);

Plane transpose(const Plane& p);
ColourImage transpose(const ColourImage& img);

Plane clamp01(Plane p);

/// True when every value is finite.
bool all_finite(const Plane& p);

}  // namespace retinexad
