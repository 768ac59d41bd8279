#include "retinexad/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "retinexad/error.hpp"

namespace retinexad {

Plane::Plane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InvalidArgument("negative plane dimensions");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Plane::Plane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0) throw InvalidArgument("negative plane dimensions");
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("plane data length " + std::to_string(data_.size()) + " does not match " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

ColourImage::ColourImage(Plane c0, Plane c1, Plane c2, ColourSpace s)
    : planes{std::move(c0), std::move(c1), std::move(c2)}, space(s) {
  if (!planes[0].same_shape(planes[1]) || !planes[0].same_shape(planes[2])) {
    throw InvalidArgument("colour planes differ in size");
  }
}

ChannelStats channel_stats(const Plane& p) {
  if (p.empty()) throw InvalidArgument("channel_stats of an empty plane");
  const auto v = p.values();
  double sum = 0.0;
  double lo = v[0];
  double hi = v[0];
  for (double x : v) {
    sum += x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double n = static_cast<double>(v.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  // Rounding can push the mean a hair outside [min,max] on constant planes.
  return {std::clamp(mean, lo, hi), std::sqrt(ss / n), lo, hi};
}

Plane to_log(const Plane& p, double eps) {
  Plane out(p.width(), p.height());
  auto o = out.values();
  auto in = p.values();
  for (std::size_t k = 0; k < in.size(); ++k) o[k] = std::log(in[k] + eps);
  return out;
}

Plane from_log_unclamped(const Plane& p, double eps) {
  Plane out(p.width(), p.height());
  auto o = out.values();
  auto in = p.values();
  for (std::size_t k = 0; k < in.size(); ++k) o[k] = std::exp(in[k]) - eps;
  return out;
}

Plane from_log(const Plane& p, double eps) { return clamp01(from_log_unclamped(p, eps)); }

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty set");
  std::vector<double> tmp(values.begin(), values.end());
  const auto n = static_cast<double>(tmp.size());
  auto rank = static_cast<std::ptrdiff_t>(std::ceil(q * n)) - 1;
  rank = std::clamp<std::ptrdiff_t>(rank, 0, static_cast<std::ptrdiff_t>(tmp.size()) - 1);
  std::nth_element(tmp.begin(), tmp.begin() + rank, tmp.end());
  return tmp[static_cast<std::size_t>(rank)];
}

Plane normalize_percentile(const Plane& p, double p_lo, double p_hi) {
  if (!(0.0 <= p_lo && p_lo < p_hi && p_hi <= 1.0)) {
    throw InvalidArgument("percentiles must satisfy 0 <= lo < hi <= 1");
  }
  Plane out(p.width(), p.height(), 0.5);
  if (p.empty()) return out;
  const double lo = quantile(p.values(), p_lo);
  const double hi = quantile(p.values(), p_hi);
  if (!(hi > lo)) return out;
  const double scale = 1.0 / (hi - lo);
  auto o = out.values();
  auto in = p.values();
  for (std::size_t k = 0; k < in.size(); ++k) o[k] = std::clamp((in[k] - lo) * scale, 0.0, 1.0);
  return out;
}

Plane luminance(const ColourImage& rgb) {
  Plane out(rgb.width(), rgb.height());
  auto o = out.values();
  auto r = rgb[0].values();
  auto g = rgb[1].values();
  auto b = rgb[2].values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = (r[k] + g[k] + b[k]) / 3.0;
  return out;
}

Plane transpose(const Plane& p) {
  Plane out(p.height(), p.width());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) out(y, x) = p(x, y);
  }
  return out;
}

ColourImage transpose(const ColourImage& img) {
  return ColourImage(transpose(img[0]), transpose(img[1]), transpose(img[2]), img.space);
}

Plane clamp01(Plane p) {
  for (double& v : p.values()) v = std::clamp(v, 0.0, 1.0);
  return p;
}

bool all_finite(const Plane& p) {
  return std::all_of(p.values().begin(), p.values().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace retinexad
