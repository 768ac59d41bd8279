#include "retinexad/colour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "retinexad/error.hpp"

namespace retinexad {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_space(const ColourImage& img, ColourSpace space, const char* what) {
  if (img.space != space) throw InvalidArgument(std::string(what) + ": wrong input colour space");
}

// Wraps a hue fraction into [0,1); 1.0 - tiny can round up to exactly 1.
double wrap_unit(double h) {
  h -= std::floor(h);
  return h >= 1.0 ? 0.0 : h;
}

}  // namespace

ColourImage rgb_to_hsi(const ColourImage& rgb) {
  require_space(rgb, ColourSpace::kRGB, "rgb_to_hsi");
  const int w = rgb.width();
  const int h = rgb.height();
  Plane hue(w, h), sat(w, h), inten(w, h);
  auto R = rgb[0].values();
  auto G = rgb[1].values();
  auto B = rgb[2].values();
  auto H = hue.values();
  auto S = sat.values();
  auto I = inten.values();
  for (std::size_t k = 0; k < H.size(); ++k) {
    const double r = R[k], g = G[k], b = B[k];
    const double sum = r + g + b;
    I[k] = sum / 3.0;
    S[k] = sum > 0.0 ? std::clamp(1.0 - 3.0 * std::min({r, g, b}) / sum, 0.0, 1.0) : 0.0;
    const double den = std::sqrt((r - g) * (r - g) + (r - b) * (g - b));
    if (S[k] == 0.0 || den <= 0.0) {
      H[k] = 0.0;
      continue;
    }
    const double num = 0.5 * ((r - g) + (r - b));
    const double theta = std::acos(std::clamp(num / den, -1.0, 1.0)) / kDegToRad;
    H[k] = wrap_unit((b <= g ? theta : 360.0 - theta) / 360.0);
  }
  return ColourImage(std::move(hue), std::move(sat), std::move(inten), ColourSpace::kHSI);
}

ColourImage hsi_to_rgb(const ColourImage& hsi) {
  require_space(hsi, ColourSpace::kHSI, "hsi_to_rgb");
  const int w = hsi.width();
  const int h = hsi.height();
  Plane red(w, h), green(w, h), blue(w, h);
  auto H = hsi[0].values();
  auto S = hsi[1].values();
  auto I = hsi[2].values();
  auto R = red.values();
  auto G = green.values();
  auto B = blue.values();
  for (std::size_t k = 0; k < R.size(); ++k) {
    const double s = S[k];
    const double i = I[k];
    if (s <= 0.0) {
      R[k] = G[k] = B[k] = std::clamp(i, 0.0, 1.0);
      continue;
    }
    double deg = wrap_unit(H[k]) * 360.0;
    int sector = 0;
    if (deg >= 240.0) {
      sector = 2;
      deg -= 240.0;
    } else if (deg >= 120.0) {
      sector = 1;
      deg -= 120.0;
    }
    const double low = i * (1.0 - s);
    const double lead = i * (1.0 + s * std::cos(deg * kDegToRad) / std::cos((60.0 - deg) * kDegToRad));
    const double rest = 3.0 * i - (low + lead);
    double r = 0, g = 0, b = 0;
    switch (sector) {
      case 0: b = low; r = lead; g = rest; break;
      case 1: r = low; g = lead; b = rest; break;
      default: g = low; b = lead; r = rest; break;
    }
    R[k] = std::clamp(r, 0.0, 1.0);
    G[k] = std::clamp(g, 0.0, 1.0);
    B[k] = std::clamp(b, 0.0, 1.0);
  }
  return ColourImage(std::move(red), std::move(green), std::move(blue), ColourSpace::kRGB);
}

ColourImage rgb_to_hsv(const ColourImage& rgb) {
  require_space(rgb, ColourSpace::kRGB, "rgb_to_hsv");
  const int w = rgb.width();
  const int h = rgb.height();
  Plane hue(w, h), sat(w, h), val(w, h);
  auto R = rgb[0].values();
  auto G = rgb[1].values();
  auto B = rgb[2].values();
  auto H = hue.values();
  auto S = sat.values();
  auto V = val.values();
  for (std::size_t k = 0; k < H.size(); ++k) {
    const double r = R[k], g = G[k], b = B[k];
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double chroma = mx - mn;
    V[k] = mx;
    S[k] = mx > 0.0 ? chroma / mx : 0.0;
    if (chroma <= 0.0) {
      H[k] = 0.0;
      continue;
    }
    double sixths = 0.0;
    if (mx == r) {
      sixths = (g - b) / chroma;
    } else if (mx == g) {
      sixths = 2.0 + (b - r) / chroma;
    } else {
      sixths = 4.0 + (r - g) / chroma;
    }
    H[k] = wrap_unit(sixths / 6.0);
  }
  return ColourImage(std::move(hue), std::move(sat), std::move(val), ColourSpace::kHSV);
}

ColourImage hsv_to_rgb(const ColourImage& hsv) {
  require_space(hsv, ColourSpace::kHSV, "hsv_to_rgb");
  const int w = hsv.width();
  const int h = hsv.height();
  Plane red(w, h), green(w, h), blue(w, h);
  auto H = hsv[0].values();
  auto S = hsv[1].values();
  auto V = hsv[2].values();
  auto R = red.values();
  auto G = green.values();
  auto B = blue.values();
  for (std::size_t k = 0; k < R.size(); ++k) {
    const double v = V[k];
    const double c = v * S[k];
    const double hp = wrap_unit(H[k]) * 6.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
      case 0: r = c; g = x; break;
      case 1: r = x; g = c; break;
      case 2: g = c; b = x; break;
      case 3: g = x; b = c; break;
      case 4: r = x; b = c; break;
      default: r = c; b = x; break;
    }
    const double m = v - c;
    R[k] = std::clamp(r + m, 0.0, 1.0);
    G[k] = std::clamp(g + m, 0.0, 1.0);
    B[k] = std::clamp(b + m, 0.0, 1.0);
  }
  return ColourImage(std::move(red), std::move(green), std::move(blue), ColourSpace::kRGB);
}

ColourImage from_rgb(const ColourImage& rgb, ColourSpace space) {
  switch (space) {
    case ColourSpace::kHSI: return rgb_to_hsi(rgb);
    case ColourSpace::kHSV: return rgb_to_hsv(rgb);
    case ColourSpace::kRGB: break;
  }
  require_space(rgb, ColourSpace::kRGB, "from_rgb");
  return rgb;
}

ColourImage to_rgb(const ColourImage& img) {
  switch (img.space) {
    case ColourSpace::kHSI: return hsi_to_rgb(img);
    case ColourSpace::kHSV: return hsv_to_rgb(img);
    case ColourSpace::kRGB: break;
  }
  return img;
}

}  // namespace retinexad
