#include "retinexad/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "retinexad/colour.hpp"
#include "retinexad/error.hpp"

namespace retinexad {
namespace {

// Constants of the blockiness/activity/zero-crossing model.
constexpr double kPqmOffset = -245.9;
constexpr double kPqmScale = 261.9;
constexpr double kPqmBlockExp = -0.0240;
constexpr double kPqmActivityExp = 0.0160;
constexpr double kPqmZeroCrossExp = 0.0064;
// Keeps the power law finite on flat images.
constexpr double kPqmFeatureFloor = 1e-6;
constexpr int kPqmBlock = 8;

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pop_std(std::span<const double> v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// Horizontal-pass features on a row-major 8-bit-scaled luminance.
PqmFeatures horizontal_features(const Plane& x) {
  const int rows = x.height();
  const int cols = x.width();
  double block_sum = 0.0;
  double abs_sum = 0.0;
  double crossings = 0.0;
  for (int i = 0; i < rows; ++i) {
    auto r = x.row(i);
    double prev = 0.0;
    for (int j = 0; j + 1 < cols; ++j) {
      const double d = r[j + 1] - r[j];
      abs_sum += std::abs(d);
      if ((j + 1) % kPqmBlock == 0 && j + 1 < kPqmBlock * (cols / kPqmBlock)) block_sum += std::abs(d);
      if (j > 0 && prev * d < 0.0) crossings += 1.0;
      prev = d;
    }
  }
  const double boundaries = static_cast<double>(rows) * (cols / kPqmBlock - 1);
  PqmFeatures f;
  f.blockiness = block_sum / boundaries;
  f.activity = (8.0 * abs_sum / (static_cast<double>(rows) * (cols - 1)) - f.blockiness) / 7.0;
  f.zero_crossing = crossings / (static_cast<double>(rows) * (cols - 2));
  return f;
}

Plane scaled_luminance(const ColourImage& rgb) {
  Plane lum = luminance(rgb);
  for (double& v : lum.values()) v *= 255.0;
  return lum;
}

std::pair<double, double> opponent_moments(std::span<const double> v) { return {mean_of(v), pop_std(v)}; }

struct Opponent {
  double mean_rg, std_rg, mean_yb, std_yb;
};

Opponent opponent_stats(const ColourImage& rgb) {
  const std::size_t n = rgb[0].size();
  std::vector<double> rg(n), yb(n);
  auto R = rgb[0].values();
  auto G = rgb[1].values();
  auto B = rgb[2].values();
  for (std::size_t k = 0; k < n; ++k) {
    rg[k] = R[k] - G[k];
    yb[k] = 0.5 * (R[k] + G[k]) - B[k];
  }
  const auto [mrg, srg] = opponent_moments(rg);
  const auto [myb, syb] = opponent_moments(yb);
  return {mrg, srg, myb, syb};
}

void require_same_shape(const ColourImage& a, const ColourImage& b) {
  if (!a[0].same_shape(b[0])) throw InvalidArgument("image dimensions differ");
}

// Prewitt gradient magnitude with replicate boundary.
Plane prewitt_magnitude(const Plane& p) {
  const int w = p.width();
  const int h = p.height();
  auto at = [&](int x, int y) { return p(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (at(x + 1, y - 1) + at(x + 1, y) + at(x + 1, y + 1) - at(x - 1, y - 1) - at(x - 1, y) -
                         at(x - 1, y + 1)) / 3.0;
      const double gy = (at(x - 1, y + 1) + at(x, y + 1) + at(x + 1, y + 1) - at(x - 1, y - 1) - at(x, y - 1) -
                         at(x + 1, y - 1)) / 3.0;
      out(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

}  // namespace

double entropy(const Plane& p, int bins) {
  if (bins < 2) throw InvalidArgument("entropy needs at least 2 bins");
  if (p.empty()) return 0.0;
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  for (double v : p.values()) {
    const double s = std::floor(v * bins);
    const int b = !(s > 0.0) ? 0 : (s >= bins ? bins - 1 : static_cast<int>(s));
    hist[static_cast<std::size_t>(b)] += 1.0;
  }
  const double n = static_cast<double>(p.size());
  double h = 0.0;
  for (double c : hist) {
    if (c > 0.0) {
      const double q = c / n;
      h -= q * std::log2(q);
    }
  }
  return h == 0.0 ? 0.0 : h;  // no negative zero
}

EntropySlopes entropy_derivatives(std::span<const double> series, int window) {
  if (series.size() < 3) throw InvalidArgument("series too short");
  if (window < 1) throw InvalidArgument("window must be >= 1");
  const std::size_t m = series.size() - 1;
  std::vector<double> raw(m);
  for (std::size_t k = 0; k < m; ++k) raw[k] = series[k + 1] - series[k];
  const auto half = static_cast<std::size_t>(window / 2);
  EntropySlopes out;
  out.first.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t h = std::min({half, k, m - 1 - k});
    double s = 0.0;
    for (std::size_t j = k - h; j <= k + h; ++j) s += raw[j];
    out.first[k] = s / static_cast<double>(2 * h + 1);
  }
  out.second.resize(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) out.second[k] = out.first[k + 1] - out.first[k];
  return out;
}

std::vector<double> trailing_entropy_slope(std::span<const double> series, int window) {
  if (window < 1) throw InvalidArgument("window must be >= 1");
  std::vector<double> out(series.size(), 0.0);
  for (std::size_t n = 1; n < series.size(); ++n) {
    const std::size_t first = n >= static_cast<std::size_t>(window) ? n - static_cast<std::size_t>(window) + 1 : 1;
    double s = 0.0;
    for (std::size_t j = first; j <= n; ++j) s += series[j] - series[j - 1];
    out[n] = s / static_cast<double>(n - first + 1);
  }
  return out;
}

PqmFeatures pqm_features(const ColourImage& rgb) {
  if (rgb.width() < 2 * kPqmBlock || rgb.height() < 2 * kPqmBlock) {
    throw InvalidArgument("image too small for PQM");
  }
  const Plane lum = scaled_luminance(rgb);
  const PqmFeatures h = horizontal_features(lum);
  const PqmFeatures v = horizontal_features(transpose(lum));
  return {(h.blockiness + v.blockiness) / 2.0, (h.activity + v.activity) / 2.0,
          (h.zero_crossing + v.zero_crossing) / 2.0};
}

double pqm(const ColourImage& rgb) {
  const PqmFeatures f = pqm_features(rgb);
  const double B = std::max(f.blockiness, kPqmFeatureFloor);
  const double A = std::max(f.activity, kPqmFeatureFloor);
  const double Z = std::max(f.zero_crossing, kPqmFeatureFloor);
  return kPqmOffset + kPqmScale * std::pow(B, kPqmBlockExp) * std::pow(A, kPqmActivityExp) *
                          std::pow(Z, kPqmZeroCrossExp);
}

double colourfulness(const ColourImage& rgb) {
  const Opponent o = opponent_stats(rgb);
  return std::sqrt(o.std_rg * o.std_rg + o.std_yb * o.std_yb) +
         0.3 * std::sqrt(o.mean_rg * o.mean_rg + o.mean_yb * o.mean_yb);
}

double colourfulness_spread(const ColourImage& rgb) {
  const Opponent o = opponent_stats(rgb);
  return std::sqrt(o.std_rg * o.std_rg + o.std_yb * o.std_yb);
}

Ratio guarded_ratio(double enhanced, double original) {
  if (original == 0.0) {
    return enhanced == 0.0 ? Ratio{1.0, true} : Ratio{enhanced > 0.0 ? kRatioSentinel : -kRatioSentinel, true};
  }
  return {enhanced / original, false};
}

Ratio rc(const ColourImage& orig, const ColourImage& enh) {
  require_same_shape(orig, enh);
  return guarded_ratio(colourfulness(enh), colourfulness(orig));
}

Ratio cef(const ColourImage& orig, const ColourImage& enh) {
  require_same_shape(orig, enh);
  return guarded_ratio(colourfulness_spread(enh), colourfulness_spread(orig));
}

double emec(const ColourImage& rgb, int block_rows, int block_cols, double eps) {
  const int w = rgb.width();
  const int h = rgb.height();
  if (block_rows < 1 || block_cols < 1 || block_rows > h || block_cols > w) {
    throw InvalidArgument("EMEC block grid must lie within the image");
  }
  double total = 0.0;
  for (int by = 0; by < block_rows; ++by) {
    const int y0 = static_cast<int>(static_cast<long long>(by) * h / block_rows);
    const int y1 = static_cast<int>(static_cast<long long>(by + 1) * h / block_rows);
    for (int bx = 0; bx < block_cols; ++bx) {
      const int x0 = static_cast<int>(static_cast<long long>(bx) * w / block_cols);
      const int x1 = static_cast<int>(static_cast<long long>(bx + 1) * w / block_cols);
      double lo = INFINITY;
      double hi = -INFINITY;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const double r = rgb[0](x, y), g = rgb[1](x, y), b = rgb[2](x, y);
          const double m = std::sqrt(r * r + g * g + b * b);
          lo = std::min(lo, m);
          hi = std::max(hi, m);
        }
      }
      total += 20.0 * std::log10((hi + eps) / (lo + eps));
    }
  }
  return total / (static_cast<double>(block_rows) * block_cols);
}

double avg_gradient(const Plane& p) {
  if (p.width() < 2 || p.height() < 2) throw InvalidArgument("plane too small");
  double s = 0.0;
  for (int y = 0; y + 1 < p.height(); ++y) {
    for (int x = 0; x + 1 < p.width(); ++x) {
      const double dx = p(x + 1, y) - p(x, y);
      const double dy = p(x, y + 1) - p(x, y);
      s += std::sqrt((dx * dx + dy * dy) / 2.0);
    }
  }
  return s / (static_cast<double>(p.width() - 1) * (p.height() - 1));
}

HueDeviation hdi(const ColourImage& orig, const ColourImage& enh, double s_min) {
  require_same_shape(orig, enh);
  const ColourImage a = rgb_to_hsv(orig);
  const ColourImage b = rgb_to_hsv(enh);
  double sum = 0.0;
  std::size_t count = 0;
  auto ha = a[0].values(), sa = a[1].values();
  auto hb = b[0].values(), sb = b[1].values();
  for (std::size_t k = 0; k < ha.size(); ++k) {
    if (sa[k] < s_min || sb[k] < s_min) continue;
    const double d = std::abs(ha[k] - hb[k]) * 360.0;
    sum += std::min(d, 360.0 - d);
    ++count;
  }
  if (count == 0) return {0.0, true};
  return {sum / static_cast<double>(count), false};
}

double gmsd(const Plane& a, const Plane& b, double c) {
  if (!a.same_shape(b)) throw InvalidArgument("image dimensions differ");
  if (a.empty()) return 0.0;
  const Plane ga = prewitt_magnitude(a);
  const Plane gb = prewitt_magnitude(b);
  std::vector<double> gms(a.size());
  auto va = ga.values();
  auto vb = gb.values();
  for (std::size_t k = 0; k < gms.size(); ++k) {
    gms[k] = (2.0 * va[k] * vb[k] + c) / (va[k] * va[k] + vb[k] * vb[k] + c);
  }
  return pop_std(gms);
}

MetricReport metric_report(const ColourImage& orig, const ColourImage& enh, const MetricConfig& cfg) {
  require_same_shape(orig, enh);
  MetricReport r;
  auto take = [&](const Ratio& ratio, const char* name) {
    if (ratio.guarded) r.flags.emplace_back(name);
    return ratio.value;
  };

  const Plane lum_o = luminance(orig);
  const Plane lum_e = luminance(enh);
  const ChannelStats so = channel_stats(lum_o);
  const ChannelStats se = channel_stats(lum_e);

  r.C_orig = colourfulness(orig);
  r.C_enh = colourfulness(enh);
  r.RC = take(rc(orig, enh), "RC");
  r.F = take(cef(orig, enh), "F");
  r.PQM = pqm(enh);
  r.EMEC_1 = emec(orig, cfg.emec_block_rows, cfg.emec_block_cols, cfg.emec_eps);
  r.EMEC_2 = emec(enh, cfg.emec_block_rows, cfg.emec_block_cols, cfg.emec_eps);
  r.REMEC = take(guarded_ratio(r.EMEC_2, r.EMEC_1), "REMEC");
  r.RM = take(guarded_ratio(se.mean, so.mean), "RM");
  r.RSD = take(guarded_ratio(se.stddev, so.stddev), "RSD");
  r.E_orig = entropy(lum_o);
  r.E_enh = entropy(lum_e);
  r.RE = take(guarded_ratio(r.E_enh, r.E_orig), "RE");
  r.AG_orig = avg_gradient(lum_o);
  r.AG_enh = avg_gradient(lum_e);
  r.RAG = take(guarded_ratio(r.AG_enh, r.AG_orig), "RAG");
  const HueDeviation hd = hdi(orig, enh, cfg.hdi_s_min);
  r.HDI = hd.degrees;
  if (hd.no_pixels) r.flags.emplace_back("HDI");
  r.GMSD = gmsd(lum_o, lum_e);
  return r;
}

std::vector<std::string> report_columns() {
  return {"RC",    "F",      "PQM",    "REMEC", "RM",    "RSD",     "RE",     "RAG",   "HDI",
          "EMEC_2", "EMEC_1", "GMSD",  "E_orig", "E_enh", "AG_orig", "AG_enh", "C_orig", "C_enh"};
}

std::vector<double> report_values(const MetricReport& r) {
  return {r.RC,     r.F,      r.PQM,  r.REMEC,  r.RM,    r.RSD,     r.RE,     r.RAG,    r.HDI,
          r.EMEC_2, r.EMEC_1, r.GMSD, r.E_orig, r.E_enh, r.AG_orig, r.AG_enh, r.C_orig, r.C_enh};
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string report_to_csv(const MetricReport& r) {
  std::ostringstream out;
  const auto cols = report_columns();
  const auto vals = report_values(r);
  for (const auto& c : cols) out << c << ',';
  out << "flags\n";
  for (double v : vals) out << format_number(v) << ',';
  std::string flags;
  for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
  out << flags << '\n';
  return out.str();
}

std::string report_to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  const auto cols = report_columns();
  const auto vals = report_values(r);
  for (std::size_t k = 0; k < cols.size(); ++k) j[cols[k]] = vals[k];
  std::string flags;
  for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
  j["flags"] = flags;
  return j.dump(2) + "\n";
}

}  // namespace retinexad
