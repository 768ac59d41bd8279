#include "retinexad/enhancers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "convolve.hpp"
#include "retinexad/error.hpp"

namespace retinexad {
namespace {

int bin_of(double v, int bins) {
  const double scaled = std::floor(v * bins);
  if (!(scaled > 0.0)) return 0;
  return scaled >= bins ? bins - 1 : static_cast<int>(scaled);
}

bool single_bin(const Plane& p, int bins) {
  const auto v = p.values();
  if (v.empty()) return true;
  const int first = bin_of(v[0], bins);
  return std::all_of(v.begin(), v.end(), [&](double x) { return bin_of(x, bins) == first; });
}

void require_bins(int bins) {
  if (bins < 2) throw InvalidArgument("histogram needs at least 2 bins");
}

// Tile index pair and interpolation weight for one coordinate.
struct Interp {
  int lo = 0;
  int hi = 0;
  double t = 0.0;  // weight of `hi`
};

std::vector<int> tile_bounds(int extent, int tiles) {
  std::vector<int> b(static_cast<std::size_t>(tiles + 1));
  for (int k = 0; k <= tiles; ++k) {
    b[static_cast<std::size_t>(k)] = static_cast<int>(static_cast<long long>(k) * extent / tiles);
  }
  return b;
}

std::vector<Interp> interpolation_table(int extent, const std::vector<int>& bounds) {
  const int tiles = static_cast<int>(bounds.size()) - 1;
  std::vector<double> centre(static_cast<std::size_t>(tiles));
  for (int k = 0; k < tiles; ++k) {
    centre[static_cast<std::size_t>(k)] = 0.5 * (bounds[static_cast<std::size_t>(k)] + bounds[static_cast<std::size_t>(k + 1)] - 1);
  }
  std::vector<Interp> table(static_cast<std::size_t>(extent));
  int k = 0;
  for (int x = 0; x < extent; ++x) {
    Interp& it = table[static_cast<std::size_t>(x)];
    if (x <= centre.front()) {
      it = {0, 0, 0.0};
      continue;
    }
    if (x >= centre.back()) {
      it = {tiles - 1, tiles - 1, 0.0};
      continue;
    }
    while (centre[static_cast<std::size_t>(k + 1)] < x) ++k;
    const double c0 = centre[static_cast<std::size_t>(k)];
    const double c1 = centre[static_cast<std::size_t>(k + 1)];
    it = {k, k + 1, (x - c0) / (c1 - c0)};
  }
  return table;
}

}  // namespace

void EnhancerConfig::validate() const {
  if (!msr_weights.empty()) {
    if (msr_weights.size() != msr_scales.size()) {
      throw InvalidArgument("msr_weights must have the same length as msr_scales");
    }
    const double sum = std::accumulate(msr_weights.begin(), msr_weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("msr_weights must sum to 1");
  }
  for (double s : msr_scales) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("msr scale must be a finite value >= 0");
  }
  if (clahe_tiles.rows < 1 || clahe_tiles.cols < 1) throw InvalidArgument("invalid tiling");
  if (!(clahe_clip > 0.0 && clahe_clip <= 1.0)) throw InvalidArgument("clahe_clip must lie in (0,1]");
  if (!(0.0 <= stretch.lo && stretch.lo < stretch.hi && stretch.hi <= 1.0)) {
    throw InvalidArgument("stretch percentiles must satisfy 0 <= lo < hi <= 1");
  }
  require_bins(bins);
}

std::vector<double> resolved_msr_scales(const EnhancerConfig& cfg, int width, int height) {
  if (!cfg.msr_scales.empty()) return cfg.msr_scales;
  const double d = std::min(width, height);
  return {d / 60.0, d / 12.0, d / 3.0};
}

Plane global_he(const Plane& p, int bins) {
  require_bins(bins);
  if (single_bin(p, bins)) return p;
  std::vector<double> cdf(static_cast<std::size_t>(bins), 0.0);
  for (double v : p.values()) cdf[static_cast<std::size_t>(bin_of(v, bins))] += 1.0;
  std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
  const double n = static_cast<double>(p.size());
  for (double& c : cdf) c /= n;
  Plane out(p.width(), p.height());
  auto o = out.values();
  auto in = p.values();
  for (std::size_t k = 0; k < in.size(); ++k) o[k] = cdf[static_cast<std::size_t>(bin_of(in[k], bins))];
  return out;
}

Plane clahe(const Plane& p, TileGrid tiles, double clip, int bins) {
  require_bins(bins);
  if (tiles.rows < 1 || tiles.cols < 1 || tiles.rows > p.height() || tiles.cols > p.width()) {
    throw InvalidArgument("invalid tiling");
  }
  if (!(clip > 0.0 && clip <= 1.0)) throw InvalidArgument("clahe clip must lie in (0,1]");
  if (single_bin(p, bins)) return p;

  const auto ybounds = tile_bounds(p.height(), tiles.rows);
  const auto xbounds = tile_bounds(p.width(), tiles.cols);
  const auto nb = static_cast<std::size_t>(bins);

  // Row-major [tile_row][tile_col][bin] mapping tables.
  std::vector<double> maps(static_cast<std::size_t>(tiles.rows * tiles.cols) * nb, 0.0);
  std::vector<double> hist(nb);
  for (int ty = 0; ty < tiles.rows; ++ty) {
    for (int tx = 0; tx < tiles.cols; ++tx) {
      std::fill(hist.begin(), hist.end(), 0.0);
      const int y0 = ybounds[static_cast<std::size_t>(ty)], y1 = ybounds[static_cast<std::size_t>(ty + 1)];
      const int x0 = xbounds[static_cast<std::size_t>(tx)], x1 = xbounds[static_cast<std::size_t>(tx + 1)];
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) hist[static_cast<std::size_t>(bin_of(p(x, y), bins))] += 1.0;
      }
      const double count = static_cast<double>((y1 - y0) * (x1 - x0));
      const double limit = clip * count;
      double excess = 0.0;
      for (double& h : hist) {
        if (h > limit) {
          excess += h - limit;
          h = limit;
        }
      }
      const double share = excess / bins;
      double* map = maps.data() + static_cast<std::size_t>(ty * tiles.cols + tx) * nb;
      double cum = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        cum += hist[b] + share;
        map[b] = std::min(cum / count, 1.0);
      }
    }
  }

  const auto yi = interpolation_table(p.height(), ybounds);
  const auto xi = interpolation_table(p.width(), xbounds);
  auto tile_map = [&](int ty, int tx) { return maps.data() + static_cast<std::size_t>(ty * tiles.cols + tx) * nb; };

  Plane out(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    const Interp& iy = yi[static_cast<std::size_t>(y)];
    for (int x = 0; x < p.width(); ++x) {
      const Interp& ix = xi[static_cast<std::size_t>(x)];
      const auto b = static_cast<std::size_t>(bin_of(p(x, y), bins));
      const double top = (1.0 - ix.t) * tile_map(iy.lo, ix.lo)[b] + ix.t * tile_map(iy.lo, ix.hi)[b];
      const double bottom = (1.0 - ix.t) * tile_map(iy.hi, ix.lo)[b] + ix.t * tile_map(iy.hi, ix.hi)[b];
      out(x, y) = std::clamp((1.0 - iy.t) * top + iy.t * bottom, 0.0, 1.0);
    }
  }
  return out;
}

Plane gaussian_surround(const Plane& p, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("gaussian sigma must be >= 0");
  if (sigma == 0.0 || p.empty()) return p;
  // A unit-sum kernel leaves constants unchanged; FP summation would not.
  const auto v = p.values();
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) return p;
  const auto kernel = detail::gaussian_kernel(sigma);
  Plane rows = detail::convolve_rows(p, kernel);
  return transpose(detail::convolve_rows(transpose(rows), kernel));
}

Plane msr_reflectance(const Plane& p, const EnhancerConfig& cfg, double eps) {
  cfg.validate();
  const auto scales = resolved_msr_scales(cfg, p.width(), p.height());
  const Plane log_p = to_log(p, eps);
  Plane out(p.width(), p.height());
  auto o = out.values();
  auto lp = log_p.values();
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const double weight = cfg.msr_weights.empty() ? 1.0 / static_cast<double>(scales.size()) : cfg.msr_weights[s];
    const Plane surround = gaussian_surround(p, scales[s]);
    auto g = surround.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] += weight * (lp[k] - std::log(g[k] + eps));
  }
  return out;
}

Plane guided_enhance(const Plane& i_log, const EnhancerConfig& cfg, double eps) {
  const Plane reflectance = msr_reflectance(from_log(i_log, eps), cfg, eps);
  const Plane stretched = normalize_percentile(reflectance, cfg.stretch.lo, cfg.stretch.hi);
  return to_log(clahe(stretched, cfg.clahe_tiles, cfg.clahe_clip, cfg.bins), eps);
}

Plane homomorphic_filter(const Plane& p, double gamma_low, double gamma_high, double sigma_c, double eps) {
  if (!(gamma_low <= gamma_high)) throw InvalidArgument("homomorphic filter needs gamma_low <= gamma_high");
  if (!(sigma_c > 0.0)) throw InvalidArgument("homomorphic filter needs sigma_c > 0");
  const Plane i = to_log(p, eps);
  const Plane low = gaussian_surround(i, sigma_c);
  Plane mixed(p.width(), p.height());
  auto m = mixed.values();
  auto iv = i.values();
  auto lv = low.values();
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = gamma_low * lv[k] + gamma_high * (iv[k] - lv[k]);
  return from_log(mixed, eps);
}

Plane gain_offset(const Plane& p, const GainOffsetMode& mode) {
  if (const auto* pct = std::get_if<gain::Percentile>(&mode)) return normalize_percentile(p, pct->lo, pct->hi);

  const ChannelStats st = channel_stats(p);
  double lo = st.min;
  double hi = st.max;
  if (const auto* ms = std::get_if<gain::MeanStd>(&mode)) {
    if (!(ms->k > 0.0)) throw InvalidArgument("meanstd gain needs k > 0");
    lo = st.mean - ms->k * st.stddev;
    hi = st.mean + ms->k * st.stddev;
  }
  Plane out(p.width(), p.height(), 0.5);
  if (!(hi > lo)) return out;
  const double scale = 1.0 / (hi - lo);
  auto o = out.values();
  auto in = p.values();
  for (std::size_t k = 0; k < in.size(); ++k) o[k] = std::clamp((in[k] - lo) * scale, 0.0, 1.0);
  return out;
}

}  // namespace retinexad
