#include "retinexad/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "retinexad/error.hpp"

namespace retinexad {
namespace {

void require_2x2(const Plane& p) {
  if (p.width() < 2 || p.height() < 2) throw InvalidArgument("plane too small");
}

}  // namespace

void DiffusionConfig::validate() const {
  if (K && !(*K > 0.0)) throw InvalidArgument("conductance K must be > 0");
  if (!(k_quantile > 0.0 && k_quantile < 1.0)) throw InvalidArgument("K quantile must lie in (0,1)");
  if (!(eps_curv > 0.0)) throw InvalidArgument("eps_curv must be > 0");
}

Gradients4 grad4(const Plane& p) {
  require_2x2(p);
  const int w = p.width();
  const int h = p.height();
  Gradients4 g{Plane(w, h), Plane(w, h), Plane(w, h), Plane(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = p(x, y);
      g.north(x, y) = y > 0 ? p(x, y - 1) - c : 0.0;
      g.south(x, y) = y + 1 < h ? p(x, y + 1) - c : 0.0;
      g.east(x, y) = x + 1 < w ? p(x + 1, y) - c : 0.0;
      g.west(x, y) = x > 0 ? p(x - 1, y) - c : 0.0;
    }
  }
  return g;
}

double conductance(double mag, ConductanceKind kind, double K) {
  const double r = mag / K;
  return kind == ConductanceKind::kExponential ? std::exp(-r * r) : 1.0 / (1.0 + r * r);
}

double conductance(double mag, const DiffusionConfig& cfg) {
  if (!cfg.K) throw InvalidArgument("conductance needs a fixed K");
  return conductance(mag, cfg.kind, *cfg.K);
}

Plane ad_flux_divergence(const Plane& p, const DiffusionConfig& cfg) {
  cfg.validate();
  require_2x2(p);
  const double K = cfg.K ? *cfg.K : estimate_K(p, cfg.k_quantile);
  const int w = p.width();
  const int h = p.height();
  auto flux = [&](double d) { return conductance(std::abs(d), cfg.kind, K) * d; };

  // Each edge flux is evaluated once and applied with opposite signs to its
  // two pixels, so the total cancels.
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = p(x, y);
      if (x + 1 < w) {
        const double f = flux(p(x + 1, y) - c);
        out(x, y) += f;
        out(x + 1, y) -= f;
      }
      if (y + 1 < h) {
        const double f = flux(p(x, y + 1) - c);
        out(x, y) += f;
        out(x, y + 1) -= f;
      }
    }
  }
  return out;
}

Plane curvature_term(const Plane& p, double eps_curv) {
  if (!(eps_curv > 0.0)) throw InvalidArgument("eps_curv must be > 0");
  const int w = p.width();
  const int h = p.height();
  auto at = [&](int x, int y) { return p(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };
  const double eps2 = eps_curv * eps_curv;
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = at(x, y);
      const double px = 0.5 * (at(x + 1, y) - at(x - 1, y));
      const double py = 0.5 * (at(x, y + 1) - at(x, y - 1));
      const double pxx = at(x + 1, y) - 2.0 * c + at(x - 1, y);
      const double pyy = at(x, y + 1) - 2.0 * c + at(x, y - 1);
      const double pxy = 0.25 * (at(x + 1, y + 1) - at(x + 1, y - 1) - at(x - 1, y + 1) + at(x - 1, y - 1));
      const double num = pxx * py * py - 2.0 * px * py * pxy + pyy * px * px;
      out(x, y) = num / (px * px + py * py + eps2);
    }
  }
  return out;
}

double estimate_K(const Plane& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("K quantile must lie in (0,1)");
  const Gradients4 g = grad4(p);
  std::vector<double> mags;
  mags.reserve(4 * p.size());
  for (const Plane* d : {&g.north, &g.south, &g.east, &g.west}) {
    for (double v : d->values()) mags.push_back(std::abs(v));
  }
  return std::max(quantile(mags, q), kMinConductanceScale);
}

}  // namespace retinexad
