#pragma once

#include <optional>

#include "retinexad/image.hpp"

namespace retinexad {

enum class ConductanceKind { kExponential, kRational };

/// Floor applied to automatically estimated K.
inline constexpr double kMinConductanceScale = 1e-4;

struct DiffusionConfig {
  ConductanceKind kind = ConductanceKind::kExponential;
  /// Gradient scale K. nullopt selects estimate_K(current plane, k_quantile).
  std::optional<double> K;
  double k_quantile = 0.9;
  /// Regularization of |grad| inside the curvature term.
  double eps_curv = 1e-4;

  void validate() const;
};

/// One-sided neighbour differences neighbour - centre. Out-of-range
/// neighbours replicate the centre, so boundary differences are zero.
struct Gradients4 {
  Plane north;
  Plane south;
  Plane east;
  Plane west;
};

/// Throws InvalidArgument("plane too small") unless width, height >= 2.
Gradients4 grad4(const Plane& p);

/// exp(-(mag/K)^2) or 1/(1+(mag/K)^2), in (0,1].
double conductance(double mag, ConductanceKind kind, double K);
/// Uses cfg.K, which must be set.
double conductance(double mag, const DiffusionConfig& cfg);

/// Anisotropic 4-neighbour flux divergence sum_d g(|d|) d with Neumann
/// boundary. Sums to zero over the plane.
Plane ad_flux_divergence(const Plane& p, const DiffusionConfig& cfg);

/// Regularized mean-curvature term |grad p| div(grad p / |grad p|) from
/// central differences, |grad p| replaced by sqrt(px^2 + py^2 + eps^2).
Plane curvature_term(const Plane& p, double eps_curv);

/// q-quantile of the pooled |grad4| magnitudes, floored at kMinConductanceScale.
double estimate_K(const Plane& p, double q);

}  // namespace retinexad
