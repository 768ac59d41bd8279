#pragma once

#include <optional>
#include <string>
#include <vector>

#include "retinexad/diffusion.hpp"
#include "retinexad/enhancers.hpp"
#include "retinexad/image.hpp"

namespace retinexad {

/// Which smoothing operator the lambda term applies.
enum class SmoothingTerm {
  kConductanceFlux,  ///< anisotropic flux divergence with conductance g
  kMeanCurvature,    ///< regularized |grad| div(grad/|grad|)
};

/// Automatic stopping thresholds.
struct StoppingCriteria {
  /// |dE| below this (bits) counts as entropy-flat.
  double entropy_eps = 1e-3;
  /// |dPQM| below this counts as PQM-flat.
  double pqm_eps = 0.05;
  /// Stop once PQM falls this far below its running maximum.
  double pqm_drop = 0.5;
  /// Smoothing width of the entropy slope and the flat-run length.
  int window = 2;

  void validate() const;
};

/// Every knob of the log-domain evolution
///   i <- i + dt [ alpha (f - i) + beta (i - mu)/sigma + lambda D(i) ].
struct PdeParams {
  double alpha = 0.5;   ///< pull towards the enhancement target f
  double beta = 0.02;   ///< grey-world standardization (colour correction)
  double lambda = 0.05; ///< smoothing
  double dt = 0.4;
  int max_iter = 200;
  /// Run exactly this many steps, bypassing automatic stopping.
  std::optional<int> fixed_iter;
  ColourSpace colour_mode = ColourSpace::kHSI;
  EnhancerConfig enhancer;
  DiffusionConfig diffusion;
  StoppingCriteria stop;
  SmoothingTerm smoothing = SmoothingTerm::kConductanceFlux;
  double log_eps = kDefaultLogEpsilon;

  /// Throws InvalidArgument; "unstable step" when dt (alpha + 4 lambda) > 1.
  void validate() const;
};

enum class StopReason { kNone, kEntropyPeak, kFlatness, kPqmDrop, kMaxIter, kFixedIter };

std::string to_string(StopReason r);

struct IterationRecord {
  int n = 0;
  double entropy = 0.0;
  double d_entropy = 0.0;   ///< trailing-window slope
  double d2_entropy = 0.0;  ///< change of d_entropy
  double pqm = 0.0;
  std::vector<double> mean;    ///< per evolved channel, log domain, before the step
  std::vector<double> stddev;  ///< idem
  bool beta_skipped = false;   ///< flat channel: the beta term contributed 0
};

struct EvolutionTrace {
  std::vector<IterationRecord> records;
  StopReason stop_reason = StopReason::kNone;
  /// Iteration whose iterate was returned (0 = input unchanged).
  int best_n = 0;
  /// Automatic stopping in RGB mode has no unique optimum.
  bool best_effort = false;
};

struct RunResult {
  ColourImage image;
  EvolutionTrace trace;
  /// HSI/HSV pipelines: the returned iterate in the working space, before the
  /// conversion back to RGB.
  std::optional<ColourImage> working;
};

/// Extra diagnostics of one evolve_step call.
struct StepInfo {
  ChannelStats stats;
  bool beta_skipped = false;
};

/// One explicit Euler step of the log-domain evolution towards f_target.
/// The beta term is dropped when the channel's sigma is below 1e-9.
Plane evolve_step(const Plane& i_log, const PdeParams& params, const Plane& f_target, StepInfo* info = nullptr);

/// Evolves only the intensity (HSI) or value (HSV) channel; hue and saturation
/// pass through untouched. Returns the maximum-entropy iterate.
RunResult run_hsi(const ColourImage& rgb, const PdeParams& params);

/// Evolves R, G and B independently, each with its own target and statistics.
RunResult run_rgb(const ColourImage& rgb, const PdeParams& params);

/// Dispatches on params.colour_mode.
RunResult run(const ColourImage& rgb, const PdeParams& params);

enum class BaseEnhancer { kIdentity, kGlobalHe, kClahe, kGainOffset };

/// Intensity-domain model I <- I + dt [ lambda curvature(I) + f(I) - I ] for
/// fixed_iter steps (max_iter when unset), per RGB channel in RGB mode and on
/// the I/V channel otherwise.
ColourImage run_base_model(const ColourImage& rgb, const PdeParams& params, BaseEnhancer enhancer);

struct StopDecision {
  bool stop = false;
  StopReason reason = StopReason::kNone;
  /// Iteration at which a rule fired (0 while continuing).
  int stop_n = 0;
  /// First argmax of entropy among records 1..stop_n (or all records).
  int best_n = 0;
};

/// Scans the trace in order and reports the first iteration at which any rule
/// fires: entropy peak (trailing slope turns from positive to negative),
/// flatness (window consecutive entropy and PQM changes below thresholds),
/// PQM drop, or max_iter.
StopDecision stopping_decision(const EvolutionTrace& trace, const StoppingCriteria& crit, int max_iter);

}  // namespace retinexad
