#include "retinexad/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "retinexad/colour.hpp"
#include "retinexad/error.hpp"
#include "retinexad/metrics.hpp"

namespace retinexad {
namespace {

constexpr double kFlatSigma = 1e-9;

void fill_slopes(EvolutionTrace& trace, int window) {
  std::vector<double> e;
  e.reserve(trace.records.size());
  for (const auto& r : trace.records) e.push_back(r.entropy);
  const auto slope = trailing_entropy_slope(e, window);
  for (std::size_t k = 0; k < slope.size(); ++k) {
    trace.records[k].d_entropy = slope[k];
    trace.records[k].d2_entropy = k >= 2 ? slope[k] - slope[k - 1] : 0.0;
  }
}

int first_argmax(const EvolutionTrace& trace, int upto) {
  int best = 0;
  double best_e = -INFINITY;
  for (int k = 0; k < upto; ++k) {
    const double e = trace.records[static_cast<std::size_t>(k)].entropy;
    if (e > best_e) {
      best_e = e;
      best = k + 1;
    }
  }
  return best;
}

// Drives the per-iteration loop shared by the HSI and RGB pipelines. `step`
// advances the evolved channels and returns (entropy, pqm) of the new iterate
// plus its record fields; `keep` snapshots the iterate as the current best.
template <typename Step, typename Keep>
EvolutionTrace evolve_loop(const PdeParams& params, Step&& step, Keep&& keep) {
  EvolutionTrace trace;
  if (params.fixed_iter) {
    for (int n = 1; n <= *params.fixed_iter; ++n) trace.records.push_back(step(n));
    fill_slopes(trace, params.stop.window);
    trace.stop_reason = StopReason::kFixedIter;
    trace.best_n = *params.fixed_iter;
    if (trace.best_n > 0) keep();
    return trace;
  }
  double best_e = -INFINITY;
  for (int n = 1; n <= params.max_iter; ++n) {
    trace.records.push_back(step(n));
    fill_slopes(trace, params.stop.window);
    if (trace.records.back().entropy > best_e) {
      best_e = trace.records.back().entropy;
      keep();
    }
    const StopDecision d = stopping_decision(trace, params.stop, params.max_iter);
    if (d.stop) {
      trace.stop_reason = d.reason;
      trace.best_n = d.best_n;
      break;
    }
  }
  return trace;
}

Plane smoothing_term(const Plane& p, const PdeParams& params) {
  return params.smoothing == SmoothingTerm::kConductanceFlux ? ad_flux_divergence(p, params.diffusion)
                                                             : curvature_term(p, params.diffusion.eps_curv);
}

}  // namespace

void StoppingCriteria::validate() const {
  if (!(entropy_eps > 0.0) || !(pqm_eps > 0.0) || !(pqm_drop > 0.0)) {
    throw InvalidArgument("stopping thresholds must be > 0");
  }
  if (window < 1) throw InvalidArgument("stopping window must be >= 1");
}

void PdeParams::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(lambda >= 0.0)) {
    throw InvalidArgument("alpha, beta and lambda must be >= 0");
  }
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (fixed_iter && *fixed_iter < 0) throw InvalidArgument("fixed_iter must be >= 0");
  if (!(log_eps > 0.0)) throw InvalidArgument("log epsilon must be > 0");
  if (dt * (alpha + 4.0 * lambda) > 1.0) throw InvalidArgument("unstable step");
  enhancer.validate();
  diffusion.validate();
  stop.validate();
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kNone: return "continue";
    case StopReason::kEntropyPeak: return "entropy_peak";
    case StopReason::kFlatness: return "flatness";
    case StopReason::kPqmDrop: return "pqm_drop";
    case StopReason::kMaxIter: return "max_iter";
    case StopReason::kFixedIter: return "fixed_iter";
  }
  return "unknown";
}

Plane evolve_step(const Plane& i_log, const PdeParams& params, const Plane& f_target, StepInfo* info) {
  if (!i_log.same_shape(f_target)) throw InvalidArgument("target and iterate differ in size");
  const ChannelStats st = channel_stats(i_log);
  const bool skip_beta = params.beta > 0.0 && st.stddev < kFlatSigma;
  if (info) *info = {st, skip_beta};

  const double beta_gain = params.beta > 0.0 && !skip_beta ? params.beta / st.stddev : 0.0;
  Plane smooth;
  if (params.lambda > 0.0) smooth = smoothing_term(i_log, params);

  Plane out(i_log.width(), i_log.height());
  auto o = out.values();
  auto i = i_log.values();
  auto f = f_target.values();
  for (std::size_t k = 0; k < o.size(); ++k) {
    double rhs = params.alpha * (f[k] - i[k]) + beta_gain * (i[k] - st.mean);
    if (params.lambda > 0.0) rhs += params.lambda * smooth.values()[k];
    o[k] = i[k] + params.dt * rhs;
  }
  return out;
}

RunResult run_hsi(const ColourImage& rgb, const PdeParams& params) {
  if (params.colour_mode == ColourSpace::kRGB) throw InvalidArgument("run_hsi needs HSI or HSV mode");
  params.validate();
  const ColourImage converted = from_rgb(rgb, params.colour_mode);
  const double eps = params.log_eps;

  Plane i_log = to_log(converted[2], eps);
  Plane current;
  Plane best = converted[2];

  auto step = [&](int n) {
    const Plane target = guided_enhance(i_log, params.enhancer, eps);
    StepInfo info;
    i_log = evolve_step(i_log, params, target, &info);
    current = from_log(i_log, eps);
    IterationRecord rec;
    rec.n = n;
    rec.entropy = entropy(current);
    rec.pqm = pqm(to_rgb(ColourImage(converted[0], converted[1], current, converted.space)));
    rec.mean = {info.stats.mean};
    rec.stddev = {info.stats.stddev};
    rec.beta_skipped = info.beta_skipped;
    return rec;
  };
  auto keep = [&] { best = current; };

  RunResult result;
  result.trace = evolve_loop(params, step, keep);
  ColourImage working(converted[0], converted[1], std::move(best), converted.space);
  result.image = result.trace.best_n == 0 ? rgb : to_rgb(working);
  result.working = std::move(working);
  return result;
}

RunResult run_rgb(const ColourImage& rgb, const PdeParams& params) {
  params.validate();
  if (rgb.space != ColourSpace::kRGB) throw InvalidArgument("run_rgb needs an RGB image");
  const double eps = params.log_eps;

  std::array<Plane, 3> i_log;
  for (std::size_t c = 0; c < 3; ++c) i_log[c] = to_log(rgb[c], eps);
  ColourImage current;
  ColourImage best = rgb;

  auto step = [&](int n) {
    IterationRecord rec;
    rec.n = n;
    std::array<Plane, 3> out;
    double e_sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const Plane target = guided_enhance(i_log[c], params.enhancer, eps);
      StepInfo info;
      i_log[c] = evolve_step(i_log[c], params, target, &info);
      out[c] = from_log(i_log[c], eps);
      e_sum += entropy(out[c]);
      rec.mean.push_back(info.stats.mean);
      rec.stddev.push_back(info.stats.stddev);
      rec.beta_skipped = rec.beta_skipped || info.beta_skipped;
    }
    current = ColourImage(std::move(out[0]), std::move(out[1]), std::move(out[2]));
    rec.entropy = e_sum / 3.0;
    rec.pqm = pqm(current);
    return rec;
  };
  auto keep = [&] { best = current; };

  RunResult result;
  result.trace = evolve_loop(params, step, keep);
  result.trace.best_effort = !params.fixed_iter.has_value();
  result.image = result.trace.best_n == 0 ? rgb : std::move(best);
  return result;
}

RunResult run(const ColourImage& rgb, const PdeParams& params) {
  return params.colour_mode == ColourSpace::kRGB ? run_rgb(rgb, params) : run_hsi(rgb, params);
}

ColourImage run_base_model(const ColourImage& rgb, const PdeParams& params, BaseEnhancer enhancer) {
  params.validate();
  const int steps = params.fixed_iter.value_or(params.max_iter);
  auto drive = [&](const Plane& p) -> Plane {
    switch (enhancer) {
      case BaseEnhancer::kGlobalHe: return global_he(p, params.enhancer.bins);
      case BaseEnhancer::kClahe:
        return clahe(p, params.enhancer.clahe_tiles, params.enhancer.clahe_clip, params.enhancer.bins);
      case BaseEnhancer::kGainOffset: return gain_offset(p, gain::MinMax{});
      case BaseEnhancer::kIdentity: break;
    }
    return p;
  };
  auto evolve = [&](Plane p) {
    for (int n = 0; n < steps; ++n) {
      const Plane f = drive(p);
      Plane curv;
      if (params.lambda > 0.0) curv = curvature_term(p, params.diffusion.eps_curv);
      auto v = p.values();
      auto fv = f.values();
      for (std::size_t k = 0; k < v.size(); ++k) {
        double rhs = fv[k] - v[k];
        if (params.lambda > 0.0) rhs += params.lambda * curv.values()[k];
        v[k] = std::clamp(v[k] + params.dt * rhs, 0.0, 1.0);
      }
    }
    return p;
  };

  if (params.colour_mode == ColourSpace::kRGB) {
    return ColourImage(evolve(rgb[0]), evolve(rgb[1]), evolve(rgb[2]));
  }
  ColourImage converted = from_rgb(rgb, params.colour_mode);
  converted[2] = evolve(converted[2]);
  return to_rgb(converted);
}

StopDecision stopping_decision(const EvolutionTrace& trace, const StoppingCriteria& crit, int max_iter) {
  crit.validate();
  const auto& recs = trace.records;
  const int count = static_cast<int>(recs.size());
  StopDecision d;
  if (count == 0) return d;

  std::vector<double> e;
  e.reserve(recs.size());
  for (const auto& r : recs) e.push_back(r.entropy);
  const auto slope = trailing_entropy_slope(e, crit.window);

  double running_pqm = recs[0].pqm;
  int last_sign = 0;
  int flat_run = 0;
  auto fire = [&](int n, StopReason reason) {
    d.stop = true;
    d.reason = reason;
    d.stop_n = n;
    d.best_n = first_argmax(trace, n);
    return d;
  };

  for (int n = 1; n <= count; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    running_pqm = std::max(running_pqm, recs[k].pqm);
    if (n >= 2) {
      const double s = slope[k];
      if (s < 0.0 && last_sign > 0) return fire(n, StopReason::kEntropyPeak);
      if (s != 0.0) last_sign = s > 0.0 ? 1 : -1;

      const bool flat = std::abs(e[k] - e[k - 1]) < crit.entropy_eps &&
                        std::abs(recs[k].pqm - recs[k - 1].pqm) < crit.pqm_eps;
      flat_run = flat ? flat_run + 1 : 0;
      if (flat_run >= crit.window) return fire(n, StopReason::kFlatness);
    }
    if (recs[k].pqm < running_pqm - crit.pqm_drop) return fire(n, StopReason::kPqmDrop);
    if (n >= max_iter) return fire(n, StopReason::kMaxIter);
  }
  d.best_n = first_argmax(trace, count);
  return d;
}

}  // namespace retinexad
