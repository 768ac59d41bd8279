#pragma once

#include <optional>
#include <string>
#include <vector>

#include "retinexad/engine.hpp"
#include "retinexad/image.hpp"
#include "retinexad/metrics.hpp"

namespace retinexad::cli {

/// Steps run in RGB mode when no --iters is given.
inline constexpr int kDefaultRgbIters = 10;

enum class ReportFormat { kCsv, kJson };

/// Parameter overrides as given on the command line. Unset fields keep the
/// preset value, or the library default when no preset is named.
struct ParamFlags {
  std::optional<std::string> preset;
  std::optional<std::string> mode;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> lambda;
  std::optional<double> dt;
  std::optional<int> max_iter;
  std::optional<int> iters;
  std::optional<std::string> term;
  std::optional<std::string> clahe_tiles;
  std::optional<double> clahe_clip;
  std::optional<std::string> msr_scales;
};

/// Preset bundles for the colour-cast, underwater and haze applications.
/// Throws InvalidArgument for an unknown name.
PdeParams preset_params(const std::string& name);

/// Preset, then overrides, then the RGB fixed-iteration default; validated.
PdeParams build_params(const ParamFlags& flags);

ColourSpace parse_mode(const std::string& s);
SmoothingTerm parse_term(const std::string& s);
TileGrid parse_tiles(const std::string& s);
std::vector<double> parse_list(const std::string& s);
ReportFormat parse_format(const std::string& s);

/// Per-iteration CSV: iter,entropy,dE,d2E,pqm,mu,sigma,stop_reason.
/// mu and sigma average over the evolved channels; stop_reason is "continue"
/// on every row except the last.
std::string trace_to_csv(const EvolutionTrace& trace);

std::string render_report(const MetricReport& r, ReportFormat format);

inline const std::vector<std::string>& known_algos() {
  static const std::vector<std::string> names = {"ghe", "clahe",  "cs",     "goc1",   "goc2",     "goc3",
                                                 "shf", "pa-rgb", "pa-hsi", "pde-ghe", "pde-clahe"};
  return names;
}

/// Runs one comparison algorithm. pa-* and pde-* take their settings from
/// params; the classical baselines are applied to each RGB channel.
ColourImage run_algo(const std::string& name, const ColourImage& rgb, const PdeParams& params);

struct SweepRow {
  double alpha = 0.0;
  MetricReport report;
  int n = 0;
  EvolutionTrace trace;
};

/// Runs the pipeline once per alpha. Metrics compare the 8-bit output with
/// the input.
std::vector<SweepRow> sweep(const ColourImage& rgb, const PdeParams& base, const std::vector<double>& alphas);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

struct CompareRow {
  std::string algo;
  ColourImage image;  // 8-bit quantized, as written
  MetricReport report;
};

std::vector<CompareRow> compare(const ColourImage& rgb, const PdeParams& params, const std::vector<std::string>& algos);
std::string compare_to_csv(const std::vector<CompareRow>& rows);

}  // namespace retinexad::cli
