#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "image_io.hpp"
#include "retinexad/enhancers.hpp"
#include "retinexad/error.hpp"

namespace retinexad::cli {
namespace {

double parse_double(const std::string& tok) {
  double v = 0.0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e) throw InvalidArgument("not a number: '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok) {
  int v = 0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e) throw InvalidArgument("not an integer: '" + tok + "'");
  return v;
}

Plane per_plane(const std::string& name, const Plane& p) {
  if (name == "ghe") return global_he(p);
  if (name == "clahe") return clahe(p, TileGrid{}, 0.01);
  if (name == "cs") return gain_offset(p, gain::Percentile{0.01, 0.99});
  if (name == "goc1") return gain_offset(p, gain::MinMax{});
  if (name == "goc2") return gain_offset(p, gain::MeanStd{2.0});
  if (name == "goc3") return gain_offset(p, gain::Percentile{0.02, 0.98});
  // shf: surround at 1/20 of the short side, compress illumination, lift detail
  const double sigma = std::max(1.0, std::min(p.width(), p.height()) / 20.0);
  return homomorphic_filter(p, 0.5, 1.5, sigma);
}

}  // namespace

PdeParams preset_params(const std::string& name) {
  PdeParams p;
  if (name == "colourcast") {
    p.colour_mode = ColourSpace::kRGB;
    p.alpha = 1.0;
    p.beta = 0.1;
    p.lambda = 0.1;
    p.dt = 0.2;
    p.fixed_iter = 10;
  } else if (name == "underwater") {
    p.colour_mode = ColourSpace::kRGB;
    p.alpha = 0.8;
    p.beta = 0.2;
    p.lambda = 0.05;
    p.dt = 0.2;
    p.fixed_iter = 15;
  } else if (name == "haze") {
    p.colour_mode = ColourSpace::kHSI;
    p.alpha = 0.3;
    p.beta = 0.02;
    p.lambda = 0.05;
    p.enhancer.clahe_clip = 0.02;
  } else {
    throw InvalidArgument("unknown preset '" + name + "' (expected colourcast, underwater or haze)");
  }
  return p;
}

PdeParams build_params(const ParamFlags& f) {
  PdeParams p = f.preset ? preset_params(*f.preset) : PdeParams{};
  if (f.mode) {
    p.colour_mode = parse_mode(*f.mode);
    if (p.colour_mode != ColourSpace::kRGB) p.fixed_iter.reset();
  }
  if (f.alpha) p.alpha = *f.alpha;
  if (f.beta) p.beta = *f.beta;
  if (f.lambda) p.lambda = *f.lambda;
  if (f.dt) p.dt = *f.dt;
  if (f.max_iter) p.max_iter = *f.max_iter;
  if (f.iters) p.fixed_iter = *f.iters;
  if (f.term) p.smoothing = parse_term(*f.term);
  if (f.clahe_tiles) p.enhancer.clahe_tiles = parse_tiles(*f.clahe_tiles);
  if (f.clahe_clip) p.enhancer.clahe_clip = *f.clahe_clip;
  if (f.msr_scales) p.enhancer.msr_scales = parse_list(*f.msr_scales);
  if (p.colour_mode == ColourSpace::kRGB && !p.fixed_iter) p.fixed_iter = kDefaultRgbIters;
  p.validate();
  return p;
}

ColourSpace parse_mode(const std::string& s) {
  if (s == "rgb") return ColourSpace::kRGB;
  if (s == "hsi") return ColourSpace::kHSI;
  if (s == "hsv") return ColourSpace::kHSV;
  throw InvalidArgument("unknown mode '" + s + "' (expected rgb, hsi or hsv)");
}

SmoothingTerm parse_term(const std::string& s) {
  // eq6 and eq2 are the historical names of the same two terms
  if (s == "flux" || s == "eq6") return SmoothingTerm::kConductanceFlux;
  if (s == "curvature" || s == "eq2") return SmoothingTerm::kMeanCurvature;
  throw InvalidArgument("unknown term '" + s + "' (expected flux or curvature)");
}

TileGrid parse_tiles(const std::string& s) {
  const auto sep = s.find_first_of("x,");
  if (sep == std::string::npos) {
    const int n = parse_int(s);
    return {n, n};
  }
  return {parse_int(s.substr(0, sep)), parse_int(s.substr(sep + 1))};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = std::min(s.find(',', start), s.size());
    out.push_back(parse_double(s.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "json") return ReportFormat::kJson;
  throw InvalidArgument("unknown format '" + s + "' (expected csv or json)");
}

std::string trace_to_csv(const EvolutionTrace& trace) {
  std::ostringstream out;
  out << "iter,entropy,dE,d2E,pqm,mu,sigma,stop_reason\n";
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    double mu = 0.0, sigma = 0.0;
    for (double m : r.mean) mu += m;
    for (double s : r.stddev) sigma += s;
    if (!r.mean.empty()) {
      mu /= static_cast<double>(r.mean.size());
      sigma /= static_cast<double>(r.stddev.size());
    }
    const bool last = k + 1 == trace.records.size();
    out << r.n << ',' << format_number(r.entropy) << ',' << format_number(r.d_entropy) << ','
        << format_number(r.d2_entropy) << ',' << format_number(r.pqm) << ',' << format_number(mu) << ','
        << format_number(sigma) << ',' << (last ? to_string(trace.stop_reason) : "continue") << '\n';
  }
  return out.str();
}

std::string render_report(const MetricReport& r, ReportFormat format) {
  return format == ReportFormat::kCsv ? report_to_csv(r) : report_to_json(r);
}

ColourImage run_algo(const std::string& name, const ColourImage& rgb, const PdeParams& params) {
  if (name == "pa-rgb" || name == "pa-hsi") {
    PdeParams p = params;
    if (name == "pa-rgb") {
      p.colour_mode = ColourSpace::kRGB;
      if (!p.fixed_iter) p.fixed_iter = kDefaultRgbIters;
    } else if (p.colour_mode == ColourSpace::kRGB) {
      p.colour_mode = ColourSpace::kHSI;
    }
    return run(rgb, p).image;
  }
  if (name == "pde-ghe" || name == "pde-clahe") {
    PdeParams p = params;
    if (!p.fixed_iter) p.fixed_iter = kDefaultRgbIters;
    return run_base_model(rgb, p, name == "pde-ghe" ? BaseEnhancer::kGlobalHe : BaseEnhancer::kClahe);
  }
  const auto& names = known_algos();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw InvalidArgument("unknown algorithm '" + name + "'");
  }
  return ColourImage(per_plane(name, rgb[0]), per_plane(name, rgb[1]), per_plane(name, rgb[2]));
}

std::vector<SweepRow> sweep(const ColourImage& rgb, const PdeParams& base, const std::vector<double>& alphas) {
  if (alphas.empty()) throw InvalidArgument("empty alpha list");
  for (double a : alphas) {
    PdeParams p = base;
    p.alpha = a;
    p.validate();
  }
  std::vector<SweepRow> rows;
  for (double a : alphas) {
    PdeParams p = base;
    p.alpha = a;
    RunResult res = run(rgb, p);
    SweepRow row;
    row.alpha = a;
    row.report = metric_report(rgb, io::quantize8(res.image));
    row.n = res.trace.best_n;
    row.trace = std::move(res.trace);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "alpha";
  const auto cols = report_columns();
  for (std::size_t k = 0; k < 10; ++k) out << ',' << cols[k];
  out << ",n\n";
  for (const auto& row : rows) {
    out << format_number(row.alpha);
    const auto vals = report_values(row.report);
    for (std::size_t k = 0; k < 10; ++k) out << ',' << format_number(vals[k]);
    out << ',' << row.n << '\n';
  }
  return out.str();
}

std::vector<CompareRow> compare(const ColourImage& rgb, const PdeParams& params, const std::vector<std::string>& algos) {
  if (algos.empty()) throw InvalidArgument("empty algorithm list");
  const auto& names = known_algos();
  for (const auto& a : algos) {
    if (std::find(names.begin(), names.end(), a) == names.end()) {
      throw InvalidArgument("unknown algorithm '" + a + "'");
    }
  }
  std::vector<CompareRow> rows;
  for (const auto& a : algos) {
    CompareRow row;
    row.algo = a;
    row.image = io::quantize8(run_algo(a, rgb, params));
    row.report = metric_report(rgb, row.image);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "algo";
  const auto cols = report_columns();
  for (std::size_t k = 0; k < 10; ++k) out << ',' << cols[k];
  out << ",GMSD\n";
  for (const auto& row : rows) {
    out << row.algo;
    const auto vals = report_values(row.report);
    for (std::size_t k = 0; k < 10; ++k) out << ',' << format_number(vals[k]);
    out << ',' << format_number(row.report.GMSD) << '\n';
  }
  return out.str();
}

}  // namespace retinexad::cli
