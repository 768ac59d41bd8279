#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <ostream>
#include <string>

#include "commands.hpp"
#include "image_io.hpp"
#include "retinexad/error.hpp"

namespace retinexad::cli {
namespace {

namespace fs = std::filesystem;

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--preset", f.preset, "colourcast | underwater | haze");
  cmd->add_option("--mode", f.mode, "rgb | hsi | hsv (default hsi)");
  cmd->add_option("--alpha", f.alpha, "illumination-correction weight");
  cmd->add_option("--beta", f.beta, "colour-correction weight");
  cmd->add_option("--lambda", f.lambda, "smoothing weight");
  cmd->add_option("--dt", f.dt, "time step");
  cmd->add_option("--max-iter", f.max_iter, "iteration cap for automatic stopping");
  cmd->add_option("--iters", f.iters, "run exactly this many iterations");
  cmd->add_option("--term", f.term, "smoothing term: flux (conductance, default) | curvature; eq6 and eq2 also accepted");
  cmd->add_option("--clahe-tiles", f.clahe_tiles, "CLAHE tile grid, e.g. 8x8");
  cmd->add_option("--clahe-clip", f.clahe_clip, "CLAHE clip limit as a fraction of tile mass");
  cmd->add_option("--msr-scales", f.msr_scales, "comma-separated Gaussian surround sigmas in pixels");
}

// Writes to `path`, or to `out` when no path was given.
void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
  if (path) {
    io::write_text_atomic(*path, text);
  } else {
    out << text;
  }
}

std::string rows_to_json(const std::vector<std::string>& keys, const std::vector<std::vector<double>>& values) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : values) {
    nlohmann::ordered_json j;
    for (std::size_t k = 0; k < keys.size(); ++k) j[keys[k]] = row[k];
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Retinex-guided log-domain anisotropic diffusion image enhancement", "retinexad"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "retinexad 0.1.0");

  ParamFlags flags;
  std::string input, output, enhanced;
  std::optional<std::string> trace_path, report_path, alpha_list, output_dir;
  std::string format = "csv";
  std::string algos = "ghe,clahe,cs,goc1,goc2,goc3,shf,pa-rgb,pa-hsi,pde-ghe,pde-clahe";

  auto* enhance = app.add_subcommand("enhance", "enhance one image");
  enhance->add_option("input", input, "PNG or binary PPM")->required();
  enhance->add_option("output", output, "written in the input's format")->required();
  add_param_flags(enhance, flags);
  enhance->add_option("--trace", trace_path, "per-iteration CSV");
  enhance->add_option("--report", report_path, "metric report against the input");
  enhance->add_option("--format", format, "report format: csv | json");

  auto* sweep_cmd = app.add_subcommand("sweep", "run the pipeline over a list of alpha values");
  sweep_cmd->add_option("input", input)->required();
  add_param_flags(sweep_cmd, flags);
  sweep_cmd->add_option("--alpha-list", alpha_list, "comma-separated (default 0.1,0.2,...,1.0)");
  sweep_cmd->add_option("--report", report_path, "sweep table (stdout when absent)");
  sweep_cmd->add_option("--trace", trace_path,
                        "prefix of per-alpha trace files (default: the report path without extension)");
  sweep_cmd->add_option("--format", format, "csv | json");

  auto* compare_cmd = app.add_subcommand("compare", "run baseline algorithms and tabulate their metrics");
  compare_cmd->add_option("input", input)->required();
  add_param_flags(compare_cmd, flags);
  compare_cmd->add_option("--algos", algos, "comma-separated algorithm names");
  compare_cmd->add_option("--report", report_path, "comparison table (stdout when absent)");
  compare_cmd->add_option("--output-dir", output_dir, "where output images go (default: report directory, else .)");
  compare_cmd->add_option("--format", format, "csv | json");

  auto* metrics_cmd = app.add_subcommand("metrics", "metric report for an original/enhanced pair");
  metrics_cmd->add_option("original", input)->required();
  metrics_cmd->add_option("enhanced", enhanced)->required();
  metrics_cmd->add_option("--report", report_path, "output file (stdout when absent)");
  metrics_cmd->add_option("--format", format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "retinexad 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    const ReportFormat fmt = parse_format(format);

    if (*enhance) {
      const PdeParams params = build_params(flags);
      const auto loaded = io::read_image(input);
      const RunResult res = run(loaded.rgb, params);
      const ColourImage written = io::quantize8(res.image);
      io::write_image(output, written, loaded.format);
      if (trace_path) io::write_text_atomic(*trace_path, trace_to_csv(res.trace));
      if (report_path) io::write_text_atomic(*report_path, render_report(metric_report(loaded.rgb, written), fmt));
      return kExitOk;
    }

    if (*sweep_cmd) {
      const PdeParams params = build_params(flags);
      const auto alphas = parse_list(alpha_list.value_or("0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"));
      const auto loaded = io::read_image(input);
      const auto rows = sweep(loaded.rgb, params, alphas);
      std::string table;
      if (fmt == ReportFormat::kCsv) {
        table = sweep_to_csv(rows);
      } else {
        std::vector<std::string> keys = {"alpha"};
        const auto cols = report_columns();
        for (std::size_t k = 0; k < 10; ++k) keys.push_back(cols[k]);
        keys.push_back("n");
        std::vector<std::vector<double>> values;
        for (const auto& r : rows) {
          std::vector<double> v = {r.alpha};
          const auto rv = report_values(r.report);
          v.insert(v.end(), rv.begin(), rv.begin() + 10);
          v.push_back(r.n);
          values.push_back(std::move(v));
        }
        table = rows_to_json(keys, values);
      }
      std::optional<std::string> prefix = trace_path;
      if (!prefix && report_path) prefix = (fs::path(*report_path).parent_path() / fs::path(*report_path).stem()).string();
      if (prefix) {
        for (const auto& r : rows) {
          io::write_text_atomic(*prefix + "_alpha" + format_number(r.alpha) + ".csv", trace_to_csv(r.trace));
        }
      }
      emit(report_path, table, out);
      return kExitOk;
    }

    if (*compare_cmd) {
      const PdeParams params = build_params(flags);
      std::vector<std::string> names;
      for (std::size_t start = 0; start <= algos.size();) {
        const auto end = std::min(algos.find(',', start), algos.size());
        names.push_back(algos.substr(start, end - start));
        start = end + 1;
      }
      const auto loaded = io::read_image(input);
      const auto rows = compare(loaded.rgb, params, names);
      fs::path dir = output_dir ? fs::path(*output_dir)
                                : (report_path ? fs::path(*report_path).parent_path() : fs::path("."));
      if (dir.empty()) dir = ".";
      const std::string stem = fs::path(input).stem().string();
      for (const auto& r : rows) {
        io::write_image(dir / (stem + "_" + r.algo + io::extension(loaded.format)), r.image, loaded.format);
      }
      std::string table;
      if (fmt == ReportFormat::kCsv) {
        table = compare_to_csv(rows);
      } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        const auto cols = report_columns();
        for (const auto& r : rows) {
          nlohmann::ordered_json j;
          j["algo"] = r.algo;
          const auto v = report_values(r.report);
          for (std::size_t k = 0; k < 10; ++k) j[cols[k]] = v[k];
          j["GMSD"] = r.report.GMSD;
          arr.push_back(j);
        }
        table = arr.dump(2) + "\n";
      }
      emit(report_path, table, out);
      return kExitOk;
    }

    const auto a = io::read_image(input);
    const auto b = io::read_image(enhanced);
    if (a.rgb.width() != b.rgb.width() || a.rgb.height() != b.rgb.height()) {
      throw InvalidArgument("image dimensions differ");
    }
    emit(report_path, render_report(metric_report(a.rgb, b.rgb), fmt), out);
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace retinexad::cli
