#include "geoloop/scene.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

using namespace geoloop;

namespace {

int formula_table(double k, int m, double a, int n) {
  std::cout << csv_row({"quantity", "k", "m", "a", "value"});
  for (int q = 1; q <= m; ++q)
    std::cout << csv_row({"bound_formula", format_number(k), std::to_string(q), format_number(a),
                          format_number(bound_formula(k, q, a))});
  std::cout << csv_row({"eight_pi_m", "", std::to_string(m), "", format_number(8.0 * std::numbers::pi * m)});
  const int ki = static_cast<int>(std::ceil(k));
  std::cout << csv_row({"loop_count_bound_loops", std::to_string(ki), std::to_string(n), "",
                        format_number(loop_count_bound(n, ki, CountKind::loops))});
  std::cout << csv_row({"loop_count_bound_paths", std::to_string(ki), std::to_string(n), "",
                        format_number(loop_count_bound(n, ki, CountKind::paths))});
  const RemarkChain c = remark_chain(m, a);
  std::cout << csv_row({"diameter_choice_k", format_number(c.k), std::to_string(m), format_number(a),
                        format_number(c.formula)});
  std::cout << csv_row({"diameter_choice_relaxed", "", std::to_string(m), format_number(a), format_number(c.relaxed)});
  std::cout << csv_row({"diameter_choice_coarse", "", std::to_string(m), format_number(a), format_number(c.coarse)});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geoloop: curve shortening, loop families and sweep-out bounds"};
  app.require_subcommand(1);

  std::string scene_path, out_dir, report_path, curves_dir, trace_out;
  std::optional<double> slack_c0;
  std::optional<std::uint64_t> seed;

  CLI::App* run = app.add_subcommand("run", "Run a scene and write report.json, curves and CSV traces");
  run->add_option("scene", scene_path, "Scene JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--slack-c0", slack_c0, "Constant slack term replacing 1e-3 a");
  run->add_option("--seed", seed, "Override the scene seed");

  CLI::App* ver = app.add_subcommand("verify", "Re-measure every certificate of a report");
  ver->add_option("report", report_path, "report.json")->required();
  ver->add_option("--curves", curves_dir, "Directory holding the witness curves");

  double k = 1.5, a = std::numbers::pi;
  int m = 1, n = 2;
  CLI::App* form = app.add_subcommand("formula", "Print bound formula and loop count tables");
  form->add_option("--k", k, "k");
  form->add_option("--m", m, "m (rows for 1..m)");
  form->add_option("--a", a, "a, also used as the diameter d");
  form->add_option("--n", n, "n for the loop count bounds");

  CLI::App* trace = app.add_subcommand("trace", "Dump the shortening family of a shorten-mode scene as CSV");
  trace->add_option("scene", scene_path, "Scene JSON")->required();
  trace->add_option("--out", trace_out, "CSV file (stdout when omitted)");
  trace->add_option("--seed", seed, "Override the scene seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*form) {
      if (m < 1) throw ConfigError("--m must be at least 1");
      return formula_table(k, m, a, n);
    }
    if (*ver) return verify_report(report_path, curves_dir.empty() ? std::nullopt : std::optional(curves_dir), std::cerr);
    Scene s = load_scene(scene_path);
    if (seed) s.seed = *seed;
    if (*trace) {
      if (trace_out.empty()) {
        trace_scene(s, std::cout);
      } else {
        std::ofstream f(trace_out, std::ios::binary);
        if (!f) throw IoError("cannot write " + trace_out);
        trace_scene(s, f);
      }
      return kExitOk;
    }
    if (slack_c0) s.slack.c0 = *slack_c0;
    return run_scene(s, out_dir, std::cerr);
  } catch (const HypothesisViolated& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitConfig;
}
