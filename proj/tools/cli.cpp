#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rothman/diagnostics.hpp"
#include "rothman/error.hpp"
#include "rothman/figures.hpp"
#include "rothman/fixtures.hpp"
#include "rothman/json_io.hpp"
#include "rothman/simulate.hpp"

namespace rothman::cli {

namespace {

struct Options {
  std::string input;
  std::string format;
  double tol = kDefaultTolerance;
  double level = 0.95;
  std::string preset;
  std::vector<double> weights;
  int figure = 1;
  std::uint64_t seed = 0;
  std::uint64_t n = 1000;
  std::string output;
};

std::string read_stream(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open " + path);
  return read_stream(f);
}

TableFormat table_format(const Options& o) {
  if (o.format == "json") return TableFormat::json;
  if (o.format == "csv") return TableFormat::csv;
  return std::filesystem::path(o.input).extension() == ".json" ? TableFormat::json : TableFormat::csv;
}

/// Input path, "-" for stdin, a built-in table name, or nothing for the
/// bundled Whickham table.
StratifiedCohortTable load_table(const Options& o, std::istream& in,
                                 StratifiedCohortTable fallback = fixtures::whickham()) {
  if (o.input.empty()) return fallback;
  if (o.input == "-") return parse_table(read_stream(in), table_format(o));
  if (!std::filesystem::exists(o.input)) {
    if (auto t = fixtures::builtin(o.input)) return *t;
  }
  return parse_table(read_file(o.input), table_format(o));
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + o.output);
  f << text;
}

std::vector<StandardPopulation> custom_standards(const Options& o) {
  if (o.weights.empty()) return {};
  return {StandardPopulation::custom(o.weights)};
}

void require_options(const Options& o) {
  if (!(o.tol >= 0.0)) throw ValidationError("--tol must be nonnegative");
  if (!(o.level > 0.0 && o.level < 1.0)) throw ValidationError("--level must lie in (0, 1)");
}

int cmd_analyze(const Options& o, std::istream& in, std::ostream& out) {
  require_options(o);
  const auto table = load_table(o, in);
  AnalysisOptions opts;
  opts.tol = o.tol;
  opts.level = o.level;
  opts.custom_standards = custom_standards(o);
  emit(o, out, dump(to_json(analyze(table, opts))));
  return 0;
}

int cmd_standardize(const Options& o, std::istream& in, std::ostream& out) {
  const auto table = load_table(o, in);
  std::vector<StandardPopulation> standards;
  if (!o.preset.empty()) {
    const auto preset = parse_standard_preset(o.preset);
    if (!preset || *preset == StandardPreset::custom) {
      throw ValidationError("unknown preset " + o.preset);
    }
    standards.push_back(standard_population(table, *preset));
  }
  if (!o.weights.empty()) {
    if (o.weights.size() != table.size()) {
      throw ValidationError("--weights needs one weight per stratum");
    }
    standards.push_back(StandardPopulation::custom(o.weights));
  }
  if (standards.empty()) {
    for (auto p : {StandardPreset::study_sample, StandardPreset::exposed, StandardPreset::unexposed}) {
      standards.push_back(standard_population(table, p));
    }
  }
  Json arr = Json::array();
  for (const auto& s : standards) {
    RiskPoint p = standardize(table, s);
    p.kind = PointKind::standardized;
    p.label = std::string(to_string(s.preset()));
    arr.push_back({{"name", p.label}, {"standard", to_json(s)}, {"point", to_json(p)}});
  }
  Json j;
  j["standardized"] = std::move(arr);
  emit(o, out, dump(j));
  return 0;
}

int cmd_collapse(const Options& o, std::istream& in, std::ostream& out) {
  require_options(o);
  const auto table = load_table(o, in);
  if (table.size() < 2) throw ValidationError("collapse needs at least two strata");
  AnalysisOptions opts;
  opts.tol = o.tol;
  opts.level = o.level;
  const auto report = analyze(table, opts);
  Json observed = Json::array();
  Json fitted = Json::array();
  for (std::size_t i = 0; i < report.measures.size(); ++i) {
    observed.push_back(report.collapsibility[i] ? to_json(*report.collapsibility[i]) : Json(nullptr));
    const auto& c = report.measures[i].common_collapsibility;
    fitted.push_back(c ? to_json(*c) : Json(nullptr));
  }
  Json j;
  j["observed"] = std::move(observed);
  j["common_fitted"] = std::move(fitted);
  emit(o, out, dump(j));
  return 0;
}

int cmd_plot(Options o, std::istream& in, std::ostream& out) {
  if (o.figure < 1 || o.figure > kFigureCount) {
    throw ValidationError("--figure must be between 1 and 7");
  }
  // The hull figure needs more than two strata to be informative.
  const auto fallback =
      o.figure == 3 ? fixtures::whickham_six_strata_synthetic() : fixtures::whickham();
  const auto table = load_table(o, in, fallback);
  const auto figure = build_figure(o.figure, table);
  if (o.output.empty()) o.output = default_figure_filename(figure);
  emit(o, out, render_figure(figure));
  return 0;
}

int cmd_simulate(const Options& o, std::istream& in, std::ostream& out) {
  if (o.input.empty()) throw ValidationError("simulate needs a population spec (path or -)");
  const std::string text = o.input == "-" ? read_stream(in) : read_file(o.input);
  const PopulationSpec spec = parse_population_spec(text);
  if (o.n == 0) throw ValidationError("--n must be positive");
  const auto table = sample_table(spec, o.n, o.seed);
  Json j;
  j["seed"] = o.seed;
  j["n"] = o.n;
  j["table"] = Json::parse(serialize_table(table, TableFormat::json));
  j["truth"] = to_json(population_truth(spec));
  emit(o, out, dump(j));
  return 0;
}

void report_error(std::ostream& err, std::string_view stage, std::string_view code,
                  std::string_view message) {
  Json j;
  j["error"] = code;
  j["stage"] = stage;
  j["message"] = message;
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Rothman diagrams for stratified cohort tables", "rothman"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Table path, '-' for stdin, or a built-in name");
    sub->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o", o.output, "Output path (default stdout)");
  };
  auto add_stats = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "Geometric tolerance");
    sub->add_option("--level", o.level, "Confidence level");
  };
  auto add_weights = [&](CLI::App* sub) {
    sub->add_option("--weights", o.weights, "Custom standard w1,...,wk")->delimiter(',');
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Full analysis report as JSON");
  add_input(analyze_cmd);
  add_stats(analyze_cmd);
  add_weights(analyze_cmd);

  auto* standardize_cmd = app.add_subcommand("standardize", "Standardized points");
  add_input(standardize_cmd);
  add_weights(standardize_cmd);
  standardize_cmd->add_option("--preset", o.preset, "Standard population")
      ->check(CLI::IsMember({"study_sample", "exposed", "unexposed"}));

  auto* collapse_cmd = app.add_subcommand("collapse", "Measure extrema over the standardized hull");
  add_input(collapse_cmd);
  add_stats(collapse_cmd);

  auto* plot_cmd = app.add_subcommand("plot", "Write a figure as SVG");
  add_input(plot_cmd);
  plot_cmd->add_option("--figure", o.figure, "Figure number")->check(CLI::Range(1, kFigureCount));

  auto* simulate_cmd = app.add_subcommand("simulate", "Sample a table from a population spec");
  simulate_cmd->add_option("input", o.input, "PopulationSpec JSON path or '-'");
  simulate_cmd->add_option("--seed", o.seed, "Generator seed");
  simulate_cmd->add_option("--n", o.n, "Number of individuals");
  simulate_cmd->add_option("-o", o.output, "Output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  std::string stage = "cli";
  try {
    if (analyze_cmd->parsed()) {
      stage = "analyze";
      return cmd_analyze(o, in, out);
    }
    if (standardize_cmd->parsed()) {
      stage = "standardize";
      return cmd_standardize(o, in, out);
    }
    if (collapse_cmd->parsed()) {
      stage = "collapse";
      return cmd_collapse(o, in, out);
    }
    if (plot_cmd->parsed()) {
      stage = "plot";
      return cmd_plot(o, in, out);
    }
    if (simulate_cmd->parsed()) {
      stage = "simulate";
      return cmd_simulate(o, in, out);
    }
  } catch (const Error& e) {
    report_error(err, stage, to_string(e.code()), e.what());
    return e.code() == ErrorCode::numerical ? 2 : 1;
  } catch (const std::exception& e) {
    report_error(err, stage, "internal_error", e.what());
    return 2;
  }
  return 1;
}

}  // namespace rothman::cli
