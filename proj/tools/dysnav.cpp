#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "dysnav/api.hpp"
#include "dysnav/bundle_json.hpp"
#include "dysnav/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kConfigError = 3, kInternalError = 4 };

int exit_code_for(dysnav::ErrorCode code) {
  using dysnav::ErrorCode;
  switch (code) {
    case ErrorCode::MalformedTimestamp:
    case ErrorCode::EmptyInput:
    case ErrorCode::Io:
      return kInputError;
    case ErrorCode::InvalidEpsilon:
    case ErrorCode::InvalidOmega:
    case ErrorCode::InvalidTau:
    case ErrorCode::InvalidConfig:
    case ErrorCode::SingleColumn:
    case ErrorCode::InvalidCell:
      return kConfigError;
    default:
      return kInternalError;
  }
}

dysnav::CellRef parse_cell(const std::string& text) {
  dysnav::CellRef c;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> c.column >> comma >> c.row) || comma != ',' || !in.eof()) {
    throw dysnav::Error(dysnav::ErrorCode::InvalidConfig, fmt::format("expected 'column,row', got '{}'", text));
  }
  return c;
}

int analyze(const dysnav::AnalysisConfig& cfg) {
  auto analysis = dysnav::Analysis::run(cfg);
  const auto& bundle = analysis.bundle();
  for (const auto& w : bundle.warnings) fmt::print(stderr, "warning: {}\n", w);
  if (!bundle.diagnostics.empty()) fmt::print(stderr, "skipped {} malformed line(s)\n", bundle.diagnostics.size());

  const std::string text = dysnav::serialize_bundle(bundle);
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output_path, std::ios::binary);
    out << text;
    if (!out) throw dysnav::Error(dysnav::ErrorCode::Io, fmt::format("cannot write '{}'", cfg.output_path));
  }

  if (cfg.serve_port) {
    dysnav::ApiService service(std::move(analysis));
    dysnav::serve_api(service, *cfg.serve_port, [](int port) {
      fmt::print(stderr, "serving on http://127.0.0.1:{}\n", port);
    });
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic social network analysis"};
  app.require_subcommand(1);

  dysnav::AnalysisConfig cfg;
  std::string metric = "total";
  std::string mode = "normal";
  std::string hierarchy_cell;
  std::uint16_t port = 0;

  auto* cmd = app.add_subcommand("analyze", "Run the pipeline and write an analysis bundle");
  cmd->add_option("--input", cfg.input_path, "Interaction records (user_a, user_b, time, strength, class)")
      ->required();
  cmd->add_option("--epsilon", cfg.epsilon, "Interval length, e.g. 1d, 6h, 2mo")->capture_default_str();
  cmd->add_option("--slices", cfg.omega, "Number of weight slices")->capture_default_str();
  cmd->add_option("--tau", cfg.tau, "Strength threshold for communities")->capture_default_str();
  cmd->add_option("--metric", metric, "total, average or occurrency")->capture_default_str();
  cmd->add_option("--mode", mode, "Hierarchy mode: normal or ct")->capture_default_str();
  cmd->add_option("--tau-grid", cfg.tau_grid, "Use these thresholds as rows instead of slices")->delimiter(',');
  cmd->add_option("--output", cfg.output_path, "Bundle path; '-' or omitted writes to stdout");
  auto* serve = cmd->add_option("--serve", port, "Serve the HTTP API on this port after writing");
  cmd->add_option("--hierarchy-cell", hierarchy_cell, "Infer the hierarchy on cell 'column,row'");
  cmd->add_option("--consensus-threshold", cfg.consensus_threshold, "Minimum support for consensus members")
      ->capture_default_str();
  cmd->add_flag("--literal-min-tree", cfg.literal_min_tree, "Use a plain minimum spanning tree over max delta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    cfg.metric = dysnav::parse_metric(metric);
    cfg.mode = dysnav::parse_mode(mode);
    if (!hierarchy_cell.empty()) cfg.hierarchy_cell = parse_cell(hierarchy_cell);
    if (*serve) cfg.serve_port = port;
    return analyze(cfg);
  } catch (const dysnav::PipelineError& e) {
    fmt::print(stderr, "error [{}]: {}\n", dysnav::to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const dysnav::Error& e) {
    fmt::print(stderr, "error [{}]: {}\n", dysnav::to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kInternalError;
  }
}
