#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "treeshap/axioms.hpp"
#include "treeshap/batch.hpp"
#include "treeshap/dataset.hpp"
#include "treeshap/model_io.hpp"
#include "treeshap/partition.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitInputError = 2;

struct ExplainOptions {
  std::string model_path;
  std::string data_path;
  std::string background_path;
  std::string baseline;
  std::string schema_path;
  std::string output_path;
  std::string mode = "shap";
  std::string format = "csv";
  bool aggregate_background = false;
  int threads = 1;
};

std::vector<double> parse_inline_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string cell;
  while (std::getline(stream, cell, ',')) {
    size_t consumed = 0;
    values.push_back(std::stod(cell, &consumed));
    if (consumed != cell.size()) {
      throw treeshap::DataError("--baseline: cannot parse '" + cell + "' as a number");
    }
  }
  if (values.empty()) {
    throw treeshap::DataError("--baseline: empty vector");
  }
  return values;
}

void write_output(const std::string& path, const treeshap::OutputHeader& header,
                  const std::vector<treeshap::ExplanationRecord>& records,
                  treeshap::OutputFormat format) {
  if (path.empty()) {
    treeshap::write_records(std::cout, header, records, format);
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw treeshap::DataError("cannot open output file " + path);
  }
  treeshap::write_records(out, header, records, format);
}

int run_explain(const ExplainOptions& opts) {
  using namespace treeshap;

  ExplainMode mode;
  if (opts.mode == "shap") {
    mode = ExplainMode::Shap;
  } else if (opts.mode == "taylor") {
    mode = ExplainMode::Taylor;
  } else if (opts.mode == "grouped") {
    mode = ExplainMode::Grouped;
  } else {
    throw DataError("--mode must be shap, taylor or grouped");
  }

  OutputFormat format;
  if (opts.format == "csv") {
    format = OutputFormat::Csv;
  } else if (opts.format == "jsonl") {
    format = OutputFormat::Jsonl;
  } else {
    throw DataError("--format must be csv or jsonl");
  }

  if (opts.background_path.empty() == opts.baseline.empty()) {
    throw DataError("exactly one of --background or --baseline is required");
  }

  const Forest forest = load_model(opts.model_path);

  std::optional<std::vector<ColumnSpec>> schema;
  if (!opts.schema_path.empty()) {
    schema = load_schema(opts.schema_path);
  }
  if (mode == ExplainMode::Grouped && !schema) {
    throw DataError("grouped mode needs --schema describing the raw columns");
  }

  const Dataset data = load_csv(opts.data_path, schema ? &*schema : nullptr);
  if (data.row_count() == 0) {
    throw DataError(opts.data_path + ": no data rows");
  }

  std::vector<std::vector<double>> background_raw;
  if (!opts.background_path.empty()) {
    Dataset bg = load_csv(opts.background_path, schema ? &*schema : nullptr);
    if (bg.row_count() == 0) {
      throw DataError(opts.background_path + ": no data rows");
    }
    background_raw = std::move(bg.rows);
  } else {
    std::vector<double> baseline = parse_inline_vector(opts.baseline);
    if (static_cast<int>(baseline.size()) != data.column_count()) {
      throw DataError("--baseline has " + std::to_string(baseline.size()) +
                      " entries, data has " + std::to_string(data.column_count()) +
                      " columns");
    }
    background_raw.push_back(std::move(baseline));
  }

  std::vector<std::vector<double>> foreground = data.rows;
  std::vector<std::vector<double>> background = std::move(background_raw);
  std::optional<PartitionIndex> index;

  if (mode == ExplainMode::Grouped) {
    const EmbeddingSpec spec = embedding_spec_for(data.columns);
    if (spec.embedded_count() != forest.feature_count) {
      throw DataError("schema embeds to " + std::to_string(spec.embedded_count()) +
                      " coordinates, model expects " +
                      std::to_string(forest.feature_count));
    }
    index = build_index(spec);
    for (auto& row : foreground) {
      row = embed(row, spec);
    }
    for (auto& row : background) {
      row = embed(row, spec);
    }
  } else {
    for (const ColumnSpec& column : data.columns) {
      if (column.kind != ColumnSpec::Kind::Numeric) {
        throw DataError("column '" + column.name +
                        "' is categorical; use grouped mode with a schema");
      }
    }
    if (data.column_count() != forest.feature_count) {
      throw DataError("data has " + std::to_string(data.column_count()) +
                      " columns, model expects " + std::to_string(forest.feature_count));
    }
  }

  BatchRequest request;
  request.forest = &forest;
  request.mode = mode;
  request.index = index ? &*index : nullptr;
  request.foreground = &foreground;
  request.background = &background;
  request.aggregate_background = opts.aggregate_background;
  request.threads = opts.threads;

  const std::vector<ExplanationRecord> records = run_batch(request);

  OutputHeader header;
  header.mode = to_string(mode);
  header.matrix = mode == ExplainMode::Taylor;
  header.score_count = records.empty() ? 0 : static_cast<int>(records.front().values.size());
  write_output(opts.output_path, header, records, format);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interventional attribution engine for tree-ensemble models"};
  app.require_subcommand(1);

  ExplainOptions explain_opts;
  auto add_io_options = [](CLI::App* cmd, ExplainOptions& opts, bool fixed_mode) {
    cmd->add_option("--model", opts.model_path, "model JSON document")->required();
    cmd->add_option("--data", opts.data_path, "foreground rows (CSV with header)")->required();
    cmd->add_option("--background", opts.background_path, "background rows (CSV with header)");
    cmd->add_option("--baseline", opts.baseline, "inline baseline vector, comma separated");
    cmd->add_option("--schema", opts.schema_path, "dataset schema sidecar (JSON)");
    cmd->add_option("--output", opts.output_path, "output path (default: stdout)");
    cmd->add_option("--format", opts.format, "csv or jsonl")->default_str("csv");
    cmd->add_flag("--aggregate-background", opts.aggregate_background,
                  "emit one record per instance, averaged over the background");
    cmd->add_option("--threads", opts.threads, "worker threads over foreground rows")
        ->default_val(1);
    if (!fixed_mode) {
      cmd->add_option("--mode", opts.mode, "shap, taylor or grouped")->default_str("shap");
    }
  };

  CLI::App* explain_cmd =
      app.add_subcommand("explain", "per-feature attributions for each instance");
  add_io_options(explain_cmd, explain_opts, false);

  ExplainOptions interactions_opts;
  interactions_opts.mode = "taylor";
  CLI::App* interactions_cmd =
      app.add_subcommand("interactions", "pairwise interaction matrices for each instance");
  add_io_options(interactions_cmd, interactions_opts, true);

  ExplainOptions grouped_opts;
  grouped_opts.mode = "grouped";
  CLI::App* grouped_cmd = app.add_subcommand(
      "grouped", "per-raw-feature attributions for one-hot/identity embedded models");
  add_io_options(grouped_cmd, grouped_opts, true);

  std::string validate_model;
  std::uint64_t validate_seed = 20240915;
  bool skip_oracle = false;
  int max_oracle_dim = 12;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "run the verification campaign against a model");
  validate_cmd->add_option("--model", validate_model, "model JSON document")->required();
  validate_cmd->add_option("--seed", validate_seed, "campaign seed")->default_val(20240915);
  validate_cmd->add_flag("--skip-oracle", skip_oracle, "skip exponential oracle comparisons");
  validate_cmd->add_option("--max-oracle-dim", max_oracle_dim,
                           "largest dimension for oracle comparisons")
      ->default_val(12);

  std::string bench_model;
  std::string bench_data;
  std::string bench_background;
  std::string bench_baseline;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "timing and traversal-bound report for a model");
  bench_cmd->add_option("--model", bench_model, "model JSON document")->required();
  bench_cmd->add_option("--data", bench_data, "foreground rows (CSV with header)")->required();
  bench_cmd->add_option("--background", bench_background, "background rows (CSV with header)");
  bench_cmd->add_option("--baseline", bench_baseline, "inline baseline vector");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (explain_cmd->parsed()) {
      return run_explain(explain_opts);
    }
    if (interactions_cmd->parsed()) {
      return run_explain(interactions_opts);
    }
    if (grouped_cmd->parsed()) {
      return run_explain(grouped_opts);
    }
    if (validate_cmd->parsed()) {
      const treeshap::Forest forest = treeshap::load_model(validate_model);
      treeshap::FuzzConfig cfg;
      cfg.seed = validate_seed;
      cfg.max_oracle_dim = skip_oracle ? 0 : max_oracle_dim;
      if (forest.feature_count > cfg.max_oracle_dim) {
        std::cout << "# oracle guard: dimensions above " << cfg.max_oracle_dim
                  << " are compared structurally only\n";
      }
      const treeshap::AxiomReport report = treeshap::run_axiom_suite(cfg, &forest);
      std::cout << report.to_text();
      return report.all_passed() ? kExitOk : kExitValidationFailure;
    }
    if (bench_cmd->parsed()) {
      const treeshap::Forest forest = treeshap::load_model(bench_model);
      const treeshap::Dataset data = treeshap::load_csv(bench_data);
      if (data.row_count() == 0) {
        throw treeshap::DataError(bench_data + ": no data rows");
      }
      std::vector<std::vector<double>> background;
      if (!bench_background.empty()) {
        background = treeshap::load_csv(bench_background).rows;
      } else if (!bench_baseline.empty()) {
        background.push_back(parse_inline_vector(bench_baseline));
      } else {
        throw treeshap::DataError("bench needs --background or --baseline");
      }
      const treeshap::BenchReport report =
          treeshap::run_bench(forest, data.rows, background);
      std::cout << report.to_text();
      return report.bounds_ok ? kExitOk : kExitValidationFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
