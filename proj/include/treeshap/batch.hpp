#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "treeshap/game.hpp"
#include "treeshap/partition.hpp"
#include "treeshap/tree.hpp"

namespace treeshap {

enum class ExplainMode { Shap, Taylor, Grouped };
enum class OutputFormat { Csv, Jsonl };

std::string to_string(ExplainMode mode);

struct ExplanationRecord {
  int instance = 0;
  int baseline = -1;  // -1 means averaged over all baselines
  std::vector<double> values;  // d scores, or d*d row-major for interactions
  double gap = 0.0;
};

struct BatchRequest {
  const Forest* forest = nullptr;
  ExplainMode mode = ExplainMode::Shap;
  const PartitionIndex* index = nullptr;  // Grouped mode only
  const std::vector<std::vector<double>>* foreground = nullptr;
  const std::vector<std::vector<double>>* background = nullptr;
  bool aggregate_background = false;
  int threads = 1;
};

// One record per (foreground, background) pair, foreground-major; with
// aggregation, one averaged record per foreground row. Output is identical
// for any thread count. Every record's scores are checked to sum to its gap.
std::vector<ExplanationRecord> run_batch(const BatchRequest& request);

struct OutputHeader {
  std::string mode;
  int score_count = 0;
  bool matrix = false;  // name score columns phi_i_j instead of phi_i
};

void write_records(std::ostream& out, const OutputHeader& header,
                   const std::vector<ExplanationRecord>& records, OutputFormat format);

struct BenchReport {
  std::size_t explanation_count = 0;
  std::size_t nodes_visited = 0;
  std::size_t leaf_work = 0;
  std::size_t node_bound = 0;  // explanations * sum of tree sizes
  std::size_t leaf_bound = 0;  // explanations * leaves * features
  bool bounds_ok = false;
  double wall_seconds = 0.0;
  // Total visits after duplicating every tree, over the original total.
  double doubled_visit_ratio = 0.0;

  std::string to_text() const;
};

BenchReport run_bench(const Forest& forest, const std::vector<std::vector<double>>& foreground,
                      const std::vector<std::vector<double>>& background);

}  // namespace treeshap
