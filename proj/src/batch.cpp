#include "treeshap/batch.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "treeshap/explain.hpp"
#include "treeshap/taylor.hpp"
#include "treeshap/weights.hpp"

namespace treeshap {

namespace {

constexpr double kGapTolerance = 1e-6;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> score_pair(const BatchRequest& request, const WeightTable& weights,
                               std::span<const double> x, std::span<const double> z) {
  switch (request.mode) {
    case ExplainMode::Shap:
      return explain_forest(*request.forest, x, z, weights);
    case ExplainMode::Taylor:
      return explain_interactions_forest(*request.forest, x, z, weights).values;
    case ExplainMode::Grouped:
      return explain_partition_forest(*request.forest, x, z, *request.index, weights);
  }
  throw std::logic_error("unreachable");
}

void check_gap(const ExplanationRecord& record) {
  double total = 0.0;
  for (double v : record.values) {
    total += v;
  }
  if (std::abs(total - record.gap) > kGapTolerance) {
    throw std::logic_error("internal error: scores sum to " + format_double(total) +
                           " but the gap is " + format_double(record.gap));
  }
}

}  // namespace

std::string to_string(ExplainMode mode) {
  switch (mode) {
    case ExplainMode::Shap:
      return "shap";
    case ExplainMode::Taylor:
      return "taylor";
    case ExplainMode::Grouped:
      return "grouped";
  }
  return "unknown";
}

std::vector<ExplanationRecord> run_batch(const BatchRequest& request) {
  if (request.forest == nullptr || request.foreground == nullptr ||
      request.background == nullptr) {
    throw std::invalid_argument("run_batch: missing forest or data");
  }
  if (request.foreground->empty()) {
    throw std::invalid_argument("run_batch: no foreground rows");
  }
  if (request.background->empty()) {
    throw std::invalid_argument("run_batch: no background rows");
  }
  if (request.mode == ExplainMode::Grouped && request.index == nullptr) {
    throw std::invalid_argument("run_batch: grouped mode needs a partition index");
  }

  const Forest& forest = *request.forest;
  const auto& foreground = *request.foreground;
  const auto& background = *request.background;
  const int per_row = request.aggregate_background ? 1 : static_cast<int>(background.size());
  const int table_size =
      request.mode == ExplainMode::Grouped ? request.index->group_count() : forest.feature_count;
  const WeightTable weights(table_size);

  std::vector<ExplanationRecord> records(foreground.size() * static_cast<size_t>(per_row));

  auto explain_row = [&](size_t f) {
    const auto& x = foreground[f];
    if (request.aggregate_background) {
      // Averaging the games averages their scores, so the mean over
      // baselines is itself an exact attribution for the mean gap.
      ExplanationRecord record;
      record.instance = static_cast<int>(f);
      record.baseline = -1;
      const double hx = forest.evaluate(x);
      double gap_sum = 0.0;
      std::vector<double> sum;
      for (const auto& z : background) {
        const std::vector<double> scores = score_pair(request, weights, x, z);
        if (sum.empty()) {
          sum.assign(scores.size(), 0.0);
        }
        for (size_t i = 0; i < scores.size(); ++i) {
          sum[i] += scores[i];
        }
        gap_sum += hx - forest.evaluate(z);
      }
      const auto n = static_cast<double>(background.size());
      for (double& v : sum) {
        v /= n;
      }
      record.values = std::move(sum);
      record.gap = gap_sum / n;
      check_gap(record);
      records[f] = std::move(record);
      return;
    }
    for (size_t b = 0; b < background.size(); ++b) {
      ExplanationRecord record;
      record.instance = static_cast<int>(f);
      record.baseline = static_cast<int>(b);
      record.values = score_pair(request, weights, x, background[b]);
      record.gap = forest.evaluate(x) - forest.evaluate(background[b]);
      check_gap(record);
      records[f * static_cast<size_t>(per_row) + b] = std::move(record);
    }
  };

  const int worker_count =
      std::max(1, std::min(request.threads, static_cast<int>(foreground.size())));
  if (worker_count == 1) {
    for (size_t f = 0; f < foreground.size(); ++f) {
      explain_row(f);
    }
  } else {
    // Records land in index-computed slots, so output order never depends on
    // scheduling.
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) {
      workers.emplace_back([&]() {
        for (size_t f = next.fetch_add(1); f < foreground.size(); f = next.fetch_add(1)) {
          explain_row(f);
        }
      });
    }
    for (std::thread& worker : workers) {
      worker.join();
    }
  }
  return records;
}

void write_records(std::ostream& out, const OutputHeader& header,
                   const std::vector<ExplanationRecord>& records, OutputFormat format) {
  if (format == OutputFormat::Jsonl) {
    nlohmann::json meta;
    meta["mode"] = header.mode;
    meta["scores"] = header.score_count;
    out << meta.dump() << "\n";
    for (const ExplanationRecord& record : records) {
      nlohmann::json line;
      line["instance"] = record.instance;
      if (record.baseline < 0) {
        line["baseline"] = "avg";
      } else {
        line["baseline"] = record.baseline;
      }
      line["values"] = record.values;
      line["gap"] = record.gap;
      out << line.dump() << "\n";
    }
    return;
  }

  out << "# treeshap mode=" << header.mode << " scores=" << header.score_count << "\n";
  out << "instance,baseline";
  if (header.matrix) {
    const int d = static_cast<int>(std::lround(std::sqrt(header.score_count)));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        out << ",phi_" << i << "_" << j;
      }
    }
  } else {
    for (int i = 0; i < header.score_count; ++i) {
      out << ",phi_" << i;
    }
  }
  out << ",gap\n";
  for (const ExplanationRecord& record : records) {
    out << record.instance << ",";
    if (record.baseline < 0) {
      out << "avg";
    } else {
      out << record.baseline;
    }
    for (double v : record.values) {
      out << "," << format_double(v);
    }
    out << "," << format_double(record.gap) << "\n";
  }
}

BenchReport run_bench(const Forest& forest, const std::vector<std::vector<double>>& foreground,
                      const std::vector<std::vector<double>>& background) {
  if (foreground.empty() || background.empty()) {
    throw std::invalid_argument("run_bench: foreground and background must be non-empty");
  }
  BenchReport report;
  report.explanation_count = foreground.size() * background.size();

  std::size_t nodes_per_forest = 0;
  std::size_t leaves_per_forest = 0;
  for (const Tree& tree : forest.trees) {
    nodes_per_forest += static_cast<std::size_t>(tree.node_count());
    leaves_per_forest += static_cast<std::size_t>(tree.leaf_count());
  }
  report.node_bound = report.explanation_count * nodes_per_forest;
  report.leaf_bound = report.explanation_count * leaves_per_forest *
                      static_cast<std::size_t>(forest.feature_count);

  bool per_explanation_ok = true;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& x : foreground) {
    for (const auto& z : background) {
      std::size_t visits = 0;
      for (const Tree& tree : forest.trees) {
        const TraversalStats stats = visit_counter(tree, x, z);
        visits += stats.nodes_visited;
        report.leaf_work += stats.leaf_work;
        per_explanation_ok = per_explanation_ok && !stats.revisit_detected &&
                             stats.nodes_visited <= static_cast<size_t>(tree.node_count());
      }
      report.nodes_visited += visits;
      per_explanation_ok = per_explanation_ok && visits <= nodes_per_forest;
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  report.wall_seconds = std::chrono::duration<double>(stop - start).count();
  report.bounds_ok = per_explanation_ok && report.nodes_visited <= report.node_bound &&
                     report.leaf_work <= report.leaf_bound;

  // Duplicating every tree must exactly double the traversal work.
  Forest doubled = forest;
  doubled.trees.insert(doubled.trees.end(), forest.trees.begin(), forest.trees.end());
  std::size_t doubled_visits = 0;
  for (const auto& x : foreground) {
    for (const auto& z : background) {
      for (const Tree& tree : doubled.trees) {
        doubled_visits += visit_counter(tree, x, z).nodes_visited;
      }
    }
  }
  report.doubled_visit_ratio =
      static_cast<double>(doubled_visits) / static_cast<double>(report.nodes_visited);
  return report;
}

std::string BenchReport::to_text() const {
  std::string out;
  out += "explanations: " + std::to_string(explanation_count) + "\n";
  out += "nodes_visited: " + std::to_string(nodes_visited) +
         " (bound " + std::to_string(node_bound) + ")\n";
  out += "leaf_work: " + std::to_string(leaf_work) +
         " (bound " + std::to_string(leaf_bound) + ")\n";
  out += std::string("bounds_ok: ") + (bounds_ok ? "yes" : "no") + "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f",
                wall_seconds * 1e6 / static_cast<double>(explanation_count));
  out += std::string("wall_time_per_explanation_us: ") + buf + "\n";
  std::snprintf(buf, sizeof buf, "%.6f", doubled_visit_ratio);
  out += std::string("doubled_forest_visit_ratio: ") + buf + "\n";
  return out;
}

}  // namespace treeshap
