#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "treeshap/fuzz.hpp"
#include "treeshap/game.hpp"
#include "treeshap/tree.hpp"

namespace treeshap {

enum class PropertyStatus { Pass, Fail, Skipped };

struct PropertyResult {
  std::string name;
  PropertyStatus status = PropertyStatus::Pass;
  double worst_error = 0.0;
  // Locator of the worst/failing case (seed, tree, pair), or the skip reason.
  std::string detail;
};

// Seam for fault-injection tests: when set, the suite scores trees through
// this function instead of the real engine.
struct EngineHooks {
  std::function<AttributionVector(const Tree&, std::span<const double>,
                                  std::span<const double>)>
      explain_tree;
};

struct AxiomReport {
  FuzzConfig config;
  std::vector<PropertyResult> results;

  bool all_passed() const;
  // Line-delimited log followed by a summary table; byte-identical for
  // identical configs.
  std::string to_text() const;
};

// Runs the verification campaign: game-theory axioms on synthetic games,
// then oracle comparisons and structural laws on a fuzzed tree corpus for
// the vector, interaction and partition engines. When a model is supplied,
// model-specific rows are appended.
AxiomReport run_axiom_suite(const FuzzConfig& cfg);
AxiomReport run_axiom_suite(const FuzzConfig& cfg, const Forest* model,
                            const EngineHooks& hooks = {});

}  // namespace treeshap
