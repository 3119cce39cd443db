#include "treeshap/axioms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <set>
#include <utility>

#include "treeshap/explain.hpp"
#include "treeshap/oracle.hpp"
#include "treeshap/partition.hpp"
#include "treeshap/taylor.hpp"
#include "treeshap/weights.hpp"

namespace treeshap {

namespace {

constexpr double kOracleTol = 1e-9;
constexpr double kAlgebraTol = 1e-12;
constexpr int kSyntheticGames = 50;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
  return buf;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

// Accumulates the largest error seen and whether the tolerance was crossed.
class Tracker {
 public:
  explicit Tracker(double tolerance) : tolerance_(tolerance) {}

  void observe(double err, const std::string& where) {
    ++cases_;
    if (err > worst_) {
      worst_ = err;
      where_ = where;
    }
    if (err > tolerance_) {
      failed_ = true;
    }
  }

  PropertyResult result(std::string name) const {
    PropertyResult r;
    r.name = std::move(name);
    r.status = failed_ ? PropertyStatus::Fail : PropertyStatus::Pass;
    r.worst_error = worst_;
    r.detail = "cases=" + std::to_string(cases_) + (where_.empty() ? "" : " worst:" + where_);
    return r;
  }

 private:
  double tolerance_;
  double worst_ = 0.0;
  long cases_ = 0;
  std::string where_;
  bool failed_ = false;
};

PropertyResult skipped(std::string name, std::string reason) {
  PropertyResult r;
  r.name = std::move(name);
  r.status = PropertyStatus::Skipped;
  r.detail = std::move(reason);
  return r;
}

GameEvaluator table_game(std::shared_ptr<std::vector<double>> table, int d) {
  return GameEvaluator{d, [table = std::move(table)](const Coalition& s) {
                         return (*table)[s.mask()];
                       }};
}

std::shared_ptr<std::vector<double>> random_table(int d, CounterRng& rng) {
  auto table = std::make_shared<std::vector<double>>(std::uint64_t{1} << d);
  for (double& v : *table) {
    v = rng.next_real(-3.0, 3.0);
  }
  return table;
}

struct TreeCase {
  Tree tree;
  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> zs;
};

std::vector<TreeCase> build_tree_corpus(const FuzzConfig& cfg, const CounterRng& root,
                                        std::uint64_t stream, int feature_count) {
  FuzzConfig local = cfg;
  local.feature_count = feature_count;
  std::vector<TreeCase> corpus;
  corpus.reserve(static_cast<size_t>(cfg.tree_count));
  for (int t = 0; t < cfg.tree_count; ++t) {
    CounterRng tree_rng = root.substream(stream, static_cast<std::uint64_t>(t)).substream(0);
    TreeCase c;
    c.tree = generate_random_tree(local, tree_rng);
    for (int p = 0; p < cfg.pairs_per_tree; ++p) {
      CounterRng pair_rng =
          root.substream(stream, static_cast<std::uint64_t>(t)).substream(1 + p);
      c.xs.push_back(random_point(local, pair_rng, feature_count));
      c.zs.push_back(random_point(local, pair_rng, feature_count));
    }
    // One identical pair per tree keeps the degenerate x == z case covered.
    if (!c.xs.empty()) {
      c.zs[0] = c.xs[0];
    }
    corpus.push_back(std::move(c));
  }
  return corpus;
}

std::string case_tag(std::uint64_t seed, int tree, int pair) {
  return "seed=" + format_u64(seed) + " tree=" + std::to_string(tree) +
         " pair=" + std::to_string(pair);
}

std::string game_tag(std::uint64_t seed, int game) {
  return "seed=" + format_u64(seed) + " game=" + std::to_string(game);
}

}  // namespace

bool AxiomReport::all_passed() const {
  for (const PropertyResult& r : results) {
    if (r.status == PropertyStatus::Fail) {
      return false;
    }
  }
  return true;
}

std::string AxiomReport::to_text() const {
  std::string out;
  out += "# axiom-suite seed=" + format_u64(config.seed) +
         " trees=" + std::to_string(config.tree_count) +
         " pairs=" + std::to_string(config.pairs_per_tree) +
         " features=" + std::to_string(config.feature_count) +
         " max_depth=" + std::to_string(config.max_depth) +
         " oracle_cap=" + std::to_string(config.max_oracle_dim) + "\n";
  int pass = 0;
  int fail = 0;
  int skip = 0;
  for (const PropertyResult& r : results) {
    const char* status = "PASS";
    switch (r.status) {
      case PropertyStatus::Pass:
        ++pass;
        break;
      case PropertyStatus::Fail:
        status = "FAIL";
        ++fail;
        break;
      case PropertyStatus::Skipped:
        status = "SKIP";
        ++skip;
        break;
    }
    out += "PROP " + r.name + " " + status + " max_err=" + format_double(r.worst_error) +
           " " + r.detail + "\n";
  }
  out += "SUMMARY pass=" + std::to_string(pass) + " fail=" + std::to_string(fail) +
         " skipped=" + std::to_string(skip) +
         " total=" + std::to_string(results.size()) + "\n";
  out += std::string("OVERALL ") + (fail == 0 ? "PASS" : "FAIL") + "\n";
  return out;
}

AxiomReport run_axiom_suite(const FuzzConfig& cfg) {
  return run_axiom_suite(cfg, nullptr, EngineHooks{});
}

AxiomReport run_axiom_suite(const FuzzConfig& cfg, const Forest* model,
                            const EngineHooks& hooks) {
  AxiomReport report;
  report.config = cfg;
  const CounterRng root{cfg.seed};
  const std::uint64_t seed = cfg.seed;

  const auto explain_fn =
      hooks.explain_tree
          ? hooks.explain_tree
          : [](const Tree& tree, std::span<const double> x, std::span<const double> z) {
              return explain_tree(tree, x, z);
            };

  const int oracle_cap = std::min(cfg.max_oracle_dim, kMaxBruteForcePlayers);
  const bool oracle_ok = cfg.feature_count <= oracle_cap;
  const std::string oracle_skip_reason =
      "feature_count=" + std::to_string(cfg.feature_count) + " exceeds oracle cap " +
      std::to_string(oracle_cap);

  // ---- Game-theory axioms on synthetic games -------------------------------
  const int d_synth = std::min(cfg.feature_count, 8);
  {
    Tracker efficiency(kOracleTol);
    Tracker dummy(0.0);
    Tracker symmetry(kAlgebraTol);
    Tracker linearity(kAlgebraTol);
    Tracker dummy_reduction(kAlgebraTol);
    Tracker taylor_efficiency(kOracleTol);

    for (int g = 0; g < kSyntheticGames; ++g) {
      CounterRng rng = root.substream(1, static_cast<std::uint64_t>(g));
      const std::string tag = game_tag(seed, g);

      auto table = random_table(d_synth, rng);
      const GameEvaluator game = table_game(table, d_synth);
      const AttributionVector phi = brute_force_shapley(game);

      double total = 0.0;
      for (double v : phi) {
        total += v;
      }
      const double gap = table->back() - table->front();
      efficiency.observe(std::abs(total - gap), tag);

      // Game that ignores one player entirely.
      const int dummy_player = rng.next_int(d_synth);
      const std::uint64_t dummy_bit = std::uint64_t{1} << dummy_player;
      auto dummy_table = std::make_shared<std::vector<double>>(*table);
      for (std::uint64_t mask = 0; mask < dummy_table->size(); ++mask) {
        (*dummy_table)[mask] = (*table)[mask & ~dummy_bit];
      }
      const AttributionVector phi_dummy = brute_force_shapley(table_game(dummy_table, d_synth));
      dummy.observe(std::abs(phi_dummy[static_cast<size_t>(dummy_player)]), tag);

      // Game invariant under swapping two players.
      if (d_synth >= 2) {
        const int i = 0;
        const int j = 1;
        const double solo = rng.next_real(-2.0, 2.0);
        const double joint = rng.next_real(-2.0, 2.0);
        auto sym_table = std::make_shared<std::vector<double>>(table->size());
        const std::uint64_t bi = std::uint64_t{1} << i;
        const std::uint64_t bj = std::uint64_t{1} << j;
        for (std::uint64_t mask = 0; mask < sym_table->size(); ++mask) {
          const int hits = static_cast<int>((mask & bi) != 0) + static_cast<int>((mask & bj) != 0);
          (*sym_table)[mask] =
              (*table)[mask & ~(bi | bj)] + solo * hits + (hits == 2 ? joint : 0.0);
        }
        const AttributionVector phi_sym = brute_force_shapley(table_game(sym_table, d_synth));
        symmetry.observe(std::abs(phi_sym[static_cast<size_t>(i)] -
                                  phi_sym[static_cast<size_t>(j)]),
                         tag);
      }

      // alpha * game + other, checked component-wise.
      auto other = random_table(d_synth, rng);
      const double alpha = rng.next_real(-2.0, 2.0);
      auto combo = std::make_shared<std::vector<double>>(table->size());
      for (std::uint64_t mask = 0; mask < combo->size(); ++mask) {
        (*combo)[mask] = alpha * (*table)[mask] + (*other)[mask];
      }
      const AttributionVector phi_other = brute_force_shapley(table_game(other, d_synth));
      const AttributionVector phi_combo = brute_force_shapley(table_game(combo, d_synth));
      double worst = 0.0;
      for (int f = 0; f < d_synth; ++f) {
        const auto fi = static_cast<size_t>(f);
        worst = std::max(worst, std::abs(phi_combo[fi] - (alpha * phi[fi] + phi_other[fi])));
      }
      linearity.observe(worst, tag);

      // Appending unused players must leave the original scores unchanged.
      const int base_d = std::min(d_synth, 6);
      auto base_table = random_table(base_d, rng);
      const AttributionVector base_phi = brute_force_shapley(table_game(base_table, base_d));
      const std::uint64_t base_mask = (std::uint64_t{1} << base_d) - 1;
      for (int extra = 1; extra <= 5; ++extra) {
        const int big_d = base_d + extra;
        auto big_table = std::make_shared<std::vector<double>>(std::uint64_t{1} << big_d);
        for (std::uint64_t mask = 0; mask < big_table->size(); ++mask) {
          (*big_table)[mask] = (*base_table)[mask & base_mask];
        }
        const AttributionVector big_phi = brute_force_shapley(table_game(big_table, big_d));
        double err = 0.0;
        for (int f = 0; f < base_d; ++f) {
          err = std::max(err, std::abs(big_phi[static_cast<size_t>(f)] -
                                       base_phi[static_cast<size_t>(f)]));
        }
        for (int f = base_d; f < big_d; ++f) {
          err = std::max(err, std::abs(big_phi[static_cast<size_t>(f)]));
        }
        dummy_reduction.observe(err, tag + " extra=" + std::to_string(extra));
      }

      const InteractionMatrix taylor = brute_force_shapley_taylor(game);
      taylor_efficiency.observe(std::abs(taylor.total() - gap), tag);
    }

    report.results.push_back(efficiency.result("shapley/efficiency"));
    report.results.push_back(dummy.result("shapley/dummy"));
    report.results.push_back(symmetry.result("shapley/symmetry"));
    report.results.push_back(linearity.result("shapley/linearity"));
    report.results.push_back(dummy_reduction.result("shapley/dummy_reduction"));
    report.results.push_back(taylor_efficiency.result("taylor/efficiency_synthetic"));
  }

  // ---- Fuzzed tree corpus: vector engine -----------------------------------
  const std::vector<TreeCase> corpus = build_tree_corpus(cfg, root, 2, cfg.feature_count);
  {
    Tracker naive_vs_brute(kOracleTol);
    Tracker oracle(kOracleTol);
    Tracker efficiency(kOracleTol);
    Tracker dummy(0.0);
    Tracker null_paths(kOracleTol);
    Tracker flow_blocking(0.0);
    Tracker visit_bounds(0.0);
    Tracker identity_fallback(0.0);

    for (size_t t = 0; t < corpus.size(); ++t) {
      const TreeCase& c = corpus[t];
      const int d = c.tree.feature_count;
      std::set<int> used_features;
      for (int n = 0; n < c.tree.node_count(); ++n) {
        if (!c.tree.is_leaf(n)) {
          used_features.insert(c.tree.split_feature[static_cast<size_t>(n)]);
        }
      }
      const PartitionIndex identity = PartitionIndex::identity(d);

      for (size_t p = 0; p < c.xs.size(); ++p) {
        const std::string tag = case_tag(seed, static_cast<int>(t), static_cast<int>(p));
        const auto& x = c.xs[p];
        const auto& z = c.zs[p];
        const AttributionVector phi = explain_fn(c.tree, x, z);

        if (oracle_ok) {
          const AttributionVector reference =
              brute_force_shapley(interventional_game(c.tree, x, z));
          oracle.observe(max_abs_diff(phi, reference), tag);
          naive_vs_brute.observe(max_abs_diff(naive_path_shapley(c.tree, x, z), reference),
                                 tag);
        }

        double total = 0.0;
        for (double v : phi) {
          total += v;
        }
        efficiency.observe(std::abs(total - (c.tree.evaluate(x) - c.tree.evaluate(z))), tag);

        double dummy_err = 0.0;
        for (int f = 0; f < d; ++f) {
          if (!used_features.count(f)) {
            dummy_err = std::max(dummy_err, std::abs(phi[static_cast<size_t>(f)]));
          }
        }
        dummy.observe(dummy_err, tag);

        null_paths.observe(max_abs_diff(phi, naive_path_shapley(c.tree, x, z)), tag);

        // Stump values over every subset of the collected features: the leaf
        // value exactly when the subset is the x side, zero otherwise.
        double flow_err = 0.0;
        for (const MaximalPath& path : enumerate_maximal_paths(c.tree)) {
          const PathClassification cls = classify_path(c.tree, path, x, z);
          if (cls.has_blocked || cls.s_x.intersects(cls.s_z)) {
            continue;
          }
          std::vector<int> members;
          cls.s_x.united(cls.s_z).for_each([&](int f) { members.push_back(f); });
          if (members.size() > 12) {
            continue;
          }
          const std::uint64_t subsets = std::uint64_t{1} << members.size();
          for (std::uint64_t mask = 0; mask < subsets; ++mask) {
            Coalition s;
            for (size_t b = 0; b < members.size(); ++b) {
              if (mask & (std::uint64_t{1} << b)) {
                s.insert(members[static_cast<size_t>(b)]);
              }
            }
            const double value = evaluate_path_stump(c.tree, path, replace(x, z, s));
            const double expected = s == cls.s_x ? path.leaf_value : 0.0;
            flow_err = std::max(flow_err, std::abs(value - expected));
          }
        }
        flow_blocking.observe(flow_err, tag);

        const TraversalStats stats = visit_counter(c.tree, x, z);
        const bool in_bounds =
            !stats.revisit_detected &&
            stats.nodes_visited <= static_cast<size_t>(c.tree.node_count()) &&
            stats.leaf_work <=
                static_cast<size_t>(c.tree.leaf_count()) * static_cast<size_t>(d);
        visit_bounds.observe(in_bounds ? 0.0 : 1.0, tag);

        const AttributionVector via_identity =
            explain_partition_tree(c.tree, x, z, identity);
        const AttributionVector direct = explain_tree(c.tree, x, z);
        double exact = 0.0;
        for (size_t f = 0; f < direct.size(); ++f) {
          if (via_identity[f] != direct[f]) {
            exact = 1.0;
          }
        }
        identity_fallback.observe(exact, tag);
      }
    }

    if (oracle_ok) {
      report.results.push_back(oracle.result("treeshap/oracle"));
      report.results.push_back(naive_vs_brute.result("shapley/naive_vs_bruteforce"));
    } else {
      report.results.push_back(skipped("treeshap/oracle", oracle_skip_reason));
      report.results.push_back(skipped("shapley/naive_vs_bruteforce", oracle_skip_reason));
    }
    report.results.push_back(efficiency.result("treeshap/efficiency"));
    report.results.push_back(dummy.result("treeshap/dummy_feature"));
    report.results.push_back(null_paths.result("treeshap/null_paths"));
    report.results.push_back(flow_blocking.result("treeshap/flow_blocking"));
    report.results.push_back(visit_bounds.result("treeshap/visit_bounds"));
    report.results.push_back(identity_fallback.result("partition/identity_fallback"));
  }

  // ---- Forest aggregation over corpus chunks -------------------------------
  {
    Tracker forest_linearity(kAlgebraTol);
    const int chunk = 5;
    for (size_t start = 0; start + chunk <= corpus.size(); start += chunk) {
      Forest forest;
      forest.feature_count = cfg.feature_count;
      forest.aggregation = Aggregation::Mean;
      for (int k = 0; k < chunk; ++k) {
        forest.trees.push_back(corpus[start + static_cast<size_t>(k)].tree);
      }
      const auto& x = corpus[start].xs[0];
      const auto& z = corpus[start].zs.size() > 1 ? corpus[start].zs[1] : corpus[start].zs[0];
      const AttributionVector whole = explain_forest(forest, x, z);
      AttributionVector mean(static_cast<size_t>(cfg.feature_count), 0.0);
      for (const Tree& tree : forest.trees) {
        const AttributionVector part = explain_tree(tree, x, z);
        for (size_t f = 0; f < mean.size(); ++f) {
          mean[f] += part[f];
        }
      }
      for (double& v : mean) {
        v /= chunk;
      }
      forest_linearity.observe(max_abs_diff(whole, mean),
                               case_tag(seed, static_cast<int>(start), 0));
    }
    report.results.push_back(forest_linearity.result("treeshap/forest_linearity"));
  }

  // ---- Fuzzed tree corpus: interaction engine ------------------------------
  {
    const int d_taylor = std::min(cfg.feature_count, 8);
    const bool taylor_oracle_ok =
        d_taylor <= std::min(cfg.max_oracle_dim, kMaxBruteForceTaylorPlayers);
    const std::vector<TreeCase> taylor_corpus = build_tree_corpus(cfg, root, 5, d_taylor);

    Tracker oracle(kOracleTol);
    Tracker gap_identity(kOracleTol);
    Tracker symmetry(0.0);
    Tracker dummy_rows(0.0);
    Tracker null_paths(0.0);

    for (size_t t = 0; t < taylor_corpus.size(); ++t) {
      const TreeCase& c = taylor_corpus[t];
      std::set<int> used_features;
      for (int n = 0; n < c.tree.node_count(); ++n) {
        if (!c.tree.is_leaf(n)) {
          used_features.insert(c.tree.split_feature[static_cast<size_t>(n)]);
        }
      }
      for (size_t p = 0; p < c.xs.size(); ++p) {
        const std::string tag = case_tag(seed, static_cast<int>(t), static_cast<int>(p));
        const auto& x = c.xs[p];
        const auto& z = c.zs[p];
        const InteractionMatrix matrix = explain_interactions_tree(c.tree, x, z);

        if (taylor_oracle_ok) {
          const InteractionMatrix reference =
              brute_force_shapley_taylor(interventional_game(c.tree, x, z));
          oracle.observe(max_abs_diff(matrix.values, reference.values), tag);
        }

        gap_identity.observe(
            std::abs(matrix.total() - (c.tree.evaluate(x) - c.tree.evaluate(z))), tag);

        double sym_err = 0.0;
        double dummy_err = 0.0;
        for (int i = 0; i < d_taylor; ++i) {
          for (int j = 0; j < d_taylor; ++j) {
            if (matrix.at(i, j) != matrix.at(j, i)) {
              sym_err = 1.0;
            }
            if (!used_features.count(i) || !used_features.count(j)) {
              dummy_err = std::max(dummy_err, std::abs(matrix.at(i, j)));
            }
          }
        }
        symmetry.observe(sym_err, tag);
        dummy_rows.observe(dummy_err, tag);

        // Paths with a blocked edge or overlapping sides play a null game:
        // enumerating their stump over the collected features must give an
        // all-zero interaction matrix.
        double null_err = 0.0;
        for (const MaximalPath& path : enumerate_maximal_paths(c.tree)) {
          const PathClassification cls = classify_path(c.tree, path, x, z);
          if (!cls.has_blocked && !cls.s_x.intersects(cls.s_z)) {
            continue;
          }
          std::vector<int> members;
          cls.s_x.united(cls.s_z).for_each([&](int f) { members.push_back(f); });
          if (members.empty()) {
            null_err = std::max(
                null_err,
                std::abs(evaluate_path_stump(c.tree, path, replace(x, z, Coalition{}))));
            continue;
          }
          auto reduced = [&](const Coalition& s_members) {
            Coalition s;
            s_members.for_each(
                [&](int b) { s.insert(members[static_cast<size_t>(b)]); });
            return evaluate_path_stump(c.tree, path, replace(x, z, s));
          };
          const InteractionMatrix stump_taylor = brute_force_shapley_taylor(
              GameEvaluator{static_cast<int>(members.size()), reduced});
          for (double v : stump_taylor.values) {
            null_err = std::max(null_err, std::abs(v));
          }
        }
        null_paths.observe(null_err, tag);
      }
    }

    if (taylor_oracle_ok) {
      report.results.push_back(oracle.result("taylor/oracle"));
    } else {
      report.results.push_back(skipped("taylor/oracle", oracle_skip_reason));
    }
    report.results.push_back(gap_identity.result("taylor/gap_identity"));
    report.results.push_back(symmetry.result("taylor/symmetry"));
    report.results.push_back(dummy_rows.result("taylor/dummy_rows"));
    report.results.push_back(null_paths.result("taylor/null_paths"));
  }

  // ---- Fuzzed partition corpus ---------------------------------------------
  {
    Tracker oracle(kOracleTol);
    Tracker efficiency(kOracleTol);
    Tracker null_law(0.0);
    Tracker group_dummy(0.0);
    Tracker dummy_lifting(0.0);

    // Generated specs embed to at most this many coordinates, regardless of
    // the configured feature count.
    const int max_embedded = 10;
    const bool partition_oracle_ok =
        (cfg.group_spec ? cfg.group_spec->embedded_count() : max_embedded) <= oracle_cap;
    const int partition_trees = std::max(1, cfg.tree_count / 2);
    for (int t = 0; t < partition_trees; ++t) {
      CounterRng spec_rng = root.substream(3, static_cast<std::uint64_t>(t)).substream(0);
      const EmbeddingSpec spec = cfg.group_spec
                                     ? *cfg.group_spec
                                     : random_embedding_spec(spec_rng, 10, 6);
      const PartitionIndex index = build_index(spec);
      const int d_embedded = spec.embedded_count();

      FuzzConfig local = cfg;
      local.feature_count = d_embedded;
      CounterRng tree_rng = root.substream(3, static_cast<std::uint64_t>(t)).substream(1);
      const Tree tree = generate_random_tree(local, tree_rng);

      std::set<int> used_groups;
      for (int n = 0; n < tree.node_count(); ++n) {
        if (!tree.is_leaf(n)) {
          used_groups.insert(index.group_of(tree.split_feature[static_cast<size_t>(n)]));
        }
      }

      for (int p = 0; p < cfg.pairs_per_tree; ++p) {
        const std::string tag = case_tag(seed, t, p);
        CounterRng pair_rng =
            root.substream(3, static_cast<std::uint64_t>(t)).substream(2 + p);
        std::vector<double> x_raw;
        std::vector<double> z_raw;
        for (const FeatureEmbedding& f : spec.features) {
          if (f.kind == FeatureEmbedding::Kind::Identity) {
            x_raw.push_back(pair_rng.next_real(cfg.threshold_min, cfg.threshold_max));
            z_raw.push_back(pair_rng.next_real(cfg.threshold_min, cfg.threshold_max));
          } else {
            x_raw.push_back(pair_rng.next_int(f.category_count));
            z_raw.push_back(pair_rng.next_int(f.category_count));
          }
        }
        const std::vector<double> x_emb = embed(x_raw, spec);
        const std::vector<double> z_emb = embed(z_raw, spec);

        const AttributionVector phi = explain_partition_tree(tree, x_emb, z_emb, index);

        if (d_embedded <= oracle_cap) {
          const AttributionVector reference = brute_force_shapley(
              grouped_game(interventional_game(tree, x_emb, z_emb), index));
          oracle.observe(max_abs_diff(phi, reference), tag);
        }

        double total = 0.0;
        for (double v : phi) {
          total += v;
        }
        efficiency.observe(std::abs(total - (tree.evaluate(x_emb) - tree.evaluate(z_emb))),
                           tag);

        double group_dummy_err = 0.0;
        for (int g = 0; g < index.group_count(); ++g) {
          if (!used_groups.count(g)) {
            group_dummy_err = std::max(group_dummy_err, std::abs(phi[static_cast<size_t>(g)]));
          }
        }
        group_dummy.observe(group_dummy_err, tag);

        // Paths whose x-side and z-side groups overlap play a null grouped
        // game; their grouped enumeration must give zero everywhere.
        double null_err = 0.0;
        for (const MaximalPath& path : enumerate_maximal_paths(tree)) {
          const PathClassification cls = classify_path(tree, path, x_emb, z_emb);
          if (cls.has_blocked) {
            continue;
          }
          const Coalition gx = index.group_image(cls.s_x);
          const Coalition gz = index.group_image(cls.s_z);
          if (!gx.intersects(gz)) {
            continue;
          }
          auto stump = [&](std::span<const double> point) {
            return evaluate_path_stump(tree, path, point);
          };
          const AttributionVector stump_phi = brute_force_shapley(grouped_game(
              interventional_game(stump, x_emb, z_emb), index));
          for (double v : stump_phi) {
            null_err = std::max(null_err, std::abs(v));
          }
        }
        null_law.observe(null_err, tag);
      }

      // A group whose coordinates a synthetic game provably ignores must get
      // zero credit in the grouped game.
      if (d_embedded <= oracle_cap && index.group_count() >= 2) {
        CounterRng lift_rng = root.substream(3, static_cast<std::uint64_t>(t)).substream(99);
        const int lifted_group = lift_rng.next_int(index.group_count());
        std::uint64_t lifted_mask = 0;
        for (int i = 0; i < d_embedded; ++i) {
          if (index.group_of(i) == lifted_group) {
            lifted_mask |= std::uint64_t{1} << i;
          }
        }
        auto table = random_table(d_embedded, lift_rng);
        auto masked = std::make_shared<std::vector<double>>(table->size());
        for (std::uint64_t mask = 0; mask < masked->size(); ++mask) {
          (*masked)[mask] = (*table)[mask & ~lifted_mask];
        }
        const GameEvaluator base = table_game(masked, d_embedded);
        double err = 0.0;
        // Confirm every lifted coordinate really is a dummy before lifting.
        for (int i = 0; i < d_embedded; ++i) {
          if (!(lifted_mask & (std::uint64_t{1} << i))) {
            continue;
          }
          const std::uint64_t bit = std::uint64_t{1} << i;
          for (std::uint64_t mask = 0; mask < masked->size(); ++mask) {
            if (mask & bit) {
              continue;
            }
            err = std::max(err, std::abs((*masked)[mask | bit] - (*masked)[mask]));
          }
        }
        const AttributionVector grouped_phi = brute_force_shapley(grouped_game(base, index));
        err = std::max(err, std::abs(grouped_phi[static_cast<size_t>(lifted_group)]));
        dummy_lifting.observe(err, case_tag(seed, t, -1));
      }
    }

    if (partition_oracle_ok) {
      report.results.push_back(oracle.result("partition/oracle"));
      report.results.push_back(dummy_lifting.result("partition/dummy_lifting"));
    } else {
      const std::string reason =
          "embedded dimension exceeds oracle cap " + std::to_string(oracle_cap);
      report.results.push_back(skipped("partition/oracle", reason));
      report.results.push_back(skipped("partition/dummy_lifting", reason));
    }
    report.results.push_back(efficiency.result("partition/efficiency"));
    report.results.push_back(null_law.result("partition/null_law"));
    report.results.push_back(group_dummy.result("partition/group_dummy"));
  }

  // ---- Supplied model ------------------------------------------------------
  if (model != nullptr) {
    const int d = model->feature_count;
    const bool engine_ok = d <= Coalition::kCapacity;
    const int model_pairs = 20;

    if (!engine_ok) {
      report.results.push_back(
          skipped("model/efficiency", "model dimension exceeds engine capacity 64"));
      report.results.push_back(
          skipped("model/oracle", "model dimension exceeds engine capacity 64"));
      report.results.push_back(
          skipped("model/visit_bounds", "model dimension exceeds engine capacity 64"));
    } else {
      Tracker efficiency(kOracleTol);
      Tracker oracle(kOracleTol);
      Tracker visit_bounds(0.0);
      const bool model_oracle_ok = d <= oracle_cap;

      for (int p = 0; p < model_pairs; ++p) {
        CounterRng pair_rng = root.substream(4, static_cast<std::uint64_t>(p));
        const std::vector<double> x = random_point(cfg, pair_rng, d);
        const std::vector<double> z = random_point(cfg, pair_rng, d);
        const std::string tag = "seed=" + format_u64(seed) + " pair=" + std::to_string(p);

        const AttributionVector phi = explain_forest(*model, x, z);
        double total = 0.0;
        for (double v : phi) {
          total += v;
        }
        efficiency.observe(std::abs(total - (model->evaluate(x) - model->evaluate(z))), tag);

        if (model_oracle_ok) {
          const AttributionVector reference =
              brute_force_shapley(interventional_game(*model, x, z));
          oracle.observe(max_abs_diff(phi, reference), tag);
        }

        bool ok = true;
        for (const Tree& tree : model->trees) {
          const TraversalStats stats = visit_counter(tree, x, z);
          ok = ok && !stats.revisit_detected &&
               stats.nodes_visited <= static_cast<size_t>(tree.node_count());
        }
        visit_bounds.observe(ok ? 0.0 : 1.0, tag);
      }

      report.results.push_back(efficiency.result("model/efficiency"));
      if (model_oracle_ok) {
        report.results.push_back(oracle.result("model/oracle"));
      } else {
        report.results.push_back(
            skipped("model/oracle", "model dimension " + std::to_string(d) +
                                        " exceeds oracle cap " + std::to_string(oracle_cap)));
      }
      report.results.push_back(visit_bounds.result("model/visit_bounds"));
    }
  }

  return report;
}

}  // namespace treeshap
