#include "treeshap/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace treeshap {

namespace {

using nlohmann::json;

std::vector<int> int_array(const json& node, const char* key, int tree_index) {
  const std::string where = "tree " + std::to_string(tree_index) + ": ";
  if (!node.contains(key) || !node[key].is_array()) {
    throw ModelError(where + "missing array '" + key + "'");
  }
  std::vector<int> out;
  out.reserve(node[key].size());
  for (const auto& v : node[key]) {
    if (!v.is_number_integer()) {
      throw ModelError(where + "'" + std::string(key) + "' holds a non-integer entry");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<double> double_array(const json& node, const char* key, int tree_index) {
  const std::string where = "tree " + std::to_string(tree_index) + ": ";
  if (!node.contains(key) || !node[key].is_array()) {
    throw ModelError(where + "missing array '" + key + "'");
  }
  std::vector<double> out;
  out.reserve(node[key].size());
  for (const auto& v : node[key]) {
    if (!v.is_number()) {
      throw ModelError(where + "'" + std::string(key) + "' holds a non-numeric entry");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Forest parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ModelError("model document must be a JSON object");
  }
  if (!doc.contains("feature_count") || !doc["feature_count"].is_number_integer()) {
    throw ModelError("model document needs an integer 'feature_count'");
  }

  Forest forest;
  forest.feature_count = doc["feature_count"].get<int>();

  const std::string agg = doc.value("aggregation", std::string("mean"));
  if (agg == "mean") {
    forest.aggregation = Aggregation::Mean;
  } else if (agg == "sum") {
    forest.aggregation = Aggregation::Sum;
  } else {
    throw ModelError("unknown aggregation '" + agg + "' (expected \"mean\" or \"sum\")");
  }

  if (!doc.contains("trees") || !doc["trees"].is_array() || doc["trees"].empty()) {
    throw ModelError("model document needs a non-empty 'trees' array");
  }

  int tree_index = 0;
  for (const auto& entry : doc["trees"]) {
    if (!entry.is_object()) {
      throw ModelError("tree " + std::to_string(tree_index) + ": entry is not an object");
    }
    Tree tree;
    tree.feature_count = forest.feature_count;
    tree.split_feature = int_array(entry, "split_feature", tree_index);
    tree.threshold = double_array(entry, "threshold", tree_index);
    tree.left_child = int_array(entry, "left_child", tree_index);
    tree.right_child = int_array(entry, "right_child", tree_index);
    tree.leaf_value = double_array(entry, "leaf_value", tree_index);
    tree.validate(tree_index);
    forest.trees.push_back(std::move(tree));
    ++tree_index;
  }
  forest.validate();
  return forest;
}

Forest load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ModelError("cannot open model file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string serialize_model(const Forest& forest) {
  json doc;
  doc["feature_count"] = forest.feature_count;
  doc["aggregation"] = forest.aggregation == Aggregation::Mean ? "mean" : "sum";
  doc["trees"] = json::array();
  for (const Tree& tree : forest.trees) {
    json t;
    t["split_feature"] = tree.split_feature;
    t["threshold"] = tree.threshold;
    t["left_child"] = tree.left_child;
    t["right_child"] = tree.right_child;
    t["leaf_value"] = tree.leaf_value;
    doc["trees"].push_back(std::move(t));
  }
  return doc.dump(2) + "\n";
}

}  // namespace treeshap
