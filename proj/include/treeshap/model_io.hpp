#pragma once

#include <filesystem>
#include <string>

#include "treeshap/tree.hpp"

namespace treeshap {

// Model document: a single JSON object
//   {"feature_count": d, "aggregation": "mean"|"sum",
//    "trees": [{"split_feature": [...], "threshold": [...],
//               "left_child": [...], "right_child": [...],
//               "leaf_value": [...]}, ...]}
// with -1 marking leaf slots in split_feature/left_child/right_child and
// thresholds carried as full-precision decimal floats.
Forest parse_model(const std::string& text);
Forest load_model(const std::filesystem::path& path);
std::string serialize_model(const Forest& forest);

}  // namespace treeshap
