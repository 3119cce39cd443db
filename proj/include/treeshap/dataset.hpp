#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeshap/partition.hpp"

namespace treeshap {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ColumnSpec {
  enum class Kind { Numeric, Categorical };

  Kind kind = Kind::Numeric;
  int cardinality = 0;  // categorical only
  std::string name;
};

struct Dataset {
  std::vector<ColumnSpec> columns;
  std::vector<std::vector<double>> rows;

  int row_count() const { return static_cast<int>(rows.size()); }
  int column_count() const { return static_cast<int>(columns.size()); }
};

// Schema sidecar: {"columns": [{"kind": "numeric"} |
//                              {"kind": "categorical", "cardinality": C}, ...]}
// with an optional "name" per column.
std::vector<ColumnSpec> parse_schema(const std::string& json_text);
std::vector<ColumnSpec> load_schema(const std::filesystem::path& path);

// Header-bearing CSV. Without a schema every column is numeric. Cells are
// validated against their column kind; violations name the row and column.
Dataset load_csv(const std::filesystem::path& path,
                 const std::vector<ColumnSpec>* schema = nullptr);

EmbeddingSpec embedding_spec_for(const std::vector<ColumnSpec>& columns);

}  // namespace treeshap
