#include "treeshap/dataset.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace treeshap {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

double parse_cell(const std::string& cell, int row, int column, const std::string& name) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end != nullptr && (*end == ' ' || *end == '\r' || *end == '\t')) {
    ++end;
  }
  if (end == begin || (end != nullptr && *end != '\0')) {
    throw DataError("row " + std::to_string(row) + ", column " + std::to_string(column) +
                    " (" + name + "): cannot parse '" + cell + "' as a number");
  }
  return value;
}

}  // namespace

std::vector<ColumnSpec> parse_schema(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("schema document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array()) {
    throw DataError("schema document needs a 'columns' array");
  }
  std::vector<ColumnSpec> columns;
  int idx = 0;
  for (const auto& entry : doc["columns"]) {
    ColumnSpec spec;
    const std::string kind = entry.value("kind", std::string());
    if (kind == "numeric") {
      spec.kind = ColumnSpec::Kind::Numeric;
    } else if (kind == "categorical") {
      spec.kind = ColumnSpec::Kind::Categorical;
      if (!entry.contains("cardinality") || !entry["cardinality"].is_number_integer() ||
          entry["cardinality"].get<int>() < 2) {
        throw DataError("schema column " + std::to_string(idx) +
                        ": categorical columns need an integer cardinality >= 2");
      }
      spec.cardinality = entry["cardinality"].get<int>();
    } else {
      throw DataError("schema column " + std::to_string(idx) + ": unknown kind '" + kind +
                      "' (expected \"numeric\" or \"categorical\")");
    }
    spec.name = entry.value("name", std::string());
    columns.push_back(std::move(spec));
    ++idx;
  }
  if (columns.empty()) {
    throw DataError("schema document describes no columns");
  }
  return columns;
}

std::vector<ColumnSpec> load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open schema file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_schema(buffer.str());
}

Dataset load_csv(const std::filesystem::path& path, const std::vector<ColumnSpec>* schema) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open data file " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ": empty file (a header row is required)");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  const std::vector<std::string> header = split_csv_line(line);

  Dataset data;
  if (schema != nullptr) {
    if (schema->size() != header.size()) {
      throw DataError(path.string() + ": header has " + std::to_string(header.size()) +
                      " columns, schema describes " + std::to_string(schema->size()));
    }
    data.columns = *schema;
  } else {
    data.columns.resize(header.size());
  }
  for (size_t c = 0; c < header.size(); ++c) {
    if (data.columns[c].name.empty()) {
      data.columns[c].name = header[c];
    }
  }

  int row_index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError(path.string() + ": row " + std::to_string(row_index) + " has " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    }
    std::vector<double> row(cells.size());
    for (size_t c = 0; c < cells.size(); ++c) {
      const ColumnSpec& spec = data.columns[c];
      const double value = parse_cell(cells[c], row_index, static_cast<int>(c), spec.name);
      if (spec.kind == ColumnSpec::Kind::Numeric) {
        if (!std::isfinite(value)) {
          throw DataError("row " + std::to_string(row_index) + ", column " +
                          std::to_string(c) + " (" + spec.name + "): non-finite value");
        }
      } else {
        if (!std::isfinite(value) || value != std::floor(value)) {
          throw DataError("row " + std::to_string(row_index) + ", column " +
                          std::to_string(c) + " (" + spec.name +
                          "): categorical cells must be integers");
        }
        if (value < 0 || value >= spec.cardinality) {
          throw DataError("row " + std::to_string(row_index) + ", column " +
                          std::to_string(c) + " (" + spec.name + "): category " +
                          std::to_string(static_cast<long long>(value)) +
                          " out of range [0, " + std::to_string(spec.cardinality) + ")");
        }
      }
      row[c] = value;
    }
    data.rows.push_back(std::move(row));
    ++row_index;
  }
  return data;
}

EmbeddingSpec embedding_spec_for(const std::vector<ColumnSpec>& columns) {
  EmbeddingSpec spec;
  for (const ColumnSpec& column : columns) {
    spec.features.push_back(column.kind == ColumnSpec::Kind::Numeric
                                ? FeatureEmbedding::identity()
                                : FeatureEmbedding::one_hot(column.cardinality));
  }
  return spec;
}

}  // namespace treeshap
