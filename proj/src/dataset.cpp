#include "rbfgan/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rbfgan/errors.hpp"
#include "rbfgan/rng.hpp"
#include "rbfgan/text.hpp"

namespace rbfgan {

const char* schema_name(Schema s) {
  switch (s) {
    case Schema::burgers: return "burgers";
    case Schema::cylinder: return "cylinder";
    case Schema::m6: return "m6";
    case Schema::custom: return "custom";
  }
  throw ParameterError("unknown schema enum value");
}

Schema schema_from_name(const std::string& name) {
  if (name == "burgers") return Schema::burgers;
  if (name == "cylinder") return Schema::cylinder;
  if (name == "m6") return Schema::m6;
  if (name == "custom") return Schema::custom;
  throw SchemaError("unknown schema '" + name + "' (expected burgers, cylinder, m6 or custom)");
}

SchemaInfo schema_info(Schema s) {
  switch (s) {
    case Schema::burgers:
      return {{"t", "x", "v"}, {"u"}};
    case Schema::cylinder:
      return {{"x", "y", "Ma"}, {"P", "Cp", "Fx", "Fy"}};
    case Schema::m6:
      return {{"Ma", "AoA", "Re"},
              {"CL", "CD", "CF", "CMx", "CMy", "CMz", "CFx", "CFy", "CFz"}};
    case Schema::custom:
      throw SchemaError("custom schema has no fixed column set");
  }
  throw ParameterError("unknown schema enum value");
}

std::vector<std::string> Dataset::columns() const {
  std::vector<std::string> out = design_cols;
  out.insert(out.end(), response_cols.begin(), response_cols.end());
  return out;
}

std::size_t Dataset::col_index(const std::string& name) const {
  const auto cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i] == name) return i;
  throw SchemaError("no column named '" + name + "' in " + std::string(schema_name(schema)) +
                    " dataset");
}

namespace {

void check_table(const Dataset& ds) {
  const std::size_t want = ds.design_cols.size() + ds.response_cols.size();
  if (ds.table.cols() != want)
    throw SchemaError("table has " + std::to_string(ds.table.cols()) + " columns, schema needs " +
                      std::to_string(want));
  ds.table.require_finite("dataset table");
}

}  // namespace

Dataset make_dataset(Schema s, Matrix table) {
  if (s == Schema::custom)
    throw SchemaError("use make_custom_dataset for custom column sets");
  const SchemaInfo info = schema_info(s);
  Dataset ds;
  ds.schema = s;
  ds.design_cols = info.design;
  ds.response_cols = info.response;
  ds.table = std::move(table);
  check_table(ds);
  return ds;
}

Dataset make_custom_dataset(std::vector<std::string> design_cols,
                            std::vector<std::string> response_cols, Matrix table) {
  if (design_cols.empty() || response_cols.empty())
    throw SchemaError("custom dataset needs at least one design and one response column");
  Dataset ds;
  ds.schema = Schema::custom;
  ds.design_cols = std::move(design_cols);
  ds.response_cols = std::move(response_cols);
  ds.table = std::move(table);
  check_table(ds);
  return ds;
}

void csv_save(const std::string& path, const Dataset& ds) {
  check_table(ds);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const auto cols = ds.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out << ',';
    out << cols[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.table.rows(); ++r) {
    for (std::size_t c = 0; c < ds.table.cols(); ++c) {
      if (c) out << ',';
      out << fmt17(ds.table(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

Dataset csv_load(const std::string& path, Schema s,
                 const std::vector<std::string>& custom_design,
                 const std::vector<std::string>& custom_response) {
  std::vector<std::string> design, response;
  if (s == Schema::custom) {
    design = custom_design;
    response = custom_response;
    if (design.empty() || response.empty())
      throw SchemaError("loading a custom csv needs explicit design and response columns");
  } else {
    const SchemaInfo info = schema_info(s);
    design = info.design;
    response = info.response;
  }
  std::vector<std::string> want = design;
  want.insert(want.end(), response.begin(), response.end());

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw CsvError("'" + path + "' is empty, expected a header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_on(line, ',');
  if (header.size() != want.size()) {
    std::string msg = "'" + path + "' header has " + std::to_string(header.size()) +
                      " columns, schema " + schema_name(s) + " needs " +
                      std::to_string(want.size()) + " (";
    for (std::size_t i = 0; i < want.size(); ++i) msg += (i ? "," : "") + want[i];
    throw SchemaError(msg + ")");
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (trim(header[i]) != want[i])
      throw SchemaError("'" + path + "' header column " + std::to_string(i + 1) + " is '" +
                        trim(header[i]) + "', schema " + schema_name(s) + " needs '" + want[i] +
                        "'");
  }

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_on(line, ',');
    if (cells.size() != want.size())
      throw CsvError("'" + path + "' line " + std::to_string(lineno) + " has " +
                     std::to_string(cells.size()) + " cells, expected " +
                     std::to_string(want.size()));
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v;
      if (!parse_double(trim(cells[c]), v))
        throw CsvError("'" + path + "' line " + std::to_string(lineno) + " column " + want[c] +
                       ": '" + trim(cells[c]) + "' is not a number");
      if (!std::isfinite(v))
        throw CsvError("'" + path + "' line " + std::to_string(lineno) + " column " + want[c] +
                       ": value is not finite");
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  Matrix table = rows.empty() ? Matrix(0, want.size()) : Matrix::from_rows(rows);

  if (s == Schema::custom) return make_custom_dataset(design, response, std::move(table));
  return make_dataset(s, std::move(table));
}

void split_dataset(Dataset& ds, double r_train, double r_val, double r_test,
                   std::uint64_t seed) {
  if (!ds.tags.empty()) throw DataError("dataset is already split");
  if (!(r_train > 0.0) || r_val < 0.0 || r_test < 0.0 ||
      !std::isfinite(r_train + r_val + r_test))
    throw ParameterError("split ratios must be finite, train > 0, val and test >= 0");
  const std::size_t n = ds.rows();
  if (n < 3) throw DataError("cannot split " + std::to_string(n) + " rows, need at least 3");
  const double total = r_train + r_val + r_test;
  const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * r_val / total));
  const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * r_test / total));
  if (n_val + n_test >= n) throw DataError("split leaves no training rows");

  SeededRng rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  shuffle_indices(order, rng);
  ds.tags.assign(n, SplitTag::train);
  std::size_t k = n - n_val - n_test;  // shuffled positions [0,k) stay train
  for (std::size_t i = 0; i < n_val; ++i) ds.tags[order[k + i]] = SplitTag::val;
  for (std::size_t i = 0; i < n_test; ++i) ds.tags[order[k + n_val + i]] = SplitTag::test;
}

Matrix rows_with_tag(const Dataset& ds, SplitTag tag) {
  if (ds.tags.empty()) {
    if (tag == SplitTag::train) return ds.table;
    return Matrix(0, ds.table.cols());
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ds.tags.size(); ++i)
    if (ds.tags[i] == tag) idx.push_back(i);
  return take_rows(ds.table, idx);
}

std::size_t count_tag(const Dataset& ds, SplitTag tag) {
  if (ds.tags.empty()) return tag == SplitTag::train ? ds.rows() : 0;
  return static_cast<std::size_t>(std::count(ds.tags.begin(), ds.tags.end(), tag));
}

NormStats compute_norm_stats(const Dataset& ds) {
  const Matrix train = rows_with_tag(ds, SplitTag::train);
  if (train.rows() == 0) throw DataError("cannot fit normalization on an empty train split");
  NormStats st;
  st.min.assign(train.cols(), 0.0);
  st.max.assign(train.cols(), 0.0);
  const auto cols = ds.columns();
  for (std::size_t c = 0; c < train.cols(); ++c) {
    double lo = train(0, c), hi = train(0, c);
    for (std::size_t r = 1; r < train.rows(); ++r) {
      lo = std::min(lo, train(r, c));
      hi = std::max(hi, train(r, c));
    }
    if (hi == lo)
      throw DataError("column " + cols[c] + " is constant (" + fmt17(lo) +
                      ") in the train split, cannot normalize");
    st.min[c] = lo;
    st.max[c] = hi;
  }
  return st;
}

Matrix normalize_rows(const Matrix& rows, const NormStats& stats) {
  if (rows.cols() != stats.cols())
    throw DimensionError("normalize: rows have " + std::to_string(rows.cols()) +
                         " columns, stats have " + std::to_string(stats.cols()));
  Matrix out(rows.rows(), rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c)
      out(r, c) = (rows(r, c) - stats.min[c]) / (stats.max[c] - stats.min[c]);
  return out;
}

Matrix denormalize_rows(const Matrix& rows, const NormStats& stats) {
  if (rows.cols() != stats.cols())
    throw DimensionError("denormalize: rows have " + std::to_string(rows.cols()) +
                         " columns, stats have " + std::to_string(stats.cols()));
  Matrix out(rows.rows(), rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c)
      out(r, c) = rows(r, c) * (stats.max[c] - stats.min[c]) + stats.min[c];
  return out;
}

NormStats stats_slice(const NormStats& stats, std::size_t lo, std::size_t hi) {
  if (lo > hi || hi > stats.cols())
    throw ParameterError("stats_slice: bad range [" + std::to_string(lo) + "," +
                         std::to_string(hi) + ") for " + std::to_string(stats.cols()) +
                         " columns");
  NormStats out;
  out.min.assign(stats.min.begin() + static_cast<std::ptrdiff_t>(lo),
                 stats.min.begin() + static_cast<std::ptrdiff_t>(hi));
  out.max.assign(stats.max.begin() + static_cast<std::ptrdiff_t>(lo),
                 stats.max.begin() + static_cast<std::ptrdiff_t>(hi));
  return out;
}

void write_meta(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace rbfgan
