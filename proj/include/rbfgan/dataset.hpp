#ifndef RBFGAN_DATASET_HPP
#define RBFGAN_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rbfgan/matrix.hpp"

namespace rbfgan {

// The three supported table layouts plus free-form columns.
enum class Schema { burgers, cylinder, m6, custom };

const char* schema_name(Schema s);
Schema schema_from_name(const std::string& name);

struct SchemaInfo {
  std::vector<std::string> design;
  std::vector<std::string> response;
};

// Fixed column sets: burgers (t,x,v -> u), cylinder (x,y,Ma -> P,Cp,Fx,Fy),
// m6 (Ma,AoA,Re -> CL,CD,CF,CMx,CMy,CMz,CFx,CFy,CFz).
SchemaInfo schema_info(Schema s);

enum class SplitTag : std::uint8_t { train = 0, val = 1, test = 2 };

// A rectangular table of finite doubles: design columns first, then response
// columns. Split tags are empty until split() runs; untagged data counts as
// all-train wherever a train subset is requested.
struct Dataset {
  Schema schema = Schema::custom;
  std::vector<std::string> design_cols;
  std::vector<std::string> response_cols;
  Matrix table;
  std::vector<SplitTag> tags;

  std::size_t rows() const { return table.rows(); }
  std::size_t design_dim() const { return design_cols.size(); }
  std::size_t response_dim() const { return response_cols.size(); }
  std::vector<std::string> columns() const;
  // Index of a named column; SchemaError if absent.
  std::size_t col_index(const std::string& name) const;
};

Dataset make_dataset(Schema s, Matrix table);
Dataset make_custom_dataset(std::vector<std::string> design_cols,
                            std::vector<std::string> response_cols, Matrix table);

// UTF-8 CSV with an exact header row and 17-significant-digit floats.
void csv_save(const std::string& path, const Dataset& ds);

// Loads and validates against the schema: the header must match exactly
// (missing, extra or misordered columns are SchemaErrors), every cell must be
// a finite number (CsvError addressed by row and column). For
// Schema::custom pass the expected column split.
Dataset csv_load(const std::string& path, Schema s,
                 const std::vector<std::string>& custom_design = {},
                 const std::vector<std::string>& custom_response = {});

// Seeded shuffle, then contiguous train/val/test assignment. Sizes are
// floor(n * r / sum) for val and test, remainder goes to train. Requires at
// least 3 rows and an untagged dataset.
void split_dataset(Dataset& ds, double r_train, double r_val, double r_test,
                   std::uint64_t seed);

// Rows carrying the tag, in table order. Untagged dataset: train means all.
Matrix rows_with_tag(const Dataset& ds, SplitTag tag);
std::size_t count_tag(const Dataset& ds, SplitTag tag);

// Per-column affine map to [0,1], fitted on the train split only.
struct NormStats {
  std::vector<double> min, max;
  std::size_t cols() const { return min.size(); }
};

// Constant columns (max == min) are rejected by name.
NormStats compute_norm_stats(const Dataset& ds);

// Applies (x - min) / (max - min) per column. Values outside the fitted
// range map outside [0,1] and are preserved, never clipped.
Matrix normalize_rows(const Matrix& rows, const NormStats& stats);
Matrix denormalize_rows(const Matrix& rows, const NormStats& stats);

// Stats for a contiguous column range [lo, hi), e.g. the response block.
NormStats stats_slice(const NormStats& stats, std::size_t lo, std::size_t hi);

// key = value sidecar describing how a dataset file was produced.
void write_meta(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace rbfgan

#endif  // RBFGAN_DATASET_HPP
