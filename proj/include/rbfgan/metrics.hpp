#ifndef RBFGAN_METRICS_HPP
#define RBFGAN_METRICS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rbfgan/dataset.hpp"
#include "rbfgan/matrix.hpp"

namespace rbfgan {

// Mean over rows of the squared Euclidean norm of (predicted - actual).
double mse(const Matrix& predicted, const Matrix& actual);

struct MspeResult {
  double percent = 0.0;
  std::size_t excluded_rows = 0;  // rows with ||actual row|| below the floor
};

// Mean over rows of ||predicted-actual||^2 / ||actual||^2, as a percentage.
// Rows whose actual norm is below 1e-12 are excluded and counted; if every
// row is excluded the metric is undefined.
MspeResult mspe(const Matrix& predicted, const Matrix& actual);

using EpochInterval = std::pair<std::size_t, std::size_t>;  // [lo, hi)

// Late-training stability windows used by the reports.
const std::vector<EpochInterval>& default_intervals();

// Population standard deviation of series[lo, min(hi, len)) per interval.
// An interval that starts at or beyond the series, or is empty, is an error.
std::vector<double> interval_std(const std::vector<double>& series,
                                 const std::vector<EpochInterval>& intervals);

// Relative change of a stability figure vs a baseline: |cand - base|/base * 100.
double eta_percent(double candidate_std, double baseline_std);

struct CoverageResult {
  double generated_fraction = 0.0;
  double reference_fraction = 0.0;
};

// Fraction of rows with column value strictly above the threshold, in both
// datasets. A collapsed generator shows a generated fraction far below the
// reference one.
CoverageResult mode_coverage(const Dataset& generated, const Dataset& reference,
                             const std::string& column = "u", double threshold = 2.0);

struct MetricReport {
  std::optional<double> mse;
  std::optional<double> mspe;
  std::optional<std::size_t> mspe_excluded_rows;
  std::vector<double> interval_stds;
  std::string eta_baseline;  // named baseline the eta compares against
  std::optional<double> eta_percent;
  std::optional<double> coverage_generated;
  std::optional<double> coverage_reference;
};

// key = value lines, one per present field.
std::vector<std::pair<std::string, std::string>> metric_report_kv(const MetricReport& r);
void metric_report_save_kv(const std::string& path, const MetricReport& r);

// Two-line CSV (header + row) for aggregation across runs; absent fields
// serialize as empty cells.
void metric_report_save_csv(const std::string& path, const MetricReport& r);

}  // namespace rbfgan

#endif  // RBFGAN_METRICS_HPP
