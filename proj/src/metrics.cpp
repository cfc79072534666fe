#include "rbfgan/metrics.hpp"

#include <cmath>
#include <fstream>

#include "rbfgan/errors.hpp"
#include "rbfgan/text.hpp"

namespace rbfgan {

namespace {

constexpr double kNormFloor = 1e-12;

void check_pair(const Matrix& predicted, const Matrix& actual) {
  if (predicted.rows() != actual.rows() || predicted.cols() != actual.cols())
    throw DimensionError("prediction is " + predicted.shape_str() + ", actual is " +
                         actual.shape_str());
  if (predicted.rows() == 0) throw ParameterError("error metrics need at least one row");
  predicted.require_finite("predicted");
  actual.require_finite("actual");
}

}  // namespace

double mse(const Matrix& predicted, const Matrix& actual) {
  check_pair(predicted, actual);
  double total = 0.0;
  for (std::size_t r = 0; r < predicted.rows(); ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < predicted.cols(); ++c) {
      const double d = predicted(r, c) - actual(r, c);
      row += d * d;
    }
    total += row;
  }
  return total / static_cast<double>(predicted.rows());
}

MspeResult mspe(const Matrix& predicted, const Matrix& actual) {
  check_pair(predicted, actual);
  MspeResult res;
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t r = 0; r < predicted.rows(); ++r) {
    double err = 0.0, ref = 0.0;
    for (std::size_t c = 0; c < predicted.cols(); ++c) {
      const double d = predicted(r, c) - actual(r, c);
      err += d * d;
      ref += actual(r, c) * actual(r, c);
    }
    if (std::sqrt(ref) < kNormFloor) {
      ++res.excluded_rows;
      continue;
    }
    total += err / ref;
    ++used;
  }
  if (used == 0)
    throw MetricError("relative error undefined: all " + std::to_string(res.excluded_rows) +
                      " rows have near-zero reference norm");
  res.percent = total / static_cast<double>(used) * 100.0;
  return res;
}

const std::vector<EpochInterval>& default_intervals() {
  static const std::vector<EpochInterval> k = {{0, 125}, {125, 750}, {750, 2000}};
  return k;
}

std::vector<double> interval_std(const std::vector<double>& series,
                                 const std::vector<EpochInterval>& intervals) {
  for (double v : series)
    if (!std::isfinite(v)) throw NumericError("series contains a non-finite value");
  std::vector<double> out;
  out.reserve(intervals.size());
  for (const auto& [lo, hi] : intervals) {
    const std::size_t end = std::min(hi, series.size());
    if (lo >= end)
      throw ParameterError("interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           ") is empty for a series of length " + std::to_string(series.size()));
    bool all_equal = true;
    for (std::size_t i = lo + 1; i < end && all_equal; ++i)
      all_equal = series[i] == series[lo];
    if (all_equal) {  // a constant window is exactly 0, not accumulation noise
      out.push_back(0.0);
      continue;
    }
    const double n = static_cast<double>(end - lo);
    double mean = 0.0;
    for (std::size_t i = lo; i < end; ++i) mean += series[i];
    mean /= n;
    double var = 0.0;
    for (std::size_t i = lo; i < end; ++i) {
      const double d = series[i] - mean;
      var += d * d;
    }
    out.push_back(std::sqrt(var / n));  // population standard deviation
  }
  return out;
}

double eta_percent(double candidate_std, double baseline_std) {
  if (!std::isfinite(candidate_std) || !std::isfinite(baseline_std))
    throw ParameterError("stability figures must be finite");
  if (candidate_std < 0.0 || baseline_std < 0.0)
    throw ParameterError("stability figures must be non-negative");
  if (baseline_std == 0.0)
    throw MetricError("stability improvement undefined against a zero baseline deviation");
  return std::abs(candidate_std - baseline_std) / baseline_std * 100.0;
}

CoverageResult mode_coverage(const Dataset& generated, const Dataset& reference,
                             const std::string& column, double threshold) {
  if (!std::isfinite(threshold)) throw ParameterError("coverage threshold must be finite");
  const std::size_t gc = generated.col_index(column);
  const std::size_t rc = reference.col_index(column);
  if (generated.rows() == 0 || reference.rows() == 0)
    throw ParameterError("coverage needs non-empty datasets");
  CoverageResult res;
  std::size_t g = 0, r = 0;
  for (std::size_t i = 0; i < generated.rows(); ++i)
    if (generated.table(i, gc) > threshold) ++g;
  for (std::size_t i = 0; i < reference.rows(); ++i)
    if (reference.table(i, rc) > threshold) ++r;
  res.generated_fraction = static_cast<double>(g) / static_cast<double>(generated.rows());
  res.reference_fraction = static_cast<double>(r) / static_cast<double>(reference.rows());
  return res;
}

std::vector<std::pair<std::string, std::string>> metric_report_kv(const MetricReport& r) {
  std::vector<std::pair<std::string, std::string>> kv;
  if (r.mse) kv.emplace_back("mse", fmt17(*r.mse));
  if (r.mspe) kv.emplace_back("mspe_percent", fmt17(*r.mspe));
  if (r.mspe_excluded_rows)
    kv.emplace_back("mspe_excluded_rows", std::to_string(*r.mspe_excluded_rows));
  for (std::size_t i = 0; i < r.interval_stds.size(); ++i)
    kv.emplace_back("interval_std_" + std::to_string(i), fmt17(r.interval_stds[i]));
  if (!r.eta_baseline.empty()) kv.emplace_back("eta_baseline", r.eta_baseline);
  if (r.eta_percent) kv.emplace_back("eta_percent", fmt17(*r.eta_percent));
  if (r.coverage_generated) kv.emplace_back("coverage_generated", fmt17(*r.coverage_generated));
  if (r.coverage_reference) kv.emplace_back("coverage_reference", fmt17(*r.coverage_reference));
  return kv;
}

void metric_report_save_kv(const std::string& path, const MetricReport& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const auto& [k, v] : metric_report_kv(r)) out << k << " = " << v << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

void metric_report_save_csv(const std::string& path, const MetricReport& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  std::string header = "mse,mspe_percent,mspe_excluded_rows";
  std::string row;
  row += r.mse ? fmt17(*r.mse) : "";
  row += ',';
  row += r.mspe ? fmt17(*r.mspe) : "";
  row += ',';
  row += r.mspe_excluded_rows ? std::to_string(*r.mspe_excluded_rows) : "";
  for (std::size_t i = 0; i < r.interval_stds.size(); ++i) {
    header += ",interval_std_" + std::to_string(i);
    row += ',' + fmt17(r.interval_stds[i]);
  }
  header += ",eta_baseline,eta_percent,coverage_generated,coverage_reference";
  row += ',' + r.eta_baseline;
  row += ',';
  row += r.eta_percent ? fmt17(*r.eta_percent) : "";
  row += ',';
  row += r.coverage_generated ? fmt17(*r.coverage_generated) : "";
  row += ',';
  row += r.coverage_reference ? fmt17(*r.coverage_reference) : "";
  out << header << '\n' << row << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace rbfgan
