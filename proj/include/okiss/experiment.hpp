#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "okiss/classifier.hpp"
#include "okiss/drift.hpp"
#include "okiss/generators.hpp"

namespace okiss {

enum class Baseline { Identity, None };

struct StreamSpec {
  // Exactly one of: a generator, or a CSV file plus schema file.
  std::optional<GeneratorConfig> generator;
  std::string csv_path;
  std::string schema_path;
  std::optional<std::string> class_column;
};

struct ExperimentConfig {
  StreamSpec stream;
  // Instance budget. Unset means "all rows" for CSV streams; required for generators.
  std::optional<std::size_t> instances;
  ClassifierConfig classifier;
  Baseline baseline = Baseline::Identity;
  double alpha = 0.999;
  std::string out_dir = ".";
  bool plot = false;
  std::size_t stride = 100;
  // Run classifier B on a worker thread, synchronized per instance.
  bool parallel = false;

  void validate() const;
};

/// One instance of the comparison. B-side fields are meaningless when the
/// report is unpaired.
struct SeriesRow {
  std::uint64_t index = 0;  // 1-based
  double loss_a = 0.0;
  double loss_b = 0.0;
  double acc_a = 0.0;
  double acc_b = 0.0;
  double err_a = 0.0;
  double err_b = 0.0;
  std::optional<double> q;
  double mcnemar = 0.0;
  bool reject = false;
  DriftLevel drift_a = DriftLevel::InControl;
  DriftLevel drift_b = DriftLevel::InControl;
};

struct ExperimentReport {
  bool paired = false;
  std::vector<SeriesRow> series;  // one row per processed instance
  std::vector<std::uint64_t> drift_events_a;  // indices of out-of-control resets
  std::vector<std::uint64_t> drift_events_b;
  std::size_t metric_updates_a = 0;
  std::size_t encoded_dim = 0;
  double wall_seconds = 0.0;
};

std::unique_ptr<InstanceSource> open_stream(const StreamSpec& spec);

/// Drives the stream once; both classifiers test-then-train on each instance
/// in lockstep and all comparison statistics are updated per instance.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Rows at every stride-th index plus the final row; ceil(N / stride) rows.
std::vector<SeriesRow> sampled_rows(const ExperimentReport& report, std::size_t stride);

/// Fixed 6 decimals, ties to even.
std::string format_fixed6(double value);

void write_series_csv(std::ostream& out, const ExperimentReport& report, std::size_t stride);
void write_summary(std::ostream& out, const ExperimentReport& report,
                   const ExperimentConfig& config);

/// SVG documents; qstat_svg is only meaningful for paired reports.
std::string accuracy_svg(const std::vector<SeriesRow>& rows, bool paired);
std::string qstat_svg(const std::vector<SeriesRow>& rows);

/// Writes series.csv, summary.txt and, with config.plot, accuracy.svg and
/// qstat.svg (paired only) to config.out_dir. Returns the written paths. On
/// failure every file written so far is removed and the error rethrown.
std::vector<std::string> write_outputs(const ExperimentReport& report,
                                       const ExperimentConfig& config);

/// Renders the plot files alone into `dir`.
std::vector<std::string> emit_plots(const ExperimentReport& report, const std::string& dir,
                                    std::size_t stride);

}  // namespace okiss
