#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsavg/block_estimation.hpp"
#include "gsavg/classifiers.hpp"
#include "gsavg/dataset.hpp"
#include "gsavg/gamma.hpp"

namespace gsavg {

enum class BlockingMode { automatic, oracle, singleton, file };

std::string_view blocking_mode_name(BlockingMode m);
BlockingMode parse_blocking_mode(std::string_view text);

/// One classifier column of the report. gamma is meaningful for gsavg only.
struct ClassifierSpec {
  Variant variant = Variant::gsavg;
  GammaKind gamma = GammaKind::exp_saturate;

  /// "avg", "savg", "gsavg-exp", ...
  std::string label() const;
  friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

/// Third-party classifier plugged into the harness. It sees the same
/// train/test data as the built-in variants. Called from one thread at a time.
class ExternalClassifier {
 public:
  virtual ~ExternalClassifier() = default;
  virtual std::string name() const = 0;
  /// Predicted labels (1 or 2) for each row of `test`.
  virtual std::vector<int> fit_predict(const Dataset& train, const Matrix& test) = 0;
};

struct ExperimentConfig {
  // 1, 2 or 3 for simulated data; 0 means `csv_path` is the source.
  int example = 1;
  std::vector<std::size_t> dims{100};
  std::size_t n_train_per_class = 50;
  std::size_t n_test_per_class = 250;

  std::filesystem::path csv_path;
  LabelColumn label_column;
  double train_fraction = 0.5;
  bool standardize = false;

  std::size_t reps = 1;
  std::vector<ClassifierSpec> classifiers{{Variant::avg}, {Variant::savg}, {Variant::gsavg}};
  BlockingMode blocking = BlockingMode::automatic;
  std::filesystem::path blocks_file;
  CorrelationMethod method = CorrelationMethod::pearson;
  std::vector<double> grid = default_percentile_grid();
  std::uint64_t seed = 0;

  std::filesystem::path out;
  std::string format = "json";

  /// Run repetitions concurrently (when built with OpenMP).
  bool parallel_reps = true;

  bool simulated() const { return example != 0; }
  /// Throws std::invalid_argument on any inconsistency.
  void validate() const;
};

/// Parses the plain-text `key = value` config format. Lists are comma
/// separated; '#' starts a comment.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct CellResult {
  std::string classifier;
  std::size_t dim = 0;
  std::vector<double> rates;
  double mean = 0.0;
  double se = 0.0;
  /// Chosen cut per rep (gsavg with automatic blocking only).
  std::vector<double> p_hat;
  double wall_time_s = 0.0;

  /// p_hat histogram keyed by the p value printed with 2 decimals.
  std::map<std::string, std::size_t> p_hat_counts() const;
};

struct SeedRecord {
  std::size_t dim = 0;
  std::size_t rep = 0;
  std::uint64_t train_seed = 0;
  std::uint64_t test_seed = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  std::vector<SeedRecord> seeds;

  const CellResult* find(std::string_view classifier, std::size_t dim) const;
};

/// Seed of the data stream for (rep, role) under base_seed. Roles: 1 train
/// (or split for csv sources), 2 test. The dimension is not mixed in, so a
/// sweep over D reuses the same seeds rep by rep.
std::uint64_t rep_seed(std::uint64_t base_seed, std::size_t rep, int role);

/// Parses a classifier column label ("avg", "savg", "gsavg-exp", ...).
ClassifierSpec parse_classifier_label(std::string_view label);

/// mean and SE = sample sd / sqrt(k); SE is 0 for a single value.
std::pair<double, double> mean_and_se(const std::vector<double>& rates);

ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                std::span<ExternalClassifier* const> external = {});

enum class ReportFormat { json, csv, table };
ReportFormat parse_report_format(std::string_view text);

std::string emit_report(const ExperimentReport& report, ReportFormat format,
                        bool include_timing = true);
/// Writes through a temporary file and renames it into place.
void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::filesystem::path& path, bool include_timing = true);
ExperimentReport report_from_json(std::string_view json_text);

/// Writes `contents` to `path` atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace gsavg
