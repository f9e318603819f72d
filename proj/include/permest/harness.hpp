#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "permest/estimators.hpp"
#include "permest/multilinear.hpp"

namespace permest {

// Deterministic non-negative test matrices. Families: "identity",
// "all_ones", "bernoulli(p)", "uniform01", "diagonal_ramp".
Matrix generate_matrix(const std::string& family, int n, std::uint64_t seed);
bool is_generator_family(const std::string& source);

struct ExperimentConfig {
  std::string matrix_source;  // generator family or CSV path
  int n = 0;                  // size; may be 0 (inferred) for file sources
  std::string estimator;      // gg-* | sdet | cdet
  int d = 1;
  std::int64_t samples = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t matrix_seed = 0;  // defaults to master_seed when absent
  std::string output;             // directory; empty = do not write files
  std::vector<double> quantiles;
  int workers = 1;
  bool independent_denominator = false;
  bool bootstrap = false;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  std::string to_json_text() const;
};

// Throws std::invalid_argument with an actionable message.
void validate(const ExperimentConfig& config);

// Family or file, validated non-negative and square.
Matrix resolve_matrix(const ExperimentConfig& config);

struct SampleRecord {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  double numerator = 0.0;
  double denominator = 1.0;
  double alpha = 0.0;
};

struct QuantilePoint {
  double q = 0.0;
  double value = 0.0;
};

struct LogRatioStats {
  double mean = 0.0;      // of (1/n) ln(alpha / per A), over alpha > 0
  double variance = 0.0;
  std::int64_t samples_used = 0;
};

struct EstimateReport {
  ExperimentConfig config;
  int n = 0;
  std::optional<double> exact_permanent;  // absent beyond the oracle guard
  double numerator_sum = 0.0;
  double denominator_sum = 0.0;
  double pooled_estimate = 0.0;
  double pooled_se = 0.0;
  bool denominator_near_zero = false;  // pooled denominator within 4 SE of 0
  std::optional<double> bootstrap_se;
  double alpha_mean = 0.0;
  double alpha_variance = 0.0;
  std::int64_t zero_alpha_count = 0;
  std::vector<QuantilePoint> alpha_quantiles;
  std::optional<LogRatioStats> log_ratio;
  std::vector<SampleRecord> samples;
  std::map<std::string, double> timings_ms;  // kept out of report.json

  // Deterministic content for report.json (no samples, no timings).
  std::string to_json_text() const;
};

// Runs `samples` draws of the configured estimator with per-sample seed
// substreams, then reduces sequentially by sample index. Byte-identical
// output for a fixed config regardless of worker count. Writes report
// files when config.output is set.
EstimateReport run_experiment(const ExperimentConfig& config);

// Emits report.json, samples.csv (header sample_index,seed,numerator,
// denominator,alpha; %.17g floats) and timings.json into `dir`.
void write_report(const EstimateReport& report, const std::string& dir);

struct SweepConfig {
  std::vector<int> d_values;
  std::vector<int> n_values;
  std::string matrix_source = "all_ones";
  std::int64_t samples = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t matrix_seed = 0;
  std::string output;  // directory for summary.json (+ per-cell reports)
  int workers = 1;

  static SweepConfig from_json_text(const std::string& text);
  static SweepConfig from_json_file(const std::string& path);
};

struct SweepCell {
  int d = 0;
  int n = 0;
  bool skipped = false;
  std::string note;
  std::int64_t samples = 0;
  double exact_permanent = 0.0;
  double median_root_ratio = 0.0;  // median of (alpha/per)^(1/n)
  double q25_root_ratio = 0.0;
  double q75_root_ratio = 0.0;
};

struct SweepSummary {
  SweepConfig config;
  std::vector<SweepCell> cells;

  std::string to_json_text() const;
  std::string to_table_text() const;
};

// Exploratory concentration sweep over (d, n) cells; infeasible cells are
// skipped with a notice, never an error. No pass/fail semantics.
SweepSummary sweep(const SweepConfig& config);

}  // namespace permest
