#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sdftest/equality_test.hpp"
#include "sdftest/spectral_model.hpp"

namespace sdftest {

enum class Scenario { A, B, B_prime };

/// Accepts "A", "B", "B'" and "Bprime".
Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario scenario);

struct ScenarioShape {
  int n1 = 0;
  int n2 = 0;
  int bins = 0;
};

/// A = (1200, 350), B = (1200, 1000) with T = 143; B' = (1024, 1024) with T = 256.
ScenarioShape scenario_shape(Scenario scenario);

/// delta = 0, 0.1, ..., 1.
std::vector<double> default_delta_grid();

struct ExperimentConfig {
  int setting = 1;
  SettingSource source = SettingSource::main;
  Scenario scenario = Scenario::B;
  /// Replace the scenario lengths (reduced smoke runs).
  std::optional<std::pair<int, int>> lengths;
  std::vector<double> delta_grid = default_delta_grid();
  int reps = 200;
  /// Penalty order; unset uses the setting's order.
  std::optional<int> q;
  /// Base test configuration. Its seed is the experiment seed; bins default
  /// to the scenario's T when unset.
  TestConfig test;
  /// Workers over replicates (<= 0: hardware concurrency). Never changes results.
  int threads = 0;

  void validate() const;
  ScenarioShape shape() const;
  /// Test configuration actually passed to run_test for replicate `rep`.
  TestConfig test_config_for(int rep) const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& config);

struct RateEstimate {
  double rate = 0.0;
  int reps = 0;
  double mc_se = 0.0;  // sqrt(rate (1 - rate) / reps)
};

RateEstimate make_rate(int rejections, int reps);

/// Rejection frequency with both series drawn from the setting's f1.
RateEstimate run_type1(const ExperimentConfig& config);

struct PowerRow {
  double delta = 0.0;
  RateEstimate estimate;
};
using PowerCurve = std::vector<PowerRow>;

/// One run_test per (delta, rep) with x1 ~ f1 and x2 ~ f2 at that delta.
/// Data streams depend on (seed, rep) only, so the delta = 0 row equals
/// run_type1 for the same seed.
PowerCurve run_power_curve(const ExperimentConfig& config);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocResult {
  std::vector<RocPoint> points;
  double auc = 0.0;
  std::vector<double> null_statistics;
  std::vector<double> alternative_statistics;
};

/// Staircase obtained by lowering a threshold over the pooled statistics;
/// starts at (0, 0) and ends at (1, 1). Tied values move both rates at once.
std::vector<RocPoint> roc_curve(std::span<const double> null_statistics,
                                std::span<const double> alternative_statistics);

/// Trapezoid rule over a staircase.
double trapezoid_auc(std::span<const RocPoint> points);

/// `n_pairs` statistics under f1 vs f1 and under f1 vs f2 (delta = 1 unless
/// the config's delta grid has a single entry). No Monte Carlo calibration.
RocResult run_roc(const ExperimentConfig& config, int n_pairs);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

void write_type1_csv(std::ostream& out, const ExperimentConfig& config,
                     const RateEstimate& estimate);
void write_power_csv(std::ostream& out, const PowerCurve& curve);
void write_roc_csv(std::ostream& out, const RocResult& roc);

}  // namespace sdftest
