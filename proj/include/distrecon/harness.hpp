#pragma once

// Monte Carlo driver: reconstruction trials, percolation threshold scans and
// their CSV / JSON / SVG reports.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "distrecon/reconstructor.hpp"
#include "distrecon/reveal_sim.hpp"

namespace distrecon {

struct ScanConfig {
  int d = 1;
  std::vector<int> ns;
  std::vector<double> ps;  // increasing
  int trials = 200;
};

struct HarnessConfig {
  std::uint64_t seed = 0;
  std::optional<InstanceSpec> instance;
  nlohmann::json reveal;  // resolved per instance size
  int trials = 1;
  PipelineOptions pipeline;
  Tolerance tol;
  std::optional<ScanConfig> scan;
  int threads = 1;
};

/// Parses a schema-1 config. Errors are Config and name the field.
HarnessConfig config_from_json(const nlohmann::json& j);
HarnessConfig config_from_text(const std::string& text);

struct TrialReport {
  std::uint64_t seed = 0;
  int n = 0;
  int d = 0;
  double p = 0.0;
  double pairs_known_after_closure = 0.0;
  double reconstructible_set_fraction = 0.0;
  int levels = 0;
  bool stalled = false;
  /// Hidden pairs that were inferred or appear in the output set.
  int hidden_pairs_inferred = 0;
  /// Largest deviation of an inferred value from its ground truth.
  double max_inferred_error = 0.0;
  /// Largest deviation of an output squared distance from ground truth.
  double max_output_error = 0.0;
  /// Not part of any serialized output.
  double wall_seconds = 0.0;
};

/// Trial i uses seed derive_seed(config.seed, i); results are in trial order
/// whatever the thread count.
std::vector<TrialReport> run_trials(const HarnessConfig& config);
TrialReport run_trial(const HarnessConfig& config, std::uint64_t trial_seed);

struct ScanPoint {
  int n = 0;
  double p = 0.0;
  int trials = 0;
  int successes = 0;

  double success_fraction() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
  double standard_error() const;
};

struct ScanResult {
  int d = 1;
  std::vector<ScanPoint> grid;            // n-major, p ascending
  std::vector<int> ns;
  std::vector<std::optional<double>> p_c; // per n; nullopt when unbracketed
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  bool bracketed = false;                 // every n crosses 1/2 inside the grid
};

/// K_{d+3} closure scan. For each (n, trial) the grid is searched by
/// bisection, which is exact because samples are nested in p.
ScanResult scan_threshold(const ScanConfig& scan, std::uint64_t seed, int threads = 1);

/// Linear interpolation in log p at 1/2 over an ascending curve.
std::optional<double> crossing(const std::vector<double>& ps, const std::vector<double>& fractions);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

std::string scan_csv(const ScanResult& r);
nlohmann::json scan_json(const ScanResult& r);
std::string scan_svg(const ScanResult& r);

std::string trials_csv(const std::vector<TrialReport>& reports);
nlohmann::json trials_json(const std::vector<TrialReport>& reports);

}  // namespace distrecon
