#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "betaenc/errors.hpp"
#include "betaenc/quantizers.hpp"
#include "betaenc/recovery.hpp"

namespace betaenc {

enum class ExperimentKind { DecayRecovery, PolyFamily, BoundednessSweep, ZeroStructure, TransversalityScan };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct Range {
  double low = 0.0;
  double high = 0.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::DecayRecovery;
  std::size_t trials = 100;
  std::vector<std::size_t> bit_lengths{8, 16, 24, 32, 40};
  Range gamma_range{0.618, 0.65};
  Range alpha_range{1.7, 2.0};
  double nu = 0.3;
  FlakyPolicy policy = FlakyPolicy::seeded_random(0);
  std::uint64_t seed = 0;
  std::string output_path;

  // Extra bits encoded beyond N + 1 so the difference shift does not eat
  // into the polynomial degree.
  std::size_t extra_bits = 64;
  std::size_t poly_points = 500;  // PolyFamily samples on [0, 1]
  double mu = 0.0;                // BoundednessSweep perturbation size
  std::size_t leak_grid_n = 11;
  std::size_t alpha_points = 9;
  std::size_t start_points = 5;
  std::size_t steps = 10000;
  std::size_t max_degree = 12;  // TransversalityScan
  double rho = kTransversalityLimit;

  // Throws ParameterError on empty or unordered ranges, zero trials, etc.
  void validate() const;
};

// Malformed configuration, anchored at a 1-based line of the source text.
class ConfigError : public ParameterError {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// JSON object with the ExperimentConfig field names; unknown keys rejected.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

// splitmix64 mix of (seed, trial, n); order independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t n);

// Column-typed result table shared by the CSV and JSON writers.
using Cell = std::variant<double, std::int64_t, std::string, bool>;
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Doubles use 17 significant digits.
std::string format_double(double v);
std::string to_csv(const Table& t);
std::string to_json(const Table& t);

// ---------------------------------------------------------------------------
// Experiments

struct DecayTrial {
  std::size_t n = 0;
  std::size_t trial = 0;
  bool failed = false;
  std::string failure;
  std::size_t retries = 0;
  double x = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double gamma_estimate = 0.0;
  double gamma_error = 0.0;
  double x_error_calibration = 0.0;
  double x_error_fresh = 0.0;
  std::size_t shift_k = 0;
  Guarantee guarantee = Guarantee::EmpiricalOnly;
};

struct DecayRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double worst_gamma_error = 0.0;
  double worst_x_error_calibration = 0.0;
  double worst_x_error_fresh = 0.0;
  // Trials with gamma <= 0.63 whose error exceeds gamma^N / (0.07 (1 - gamma)).
  std::size_t bound_violations = 0;
  std::size_t failures = 0;
};

struct DecayRecoveryResult {
  std::vector<DecayRow> rows;       // one per bit length, in config order
  std::vector<DecayTrial> trials;   // ordered by (N, trial)
  Table table() const;
  Table trial_table() const;
};

// Base recovery from (x, -x) pairs of the leaky GRE followed by decoding.
DecayRecoveryResult run_decay_recovery(const ExperimentConfig& cfg);

struct PolyCurvePoint {
  std::size_t pair_id = 0;
  std::size_t n = 0;
  double t = 0.0;
  double value = 0.0;
};

struct PolyFamilyResult {
  std::vector<PolyCurvePoint> points;
  // First positive sign-change root of each (pair, N) curve on (0, 1), if any.
  std::vector<std::pair<std::size_t, std::size_t>> curve_ids;
  std::vector<std::optional<double>> first_roots;
  std::size_t failures = 0;
  Table table() const;
};

// Difference polynomials of seeded (x, -x) pairs sampled on [0, 1].
PolyFamilyResult run_poly_family(const ExperimentConfig& cfg);

struct SweepCell {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha = 0.0;
  bool geometry_ok = false;
  bool strip_ok = false;
  bool orbit_ok = false;
  double max_state = 0.0;
  bool passed() const noexcept { return geometry_ok && strip_ok && orbit_ok; }
};

struct BoundednessResult {
  std::vector<SweepCell> cells;
  std::size_t failures() const;
  Table table() const;
};

// Invariance checks over the leak grid x alpha grid at flakiness cfg.nu.
BoundednessResult run_boundedness_sweep(const ExperimentConfig& cfg);

struct ZeroStructureRecord {
  std::size_t trial = 0;
  double alpha = 0.0;
  bool period3 = false;
  bool factored = false;
  double derivative_at_root = 0.0;
  double min_r_margin = 0.0;  // min over the grid of |R(t)| - bound(t)
  double gamma_estimate = 0.0;
  std::string failure;
};

struct ZeroStructureResult {
  std::vector<ZeroStructureRecord> records;
  Table table() const;
};

// Zero expansions of the unleaky GRE (bit length = first bit_lengths entry)
// checked for the period-3 law, factorization and the magnitude bounds.
ZeroStructureResult run_zero_structure(const ExperimentConfig& cfg);

// Exhaustive transversality scan: one summary row, first violation if any.
Table run_transversality_scan(const ExperimentConfig& cfg, TransversalityReport* report = nullptr);

// Runs cfg.kind and returns its primary table.
Table run_experiment(const ExperimentConfig& cfg);

}  // namespace betaenc
