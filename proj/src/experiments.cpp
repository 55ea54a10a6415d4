#include "betaenc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"

#include "betaenc/constants.hpp"
#include "betaenc/decoder.hpp"
#include "betaenc/encoders.hpp"
#include "betaenc/invariant_geometry.hpp"
#include "betaenc/zero_structure.hpp"

namespace betaenc {

namespace {

constexpr std::size_t kMaxRetries = 10;
constexpr double kBoundGammaCutoff = 0.63;

struct KindName {
  ExperimentKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::DecayRecovery, "DecayRecovery"},
    {ExperimentKind::PolyFamily, "PolyFamily"},
    {ExperimentKind::BoundednessSweep, "BoundednessSweep"},
    {ExperimentKind::ZeroStructure, "ZeroStructure"},
    {ExperimentKind::TransversalityScan, "TransversalityScan"},
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform_in(std::mt19937_64& rng, Range r) {
  if (r.low == r.high) return r.low;
  return std::uniform_real_distribution<double>(r.low, r.high)(rng);
}

FlakyPolicy trial_policy(const FlakyPolicy& base, std::mt19937_64& rng) {
  FlakyPolicy p = base;
  if (p.kind == FlakyPolicy::Kind::SeededRandom) p.seed = splitmix64(base.seed ^ rng());
  return p;
}

double linspace(std::size_t i, std::size_t n, double lo, double hi) {
  return n <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

std::string_view guarantee_name(Guarantee g) {
  return g == Guarantee::Proven ? "proven" : "empirical";
}

// Field name and message of the first problem found, if any.
std::optional<std::pair<std::string, std::string>> config_problem(const ExperimentConfig& c) {
  auto range_ok = [](Range r) { return std::isfinite(r.low) && std::isfinite(r.high) && r.low <= r.high; };
  if (c.trials < 1) return std::pair{"trials", "must be at least 1"};
  if (c.bit_lengths.empty()) return std::pair{"bit_lengths", "must not be empty"};
  if (!range_ok(c.gamma_range)) return std::pair{"gamma_range", "must be an ordered pair [low, high]"};
  if (!range_ok(c.alpha_range)) return std::pair{"alpha_range", "must be an ordered pair [low, high]"};
  if (!(c.alpha_range.low > 0.0)) return std::pair{"alpha_range", "must be positive"};
  if (!(c.nu >= 0.0 && std::isfinite(c.nu))) return std::pair{"nu", "must be a non-negative number"};
  if (!(c.mu >= 0.0 && std::isfinite(c.mu))) return std::pair{"mu", "must be a non-negative number"};
  if (c.leak_grid_n < 1) return std::pair{"leak_grid_n", "must be at least 1"};
  if (c.alpha_points < 1) return std::pair{"alpha_points", "must be at least 1"};
  if (c.start_points < 1) return std::pair{"start_points", "must be at least 1"};
  if (c.poly_points < 2) return std::pair{"poly_points", "must be at least 2"};
  if (c.max_degree > 14) return std::pair{"max_degree", "must be at most 14"};
  if (!(c.rho > 0.0 && c.rho < 1.0)) return std::pair{"rho", "must lie in (0, 1)"};
  if (c.kind == ExperimentKind::DecayRecovery || c.kind == ExperimentKind::PolyFamily) {
    if (!(c.gamma_range.low >= kInvPhi - 1e-3 && c.gamma_range.high < 1.0)) {
      return std::pair{"gamma_range", "must lie in [0.618, 1)"};
    }
  }
  if (c.kind == ExperimentKind::ZeroStructure && c.bit_lengths.front() % 3 != 0) {
    return std::pair{"bit_lengths", "zero expansions need a multiple of 3 bits"};
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& k : kKindNames) {
    if (k.name == name) return k.kind;
  }
  throw ParameterError("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (auto p = config_problem(*this)) throw ParameterError(p->first + ": " + p->second);
}

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : ParameterError("line " + std::to_string(line) + ": " + message), line_(line) {}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t n) {
  return splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ n);
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

std::size_t line_of_key(std::string_view text, const std::string& key) {
  const std::size_t pos = text.find("\"" + key + "\"");
  return pos == std::string_view::npos ? 1 : line_of_offset(text, pos);
}

template <class T>
T get_field(const nlohmann::json& j, std::string_view text, const std::string& key,
            const char* expected) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(line_of_key(text, key), "field '" + key + "' must be " + expected);
  }
}

std::size_t get_count(const nlohmann::json& j, std::string_view text, const std::string& key) {
  if (!j.is_number_unsigned()) {
    throw ConfigError(line_of_key(text, key), "field '" + key + "' must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

double get_real(const nlohmann::json& j, std::string_view text, const std::string& key) {
  if (!j.is_number()) throw ConfigError(line_of_key(text, key), "field '" + key + "' must be a number");
  return j.get<double>();
}

Range get_range(const nlohmann::json& j, std::string_view text, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(line_of_key(text, key), "field '" + key + "' must be [low, high]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

FlakyPolicy get_policy(const nlohmann::json& j, std::string_view text) {
  const std::size_t line = line_of_key(text, "policy");
  FlakyPolicy p;
  try {
    if (j.is_string()) {
      p.kind = parse_policy_kind(j.get<std::string>());
    } else if (j.is_object()) {
      for (const auto& [k, v] : j.items()) {
        if (k == "kind") {
          p.kind = parse_policy_kind(get_field<std::string>(v, text, "kind", "a string"));
        } else if (k == "seed") {
          if (!v.is_number_unsigned()) throw ConfigError(line, "policy seed must be an unsigned integer");
          p.seed = v.get<std::uint64_t>();
        } else {
          throw ConfigError(line, "unknown policy field '" + k + "'");
        }
      }
    } else {
      throw ConfigError(line, "field 'policy' must be a string or {\"kind\", \"seed\"}");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ParameterError& e) {
    throw ConfigError(line, e.what());
  }
  return p;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    throw ConfigError(line_of_offset(text, offset), std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError(1, "configuration must be a JSON object");

  ExperimentConfig cfg;
  for (const auto& [key, v] : j.items()) {
    const std::size_t line = line_of_key(text, key);
    if (key == "kind") {
      try {
        cfg.kind = parse_experiment_kind(get_field<std::string>(v, text, key, "a string"));
      } catch (const ConfigError&) {
        throw;
      } catch (const ParameterError& e) {
        throw ConfigError(line, e.what());
      }
    } else if (key == "trials") {
      cfg.trials = get_count(v, text, key);
    } else if (key == "bit_lengths") {
      if (!v.is_array()) throw ConfigError(line, "field 'bit_lengths' must be a list of counts");
      cfg.bit_lengths.clear();
      for (const auto& e : v) cfg.bit_lengths.push_back(get_count(e, text, key));
    } else if (key == "gamma_range") {
      cfg.gamma_range = get_range(v, text, key);
    } else if (key == "alpha_range") {
      cfg.alpha_range = get_range(v, text, key);
    } else if (key == "nu") {
      cfg.nu = get_real(v, text, key);
    } else if (key == "policy") {
      cfg.policy = get_policy(v, text);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(line, "field 'seed' must be an unsigned integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "output_path") {
      cfg.output_path = get_field<std::string>(v, text, key, "a string");
    } else if (key == "extra_bits") {
      cfg.extra_bits = get_count(v, text, key);
    } else if (key == "poly_points") {
      cfg.poly_points = get_count(v, text, key);
    } else if (key == "mu") {
      cfg.mu = get_real(v, text, key);
    } else if (key == "leak_grid_n") {
      cfg.leak_grid_n = get_count(v, text, key);
    } else if (key == "alpha_points") {
      cfg.alpha_points = get_count(v, text, key);
    } else if (key == "start_points") {
      cfg.start_points = get_count(v, text, key);
    } else if (key == "steps") {
      cfg.steps = get_count(v, text, key);
    } else if (key == "max_degree") {
      cfg.max_degree = get_count(v, text, key);
    } else if (key == "rho") {
      cfg.rho = get_real(v, text, key);
    } else {
      throw ConfigError(line, "unknown field '" + key + "'");
    }
  }
  if (auto p = config_problem(cfg)) {
    throw ConfigError(line_of_key(text, p->first), "field '" + p->first + "' " + p->second);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

// ---------------------------------------------------------------------------
// Tables

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
      std::visit([&](const auto& v) { obj[t.columns[i]] = v; }, row[i]);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Decay / recovery

Table DecayRecoveryResult::table() const {
  Table t;
  t.columns = {"N", "trials", "worst_gamma_error", "worst_x_error_calibration",
               "worst_x_error_fresh", "bound_violations", "failures"};
  for (const auto& r : rows) {
    t.rows.push_back({as_int(r.n), as_int(r.trials), r.worst_gamma_error,
                      r.worst_x_error_calibration, r.worst_x_error_fresh,
                      as_int(r.bound_violations), as_int(r.failures)});
  }
  return t;
}

Table DecayRecoveryResult::trial_table() const {
  Table t;
  t.columns = {"N", "trial", "x", "gamma", "alpha", "gamma_estimate", "gamma_error",
               "x_error_calibration", "x_error_fresh", "shift_k", "guarantee", "retries",
               "failure"};
  for (const auto& r : trials) {
    t.rows.push_back({as_int(r.n), as_int(r.trial), r.x, r.gamma, r.alpha, r.gamma_estimate,
                      r.gamma_error, r.x_error_calibration, r.x_error_fresh, as_int(r.shift_k),
                      std::string(guarantee_name(r.guarantee)), as_int(r.retries), r.failure});
  }
  return t;
}

namespace {

RootSearchOptions search_options_for(Range gamma_range) {
  RootSearchOptions o;
  o.window_high = std::max(o.window_high, gamma_range.high + 0.05);
  return o;
}

DecayTrial run_decay_trial(const ExperimentConfig& cfg, std::size_t n, std::size_t trial,
                           const TransversalityContext& ctx, const RootSearchOptions& opts) {
  DecayTrial out;
  out.n = n;
  out.trial = trial;
  const std::size_t total_bits = n + 1 + cfg.extra_bits;
  for (std::size_t attempt = 0; attempt <= kMaxRetries; ++attempt) {
    std::uint64_t seed = derive_seed(cfg.seed, trial, n);
    if (attempt > 0) seed = derive_seed(seed, attempt, 0x5eed);
    std::mt19937_64 rng(seed);
    out.x = uniform_in(rng, {-1.0, 1.0});
    out.gamma = uniform_in(rng, cfg.gamma_range);
    out.alpha = uniform_in(rng, cfg.alpha_range);
    const QuantizerSpec q{cfg.nu, out.alpha, trial_policy(cfg.policy, rng)};
    const double x_fresh = uniform_in(rng, {-1.0, 1.0});
    try {
      const LeakParams leak = leak_for_gamma(out.gamma);
      out.gamma = effective_gamma(leak);
      const EncodeResult b = gre_encode_leaky(out.x, leak, total_bits, q);
      const EncodeResult c = gre_encode_leaky(-out.x, leak, total_bits, q);
      const RecoveryResult r = recover_gamma_from_pair(b.bits, c.bits, ctx, opts, n);
      out.gamma_estimate = r.gamma_estimate;
      out.gamma_error = std::abs(r.gamma_estimate - out.gamma);
      out.shift_k = r.shift_k;
      out.guarantee = r.guarantee;
      out.x_error_calibration =
          std::abs(out.x - decode_with_estimate(b.bits, r.gamma_estimate, n).estimate);
      const EncodeResult f = gre_encode_leaky(x_fresh, leak, n, q);
      out.x_error_fresh =
          std::abs(x_fresh - decode_with_estimate(f.bits, r.gamma_estimate, n).estimate);
      out.retries = attempt;
      return out;
    } catch (const NoSignalError&) {
      continue;
    } catch (const NumericalError& e) {
      out.failed = true;
      out.failure = e.what();
      out.retries = attempt;
      return out;
    }
  }
  out.failed = true;
  out.failure = "no signal after " + std::to_string(kMaxRetries) + " retries";
  out.retries = kMaxRetries;
  return out;
}

}  // namespace

DecayRecoveryResult run_decay_recovery(const ExperimentConfig& cfg) {
  cfg.validate();
  const TransversalityContext ctx =
      TransversalityContext::for_range(cfg.gamma_range.low, cfg.gamma_range.high);
  const RootSearchOptions opts = search_options_for(cfg.gamma_range);
  DecayRecoveryResult out;
  for (std::size_t n : cfg.bit_lengths) {
    DecayRow row;
    row.n = n;
    row.trials = cfg.trials;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      DecayTrial t = run_decay_trial(cfg, n, trial, ctx, opts);
      if (t.failed) {
        ++row.failures;
      } else {
        row.worst_gamma_error = std::max(row.worst_gamma_error, t.gamma_error);
        row.worst_x_error_calibration = std::max(row.worst_x_error_calibration, t.x_error_calibration);
        row.worst_x_error_fresh = std::max(row.worst_x_error_fresh, t.x_error_fresh);
        if (t.gamma <= kBoundGammaCutoff &&
            t.gamma_error > std::pow(t.gamma, static_cast<double>(n)) /
                                (kDeltaAt063 * (1.0 - t.gamma))) {
          ++row.bound_violations;
        }
      }
      out.trials.push_back(std::move(t));
    }
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial family

Table PolyFamilyResult::table() const {
  Table t;
  t.columns = {"pair_id", "N", "t", "value"};
  t.rows.reserve(points.size());
  for (const auto& p : points) t.rows.push_back({as_int(p.pair_id), as_int(p.n), p.t, p.value});
  return t;
}

PolyFamilyResult run_poly_family(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n_max = *std::max_element(cfg.bit_lengths.begin(), cfg.bit_lengths.end());
  const std::size_t total_bits = n_max + 1 + cfg.extra_bits;
  PolyFamilyResult out;
  for (std::size_t pair = 0; pair < cfg.trials; ++pair) {
    std::optional<DifferenceStream> diff;
    for (std::size_t attempt = 0; attempt <= kMaxRetries && !diff; ++attempt) {
      std::uint64_t seed = derive_seed(cfg.seed, pair, n_max);
      if (attempt > 0) seed = derive_seed(seed, attempt, 0x5eed);
      std::mt19937_64 rng(seed);
      const double x = uniform_in(rng, {-1.0, 1.0});
      const double gamma = uniform_in(rng, cfg.gamma_range);
      const double alpha = uniform_in(rng, cfg.alpha_range);
      const QuantizerSpec q{cfg.nu, alpha, trial_policy(cfg.policy, rng)};
      try {
        const LeakParams leak = leak_for_gamma(gamma);
        const EncodeResult b = gre_encode_leaky(x, leak, total_bits, q);
        const EncodeResult c = gre_encode_leaky(-x, leak, total_bits, q);
        diff = difference_stream(b.bits, c.bits);
      } catch (const NoSignalError&) {
      } catch (const NumericalError&) {
        break;
      }
    }
    if (!diff) {
      ++out.failures;
      continue;
    }
    for (std::size_t n : cfg.bit_lengths) {
      const TernaryPolynomial p = diff->poly.truncated(n);
      for (std::size_t i = 0; i < cfg.poly_points; ++i) {
        const double t = linspace(i, cfg.poly_points, 0.0, 1.0);
        out.points.push_back({pair, n, t, poly_eval(p, t).value});
      }
      const std::vector<double> roots = sign_change_roots(p, 0.999, 1e-3);
      out.curve_ids.emplace_back(pair, n);
      out.first_roots.push_back(roots.empty() ? std::nullopt : std::optional<double>(roots.front()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundedness sweep

std::size_t BoundednessResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return !c.passed(); }));
}

Table BoundednessResult::table() const {
  Table t;
  t.columns = {"lambda1", "lambda2", "alpha", "geometry_ok", "strip_ok", "orbit_ok",
               "max_state", "passed"};
  for (const auto& c : cells) {
    t.rows.push_back({c.lambda1, c.lambda2, c.alpha, c.geometry_ok, c.strip_ok, c.orbit_ok,
                      c.max_state, c.passed()});
  }
  return t;
}

BoundednessResult run_boundedness_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  BoundednessResult out;
  for (std::size_t i = 0; i < cfg.leak_grid_n; ++i) {
    for (std::size_t j = 0; j < cfg.leak_grid_n; ++j) {
      const LeakParams leak{linspace(i, cfg.leak_grid_n, 0.9, 1.0),
                            linspace(j, cfg.leak_grid_n, 0.9, 1.0)};
      for (std::size_t a = 0; a < cfg.alpha_points; ++a) {
        const double alpha = linspace(a, cfg.alpha_points, cfg.alpha_range.low, cfg.alpha_range.high);
        const std::uint64_t seed = derive_seed(cfg.seed, i * cfg.leak_grid_n + j, a);
        InvarianceOptions opts;
        opts.orbit_steps = cfg.steps;
        opts.start_points = cfg.start_points;
        opts.seed = seed;
        const QuantizerSpec q{cfg.nu, alpha, cfg.policy};
        const InvarianceReport rep = check_invariance(leak, cfg.mu, q, opts);

        SweepCell cell{leak.lambda1, leak.lambda2, alpha, rep.geometry_ok, rep.strip_ok,
                       rep.orbit_ok, 0.0};
        for (std::size_t k = 0; k < cfg.start_points; ++k) {
          const double x = cfg.start_points == 1 ? 0.0 : linspace(k, cfg.start_points, -1.0, 1.0);
          for (const FlakyPolicy& p : builtin_policies(seed)) {
            cell.max_state = std::max(
                cell.max_state, max_orbit_state(x, leak, {cfg.nu, alpha, p}, cfg.steps));
          }
        }
        out.cells.push_back(cell);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Zero structure

Table ZeroStructureResult::table() const {
  Table t;
  t.columns = {"trial", "alpha", "period3", "factored", "derivative_at_root", "min_r_margin",
               "gamma_estimate", "failure"};
  for (const auto& r : records) {
    t.rows.push_back({as_int(r.trial), r.alpha, r.period3, r.factored, r.derivative_at_root,
                      r.min_r_margin, r.gamma_estimate, r.failure});
  }
  return t;
}

ZeroStructureResult run_zero_structure(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n_bits = cfg.bit_lengths.front();
  const TransversalityContext ctx = TransversalityContext::for_range(std::nullopt, kTransversalityLimit);
  ZeroStructureResult out;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(derive_seed(cfg.seed, trial, n_bits));
    ZeroStructureRecord rec;
    rec.trial = trial;
    rec.alpha = uniform_in(rng, cfg.alpha_range);
    const QuantizerSpec q{cfg.nu, rec.alpha, trial_policy(cfg.policy, rng)};
    try {
      const EncodeResult enc = gre_encode(0.0, n_bits, q);
      rec.period3 = check_period3(enc.bits);
      const TernaryPolynomial p = TernaryPolynomial::from_bits(enc.bits);
      const FactoredZeroPoly r = factor_zero_poly(p);
      rec.factored = true;
      rec.derivative_at_root = derivative_bound_at_root(p);
      rec.min_r_margin = std::numeric_limits<double>::infinity();
      constexpr std::size_t kGrid = 1000;
      for (std::size_t k = 0; k < kGrid; ++k) {
        const double t = kInvPhi * static_cast<double>(k) / static_cast<double>(kGrid);
        const MagnitudeBound mb = rn_magnitude_bound(r, t);
        rec.min_r_margin = std::min(rec.min_r_margin, mb.value - mb.bound);
      }
      rec.gamma_estimate = recover_gamma_from_zero(enc.bits, ctx).gamma_estimate;
    } catch (const NumericalError& e) {
      rec.failure = e.what();
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transversality

Table run_transversality_scan(const ExperimentConfig& cfg, TransversalityReport* report) {
  cfg.validate();
  TransversalityReport rep = transversality_oracle(cfg.max_degree, cfg.rho);
  Table t;
  t.columns = {"max_degree", "rho", "instances", "violations", "first_violation"};
  std::string first;
  if (!rep.violations.empty()) {
    for (std::int8_t c : rep.violations.front().coeffs) {
      first += c > 0 ? '+' : (c < 0 ? '-' : '0');
    }
  }
  t.rows.push_back({as_int(rep.max_degree), rep.rho, static_cast<std::int64_t>(rep.instances),
                    as_int(rep.violations.size()), first});
  if (report) *report = std::move(rep);
  return t;
}

Table run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::DecayRecovery:
      return run_decay_recovery(cfg).table();
    case ExperimentKind::PolyFamily:
      return run_poly_family(cfg).table();
    case ExperimentKind::BoundednessSweep:
      return run_boundedness_sweep(cfg).table();
    case ExperimentKind::ZeroStructure:
      return run_zero_structure(cfg).table();
    case ExperimentKind::TransversalityScan:
      return run_transversality_scan(cfg);
  }
  throw ParameterError("unknown experiment kind");
}

}  // namespace betaenc
