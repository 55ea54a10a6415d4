#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "betaenc/bitstream_io.hpp"
#include "betaenc/encoders.hpp"
#include "betaenc/experiments.hpp"

using namespace betaenc;

TEST_CASE("config parsing") {
  const std::string text = R"({
  "kind": "PolyFamily",
  "trials": 3,
  "bit_lengths": [8, 32],
  "gamma_range": [0.64375, 0.64375],
  "alpha_range": [2.0, 2.0],
  "nu": 0.3,
  "policy": {"kind": "toggle"},
  "seed": 18446744073709551615,
  "output_path": "out.csv"
})";
  const ExperimentConfig cfg = parse_experiment_config(text);
  CHECK(cfg.kind == ExperimentKind::PolyFamily);
  CHECK(cfg.trials == 3);
  CHECK(cfg.bit_lengths == std::vector<std::size_t>{8, 32});
  CHECK(cfg.gamma_range.low == 0.64375);
  CHECK(cfg.policy.kind == FlakyPolicy::Kind::Toggle);
  CHECK(cfg.seed == 18446744073709551615ULL);
  CHECK(cfg.output_path == "out.csv");
}

TEST_CASE("malformed configs are reported with their line") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_experiment_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("{\n  \"trials\": 3,\n  \"nu\": ,\n}") == 3);
  CHECK(line_of("{\n  \"trials\": 3,\n  \"bogus\": 1\n}") == 3);
  CHECK(line_of("{\n  \"kind\": \"DecayRecovery\",\n  \"trials\": 0\n}") == 3);
  CHECK(line_of("{\n\n  \"gamma_range\": [0.65, 0.62]\n}") == 3);
  CHECK(line_of("{\n  \"policy\": \"sometimes\"\n}") == 2);
  CHECK(line_of("{\n  \"trials\": -4\n}") == 2);
  CHECK(line_of("[1, 2]") == 1);
  CHECK(line_of("{\"kind\": \"DecayRecovery\"}") == 0);
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(7, 3, 32) == derive_seed(7, 3, 32));
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 100; ++t) {
    for (std::uint64_t n : {8, 16, 24, 32, 40}) seen.insert(derive_seed(7, t, n));
  }
  CHECK(seen.size() == 500);
  CHECK(derive_seed(7, 1, 2) != derive_seed(7, 2, 1));
}

TEST_CASE("table writers") {
  Table t;
  t.columns = {"a", "b", "c", "d"};
  t.rows.push_back({0.1, std::int64_t{3}, std::string("x,y"), true});
  CHECK(to_csv(t) == "a,b,c,d\n0.10000000000000001,3,\"x,y\",true\n");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  const std::string j = to_json(t);
  CHECK(j.find("\"c\": \"x,y\"") != std::string::npos);
}

TEST_CASE("bitstream files") {
  BitstreamFile f;
  f.metadata_json = R"({"scheme":"gre"})";
  f.streams.push_back(gre_encode(0.3, 12, {}).bits);
  f.streams.push_back(gre_encode(-0.3, 12, {}).bits);
  std::stringstream ss;
  write_bitstream_file(ss, f);
  const BitstreamFile g = read_bitstream_file(ss);
  CHECK(g.metadata_json == f.metadata_json);
  REQUIRE(g.streams.size() == 2);
  CHECK(bits_to_string(g.streams[0]) == bits_to_string(f.streams[0]));
  CHECK_THROWS_AS(bits_from_string("+-x"), ParameterError);
}

TEST_CASE("decay recovery") {
  ExperimentConfig cfg;
  cfg.trials = 1;
  cfg.bit_lengths = {16};
  cfg.seed = 99;
  SUBCASE("deterministic") {
    CHECK(to_csv(run_decay_recovery(cfg).table()) == to_csv(run_decay_recovery(cfg).table()));
    CHECK(to_csv(run_decay_recovery(cfg).trial_table()) ==
          to_csv(run_decay_recovery(cfg).trial_table()));
  }
  SUBCASE("bound at N = 32 for gamma in [0.62, 0.63]") {
    cfg.trials = 40;
    cfg.bit_lengths = {32};
    cfg.gamma_range = {0.62, 0.63};
    const auto r = run_decay_recovery(cfg);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].failures == 0);
    CHECK(r.rows[0].bound_violations == 0);
    CHECK(r.rows[0].worst_gamma_error <= std::pow(0.63, 32) / (0.07 * 0.37));
    for (const auto& t : r.trials) CHECK(t.guarantee == Guarantee::Proven);
  }
  SUBCASE("monotone in N on the extended range") {
    cfg.trials = 50;
    cfg.bit_lengths = {8, 16, 32};
    cfg.gamma_range = {0.618, 0.7};
    const auto r = run_decay_recovery(cfg);
    CHECK(r.rows[1].worst_gamma_error < r.rows[0].worst_gamma_error);
    CHECK(r.rows[2].worst_gamma_error < r.rows[1].worst_gamma_error);
    CHECK(r.rows[2].worst_x_error_fresh < r.rows[0].worst_x_error_fresh);
  }
}

TEST_CASE("polynomial family") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::PolyFamily;
  cfg.trials = 3;
  cfg.bit_lengths = {0, 32};
  cfg.gamma_range = {0.64375, 0.64375};
  cfg.alpha_range = {2.0, 2.0};
  const auto r = run_poly_family(cfg);
  CHECK(r.failures == 0);
  CHECK(r.points.size() == 3 * 2 * 500);
  for (const auto& p : r.points) {
    if (p.n == 0) CHECK(std::abs(p.value) == 1.0);
  }
  for (std::size_t i = 0; i < r.curve_ids.size(); ++i) {
    if (r.curve_ids[i].second == 32) {
      REQUIRE(r.first_roots[i].has_value());
      CHECK(std::abs(*r.first_roots[i] - 0.64375) < 2e-3);
    }
  }
}

TEST_CASE("boundedness sweep") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::BoundednessSweep;
  cfg.leak_grid_n = 1;
  cfg.alpha_points = 1;
  cfg.steps = 2000;
  SUBCASE("ideal point") {
    cfg.alpha_range = {2.0, 2.0};
    cfg.nu = 0.0;
    // A one-point leak grid sits at (0.9, 0.9); the ideal encoder is (1, 1).
    const auto r = run_boundedness_sweep(cfg);
    CHECK(r.failures() == 0);
  }
  SUBCASE("certified range") {
    cfg.leak_grid_n = 3;
    cfg.alpha_points = 3;
    cfg.alpha_range = {1.5574, 1.9954};
    CHECK(run_boundedness_sweep(cfg).failures() == 0);
  }
  SUBCASE("amplifier 3 fails only without leakage") {
    // Leakage widens the admissible amplifier range well past 3.
    cfg.leak_grid_n = 2;
    cfg.alpha_range = {3.0, 3.0};
    const auto r = run_boundedness_sweep(cfg);
    REQUIRE(r.cells.size() == 4);
    for (const auto& c : r.cells) {
      const bool ideal = c.lambda1 == 1.0 && c.lambda2 == 1.0;
      CHECK(c.passed() == !ideal);
    }
  }
}

TEST_CASE("zero structure experiment") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ZeroStructure;
  cfg.trials = 3;
  cfg.bit_lengths = {60};
  const auto r = run_zero_structure(cfg);
  for (const auto& rec : r.records) {
    CHECK(rec.failure.empty());
    CHECK(rec.period3);
    CHECK(rec.factored);
    CHECK(rec.min_r_margin >= 0.0);
  }
  cfg.bit_lengths = {31};
  CHECK_THROWS_AS(run_zero_structure(cfg), ParameterError);
}
