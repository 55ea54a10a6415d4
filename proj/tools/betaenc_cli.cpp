// Command-line front end: encode, decode, recover, verify-range, experiment.
//
// Exit codes: 0 success, 2 malformed configuration or arguments,
// 3 numerical failure (divergence, no root, no signal, structure violation).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "betaenc/bitstream_io.hpp"
#include "betaenc/decoder.hpp"
#include "betaenc/encoders.hpp"
#include "betaenc/errors.hpp"
#include "betaenc/experiments.hpp"
#include "betaenc/invariant_geometry.hpp"
#include "betaenc/recovery.hpp"

namespace {

using namespace betaenc;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string config;
  std::string out;
  std::string format = "csv";
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write output file '" + path + "'");
  f << text;
}

void emit_table(const Table& t, const Globals& g, const std::string& path) {
  emit(g.format == "json" ? to_json(t) : to_csv(t), path);
}

FlakyPolicy make_policy(const std::string& name, std::uint64_t seed) {
  FlakyPolicy p;
  p.kind = parse_policy_kind(name);
  if (p.kind == FlakyPolicy::Kind::SeededRandom) p.seed = seed;
  return p;
}

// --- encode ---------------------------------------------------------------

struct EncodeArgs {
  std::string scheme = "gre";
  std::vector<double> inputs;
  bool pair = false;
  std::size_t bits = 32;
  double beta = 2.0;
  double lambda = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  std::optional<double> gamma;
  double nu = 0.0;
  double alpha = 2.0;
  std::string policy = "random";
};

int run_encode(const EncodeArgs& a, const Globals& g) {
  const QuantizerSpec q{a.nu, a.alpha, make_policy(a.policy, g.seed)};
  q.validate();
  LeakParams leak{a.lambda1, a.lambda2};
  if (a.gamma) leak = leak_for_gamma(*a.gamma);

  nlohmann::ordered_json meta;
  meta["scheme"] = a.scheme;
  meta["bits"] = a.bits;
  meta["nu"] = a.nu;
  meta["policy"] = a.policy;
  meta["seed"] = g.seed;
  if (a.scheme == "gre") {
    meta["alpha"] = a.alpha;
  } else {
    meta["lambda"] = a.lambda;
  }

  std::vector<double> xs;
  for (double x : a.inputs) {
    xs.push_back(x);
    if (a.pair) xs.push_back(-x);
  }
  meta["inputs"] = xs;

  BitstreamFile file;
  file.metadata_json = meta.dump();
  for (double x : xs) {
    EncodeResult r;
    if (a.scheme == "gre") {
      r = gre_encode_leaky(x, leak, a.bits, q);
    } else if (a.scheme == "beta") {
      r = a.lambda == 1.0 ? beta_encode(x, a.beta, a.bits, q)
                          : beta_encode_leaky(x, a.beta, a.lambda, a.bits, q);
    } else {
      throw ParameterError("unknown scheme '" + a.scheme + "' (expected gre or beta)");
    }
    file.streams.push_back(std::move(r.bits));
  }
  std::ostringstream os;
  write_bitstream_file(os, file);
  emit(os.str(), g.out);
  return 0;
}

// --- decode ---------------------------------------------------------------

struct DecodeArgs {
  std::string input;
  double gamma = kInvPhi;
  std::optional<std::size_t> bits;
  double uncertainty = 0.0;
};

int run_decode(const DecodeArgs& a, const Globals& g) {
  const BitstreamFile file = load_bitstream_file(a.input);
  Table t;
  t.columns = {"stream", "bits_used", "gamma", "estimate", "bound"};
  for (std::size_t i = 0; i < file.streams.size(); ++i) {
    const auto& s = file.streams[i];
    const std::size_t n = a.bits ? std::min(*a.bits, s.size()) : s.size();
    const ReconstructionReport r = decode_with_estimate(s, a.gamma, n, a.uncertainty);
    t.rows.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(r.bits_used),
                      r.base_used, r.estimate, r.bound});
  }
  emit_table(t, g, g.out);
  return 0;
}

// --- recover --------------------------------------------------------------

struct RecoverArgs {
  std::vector<std::string> pair;
  std::string zero;
  std::optional<double> gamma_low;
  double gamma_high = kTransversalityLimit;
  std::optional<std::size_t> max_degree;
  std::optional<double> window_high;
};

const std::vector<Bit>& nth_stream(const BitstreamFile& f, std::size_t i, const std::string& path) {
  if (i >= f.streams.size()) {
    throw ParameterError("bitstream file '" + path + "' has fewer than " + std::to_string(i + 1) +
                         " streams");
  }
  return f.streams[i];
}

int run_recover(const RecoverArgs& a, const Globals& g) {
  const TransversalityContext ctx = TransversalityContext::for_range(a.gamma_low, a.gamma_high);
  RootSearchOptions opts;
  if (a.window_high) opts.window_high = *a.window_high;

  RecoveryResult r;
  if (!a.zero.empty()) {
    const BitstreamFile f = load_bitstream_file(a.zero);
    std::vector<Bit> bits = nth_stream(f, 0, a.zero);
    if (a.max_degree && *a.max_degree + 1 < bits.size()) bits.erase(bits.begin() + static_cast<std::ptrdiff_t>(*a.max_degree + 1), bits.end());
    r = recover_gamma_from_zero(bits, ctx, opts);
  } else if (a.pair.size() == 1 || a.pair.size() == 2) {
    const BitstreamFile fb = load_bitstream_file(a.pair[0]);
    if (a.pair.size() == 2) {
      const BitstreamFile fc = load_bitstream_file(a.pair[1]);
      r = recover_gamma_from_pair(nth_stream(fb, 0, a.pair[0]), nth_stream(fc, 0, a.pair[1]), ctx,
                                  opts, a.max_degree);
    } else {
      r = recover_gamma_from_pair(nth_stream(fb, 0, a.pair[0]), nth_stream(fb, 1, a.pair[0]), ctx,
                                  opts, a.max_degree);
    }
  } else {
    throw ParameterError("recover needs --pair B C, --pair FILE (two streams) or --zero FILE");
  }

  Table t;
  t.columns = {"gamma_estimate", "residual", "tolerance", "degree", "shift_k", "guarantee"};
  t.rows.push_back({r.gamma_estimate, r.residual, r.tolerance,
                    static_cast<std::int64_t>(r.poly_degree_used),
                    static_cast<std::int64_t>(r.shift_k),
                    std::string(r.guarantee == Guarantee::Proven ? "proven" : "empirical")});
  emit_table(t, g, g.out);
  return 0;
}

// --- verify-range ---------------------------------------------------------

struct VerifyArgs {
  double delta = 0.0;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<double> alpha;
  double mu = 0.0;
};

int run_verify(const VerifyArgs& a, const Globals& g) {
  const AlphaInterval uni = uniform_alpha_range(a.delta);
  Table t;
  t.columns = {"delta", "alpha_low", "alpha_high"};
  std::vector<Cell> row{a.delta, uni.lower, uni.upper};
  if (a.lambda1 || a.lambda2) {
    const LeakParams leak{a.lambda1.value_or(1.0), a.lambda2.value_or(1.0)};
    leak.validate();
    const AlphaInterval own = alpha_bounds(leak, a.delta);
    const double alpha = a.alpha.value_or(0.5 * (uni.lower + uni.upper));
    InvarianceOptions opts;
    opts.seed = g.seed;
    const InvarianceReport rep = check_invariance(leak, a.mu, {a.delta, alpha, {}}, opts);
    t.columns.insert(t.columns.end(), {"lambda1", "lambda2", "leak_alpha_low", "leak_alpha_high",
                                       "mu_max", "alpha", "mu", "invariant"});
    row.insert(row.end(), {leak.lambda1, leak.lambda2, own.lower, own.upper, mu_max(leak), alpha,
                           a.mu, rep.passed()});
    for (const auto& f : rep.failures) std::cerr << f << '\n';
  }
  t.rows.push_back(std::move(row));
  emit_table(t, g, g.out);
  return 0;
}

// --- experiment -----------------------------------------------------------

struct ExperimentArgs {
  std::string trials_out;
};

int run_experiment_cmd(const ExperimentArgs& a, const Globals& g) {
  if (g.config.empty()) throw ConfigError(0, "experiment requires --config <path>");
  ExperimentConfig cfg = load_experiment_config(g.config);
  if (g.seed_given) cfg.seed = g.seed;
  const std::string out = g.out.empty() ? cfg.output_path : g.out;
  if (cfg.kind == ExperimentKind::DecayRecovery) {
    const DecayRecoveryResult r = run_decay_recovery(cfg);
    emit_table(r.table(), g, out);
    if (!a.trials_out.empty()) emit_table(r.trial_table(), g, a.trials_out);
  } else {
    emit_table(run_experiment(cfg), g, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beta-encoder and golden ratio encoder toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed (u64)");
  app.add_option("--config", g.config, "Experiment configuration (JSON)");
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  EncodeArgs enc;
  auto* c_enc = app.add_subcommand("encode", "Encode inputs into bitstreams");
  c_enc->add_option("--scheme", enc.scheme, "gre or beta")->check(CLI::IsMember({"gre", "beta"}));
  c_enc->add_option("--x", enc.inputs, "Input value(s) in [-1, 1]")->required();
  c_enc->add_flag("--pair", enc.pair, "Also encode -x for each input");
  c_enc->add_option("--bits", enc.bits, "Number of bits");
  c_enc->add_option("--beta", enc.beta, "Beta-encoder base in (1, 2]");
  c_enc->add_option("--lambda", enc.lambda, "Beta-encoder leak");
  c_enc->add_option("--lambda1", enc.lambda1, "GRE leak of the first delay");
  c_enc->add_option("--lambda2", enc.lambda2, "GRE leak of the second delay");
  c_enc->add_option("--gamma", enc.gamma, "GRE effective base (sets equal leaks)");
  c_enc->add_option("--nu", enc.nu, "Quantizer flakiness");
  c_enc->add_option("--alpha", enc.alpha, "GRE quantizer amplifier");
  c_enc->add_option("--policy", enc.policy, "always-minus, always-plus, toggle or random");

  DecodeArgs dec;
  auto* c_dec = app.add_subcommand("decode", "Reconstruct inputs from bitstreams");
  c_dec->add_option("--in", dec.input, "Bitstream file")->required();
  c_dec->add_option("--gamma", dec.gamma, "Base used for reconstruction");
  c_dec->add_option("--bits", dec.bits, "Number of bits to use");
  c_dec->add_option("--gamma-uncertainty", dec.uncertainty, "Bound on |gamma - estimate|");

  RecoverArgs rec;
  auto* c_rec = app.add_subcommand("recover", "Recover the base from bitstreams");
  c_rec->add_option("--pair", rec.pair, "Files holding the expansions of x and -x")->expected(1, 2);
  c_rec->add_option("--zero", rec.zero, "File holding an expansion of 0");
  c_rec->add_option("--gamma-low", rec.gamma_low, "Known lower bound on the base");
  c_rec->add_option("--gamma-high", rec.gamma_high, "Known upper bound on the base");
  c_rec->add_option("--max-degree", rec.max_degree, "Truncate the polynomial to this degree");
  c_rec->add_option("--window-high", rec.window_high, "Upper end of the root search window");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify-range", "Certified amplifier range for a tolerance");
  c_ver->add_option("--delta", ver.delta, "Quantizer tolerance in [0, 0.5037]");
  c_ver->add_option("--lambda1", ver.lambda1, "Check a specific leak pair");
  c_ver->add_option("--lambda2", ver.lambda2, "Check a specific leak pair");
  c_ver->add_option("--alpha", ver.alpha, "Amplifier for the invariance check");
  c_ver->add_option("--mu", ver.mu, "Perturbation size for the invariance check");

  ExperimentArgs exp;
  auto* c_exp = app.add_subcommand("experiment", "Run a configured experiment");
  c_exp->add_option("--trials-out", exp.trials_out, "Per-trial table (DecayRecovery)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  g.seed_given = app.count("--seed") > 0;

  try {
    if (*c_enc) return run_encode(enc, g);
    if (*c_dec) return run_decode(dec, g);
    if (*c_rec) return run_recover(rec, g);
    if (*c_ver) return run_verify(ver, g);
    if (*c_exp) return run_experiment_cmd(exp, g);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << (g.config.empty() ? "" : g.config + ": ") << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InvalidState& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
