#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "betaenc/decoder.hpp"
#include "betaenc/encoders.hpp"
#include "betaenc/errors.hpp"
#include "betaenc/experiments.hpp"
#include "betaenc/invariant_geometry.hpp"
#include "betaenc/recovery.hpp"
#include "betaenc/zero_structure.hpp"

namespace py = pybind11;
using namespace betaenc;

namespace {

// Bits cross the boundary as lists of +-1 ints.
std::vector<int> to_ints(const std::vector<Bit>& bits) {
  std::vector<int> out;
  out.reserve(bits.size());
  for (Bit b : bits) out.push_back(b.value());
  return out;
}

std::vector<Bit> to_bits(const std::vector<int>& values) {
  std::vector<Bit> out;
  out.reserve(values.size());
  for (int v : values) {
    if (v != 1 && v != -1) throw ParameterError("bits must be +1 or -1");
    out.push_back(Bit::from_positive(v > 0));
  }
  return out;
}

QuantizerSpec make_spec(double nu, double alpha, const std::string& policy, std::uint64_t seed) {
  return {nu, alpha, {parse_policy_kind(policy), seed}};
}

py::dict encode_dict(const EncodeResult& r) {
  py::dict d;
  d["bits"] = to_ints(r.bits);
  d["states"] = r.states;
  d["effective_gamma"] = r.effective_gamma;
  return d;
}

py::dict recovery_dict(const RecoveryResult& r) {
  py::dict d;
  d["gamma_estimate"] = r.gamma_estimate;
  d["degree"] = r.poly_degree_used;
  d["residual"] = r.residual;
  d["tolerance"] = r.tolerance;
  d["shift_k"] = r.shift_k;
  d["proven"] = r.guarantee == Guarantee::Proven;
  return d;
}

TransversalityContext make_ctx(std::optional<double> gamma_low, double gamma_high) {
  return TransversalityContext::for_range(gamma_low, gamma_high);
}

}  // namespace

PYBIND11_MODULE(_betaenc, m) {
  m.doc() = "Beta-expansion encoders, decoders and base recovery";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.attr("PHI") = kPhi;
  m.attr("INV_PHI") = kInvPhi;
  m.attr("TRANSVERSALITY_LIMIT") = kTransversalityLimit;

  m.def("beta_encode",
        [](double x, double beta, std::size_t n, double nu, const std::string& policy, std::uint64_t seed) {
          return encode_dict(beta_encode(x, beta, n, make_spec(nu, 2.0, policy, seed)));
        },
        py::arg("x"), py::arg("beta"), py::arg("n_bits"), py::arg("nu") = 0.0,
        py::arg("policy") = "always-minus", py::arg("seed") = 0);
  m.def("beta_encode_leaky",
        [](double x, double beta, double lambda, std::size_t n, double nu, const std::string& policy,
           std::uint64_t seed) {
          return encode_dict(beta_encode_leaky(x, beta, lambda, n, make_spec(nu, 2.0, policy, seed)));
        },
        py::arg("x"), py::arg("beta"), py::arg("lam"), py::arg("n_bits"), py::arg("nu") = 0.0,
        py::arg("policy") = "always-minus", py::arg("seed") = 0);
  m.def("gre_encode",
        [](double x, std::size_t n, double lambda1, double lambda2, double nu, double alpha,
           const std::string& policy, std::uint64_t seed) {
          return encode_dict(gre_encode_leaky(x, {lambda1, lambda2}, n, make_spec(nu, alpha, policy, seed)));
        },
        py::arg("x"), py::arg("n_bits"), py::arg("lambda1") = 1.0, py::arg("lambda2") = 1.0,
        py::arg("nu") = 0.0, py::arg("alpha") = 2.0, py::arg("policy") = "always-minus",
        py::arg("seed") = 0);
  m.def("effective_gamma", py::overload_cast<double, double>(&effective_gamma), py::arg("lambda1"),
        py::arg("lambda2"));
  m.def("leak_for_gamma", [](double g) {
    const LeakParams l = leak_for_gamma(g);
    return py::make_tuple(l.lambda1, l.lambda2);
  });

  m.def("partial_sum", [](const std::vector<int>& bits, double gamma, std::size_t n) {
    return partial_sum(to_bits(bits), gamma, n);
  }, py::arg("bits"), py::arg("gamma"), py::arg("n"));
  m.def("error_bound", &error_bound, py::arg("gamma"), py::arg("n"));
  m.def("decode",
        [](const std::vector<int>& bits, double gamma, std::size_t n, double uncertainty) {
          const auto r = decode_with_estimate(to_bits(bits), gamma, n, uncertainty);
          py::dict d;
          d["estimate"] = r.estimate;
          d["bits_used"] = r.bits_used;
          d["base_used"] = r.base_used;
          d["bound"] = r.bound;
          return d;
        },
        py::arg("bits"), py::arg("gamma"), py::arg("n"), py::arg("gamma_uncertainty") = 0.0);

  m.def("recover_from_pair",
        [](const std::vector<int>& b, const std::vector<int>& c, std::optional<double> gamma_low,
           double gamma_high, std::optional<std::size_t> max_degree) {
          RootSearchOptions opts;
          opts.window_high = std::max(kTransversalityLimit + 0.05, gamma_high + 0.05);
          return recovery_dict(
              recover_gamma_from_pair(to_bits(b), to_bits(c), make_ctx(gamma_low, gamma_high), opts, max_degree));
        },
        py::arg("b"), py::arg("c"), py::arg("gamma_low") = py::none(),
        py::arg("gamma_high") = kTransversalityLimit, py::arg("max_degree") = py::none());
  m.def("recover_from_zero",
        [](const std::vector<int>& bits) {
          return recovery_dict(recover_gamma_from_zero(to_bits(bits), TransversalityContext{}));
        },
        py::arg("bits"));
  m.def("check_period3", [](const std::vector<int>& bits) { return check_period3(to_bits(bits)); });
  m.def("sign_change_roots",
        [](const std::vector<int>& coeffs, double rho) {
          return sign_change_roots(TernaryPolynomial::from_ints(coeffs), rho);
        },
        py::arg("coeffs"), py::arg("rho"));

  m.def("mu_max", [](double l1, double l2) { return mu_max({l1, l2}); }, py::arg("lambda1") = 1.0,
        py::arg("lambda2") = 1.0);
  m.def("alpha_bounds",
        [](double l1, double l2, double delta) {
          const AlphaInterval a = alpha_bounds({l1, l2}, delta);
          return py::make_tuple(a.lower, a.upper);
        },
        py::arg("lambda1"), py::arg("lambda2"), py::arg("delta"));
  m.def("worst_case_alpha_bounds", [](double delta) {
    const AlphaInterval a = worst_case_alpha_bounds(delta);
    return py::make_tuple(a.lower, a.upper);
  }, py::arg("delta"));

  m.def("run_experiment",
        [](const std::string& config_json, const std::string& format) {
          const Table t = run_experiment(parse_experiment_config(config_json));
          if (format == "csv") return to_csv(t);
          if (format == "json") return to_json(t);
          throw ParameterError("format must be csv or json");
        },
        py::arg("config_json"), py::arg("format") = "csv");
}
