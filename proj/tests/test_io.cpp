#include <doctest.h>

#include <nlohmann/json.hpp>

#include "qbench/io.hpp"

using namespace qbench;
using doctest::Approx;

namespace {

const char* kGood = R"({
  "entries": [
    {"input": {"kind": "coherent", "alpha": [1.0, 0.5]},
     "target": {"kind": "coherent", "alpha": [0.5, 0.25]},
     "prior": 0.5,
     "fidelity": 0.9},
    {"input": {"kind": "vector", "amplitudes": [[1.0, 0.0], [0.0, 0.0]]},
     "target": {"kind": "vector", "amplitudes": [[0.0, 0.0], [1.0, 0.0]]},
     "prior": 0.5}
  ]
})";

}  // namespace

TEST_CASE("parse a valid ensemble") {
  Ensemble ens = parse_ensemble(kGood);
  REQUIRE(ens.entries.size() == 2);
  const auto& c = std::get<CoherentSpec>(ens.entries[0].input);
  CHECK(c.alpha == Complex(1.0, 0.5));
  CHECK(ens.entries[0].prior == 0.5);
  CHECK(ens.entries[0].fidelity == 0.9);
  CHECK_FALSE(ens.entries[1].fidelity.has_value());
  const auto& v = std::get<FiniteVector>(ens.entries[1].target);
  CHECK(v.amplitudes == std::vector<Complex>{0.0, 1.0});
}

TEST_CASE("parse errors name the entry and field") {
  CHECK_THROWS_WITH_AS(parse_ensemble("{"), doctest::Contains("malformed"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_ensemble("[]"), doctest::Contains("entries"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_ensemble(R"({"entries":[{"input":{"kind":"coherent","alpha":[0,0]},
                        "target":{"kind":"coherent","alpha":[0,0]}}]})"),
      doctest::Contains("entries[0]: missing \"prior\""),
      std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_ensemble(R"({"entries":[{"input":{"kind":"weird"},
                        "target":{"kind":"coherent","alpha":[0,0]},
                        "prior":1.0}]})"),
      doctest::Contains("entries[0].input"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_ensemble(R"({"entries":[{"input":{"kind":"coherent","alpha":[0]},
                        "target":{"kind":"coherent","alpha":[0,0]},
                        "prior":1.0}]})"),
      doctest::Contains("[re, im]"), std::invalid_argument);
  // schema violations that pass parsing still fail ensemble validation
  CHECK_THROWS_WITH_AS(
      parse_ensemble(R"({"entries":[{"input":{"kind":"coherent","alpha":[0,0]},
                        "target":{"kind":"coherent","alpha":[0,0]},
                        "prior":0.25}]})"),
      doctest::Contains("sum"), std::invalid_argument);
}

TEST_CASE("ensemble JSON round trip") {
  Ensemble ens = parse_ensemble(kGood);
  const std::string text = ensemble_to_json(ens).dump(2);
  Ensemble again = parse_ensemble(text);
  REQUIRE(again.entries.size() == ens.entries.size());
  CHECK(std::get<CoherentSpec>(again.entries[0].input).alpha ==
        std::get<CoherentSpec>(ens.entries[0].input).alpha);
  CHECK(again.entries[0].fidelity == ens.entries[0].fidelity);
  CHECK(ensemble_to_json(again).dump() == ensemble_to_json(ens).dump());
}

TEST_CASE("report serialization is canonical and complete") {
  CertificationReport rep;
  rep.classical_limit = 2.0 / 3.0;
  rep.average_fidelity = 0.75;
  rep.margin = 0.75 - 2.0 / 3.0;
  rep.verdict = Verdict::QuantumDomain;
  rep.d_effective = 2;
  rep.diagnostics.gram_singular_values = {1.5, 0.5};
  rep.diagnostics.eigenvalue_residual = 1e-15;

  nlohmann::json j = report_to_json(rep);
  // nlohmann objects iterate in sorted key order; serialization is canonical
  const std::string dumped = j.dump();
  CHECK(j.dump() == dumped);  // byte-stable
  CHECK(j.at("verdict") == "QuantumDomain");
  CHECK(j.at("classical_limit").get<double>() == Approx(2.0 / 3.0));
  CHECK(j.at("diagnostics").contains("quadrature_spec"));
  CHECK(j.at("diagnostics").at("quadrature_spec").is_null());
  CHECK(j.at("margin").get<double>() == Approx(1.0 / 12.0));

  // round-trips through text exactly
  CHECK(nlohmann::json::parse(dumped).dump() == dumped);

  // sorted key order at the top level
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(std::is_sorted(keys.begin(), keys.end()));

  const std::string text = report_to_text(rep);
  CHECK(text.find("classical_limit: ") == 0);
  CHECK(text.find("verdict: QuantumDomain") != std::string::npos);
  CHECK(text.find("margin: ") != std::string::npos);

  // absent optionals render as null / n-a
  CertificationReport empty;
  empty.verdict = Verdict::NotEvaluated;
  nlohmann::json je = report_to_json(empty);
  CHECK(je.at("average_fidelity").is_null());
  CHECK(report_to_text(empty).find("average_fidelity: n/a") !=
        std::string::npos);
}

TEST_CASE("fock-kind states parse") {
  Ensemble ens = parse_ensemble(R"({
    "entries": [
      {"input": {"kind": "fock", "amplitudes": [[0.0,0.0],[1.0,0.0]]},
       "target": {"kind": "fock", "amplitudes": [[1.0,0.0]]},
       "prior": 1.0}
    ]})");
  CHECK(std::holds_alternative<FockAmplitudes>(ens.entries[0].input));
}
