#include "qbench/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace qbench {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument(where + ": complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

StateSpec parse_state(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument(where + ": state must be an object with \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "coherent") {
    if (!j.contains("alpha"))
      throw std::invalid_argument(where + ": coherent state needs \"alpha\"");
    return CoherentSpec{parse_complex(j.at("alpha"), where + ".alpha")};
  }
  if (kind == "vector" || kind == "fock") {
    if (!j.contains("amplitudes") || !j.at("amplitudes").is_array())
      throw std::invalid_argument(where + ": " + kind +
                                  " state needs \"amplitudes\" array");
    std::vector<Complex> amps;
    for (size_t i = 0; i < j.at("amplitudes").size(); ++i)
      amps.push_back(parse_complex(j.at("amplitudes")[i],
                                   where + ".amplitudes[" + std::to_string(i) + "]"));
    if (kind == "vector") return FiniteVector{std::move(amps)};
    return FockAmplitudes{std::move(amps)};
  }
  throw std::invalid_argument(where + ": unknown state kind \"" + kind + "\"");
}

json state_to_json(const StateSpec& spec) {
  json j;
  if (const auto* c = std::get_if<CoherentSpec>(&spec)) {
    j["kind"] = "coherent";
    j["alpha"] = complex_to_json(c->alpha);
    return j;
  }
  const bool is_fock = std::holds_alternative<FockAmplitudes>(spec);
  j["kind"] = is_fock ? "fock" : "vector";
  json arr = json::array();
  const auto& amps = is_fock ? std::get<FockAmplitudes>(spec).amplitudes
                             : std::get<FiniteVector>(spec).amplitudes;
  for (const Complex& a : amps) arr.push_back(complex_to_json(a));
  j["amplitudes"] = std::move(arr);
  return j;
}

}  // namespace

Ensemble parse_ensemble(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array())
    throw std::invalid_argument("ensemble JSON must be {\"entries\": [...]}");
  Ensemble ens;
  const json& entries = j.at("entries");
  for (size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "entries[" + std::to_string(i) + "]";
    const json& e = entries[i];
    if (!e.is_object()) throw std::invalid_argument(where + ": must be an object");
    for (const char* field : {"input", "target", "prior"})
      if (!e.contains(field))
        throw std::invalid_argument(where + ": missing \"" + field + "\"");
    EnsembleEntry entry;
    entry.input = parse_state(e.at("input"), where + ".input");
    entry.target = parse_state(e.at("target"), where + ".target");
    if (!e.at("prior").is_number())
      throw std::invalid_argument(where + ".prior: must be a number");
    entry.prior = e.at("prior").get<double>();
    if (e.contains("fidelity") && !e.at("fidelity").is_null()) {
      if (!e.at("fidelity").is_number())
        throw std::invalid_argument(where + ".fidelity: must be a number");
      entry.fidelity = e.at("fidelity").get<double>();
    }
    ens.entries.push_back(std::move(entry));
  }
  validate(ens);
  return ens;
}

Ensemble parse_ensemble_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open ensemble file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ensemble(buf.str());
}

json ensemble_to_json(const Ensemble& ens) {
  json entries = json::array();
  for (const EnsembleEntry& e : ens.entries) {
    json je;
    je["input"] = state_to_json(e.input);
    je["target"] = state_to_json(e.target);
    je["prior"] = e.prior;
    if (e.fidelity) je["fidelity"] = *e.fidelity;
    entries.push_back(std::move(je));
  }
  return json{{"entries", std::move(entries)}};
}

json report_to_json(const CertificationReport& rep) {
  json diag;
  diag["gram_singular_values"] = rep.diagnostics.gram_singular_values;
  diag["eigenvalue_residual"] = rep.diagnostics.eigenvalue_residual;
  diag["truncation_deficits"] = rep.diagnostics.truncation_deficits;
  if (rep.diagnostics.quadrature_spec) {
    diag["quadrature_spec"] = {
        {"radial_nodes", rep.diagnostics.quadrature_spec->radial_nodes},
        {"angular_nodes", rep.diagnostics.quadrature_spec->angular_nodes},
        {"lambda_weight", rep.diagnostics.quadrature_spec->lambda_weight}};
  } else {
    diag["quadrature_spec"] = nullptr;
  }

  json j;
  j["classical_limit"] = rep.classical_limit;
  j["average_fidelity"] =
      rep.average_fidelity ? json(*rep.average_fidelity) : json(nullptr);
  j["margin"] = rep.margin ? json(*rep.margin) : json(nullptr);
  j["verdict"] = to_string(rep.verdict);
  j["d_effective"] = rep.d_effective;
  j["vacuous"] = rep.vacuous;
  j["missing_fidelity_indices"] = rep.missing_fidelity_indices;
  j["diagnostics"] = std::move(diag);
  return j;
}

std::string report_to_text(const CertificationReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "classical_limit: " << rep.classical_limit << "\n";
  out << "average_fidelity: ";
  if (rep.average_fidelity) out << *rep.average_fidelity;
  else out << "n/a";
  out << "\nmargin: ";
  if (rep.margin) out << *rep.margin;
  else out << "n/a";
  out << "\nverdict: " << to_string(rep.verdict) << "\n";
  out << "d_effective: " << rep.d_effective << "\n";
  out << "vacuous: " << (rep.vacuous ? "true" : "false") << "\n";
  out << "eigenvalue_residual: " << rep.diagnostics.eigenvalue_residual << "\n";
  out << "truncation_deficits: " << rep.diagnostics.truncation_deficits << "\n";
  return out.str();
}

}  // namespace qbench
