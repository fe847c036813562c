#pragma once

// JSON (de)serialization for the external interfaces: the ensemble input
// schema and the certification report. Complex numbers are [re, im] pairs;
// JSON output is canonical (keys sorted by construction).

#include "qbench/criterion.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace qbench {

/// Parses {"entries":[{"input":{...},"target":{...},"prior":p,"fidelity":F}]}
/// where a state is {"kind":"coherent","alpha":[re,im]},
/// {"kind":"vector","amplitudes":[[re,im],...]} or
/// {"kind":"fock","amplitudes":[[re,im],...]}. Errors name the entry index
/// and the offending field.
Ensemble parse_ensemble(const std::string& json_text);
Ensemble parse_ensemble_file(const std::string& path);

nlohmann::json ensemble_to_json(const Ensemble& ens);
nlohmann::json report_to_json(const CertificationReport& rep);

/// Fixed-order key: value listing of the same fields.
std::string report_to_text(const CertificationReport& rep);

}  // namespace qbench
