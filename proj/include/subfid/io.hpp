// io.hpp — JSON exchange formats for matrices, states, channels, and suite
// reports, plus the CSV writers.

#pragma once

#include <json.hpp>

#include <string>

#include "subfid/harness.hpp"

namespace subfid::io {

using nlohmann::json;

// Matrix format: {"rows": n, "cols": m, "entries": [[re, im], ...]} row-major.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// State format: {"dims": [dA, dB, dK], "matrix": <matrix>}. Loading validates
// the density-operator invariants and reports the violated one by name.
json state_to_json(const DensityOperator& rho);
DensityOperator state_from_json(const json& j);

// Channel format: {"dims": [...], "kind": "structured"|"raw"|"product"|"computation",
// "blocks": {...}}. Loading re-validates the block constraints.
json channel_to_json(const KrausChannel& channel);                 // kind "raw"
json channel_to_json(const StructuredChannelSpec& spec);           // kind "structured"
json channel_to_json(const ComputationChannelSpec& spec);          // kind "computation"
json product_channel_to_json(const SpaceDecomposition& space, const std::vector<Matrix>& a_kraus,
                             const std::vector<Matrix>& b_kraus,
                             const std::vector<Matrix>& complement_kraus);

struct LoadedChannel {
    std::string kind;
    KrausChannel channel;
};
LoadedChannel channel_from_json(const json& j);

// Suite outputs. Deterministic for fixed seed and config: wall time is
// deliberately left out.
json summary_to_json(const SuiteSummary& summary);
json result_to_json(const SuiteResult& result);
json result_to_json(const SwapResult& result);
json result_to_json(const SweepResult& result);

std::string reports_csv(const std::vector<TrialReport>& reports);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// {"FA": ..., "fA_term": ..., "K_term": ..., "angle": ...} with 12
// significant digits.
std::string fa_record(const SubsystemFidelity& parts, double angle_value);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace subfid::io
