#pragma once

// JSON serialization for the file-facing schemas (states, correlation
// tensors, operator families, Bell scenarios) and the ASCII rendering of
// tree-built families. JSON parsing stays out of the public headers.

#include <string>

#include "macrobell/anticommuting.hpp"
#include "macrobell/bell.hpp"
#include "macrobell/correlations.hpp"
#include "macrobell/states.hpp"

namespace macrobell {

/// {"qubits": N, "kind": "pure"|"mixed", "data": [[re, im], ...]} with
/// amplitudes (pure) or the row-major matrix (mixed); exact values, no
/// rounding on write.
std::string state_to_json(const AnyState& state);
AnyState state_from_json(const std::string& text);

void save_state(const std::string& path, const AnyState& state);
AnyState load_state(const std::string& path);

/// {"regions": K, "values": [lexicographic entries], "frames": [{x, y}]}.
std::string tensor_to_json(const CorrelationTensor& tensor);

/// {"region_sizes": [...], "sequences": [[{region, qubit, pauli}, ...]]},
/// regions and qubits 1-based.
std::string family_to_json(const OperatorFamily& family);
OperatorFamily family_from_json(const std::string& text);

/// {"regions": K, "local_dims": [...], "settings": [...], "outcomes": [...],
///  "povms": [region][setting][outcome] = row-major [[re, im], ...]}.
std::string scenario_to_json(const BellScenario& scenario);
BellScenario scenario_from_json(const std::string& text);

/// Branch diagram of an operator family across its regions, one leaf per
/// sequence.
std::string render_family_tree(const OperatorFamily& family);

}  // namespace macrobell
