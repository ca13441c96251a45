#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qbatch/qasm.hpp"
#include "qbatch/sim.hpp"

namespace qbatch::sim {

struct MpsResult {
    MeasurementCounts counts;
    double truncation_loss = 0.0;  // sum of discarded squared singular values
    int max_bond_reached = 1;
};

// Left-to-right matrix-product-state evolution: single-qubit gates applied
// locally, adjacent two-qubit gates via contraction and SVD truncation to
// max_bond, non-adjacent pairs routed with swap chains. Shots are drawn by
// sequential conditional sampling from the right-canonicalized state, so the
// evolved state is built once and every shot only walks boundary vectors.
// Exact when max_bond >= 2^(n/2).
MpsResult run_mps(const qasm::CircuitIR& c, std::int64_t shots, std::uint64_t seed,
                  int max_bond);

// Full distribution enumerated from the evolved MPS; capped at 20 qubits.
// Test and diagnostics aid.
std::map<std::string, double> mps_probabilities(const qasm::CircuitIR& c, int max_bond,
                                                double prune = 1e-12);

}  // namespace qbatch::sim
