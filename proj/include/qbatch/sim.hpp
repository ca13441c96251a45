#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qbatch/qasm.hpp"
#include "qbatch/rng.hpp"

namespace qbatch::sim {

// Shot histogram for one executed circuit. Bitstring keys have qubit 0 as the
// leftmost character.
struct MeasurementCounts {
    std::map<std::string, std::int64_t> counts;
    std::int64_t total_shots = 0;

    void validate() const;  // keys uniform length, counts sum to total_shots
    bool operator==(const MeasurementCounts&) const = default;

    std::string to_json() const;
    static MeasurementCounts from_json(const std::string& text);
};

std::string index_to_bitstring(int num_qubits, std::uint64_t index);

// 0.5 * sum |p - q| over the union of keys.
double total_variation_distance(const std::map<std::string, double>& p,
                                const std::map<std::string, double>& q);

// Full 2^n amplitude vector with in-place gate kernels. Qubit 0 occupies the
// most significant bit of the amplitude index.
class Statevector {
public:
    explicit Statevector(int num_qubits);  // |0...0>

    static Statevector evolve(const qasm::CircuitIR& c);

    void apply(const qasm::GateOp& op);

    int num_qubits() const { return num_qubits_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

    // One sample via cumulative-distribution binary search. The cumulative
    // table is built lazily on first use and reused across shots.
    std::uint64_t sample_index(Rng& rng) const;

    // One sample by a fresh linear scan, no table: the per-shot cost of a
    // simulator without multi-shot optimization.
    std::uint64_t sample_index_linear(Rng& rng) const;

    std::map<std::string, double> probabilities(double prune = 1e-12) const;

private:
    void build_cumulative() const;

    int num_qubits_;
    std::vector<std::complex<double>> amp_;
    mutable std::vector<double> cumulative_;
};

enum class SvMode { optimized, naive };

// Statevector execution. optimized evolves once and samples `shots` times
// from the retained state; naive re-evolves the full state per shot and
// samples once each time. Both draw from the identical distribution.
// Throws CapacityError above 26 qubits, ContractError if unmeasured.
MeasurementCounts run_statevector(const qasm::CircuitIR& c, std::int64_t shots,
                                  std::uint64_t seed, SvMode mode = SvMode::optimized);

// |amplitude|^2 per basis state, entries below 1e-12 pruned; the kept mass
// sums to 1 within 1e-9.
std::map<std::string, double> exact_probabilities(const qasm::CircuitIR& c);

}  // namespace qbatch::sim
