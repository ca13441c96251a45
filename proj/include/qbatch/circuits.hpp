#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qbatch/graph.hpp"
#include "qbatch/qasm.hpp"

namespace qbatch::circuits {

// Variational parameters for p alternating cost/mixer layers.
struct QaoaParams {
    std::vector<double> gammas;
    std::vector<double> betas;

    int p() const { return static_cast<int>(gammas.size()); }
    void validate() const;
    bool operator==(const QaoaParams&) const = default;
};

// One term of the problem Hamiltonian. zz carries the edge weight as its
// coefficient and represents w * (I - Z_i Z_j) / 2.
struct HamiltonianTerm {
    enum class Kind { zz, x };
    Kind kind = Kind::zz;
    int i = 0;
    int j = -1;
    double coefficient = 1.0;

    std::string tag() const;
};

std::vector<HamiltonianTerm> cost_terms(const Graph& g);

// QASM text with symbolic angle placeholders, e.g. `rz(-1*$g0)` and
// `rx(2*$b0)`. Built once per problem; grounding substitutes numeric values.
struct CircuitScaffold {
    std::string qasm_template;
    int p = 0;
    int num_qubits = 0;
    std::string term_tag;  // set in per-term mode

    std::string to_json() const;
    static CircuitScaffold from_json(const std::string& text);
};

// Trotterizes the MaxCut QAOA ansatz once: H on all qubits, then per layer
// the cost exponentials (cx, rz, cx per edge, sorted edge order) followed by
// rx(2*beta) mixers, with a terminal full measurement.
CircuitScaffold build_scaffold(const Graph& g, int p);

// Pure text substitution of placeholders with evaluated angles; the result is
// expression-free QASM. Throws ParameterError on layer-count mismatch.
std::string ground(const CircuitScaffold& s, const QaoaParams& params);

// Grounds many parameter sets from one scaffold; the template is compiled once
// and reused, order preserved.
std::vector<std::string> batch_ground(const CircuitScaffold& s,
                                      const std::vector<QaoaParams>& sets);

enum class TermMode { per_term, grouped };

// One grounded measurement program per Hamiltonian term (all MaxCut terms are
// Z-diagonal, so the circuit text is shared and only the tag differs), or a
// single program covering all commuting terms in grouped mode.
std::vector<std::pair<std::string, std::string>> per_term_programs(
    const CircuitScaffold& s, const std::vector<HamiltonianTerm>& terms,
    const QaoaParams& params, TermMode mode = TermMode::per_term);

// Direct construction with numeric angles: the fresh-Trotterization path.
// Reference for ground() equivalence and the baseline in generation benchmarks.
qasm::CircuitIR build_circuit(const Graph& g, const QaoaParams& params);

}  // namespace qbatch::circuits
