#include "qbatch/sim.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "qbatch/errors.hpp"

namespace qbatch::sim {

using complexd = std::complex<double>;

void MeasurementCounts::validate() const {
    std::int64_t sum = 0;
    std::size_t len = counts.empty() ? 0 : counts.begin()->first.size();
    for (const auto& [bits, count] : counts) {
        if (bits.size() != len) throw IntegrityError("counts: ragged bitstring keys");
        if (count < 0) throw IntegrityError("counts: negative count");
        sum += count;
    }
    if (sum != total_shots) {
        throw IntegrityError("counts: sum " + std::to_string(sum) + " != total " +
                             std::to_string(total_shots));
    }
}

std::string MeasurementCounts::to_json() const {
    nlohmann::json j;
    j["total_shots"] = total_shots;
    j["counts"] = nlohmann::json::object();
    for (const auto& [bits, count] : counts) j["counts"][bits] = count;
    return j.dump();
}

MeasurementCounts MeasurementCounts::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        MeasurementCounts mc;
        mc.total_shots = j.at("total_shots").get<std::int64_t>();
        for (const auto& [bits, count] : j.at("counts").items()) {
            mc.counts[bits] = count.get<std::int64_t>();
        }
        return mc;
    } catch (const nlohmann::json::exception& e) {
        throw IntegrityError(std::string("counts json: ") + e.what());
    }
}

std::string index_to_bitstring(int num_qubits, std::uint64_t index) {
    std::string bits(num_qubits, '0');
    for (int q = 0; q < num_qubits; ++q) {
        if ((index >> (num_qubits - 1 - q)) & 1ULL) bits[q] = '1';
    }
    return bits;
}

double total_variation_distance(const std::map<std::string, double>& p,
                                const std::map<std::string, double>& q) {
    double d = 0.0;
    for (const auto& [k, v] : p) {
        const auto it = q.find(k);
        d += std::abs(v - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto& [k, v] : q) {
        if (p.find(k) == p.end()) d += v;
    }
    return 0.5 * d;
}

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1) throw ParameterError("statevector: needs at least one qubit");
    if (num_qubits > 26) {
        throw CapacityError("statevector: " + std::to_string(num_qubits) +
                            " qubits exceeds the 26-qubit cap");
    }
    amp_.assign(1ULL << num_qubits, complexd{0.0, 0.0});
    amp_[0] = 1.0;
}

Statevector Statevector::evolve(const qasm::CircuitIR& c) {
    c.validate();
    Statevector sv(c.num_qubits);
    for (const auto& op : c.ops) sv.apply(op);
    return sv;
}

void Statevector::apply(const qasm::GateOp& op) {
    const std::uint64_t dim = amp_.size();
    const std::uint64_t m0 = 1ULL << (num_qubits_ - 1 - op.q0);
    switch (op.gate) {
        case qasm::Gate::h: {
            const double inv_sqrt2 = 0.70710678118654752440;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & m0) continue;
                const complexd a = amp_[i];
                const complexd b = amp_[i | m0];
                amp_[i] = (a + b) * inv_sqrt2;
                amp_[i | m0] = (a - b) * inv_sqrt2;
            }
            break;
        }
        case qasm::Gate::x: {
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & m0) continue;
                std::swap(amp_[i], amp_[i | m0]);
            }
            break;
        }
        case qasm::Gate::rx: {
            const double c = std::cos(op.angle / 2.0);
            const double s = std::sin(op.angle / 2.0);
            const complexd mis{0.0, -s};
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & m0) continue;
                const complexd a = amp_[i];
                const complexd b = amp_[i | m0];
                amp_[i] = c * a + mis * b;
                amp_[i | m0] = mis * a + c * b;
            }
            break;
        }
        case qasm::Gate::rz: {
            const complexd e0 = std::polar(1.0, -op.angle / 2.0);
            const complexd e1 = std::polar(1.0, op.angle / 2.0);
            for (std::uint64_t i = 0; i < dim; ++i) {
                amp_[i] *= (i & m0) ? e1 : e0;
            }
            break;
        }
        case qasm::Gate::cx: {
            const std::uint64_t mt = 1ULL << (num_qubits_ - 1 - op.q1);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & m0) && !(i & mt)) std::swap(amp_[i], amp_[i | mt]);
            }
            break;
        }
        case qasm::Gate::cz: {
            const std::uint64_t mt = 1ULL << (num_qubits_ - 1 - op.q1);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & m0) && (i & mt)) amp_[i] = -amp_[i];
            }
            break;
        }
    }
    cumulative_.clear();
}

void Statevector::build_cumulative() const {
    cumulative_.resize(amp_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        acc += std::norm(amp_[i]);
        cumulative_[i] = acc;
    }
}

std::uint64_t Statevector::sample_index(Rng& rng) const {
    if (cumulative_.empty()) build_cumulative();
    const double u = rng.next_double() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) return cumulative_.size() - 1;
    return static_cast<std::uint64_t>(it - cumulative_.begin());
}

std::uint64_t Statevector::sample_index_linear(Rng& rng) const {
    double total = 0.0;
    for (const auto& a : amp_) total += std::norm(a);
    const double u = rng.next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        acc += std::norm(amp_[i]);
        if (u < acc) return i;
    }
    return amp_.size() - 1;
}

std::map<std::string, double> Statevector::probabilities(double prune) const {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        const double p = std::norm(amp_[i]);
        if (p > prune) out[index_to_bitstring(num_qubits_, i)] = p;
    }
    return out;
}

MeasurementCounts run_statevector(const qasm::CircuitIR& c, std::int64_t shots,
                                  std::uint64_t seed, SvMode mode) {
    if (shots < 1) throw ParameterError("run_statevector: shots must be >= 1");
    if (!c.measured) {
        throw ContractError("run_statevector: circuit has no terminal measurement");
    }
    Rng rng(seed);
    std::map<std::uint64_t, std::int64_t> histogram;
    if (mode == SvMode::optimized) {
        const Statevector sv = Statevector::evolve(c);
        for (std::int64_t s = 0; s < shots; ++s) ++histogram[sv.sample_index(rng)];
    } else {
        for (std::int64_t s = 0; s < shots; ++s) {
            const Statevector sv = Statevector::evolve(c);
            ++histogram[sv.sample_index_linear(rng)];
        }
    }
    MeasurementCounts mc;
    mc.total_shots = shots;
    for (const auto& [index, count] : histogram) {
        mc.counts[index_to_bitstring(c.num_qubits, index)] = count;
    }
    return mc;
}

std::map<std::string, double> exact_probabilities(const qasm::CircuitIR& c) {
    const Statevector sv = Statevector::evolve(c);
    auto probs = sv.probabilities(1e-12);
    double sum = 0.0;
    for (const auto& [bits, p] : probs) sum += p;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw NumericError("exact_probabilities: mass " + std::to_string(sum) +
                           " deviates from 1 beyond 1e-9");
    }
    return probs;
}

}  // namespace qbatch::sim
