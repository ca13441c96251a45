#include "qbatch/circuits.hpp"

#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

#include "qbatch/errors.hpp"
#include "qbatch/util.hpp"

namespace qbatch::circuits {

void QaoaParams::validate() const {
    if (gammas.empty()) throw ParameterError("qaoa params: p must be >= 1");
    if (gammas.size() != betas.size()) {
        throw ParameterError("qaoa params: gammas and betas must have equal length");
    }
    for (double v : gammas) {
        if (!std::isfinite(v)) throw ParameterError("qaoa params: non-finite gamma");
    }
    for (double v : betas) {
        if (!std::isfinite(v)) throw ParameterError("qaoa params: non-finite beta");
    }
}

std::string HamiltonianTerm::tag() const {
    if (kind == Kind::zz) {
        return "zz(" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
    return "x(" + std::to_string(i) + ")";
}

std::vector<HamiltonianTerm> cost_terms(const Graph& g) {
    std::vector<HamiltonianTerm> terms;
    terms.reserve(g.num_edges());
    for (const auto& e : g.edges()) {
        terms.push_back({HamiltonianTerm::Kind::zz, e.u, e.v, e.w});
    }
    return terms;
}

CircuitScaffold build_scaffold(const Graph& g, int p) {
    if (p < 1) throw ParameterError("build_scaffold: p must be >= 1");
    if (g.num_nodes() < 1) throw ParameterError("build_scaffold: empty graph");

    const int n = g.num_nodes();
    std::string t;
    t.reserve(128 + static_cast<std::size_t>(p) * (g.num_edges() * 60 + n * 24) + n * 40);
    t += "OPENQASM 2.0;\n";
    t += "include \"qelib1.inc\";\n";
    t += "qreg q[" + std::to_string(n) + "];\n";
    t += "creg c[" + std::to_string(n) + "];\n";
    for (int q = 0; q < n; ++q) t += "h q[" + std::to_string(q) + "];\n";
    for (int layer = 0; layer < p; ++layer) {
        const std::string g_tok = "$g" + std::to_string(layer);
        const std::string b_tok = "$b" + std::to_string(layer);
        // cost layer: exp(+i*gamma*w*Z_i Z_j / 2) == cx; rz(-w*gamma); cx
        for (const auto& e : g.edges()) {
            const std::string qu = "q[" + std::to_string(e.u) + "]";
            const std::string qv = "q[" + std::to_string(e.v) + "]";
            t += "cx " + qu + "," + qv + ";\n";
            t += "rz(" + format_double(-e.w) + "*" + g_tok + ") " + qv + ";\n";
            t += "cx " + qu + "," + qv + ";\n";
        }
        // mixer layer: exp(-i*beta*X) == rx(2*beta)
        for (int q = 0; q < n; ++q) {
            t += "rx(2*" + b_tok + ") q[" + std::to_string(q) + "];\n";
        }
    }
    for (int q = 0; q < n; ++q) {
        t += "measure q[" + std::to_string(q) + "] -> c[" + std::to_string(q) + "];\n";
    }
    return CircuitScaffold{std::move(t), p, n, ""};
}

namespace {

// A scaffold template split at its placeholder slots so batch grounding pays
// the scan once.
struct Slot {
    double coeff = 1.0;
    bool is_gamma = true;
    int layer = 0;
};

struct CompiledTemplate {
    std::vector<std::string> literals;  // slots.size() + 1 pieces
    std::vector<Slot> slots;
};

// Matches `(<coeff>*$g<l>)` / `(<coeff>*$b<l>)` / `($g<l>)` starting at the
// opening parenthesis. Returns the index one past ')' or npos if no match.
std::size_t match_slot(const std::string& t, std::size_t open, Slot& slot) {
    std::size_t i = open + 1;
    slot.coeff = 1.0;
    if (i < t.size() && t[i] != '$') {
        const std::size_t star = t.find('*', i);
        if (star == std::string::npos || star + 1 >= t.size() || t[star + 1] != '$') {
            return std::string::npos;
        }
        try {
            std::size_t used = 0;
            slot.coeff = std::stod(t.substr(i, star - i), &used);
            if (used != star - i) return std::string::npos;
        } catch (const std::exception&) {
            return std::string::npos;
        }
        i = star + 1;
    }
    if (i >= t.size() || t[i] != '$') return std::string::npos;
    ++i;
    if (i >= t.size() || (t[i] != 'g' && t[i] != 'b')) return std::string::npos;
    slot.is_gamma = t[i] == 'g';
    ++i;
    std::size_t digits = 0;
    int layer = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
        layer = layer * 10 + (t[i] - '0');
        ++i;
        ++digits;
    }
    if (digits == 0 || i >= t.size() || t[i] != ')') return std::string::npos;
    slot.layer = layer;
    return i + 1;
}

CompiledTemplate compile_template(const CircuitScaffold& s) {
    CompiledTemplate ct;
    const std::string& t = s.qasm_template;
    std::string current;
    std::size_t i = 0;
    while (i < t.size()) {
        if (t[i] == '(') {
            Slot slot;
            const std::size_t end = match_slot(t, i, slot);
            if (end != std::string::npos) {
                if (slot.layer >= s.p) {
                    throw ParameterError("scaffold: placeholder layer " +
                                         std::to_string(slot.layer) +
                                         " outside p=" + std::to_string(s.p));
                }
                current += '(';
                ct.literals.push_back(std::move(current));
                current.clear();
                ct.slots.push_back(slot);
                current += ')';
                i = end;
                continue;
            }
        }
        current += t[i];
        ++i;
    }
    ct.literals.push_back(std::move(current));
    return ct;
}

std::string ground_compiled(const CompiledTemplate& ct, const CircuitScaffold& s,
                            const QaoaParams& params) {
    params.validate();
    if (params.p() != s.p) {
        throw ParameterError("ground: parameter sets have p=" +
                             std::to_string(params.p()) + ", scaffold has p=" +
                             std::to_string(s.p));
    }
    std::string out;
    out.reserve(s.qasm_template.size() + ct.slots.size() * 8);
    for (std::size_t k = 0; k < ct.slots.size(); ++k) {
        out += ct.literals[k];
        const Slot& slot = ct.slots[k];
        const double value =
            slot.coeff * (slot.is_gamma ? params.gammas[slot.layer] : params.betas[slot.layer]);
        out += format_double(value);
    }
    out += ct.literals.back();
    return out;
}

}  // namespace

std::string ground(const CircuitScaffold& s, const QaoaParams& params) {
    return ground_compiled(compile_template(s), s, params);
}

std::vector<std::string> batch_ground(const CircuitScaffold& s,
                                      const std::vector<QaoaParams>& sets) {
    const CompiledTemplate ct = compile_template(s);
    std::vector<std::string> out;
    out.reserve(sets.size());
    for (const auto& params : sets) out.push_back(ground_compiled(ct, s, params));
    return out;
}

std::vector<std::pair<std::string, std::string>> per_term_programs(
    const CircuitScaffold& s, const std::vector<HamiltonianTerm>& terms,
    const QaoaParams& params, TermMode mode) {
    for (const auto& term : terms) {
        if (term.i < 0 || term.i >= s.num_qubits ||
            (term.kind == HamiltonianTerm::Kind::zz &&
             (term.j < 0 || term.j >= s.num_qubits))) {
            throw ParameterError("per_term_programs: term index outside scaffold");
        }
    }
    const std::string text = ground(s, params);
    std::vector<std::pair<std::string, std::string>> out;
    if (mode == TermMode::grouped) {
        // All MaxCut cost terms are Z-diagonal and commute; one program serves
        // every term.
        out.emplace_back("grouped", text);
        return out;
    }
    out.reserve(terms.size());
    for (const auto& term : terms) out.emplace_back(term.tag(), text);
    return out;
}

qasm::CircuitIR build_circuit(const Graph& g, const QaoaParams& params) {
    params.validate();
    if (g.num_nodes() < 1) throw ParameterError("build_circuit: empty graph");
    qasm::CircuitIR c;
    c.num_qubits = g.num_nodes();
    const int p = params.p();
    c.ops.reserve(static_cast<std::size_t>(c.num_qubits) * (1 + p) +
                  static_cast<std::size_t>(p) * g.num_edges() * 3);
    for (int q = 0; q < c.num_qubits; ++q) c.ops.push_back({qasm::Gate::h, 0.0, q, -1});
    for (int layer = 0; layer < p; ++layer) {
        for (const auto& e : g.edges()) {
            c.ops.push_back({qasm::Gate::cx, 0.0, e.u, e.v});
            c.ops.push_back({qasm::Gate::rz, -e.w * params.gammas[layer], e.v, -1});
            c.ops.push_back({qasm::Gate::cx, 0.0, e.u, e.v});
        }
        for (int q = 0; q < c.num_qubits; ++q) {
            c.ops.push_back({qasm::Gate::rx, 2.0 * params.betas[layer], q, -1});
        }
    }
    c.measured = true;
    return c;
}

std::string CircuitScaffold::to_json() const {
    nlohmann::json j;
    j["template"] = qasm_template;
    j["p"] = p;
    j["n"] = num_qubits;
    j["term_tag"] = term_tag;
    return j.dump();
}

CircuitScaffold CircuitScaffold::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        CircuitScaffold s;
        s.qasm_template = j.at("template").get<std::string>();
        s.p = j.at("p").get<int>();
        s.num_qubits = j.at("n").get<int>();
        s.term_tag = j.value("term_tag", "");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("scaffold json: ") + e.what());
    }
}

}  // namespace qbatch::circuits
