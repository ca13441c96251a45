#include <doctest.h>

#include <string>

#include "qbatch/circuits.hpp"
#include "qbatch/errors.hpp"
#include "qbatch/graph.hpp"
#include "qbatch/qasm.hpp"
#include "qbatch/rng.hpp"
#include "qbatch/sim.hpp"

using namespace qbatch;
using namespace qbatch::circuits;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
    int n = 0;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

Graph k3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

QaoaParams random_params(int p, Rng& rng) {
    QaoaParams params;
    for (int l = 0; l < p; ++l) {
        params.gammas.push_back(rng.uniform(6.283185307179586));
        params.betas.push_back(rng.uniform(3.141592653589793));
    }
    return params;
}

}  // namespace

TEST_CASE("cost_terms maps edges to zz terms") {
    Graph single(2, {{0, 1, 1.0}});
    auto terms = cost_terms(single);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].kind == HamiltonianTerm::Kind::zz);
    CHECK(terms[0].i == 0);
    CHECK(terms[0].j == 1);
    CHECK(terms[0].coefficient == 1.0);

    CHECK(cost_terms(k3()).size() == 3);

    Graph weighted(2, {{0, 1, 2.5}});
    CHECK(cost_terms(weighted)[0].coefficient == 2.5);
}

TEST_CASE("scaffold for a single edge at p=1 has the expected shape") {
    Graph g(2, {{0, 1, 1.0}});
    auto s = build_scaffold(g, 1);
    CHECK(s.p == 1);
    CHECK(s.num_qubits == 2);
    CHECK(count_occurrences(s.qasm_template, "cx ") == 2);
    CHECK(count_occurrences(s.qasm_template, "rz(-1*$g0)") == 1);
    CHECK(count_occurrences(s.qasm_template, "rx(2*$b0)") == 2);
    CHECK(count_occurrences(s.qasm_template, "h q[") == 2);
    CHECK(count_occurrences(s.qasm_template, "measure") == 2);
}

TEST_CASE("scaffold for K3 at p=2") {
    auto s = build_scaffold(k3(), 2);
    CHECK(count_occurrences(s.qasm_template, "$g0") == 3);
    CHECK(count_occurrences(s.qasm_template, "$g1") == 3);
    CHECK(count_occurrences(s.qasm_template, "$b0") == 3);
    CHECK(count_occurrences(s.qasm_template, "$b1") == 3);
    CHECK(count_occurrences(s.qasm_template, "cx ") == 12);  // 6 per layer
}

TEST_CASE("ground substitutes evaluated literals") {
    Graph g(2, {{0, 1, 1.0}});
    auto s = build_scaffold(g, 1);
    const std::string text = ground(s, {{0.5}, {0.25}});
    CHECK(text.find("rz(-0.5)") != std::string::npos);
    CHECK(text.find("rx(0.5)") != std::string::npos);
    CHECK(text.find('$') == std::string::npos);
    CHECK_NOTHROW(qasm::parse(text));

    CHECK_THROWS_AS(ground(s, {{0.5, 0.1}, {0.25, 0.1}}), ParameterError);
}

TEST_CASE("ground is referentially transparent") {
    auto s = build_scaffold(k3(), 2);
    QaoaParams params{{0.7, 1.1}, {0.3, 0.9}};
    CHECK(ground(s, params) == ground(s, params));
}

TEST_CASE("grounded scaffold parses to the directly built circuit") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(6));
        Graph g = make_gnp(n, 0.5, trial);
        if (g.num_edges() == 0) continue;
        const int p = 1 + static_cast<int>(rng.next_below(3));
        auto params = random_params(p, rng);
        auto s = build_scaffold(g, p);
        const qasm::CircuitIR grounded = qasm::parse(ground(s, params));
        const qasm::CircuitIR direct = build_circuit(g, params);
        CHECK(grounded == direct);
    }
}

TEST_CASE("gate count formula holds exactly") {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(7));
        Graph g = make_gnp(n, 0.6, 100 + trial);
        const int p = 1 + static_cast<int>(rng.next_below(3));
        auto c = qasm::parse(ground(build_scaffold(g, p), random_params(p, rng)));
        const int e = static_cast<int>(g.num_edges());
        int h = 0, cx = 0, rz = 0, rx = 0;
        for (const auto& op : c.ops) {
            switch (op.gate) {
                case qasm::Gate::h: ++h; break;
                case qasm::Gate::cx: ++cx; break;
                case qasm::Gate::rz: ++rz; break;
                case qasm::Gate::rx: ++rx; break;
                default: break;
            }
        }
        CHECK(h == n);
        CHECK(cx == p * 2 * e);
        CHECK(rz == p * e);
        CHECK(rx == p * n);
        CHECK(static_cast<int>(c.ops.size()) == n + p * (3 * e + n));
    }
}

TEST_CASE("layers appear as cost then mixer, in order") {
    Graph g = k3();
    const int p = 3;
    Rng rng(5);
    auto c = qasm::parse(ground(build_scaffold(g, p), random_params(p, rng)));
    const int e = static_cast<int>(g.num_edges());
    const int n = g.num_nodes();
    std::size_t idx = 0;
    for (int q = 0; q < n; ++q) CHECK(c.ops[idx++].gate == qasm::Gate::h);
    for (int layer = 0; layer < p; ++layer) {
        for (int k = 0; k < e; ++k) {
            CHECK(c.ops[idx].gate == qasm::Gate::cx);
            CHECK(c.ops[idx + 1].gate == qasm::Gate::rz);
            CHECK(c.ops[idx + 2].gate == qasm::Gate::cx);
            idx += 3;
        }
        for (int q = 0; q < n; ++q) CHECK(c.ops[idx++].gate == qasm::Gate::rx);
    }
}

TEST_CASE("zero angles ground to the uniform distribution") {
    const Graph g = k3();
    auto s = build_scaffold(g, 1);
    auto probs = sim::exact_probabilities(qasm::parse(ground(s, {{0.0}, {0.0}})));
    REQUIRE(probs.size() == 8);
    double expected_cut = 0.0;
    for (const auto& [bits, p] : probs) {
        CHECK(p == doctest::Approx(0.125).epsilon(1e-12));
        int crossing = 0;
        for (const auto& e : g.edges()) {
            if (bits[e.u] != bits[e.v]) ++crossing;
        }
        expected_cut += p * crossing;
    }
    // uniform-state expectation of the cost Hamiltonian is |E| / 2
    CHECK(expected_cut == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("batch_ground preserves order and length") {
    auto s = build_scaffold(k3(), 1);
    Rng rng(8);
    std::vector<QaoaParams> sets;
    for (int i = 0; i < 25; ++i) sets.push_back(random_params(1, rng));
    auto texts = batch_ground(s, sets);
    REQUIRE(texts.size() == sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) CHECK(texts[i] == ground(s, sets[i]));
}

TEST_CASE("per-term programs share circuit text but carry distinct tags") {
    auto s = build_scaffold(k3(), 1);
    auto terms = cost_terms(k3());
    QaoaParams params{{0.4}, {0.2}};
    auto programs = per_term_programs(s, terms, params, TermMode::per_term);
    REQUIRE(programs.size() == 3);
    for (std::size_t i = 1; i < programs.size(); ++i) {
        CHECK(programs[i].second == programs[0].second);
        CHECK(programs[i].first != programs[0].first);
    }
    auto grouped = per_term_programs(s, terms, params, TermMode::grouped);
    REQUIRE(grouped.size() == 1);
    CHECK(grouped[0].second == programs[0].second);
}

TEST_CASE("weighted edges fold the weight into the placeholder coefficient") {
    Graph g(2, {{0, 1, 2.5}});
    auto s = build_scaffold(g, 1);
    CHECK(s.qasm_template.find("rz(-2.5*$g0)") != std::string::npos);
    const std::string text = ground(s, {{2.0}, {0.0}});
    CHECK(text.find("rz(-5)") != std::string::npos);
}

TEST_CASE("scaffold json round trip") {
    auto s = build_scaffold(k3(), 2);
    auto back = CircuitScaffold::from_json(s.to_json());
    CHECK(back.qasm_template == s.qasm_template);
    CHECK(back.p == s.p);
    CHECK(back.num_qubits == s.num_qubits);
}
