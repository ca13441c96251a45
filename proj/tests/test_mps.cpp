#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "qbatch/circuits.hpp"
#include "qbatch/errors.hpp"
#include "qbatch/graph.hpp"
#include "qbatch/mps.hpp"
#include "qbatch/rng.hpp"
#include "qbatch/sim.hpp"

using namespace qbatch;
using namespace qbatch::sim;
using qasm::CircuitIR;
using qasm::Gate;

namespace {

CircuitIR qaoa_circuit(int n, int p, std::uint64_t seed) {
    Graph g = make_gnp(n, 0.5, seed);
    circuits::QaoaParams params;
    Rng rng(mix_seed(seed, 0x4d50));
    for (int l = 0; l < p; ++l) {
        params.gammas.push_back(rng.uniform(6.283185307179586));
        params.betas.push_back(rng.uniform(3.141592653589793));
    }
    return circuits::build_circuit(g, params);
}

int exact_bond(int n) { return 1 << ((n + 1) / 2); }

}  // namespace

TEST_CASE("product circuit is exact at bond dimension 1") {
    CircuitIR c;
    c.num_qubits = 4;
    for (int q = 0; q < 4; ++q) {
        c.ops.push_back({Gate::h, 0.0, q, -1});
        c.ops.push_back({Gate::rz, 0.3 * (q + 1), q, -1});
        c.ops.push_back({Gate::rx, 0.2 * (q + 1), q, -1});
    }
    c.measured = true;
    auto mps = mps_probabilities(c, 1);
    auto sv = exact_probabilities(c);
    CHECK(total_variation_distance(mps, sv) < 1e-12);
}

TEST_CASE("bell circuit at max_bond=2 samples only 00 and 11") {
    CircuitIR c;
    c.num_qubits = 2;
    c.ops.push_back({Gate::h, 0.0, 0, -1});
    c.ops.push_back({Gate::cx, 0.0, 0, 1});
    c.measured = true;
    auto result = run_mps(c, 4000, 5, 2);
    result.counts.validate();
    CHECK(result.truncation_loss == doctest::Approx(0.0).epsilon(1e-12));
    for (const auto& [bits, cnt] : result.counts.counts) {
        CHECK((bits == "00" || bits == "11"));
        CHECK(cnt > 1500);
    }
}

TEST_CASE("10-qubit QAOA p=1 at max_bond=64 matches the statevector oracle") {
    auto c = qaoa_circuit(10, 1, 3);
    auto mps = mps_probabilities(c, 64);
    auto sv = exact_probabilities(c);
    CHECK(total_variation_distance(mps, sv) < 1e-6);
}

TEST_CASE("unbounded bond matches statevector within 1e-9 for n <= 12") {
    for (int n : {4, 6, 8}) {
        for (int p : {1, 2}) {
            auto c = qaoa_circuit(n, p, 40 + n + p);
            auto mps = mps_probabilities(c, exact_bond(n));
            auto sv = exact_probabilities(c);
            CHECK(total_variation_distance(mps, sv) < 1e-9);
        }
    }
}

TEST_CASE("long-range gates and reversed control order route correctly") {
    CircuitIR c;
    c.num_qubits = 6;
    c.ops.push_back({Gate::h, 0.0, 0, -1});
    c.ops.push_back({Gate::h, 0.0, 5, -1});
    c.ops.push_back({Gate::cx, 0.0, 0, 5});   // long range
    c.ops.push_back({Gate::cx, 0.0, 4, 1});   // control above target
    c.ops.push_back({Gate::cz, 0.0, 5, 2});
    c.ops.push_back({Gate::rx, 0.7, 3, -1});
    c.measured = true;
    auto mps = mps_probabilities(c, exact_bond(6));
    auto sv = exact_probabilities(c);
    CHECK(total_variation_distance(mps, sv) < 1e-9);
}

TEST_CASE("chi-squared agreement of mps sampling with the exact distribution") {
    auto c = qaoa_circuit(6, 1, 9);
    auto result = run_mps(c, 5000, 77, exact_bond(6));
    result.counts.validate();
    CHECK(oracle::chi2_pvalue(result.counts, exact_probabilities(c)) > 0.001);
}

TEST_CASE("mps sampling is deterministic per seed") {
    auto c = qaoa_circuit(7, 1, 2);
    auto a = run_mps(c, 600, 123, 32);
    auto b = run_mps(c, 600, 123, 32);
    CHECK(a.counts == b.counts);
    CHECK(a.truncation_loss == b.truncation_loss);
}

TEST_CASE("truncation loss is reported when the bond cap bites") {
    auto c = qaoa_circuit(8, 2, 6);
    auto tight = run_mps(c, 10, 1, 2);
    CHECK(tight.truncation_loss > 0.0);
    auto roomy = run_mps(c, 10, 1, exact_bond(8));
    CHECK(roomy.truncation_loss == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(roomy.max_bond_reached <= exact_bond(8));
}

TEST_CASE("mps parameter and contract errors") {
    auto c = qaoa_circuit(4, 1, 1);
    CHECK_THROWS_AS(run_mps(c, 0, 0, 8), ParameterError);
    CHECK_THROWS_AS(run_mps(c, 10, 0, 0), ParameterError);
    CircuitIR unmeasured = c;
    unmeasured.measured = false;
    CHECK_THROWS_AS(run_mps(unmeasured, 10, 0, 8), ContractError);
}
