#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qbatch/errors.hpp"
#include "qbatch/graph.hpp"
#include "qbatch/rng.hpp"

using namespace qbatch;

namespace {

Graph k3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

// Independent exhaustive scan, written differently from max_cut_bruteforce:
// iterates the full 2^n space and uses an adjacency matrix.
double bruteforce_oracle(const Graph& g) {
    const int n = g.num_nodes();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges()) w[e.u][e.v] = w[e.v][e.u] = e.w;
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        double cut = 0.0;
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                if (((mask >> u) & 1) != ((mask >> v) & 1)) cut += w[u][v];
            }
        }
        best = std::max(best, cut);
    }
    return best;
}

}  // namespace

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(Graph(2, {{0, 0, 1.0}}), ParameterError);
    CHECK_THROWS_AS(Graph(2, {{0, 2, 1.0}}), ParameterError);
    CHECK_THROWS_AS(Graph(3, {{0, 1, 1.0}, {1, 0, 1.0}}), ParameterError);
    CHECK_THROWS_AS(Graph(2, {{0, 1, std::nan("")}}), ParameterError);
    // (u, v) normalized to u < v
    Graph g(3, {{2, 0, 1.5}});
    CHECK(g.edges()[0].u == 0);
    CHECK(g.edges()[0].v == 2);
    CHECK(g.edges()[0].w == 1.5);
}

TEST_CASE("circulant offsets {1} on 4 nodes is the 4-cycle") {
    Graph g = make_circulant(4, {1});
    REQUIRE(g.num_edges() == 4);
    std::set<std::pair<int, int>> want{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    for (const auto& e : g.edges()) CHECK(want.count({e.u, e.v}) == 1);
    CHECK_THROWS_AS(make_circulant(4, {}), ParameterError);
    CHECK_THROWS_AS(make_circulant(4, {3}), ParameterError);
}

TEST_CASE("star on 5 nodes") {
    Graph g = make_star(5);
    REQUIRE(g.num_edges() == 4);
    for (const auto& e : g.edges()) CHECK(e.u == 0);
}

TEST_CASE("regular(4) on 20 nodes has 40 edges and uniform degree") {
    Graph g = make_regular(20, 4, 7);
    CHECK(g.num_edges() == 40);
    for (int d : g.degrees()) CHECK(d == 4);
    CHECK_THROWS_AS(make_regular(5, 3, 0), ParameterError);  // odd n*d
}

TEST_CASE("generators are reproducible") {
    CHECK(make_gnp(12, 0.4, 5) == make_gnp(12, 0.4, 5));
    CHECK(make_regular(10, 3, 9) == make_regular(10, 3, 9));
    CHECK(make_bipartite(5, 7, 0.5, 3) == make_bipartite(5, 7, 0.5, 3));
    CHECK(make_gnp(12, 0.4, 5) != make_gnp(12, 0.4, 6));
}

TEST_CASE("cut_size examples") {
    CHECK(cut_size(k3(), {0, 1, 1}) == doctest::Approx(2.0));
    CHECK(cut_size(k3(), {0, 0, 0}) == doctest::Approx(0.0));
    Graph c4 = make_circulant(4, {1});
    CHECK(cut_size(c4, {0, 1, 0, 1}) == doctest::Approx(4.0));
    CHECK_THROWS_AS(cut_size(k3(), {0, 1}), ParameterError);
}

TEST_CASE("cut_size flip symmetry and bounds") {
    Rng rng(42);
    Graph g = make_gnp(10, 0.5, 1);
    for (int trial = 0; trial < 50; ++trial) {
        Assignment a(10);
        for (auto& b : a) b = rng.next_below(2);
        const double c = cut_size(g, a);
        CHECK(cut_size(g, complement(a)) == doctest::Approx(c));
        CHECK(c >= 0.0);
        CHECK(c <= g.total_weight());
    }
}

TEST_CASE("max_cut_bruteforce examples") {
    CHECK(max_cut_bruteforce(k3()).first == doctest::Approx(2.0));
    CHECK(max_cut_bruteforce(make_circulant(4, {1})).first == doctest::Approx(4.0));
    Graph big = make_gnp(25, 0.5, 0);
    CHECK_THROWS_AS(max_cut_bruteforce(big), CapacityError);
}

TEST_CASE("max_cut_bruteforce agrees with an independent exhaustive scan") {
    Graph g = make_gnp(10, 0.5, 1);
    auto [value, a] = max_cut_bruteforce(g);
    CHECK(value == doctest::Approx(bruteforce_oracle(g)));
    CHECK(cut_size(g, a) == doctest::Approx(value));

    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Assignment r(10);
        for (auto& b : r) b = rng.next_below(2);
        CHECK(cut_size(g, r) <= value + 1e-12);
    }
}

TEST_CASE("graph json round trip") {
    Graph g = make_gnp(8, 0.4, 2);
    CHECK(Graph::from_json(g.to_json()) == g);
    CHECK_THROWS_AS(Graph::from_json("{"), ParameterError);
    CHECK_THROWS_AS(Graph::from_json("{\"edges\":[]}"), ParameterError);
}

TEST_CASE("family spec parsing") {
    auto c = FamilySpec::parse("circulant:1,3");
    CHECK(c.offsets == std::vector<int>{1, 3});
    auto r = FamilySpec::parse("regular:6");
    CHECK(r.d == 6);
    auto p = FamilySpec::parse("gnp:0.25");
    CHECK(p.p == doctest::Approx(0.25));
    CHECK_THROWS_AS(FamilySpec::parse("torus"), ParameterError);
    CHECK(generate(FamilySpec::parse("star"), 5, 0) == make_star(5));
}
