#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qbatch {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;

    bool operator==(const Edge&) const = default;
};

// Undirected weighted graph. Nodes are prospective qubits, edges are ZZ cost
// terms. Immutable after construction; safe to share across threads.
class Graph {
public:
    Graph() = default;

    // Validates and canonicalizes: u < v per edge, edges sorted by (u, v).
    // Throws ParameterError on self-loops, duplicate pairs, out-of-range
    // indices, or non-finite weights.
    Graph(int num_nodes, std::vector<Edge> edges);

    int num_nodes() const { return num_nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t num_edges() const { return edges_.size(); }
    double total_weight() const;
    std::vector<int> degrees() const;

    bool operator==(const Graph&) const = default;

    std::string to_json() const;
    static Graph from_json(const std::string& text);

private:
    int num_nodes_ = 0;
    std::vector<Edge> edges_;
};

// Side assignment of each node: bits[i] in {0,1}.
using Assignment = std::vector<std::uint8_t>;

Assignment complement(const Assignment& a);

// Total weight of edges whose endpoints lie on different sides.
double cut_size(const Graph& g, const Assignment& a);

// Exact maximum cut by exhaustive scan with bit 0 fixed to 0. Ties are broken
// by the lowest bitstring value (node i = bit i of the scan counter).
// Throws CapacityError for more than 24 nodes.
std::pair<double, Assignment> max_cut_bruteforce(const Graph& g);

// Benchmark graph families. All generators are deterministic for a fixed seed.
Graph make_circulant(int n, const std::vector<int>& offsets);
Graph make_gnp(int n, double p, std::uint64_t seed);
Graph make_regular(int n, int d, std::uint64_t seed);
Graph make_bipartite(int n1, int n2, double p, std::uint64_t seed);
Graph make_star(int n);

// Family spec for CLI/experiment use, e.g. "circulant:1,2", "gnp:0.3",
// "regular:4", "bipartite:0.3", "star".
struct FamilySpec {
    std::string name;            // circulant | gnp | regular | bipartite | star
    std::vector<int> offsets;    // circulant
    double p = 0.3;              // gnp, bipartite
    int d = 4;                   // regular

    static FamilySpec parse(const std::string& text);
    std::string label() const;
};

Graph generate(const FamilySpec& family, int n, std::uint64_t seed);

}  // namespace qbatch
