#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbatch/graph.hpp"

namespace qbatch {

// Row-major dense matrix, just big enough for spectral embeddings.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Rows are nodes embedded by the k eigenvectors of the symmetric normalized
// Laplacian L = I - D^(-1/2) A D^(-1/2) with the smallest eigenvalues, then
// normalized to unit length (all-zero rows are left as zero). Isolated nodes
// get a zero D^(-1/2) entry. Capped at 2048 nodes.
Matrix spectral_embed(const Graph& g, int k);

// Lloyd's algorithm with k-means++ seeding, at most 300 iterations, stopping
// when no label changes. Empty clusters are repaired by stealing the farthest
// point from the largest cluster. Returns labels 0..k-1, all nonempty.
std::vector<int> kmeans(const Matrix& points, int k, std::uint64_t seed);

struct Subgraph {
    Graph graph;
    std::vector<int> global_nodes;  // local index -> global node id
};

struct PartitionPlan {
    int num_clusters = 0;
    std::vector<int> labels;        // node -> cluster id
    std::vector<Subgraph> subgraphs;
    std::vector<Edge> cut_edges;    // cross-cluster edges, global endpoints

    void validate(const Graph& g, int qubit_cap) const;

    std::string to_json() const;
    static PartitionPlan from_json(const std::string& text);
};

// Spectral embedding + k-means with k starting at ceil(n / qubit_cap) and
// incremented until every cluster fits the cap (k = n gives singletons, so
// the loop always terminates). Isolated nodes are spread round-robin over the
// smallest clusters after clustering.
PartitionPlan partition(const Graph& g, int qubit_cap, std::uint64_t seed);

// Merges per-cluster assignments into a global one. Clusters are fixed in
// descending size order; each chooses identity or full bit-flip to maximize
// the cut over cut_edges against already-fixed clusters. Falls back to the
// unflipped concatenation if that happens to score higher, so the result is
// never worse than no gauge fixing at all.
Assignment aggregate(const Graph& g, const PartitionPlan& plan,
                     const std::vector<Assignment>& sub_solutions);

// Exhaustive search over all 2^(k-1) gauge flips; reference for tests and
// small cluster counts. Capped at 20 clusters.
Assignment aggregate_exhaustive(const Graph& g, const PartitionPlan& plan,
                                const std::vector<Assignment>& sub_solutions);

}  // namespace qbatch
