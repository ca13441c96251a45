#include "qbatch/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "qbatch/errors.hpp"
#include "qbatch/linalg.hpp"
#include "qbatch/rng.hpp"

namespace qbatch {

Matrix spectral_embed(const Graph& g, int k) {
    const int n = g.num_nodes();
    if (k < 1 || k > n) {
        throw ParameterError("spectral_embed: need 1 <= k <= n, got k=" +
                             std::to_string(k) + ", n=" + std::to_string(n));
    }
    if (n > 2048) {
        throw CapacityError("spectral_embed: dense eigensolver capped at 2048 nodes");
    }

    std::vector<double> weighted_degree(n, 0.0);
    for (const auto& e : g.edges()) {
        weighted_degree[e.u] += e.w;
        weighted_degree[e.v] += e.w;
    }
    std::vector<double> dinv_sqrt(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (weighted_degree[i] > 0.0) dinv_sqrt[i] = 1.0 / std::sqrt(weighted_degree[i]);
    }

    // L = I - D^(-1/2) A D^(-1/2)
    std::vector<double> lap(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) lap[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (const auto& e : g.edges()) {
        const double v = -e.w * dinv_sqrt[e.u] * dinv_sqrt[e.v];
        lap[static_cast<std::size_t>(e.u) * n + e.v] += v;
        lap[static_cast<std::size_t>(e.v) * n + e.u] += v;
    }

    std::vector<double> values, vecs;
    jacobi_eigh(n, std::move(lap), values, vecs);

    Matrix embedding(n, k);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) {
            embedding.at(i, c) = vecs[static_cast<std::size_t>(i) * n + c];
        }
    }
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        for (int c = 0; c < k; ++c) norm2 += embedding.at(i, c) * embedding.at(i, c);
        if (norm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (int c = 0; c < k; ++c) embedding.at(i, c) *= inv;
        }
    }
    return embedding;
}

namespace {

double sq_distance(const Matrix& points, int row, const std::vector<double>& center) {
    double d = 0.0;
    for (int c = 0; c < points.cols; ++c) {
        const double diff = points.at(row, c) - center[c];
        d += diff * diff;
    }
    return d;
}

}  // namespace

std::vector<int> kmeans(const Matrix& points, int k, std::uint64_t seed) {
    const int n = points.rows;
    const int dims = points.cols;
    if (k < 1 || k > n) throw ParameterError("kmeans: need 1 <= k <= n");

    Rng rng(mix_seed(seed, 0x6b6d65616e73));

    // k-means++ seeding
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    {
        const int first = static_cast<int>(rng.next_below(n));
        centers.emplace_back(points.data.begin() + static_cast<std::size_t>(first) * dims,
                             points.data.begin() + static_cast<std::size_t>(first + 1) * dims);
        std::vector<double> dist2(n, 0.0);
        while (static_cast<int>(centers.size()) < k) {
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::max();
                for (const auto& c : centers) best = std::min(best, sq_distance(points, i, c));
                dist2[i] = best;
                total += best;
            }
            int chosen;
            if (total <= 0.0) {
                chosen = static_cast<int>(rng.next_below(n));
            } else {
                const double target = rng.next_double() * total;
                double acc = 0.0;
                chosen = n - 1;
                for (int i = 0; i < n; ++i) {
                    acc += dist2[i];
                    if (target < acc) {
                        chosen = i;
                        break;
                    }
                }
            }
            centers.emplace_back(
                points.data.begin() + static_cast<std::size_t>(chosen) * dims,
                points.data.begin() + static_cast<std::size_t>(chosen + 1) * dims);
        }
    }

    std::vector<int> labels(n, -1);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_distance(points, i, centers[0]);
            for (int c = 1; c < k; ++c) {
                const double d = sq_distance(points, i, centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
        }

        // repair empty clusters: steal the farthest point from the largest one
        std::vector<int> sizes(k, 0);
        for (int l : labels) ++sizes[l];
        for (int c = 0; c < k; ++c) {
            while (sizes[c] == 0) {
                int largest = 0;
                for (int c2 = 1; c2 < k; ++c2) {
                    if (sizes[c2] > sizes[largest]) largest = c2;
                }
                int farthest = -1;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    if (labels[i] != largest) continue;
                    const double d = sq_distance(points, i, centers[largest]);
                    if (d > far_d) {
                        far_d = d;
                        farthest = i;
                    }
                }
                labels[farthest] = c;
                --sizes[largest];
                ++sizes[c];
                changed = true;
            }
        }

        for (int c = 0; c < k; ++c) {
            std::fill(centers[c].begin(), centers[c].end(), 0.0);
        }
        for (int i = 0; i < n; ++i) {
            for (int d = 0; d < dims; ++d) centers[labels[i]][d] += points.at(i, d);
        }
        for (int c = 0; c < k; ++c) {
            for (double& v : centers[c]) v /= sizes[c];
        }

        if (!changed) break;
    }
    return labels;
}

void PartitionPlan::validate(const Graph& g, int qubit_cap) const {
    if (static_cast<int>(labels.size()) != g.num_nodes()) {
        throw PartitionError("plan: label count mismatch");
    }
    if (static_cast<int>(subgraphs.size()) != num_clusters) {
        throw PartitionError("plan: cluster count mismatch");
    }
    std::size_t node_total = 0;
    std::size_t edge_total = cut_edges.size();
    for (const auto& sub : subgraphs) {
        if (sub.graph.num_nodes() > qubit_cap) {
            throw PartitionError("plan: subgraph exceeds qubit cap");
        }
        if (static_cast<int>(sub.global_nodes.size()) != sub.graph.num_nodes()) {
            throw PartitionError("plan: node map size mismatch");
        }
        node_total += sub.global_nodes.size();
        edge_total += sub.graph.num_edges();
    }
    if (node_total != labels.size() || edge_total != g.num_edges()) {
        throw PartitionError("plan: node or edge reconstruction mismatch");
    }
}

PartitionPlan partition(const Graph& g, int qubit_cap, std::uint64_t seed) {
    const int n = g.num_nodes();
    if (qubit_cap < 2) throw ParameterError("partition: qubit_cap must be >= 2");
    if (n == 0) throw ParameterError("partition: empty graph");

    const auto degrees = g.degrees();
    const int k0 = (n + qubit_cap - 1) / qubit_cap;

    for (int k = std::max(1, k0); k <= n; ++k) {
        const Matrix embedding = spectral_embed(g, k);
        std::vector<int> labels = kmeans(embedding, k, mix_seed(seed, k));

        // isolated nodes: round-robin over the smallest clusters
        std::vector<int> sizes(k, 0);
        for (int l : labels) ++sizes[l];
        for (int i = 0; i < n; ++i) {
            if (degrees[i] != 0) continue;
            --sizes[labels[i]];
            labels[i] = -1;
        }
        for (int i = 0; i < n; ++i) {
            if (labels[i] != -1) continue;
            int smallest = 0;
            for (int c = 1; c < k; ++c) {
                if (sizes[c] < sizes[smallest]) smallest = c;
            }
            labels[i] = smallest;
            ++sizes[smallest];
        }

        if (*std::max_element(sizes.begin(), sizes.end()) > qubit_cap) continue;

        // compact away clusters emptied by the isolated-node move
        std::vector<int> remap(k, -1);
        int next = 0;
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) remap[c] = next++;
        }
        PartitionPlan plan;
        plan.num_clusters = next;
        plan.labels.resize(n);
        for (int i = 0; i < n; ++i) plan.labels[i] = remap[labels[i]];

        std::vector<std::vector<int>> members(plan.num_clusters);
        for (int i = 0; i < n; ++i) members[plan.labels[i]].push_back(i);

        std::vector<int> local_of(n, -1);
        plan.subgraphs.resize(plan.num_clusters);
        for (int c = 0; c < plan.num_clusters; ++c) {
            for (std::size_t j = 0; j < members[c].size(); ++j) {
                local_of[members[c][j]] = static_cast<int>(j);
            }
        }
        std::vector<std::vector<Edge>> internal(plan.num_clusters);
        for (const auto& e : g.edges()) {
            if (plan.labels[e.u] == plan.labels[e.v]) {
                internal[plan.labels[e.u]].push_back(
                    {local_of[e.u], local_of[e.v], e.w});
            } else {
                plan.cut_edges.push_back(e);
            }
        }
        for (int c = 0; c < plan.num_clusters; ++c) {
            plan.subgraphs[c].graph =
                Graph(static_cast<int>(members[c].size()), std::move(internal[c]));
            plan.subgraphs[c].global_nodes = std::move(members[c]);
        }
        plan.validate(g, qubit_cap);
        return plan;
    }
    throw PartitionError("partition: no clustering satisfied the cap");
}

namespace {

std::vector<int> clusters_by_descending_size(const PartitionPlan& plan) {
    std::vector<int> order(plan.num_clusters);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return plan.subgraphs[a].global_nodes.size() >
               plan.subgraphs[b].global_nodes.size();
    });
    return order;
}

Assignment merge_with_flips(const PartitionPlan& plan,
                            const std::vector<Assignment>& subs,
                            const std::vector<std::uint8_t>& flips) {
    Assignment global(plan.labels.size(), 0);
    for (int c = 0; c < plan.num_clusters; ++c) {
        const auto& sub = plan.subgraphs[c];
        for (std::size_t j = 0; j < sub.global_nodes.size(); ++j) {
            global[sub.global_nodes[j]] =
                static_cast<std::uint8_t>(subs[c][j] ^ flips[c]);
        }
    }
    return global;
}

void check_sub_solutions(const PartitionPlan& plan,
                         const std::vector<Assignment>& subs) {
    if (static_cast<int>(subs.size()) != plan.num_clusters) {
        throw ParameterError("aggregate: need one assignment per cluster");
    }
    for (int c = 0; c < plan.num_clusters; ++c) {
        if (subs[c].size() != plan.subgraphs[c].global_nodes.size()) {
            throw ParameterError("aggregate: assignment size mismatch for cluster " +
                                 std::to_string(c));
        }
    }
}

double cut_over_edges(const std::vector<Edge>& edges, const Assignment& a) {
    double s = 0.0;
    for (const auto& e : edges) {
        if (a[e.u] != a[e.v]) s += e.w;
    }
    return s;
}

}  // namespace

Assignment aggregate(const Graph& g, const PartitionPlan& plan,
                     const std::vector<Assignment>& sub_solutions) {
    check_sub_solutions(plan, sub_solutions);

    // side[node] for fixed clusters only
    Assignment side(g.num_nodes(), 0);
    std::vector<bool> fixed_node(g.num_nodes(), false);
    std::vector<std::uint8_t> flips(plan.num_clusters, 0);

    std::vector<int> local_of(g.num_nodes(), -1);
    for (const auto& sub : plan.subgraphs) {
        for (std::size_t j = 0; j < sub.global_nodes.size(); ++j) {
            local_of[sub.global_nodes[j]] = static_cast<int>(j);
        }
    }

    const auto order = clusters_by_descending_size(plan);
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const int c = order[rank];
        const auto& sub = plan.subgraphs[c];
        if (rank == 0) {
            for (std::size_t j = 0; j < sub.global_nodes.size(); ++j) {
                side[sub.global_nodes[j]] = sub_solutions[c][j];
                fixed_node[sub.global_nodes[j]] = true;
            }
            continue;
        }
        double keep = 0.0, flip = 0.0;
        for (const auto& e : plan.cut_edges) {
            int inside, outside;
            if (plan.labels[e.u] == c && fixed_node[e.v]) {
                inside = e.u;
                outside = e.v;
            } else if (plan.labels[e.v] == c && fixed_node[e.u]) {
                inside = e.v;
                outside = e.u;
            } else {
                continue;
            }
            const bool differs = sub_solutions[c][local_of[inside]] != side[outside];
            if (differs) {
                keep += e.w;
            } else {
                flip += e.w;
            }
        }
        flips[c] = flip > keep ? 1 : 0;
        for (std::size_t j = 0; j < sub.global_nodes.size(); ++j) {
            side[sub.global_nodes[j]] =
                static_cast<std::uint8_t>(sub_solutions[c][j] ^ flips[c]);
            fixed_node[sub.global_nodes[j]] = true;
        }
    }

    const Assignment greedy = merge_with_flips(plan, sub_solutions, flips);
    const Assignment naive =
        merge_with_flips(plan, sub_solutions,
                         std::vector<std::uint8_t>(plan.num_clusters, 0));
    if (cut_over_edges(plan.cut_edges, naive) > cut_over_edges(plan.cut_edges, greedy)) {
        return naive;
    }
    return greedy;
}

Assignment aggregate_exhaustive(const Graph& g, const PartitionPlan& plan,
                                const std::vector<Assignment>& sub_solutions) {
    check_sub_solutions(plan, sub_solutions);
    const int k = plan.num_clusters;
    if (k > 20) throw CapacityError("aggregate_exhaustive: capped at 20 clusters");
    (void)g;

    const auto order = clusters_by_descending_size(plan);
    double best = -1.0;
    Assignment best_assignment;
    for (std::uint64_t mask = 0; mask < (1ULL << (k - 1)); ++mask) {
        std::vector<std::uint8_t> flips(k, 0);
        for (int r = 1; r < k; ++r) flips[order[r]] = (mask >> (r - 1)) & 1ULL;
        const Assignment merged = merge_with_flips(plan, sub_solutions, flips);
        const double value = cut_over_edges(plan.cut_edges, merged);
        if (value > best) {
            best = value;
            best_assignment = merged;
        }
    }
    return best_assignment;
}

std::string PartitionPlan::to_json() const {
    nlohmann::json j;
    j["num_clusters"] = num_clusters;
    j["labels"] = labels;
    j["cut_edges"] = nlohmann::json::array();
    for (const auto& e : cut_edges) j["cut_edges"].push_back({e.u, e.v, e.w});
    j["subgraphs"] = nlohmann::json::array();
    for (const auto& sub : subgraphs) {
        nlohmann::json s;
        s["graph"] = nlohmann::json::parse(sub.graph.to_json());
        s["global_nodes"] = sub.global_nodes;
        j["subgraphs"].push_back(s);
    }
    return j.dump();
}

PartitionPlan PartitionPlan::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        PartitionPlan plan;
        plan.num_clusters = j.at("num_clusters").get<int>();
        plan.labels = j.at("labels").get<std::vector<int>>();
        for (const auto& item : j.at("cut_edges")) {
            plan.cut_edges.push_back(
                {item.at(0).get<int>(), item.at(1).get<int>(), item.at(2).get<double>()});
        }
        for (const auto& s : j.at("subgraphs")) {
            Subgraph sub;
            sub.graph = Graph::from_json(s.at("graph").dump());
            sub.global_nodes = s.at("global_nodes").get<std::vector<int>>();
            plan.subgraphs.push_back(std::move(sub));
        }
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("plan json: ") + e.what());
    }
}

}  // namespace qbatch
