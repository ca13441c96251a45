#include "qbatch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "qbatch/errors.hpp"
#include "qbatch/rng.hpp"
#include "qbatch/util.hpp"

namespace qbatch {

Graph::Graph(int num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
    if (num_nodes_ < 0) throw ParameterError("graph: negative node count");
    for (auto& e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= num_nodes_ || e.v >= num_nodes_) {
            throw ParameterError("graph: edge index out of range");
        }
        if (e.u == e.v) throw ParameterError("graph: self-loop");
        if (!std::isfinite(e.w)) throw ParameterError("graph: non-finite edge weight");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v) {
            throw ParameterError("graph: parallel edge (" + std::to_string(edges_[i].u) + "," +
                                 std::to_string(edges_[i].v) + ")");
        }
    }
}

double Graph::total_weight() const {
    double s = 0.0;
    for (const auto& e : edges_) s += e.w;
    return s;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(num_nodes_, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

std::string Graph::to_json() const {
    nlohmann::json j;
    j["n"] = num_nodes_;
    auto& arr = j["edges"] = nlohmann::json::array();
    for (const auto& e : edges_) arr.push_back({e.u, e.v, e.w});
    return j.dump();
}

Graph Graph::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("graph json: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("edges")) {
        throw ParameterError("graph json: missing 'n' or 'edges'");
    }
    std::vector<Edge> edges;
    for (const auto& item : j["edges"]) {
        Edge e;
        e.u = item.at(0).get<int>();
        e.v = item.at(1).get<int>();
        e.w = item.size() > 2 ? item.at(2).get<double>() : 1.0;
        edges.push_back(e);
    }
    return Graph(j["n"].get<int>(), std::move(edges));
}

Assignment complement(const Assignment& a) {
    Assignment out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ? 0 : 1;
    return out;
}

double cut_size(const Graph& g, const Assignment& a) {
    if (static_cast<int>(a.size()) != g.num_nodes()) {
        throw ParameterError("cut_size: assignment length mismatch");
    }
    double cut = 0.0;
    for (const auto& e : g.edges()) {
        if (a[e.u] != a[e.v]) cut += e.w;
    }
    return cut;
}

std::pair<double, Assignment> max_cut_bruteforce(const Graph& g) {
    const int n = g.num_nodes();
    if (n > 24) throw CapacityError("max_cut_bruteforce: limited to 24 nodes");
    if (n == 0) return {0.0, {}};

    const auto& edges = g.edges();
    const std::uint64_t limit = n > 1 ? (1ULL << (n - 1)) : 1;
    double best = -1.0;
    std::uint64_t best_mask = 0;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        double cut = 0.0;
        for (const auto& e : edges) {
            if (((mask >> e.u) ^ (mask >> e.v)) & 1ULL) cut += e.w;
        }
        if (cut > best) {
            best = cut;
            best_mask = mask;
        }
    }
    Assignment a(n);
    for (int i = 0; i < n; ++i) a[i] = (best_mask >> i) & 1ULL;
    return {best, a};
}

Graph make_circulant(int n, const std::vector<int>& offsets) {
    if (n < 1) throw ParameterError("circulant: n must be >= 1");
    if (offsets.empty()) throw ParameterError("circulant: offsets must be nonempty");
    std::set<std::pair<int, int>> seen;
    std::vector<Edge> edges;
    for (int off : offsets) {
        if (off < 1 || off > n / 2) {
            throw ParameterError("circulant: offset " + std::to_string(off) +
                                 " outside 1..n/2");
        }
        for (int i = 0; i < n; ++i) {
            int u = i, v = (i + off) % n;
            if (u > v) std::swap(u, v);
            if (u == v) continue;
            if (seen.insert({u, v}).second) edges.push_back({u, v, 1.0});
        }
    }
    return Graph(n, std::move(edges));
}

Graph make_gnp(int n, double p, std::uint64_t seed) {
    if (n < 1) throw ParameterError("gnp: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("gnp: p must be in [0,1]");
    Rng rng(mix_seed(seed, 0x676e70));
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (rng.next_double() < p) edges.push_back({u, v, 1.0});
        }
    }
    return Graph(n, std::move(edges));
}

Graph make_regular(int n, int d, std::uint64_t seed) {
    if (n < 1) throw ParameterError("regular: n must be >= 1");
    if (d < 0 || d >= n) throw ParameterError("regular: need 0 <= d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0) {
        throw ParameterError("regular: n*d must be even");
    }
    Rng rng(mix_seed(seed, 0x726567));
    // Pairing (configuration) model: shuffle d copies of each node, pair them
    // up, and reject draws that create self-loops or parallel edges.
    const int max_attempts = 2000;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * d);
        for (int v = 0; v < n; ++v) {
            for (int k = 0; k < d; ++k) stubs.push_back(v);
        }
        for (std::size_t i = stubs.size(); i > 1; --i) {
            std::swap(stubs[i - 1], stubs[rng.next_below(i)]);
        }
        std::set<std::pair<int, int>> seen;
        std::vector<Edge> edges;
        bool ok = true;
        for (std::size_t i = 0; i < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) {
                ok = false;
                break;
            }
            if (u > v) std::swap(u, v);
            if (!seen.insert({u, v}).second) {
                ok = false;
                break;
            }
            edges.push_back({u, v, 1.0});
        }
        if (ok) return Graph(n, std::move(edges));
    }
    throw NumericError("regular: pairing model failed to produce a simple graph");
}

Graph make_bipartite(int n1, int n2, double p, std::uint64_t seed) {
    if (n1 < 1 || n2 < 1) throw ParameterError("bipartite: both sides must be nonempty");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("bipartite: p must be in [0,1]");
    Rng rng(mix_seed(seed, 0x626970));
    std::vector<Edge> edges;
    for (int u = 0; u < n1; ++u) {
        for (int v = 0; v < n2; ++v) {
            if (rng.next_double() < p) edges.push_back({u, n1 + v, 1.0});
        }
    }
    return Graph(n1 + n2, std::move(edges));
}

Graph make_star(int n) {
    if (n < 1) throw ParameterError("star: n must be >= 1");
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({0, i, 1.0});
    return Graph(n, std::move(edges));
}

FamilySpec FamilySpec::parse(const std::string& text) {
    FamilySpec spec;
    const auto colon = text.find(':');
    spec.name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (spec.name == "circulant") {
        spec.offsets.clear();
        if (args.empty()) {
            spec.offsets = {1, 2};
        } else {
            for (const auto& part : split(args, ',')) spec.offsets.push_back(std::stoi(part));
        }
    } else if (spec.name == "gnp" || spec.name == "bipartite") {
        if (!args.empty()) spec.p = std::stod(args);
    } else if (spec.name == "regular") {
        if (!args.empty()) spec.d = std::stoi(args);
    } else if (spec.name == "star") {
        // no parameters
    } else {
        throw ParameterError("unknown graph family: " + spec.name);
    }
    return spec;
}

std::string FamilySpec::label() const {
    if (name == "circulant") {
        std::string s = name + ":";
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(offsets[i]);
        }
        return s;
    }
    if (name == "gnp" || name == "bipartite") return name + ":" + std::to_string(p);
    if (name == "regular") return name + ":" + std::to_string(d);
    return name;
}

Graph generate(const FamilySpec& family, int n, std::uint64_t seed) {
    if (family.name == "circulant") return make_circulant(n, family.offsets);
    if (family.name == "gnp") return make_gnp(n, family.p, seed);
    if (family.name == "regular") return make_regular(n, family.d, seed);
    if (family.name == "bipartite") return make_bipartite(n / 2, n - n / 2, family.p, seed);
    if (family.name == "star") return make_star(n);
    throw ParameterError("unknown graph family: " + family.name);
}

}  // namespace qbatch
