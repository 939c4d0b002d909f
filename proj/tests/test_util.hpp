#pragma once

#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "bicore/decomp.hpp"
#include "bicore/graph.hpp"

namespace testutil {

using namespace bicore;

inline std::string data_path(const std::string& name) {
    return std::string(BICORE_DATA_DIR) + "/" + name;
}

inline BipartiteGraph load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing fixture " + path);
    return load_graph(in);
}

inline BipartiteGraph load_f1() { return load_file(data_path("f1.txt")); }

struct GraphSpec {
    uint32_t max_upper = 20, max_lower = 20;
    uint32_t max_edges = 120;
    int weight_min = 1, weight_max = 10;
};

// Random bipartite graph with every vertex covered by at least one edge.
inline BipartiteGraph random_graph(std::mt19937_64& rng, const GraphSpec& spec = {}) {
    uint32_t nu = 1 + static_cast<uint32_t>(rng() % spec.max_upper);
    uint32_t nl = 1 + static_cast<uint32_t>(rng() % spec.max_lower);
    GraphBuilder b;
    for (uint32_t i = 0; i < nu; ++i) b.intern(Layer::Upper, "u" + std::to_string(i));
    for (uint32_t i = 0; i < nl; ++i) b.intern(Layer::Lower, "v" + std::to_string(i));

    std::unordered_set<uint64_t> used;
    uint64_t edges = 0;
    auto weight = [&] {
        return static_cast<double>(spec.weight_min +
                                   static_cast<int>(rng() % (spec.weight_max - spec.weight_min + 1)));
    };
    auto add = [&](uint32_t u, uint32_t v) {
        uint64_t key = (static_cast<uint64_t>(u) << 32) | v;
        if (!used.insert(key).second) return false;
        b.add_edge({Layer::Upper, u}, {Layer::Lower, v}, weight());
        ++edges;
        return true;
    };
    for (uint32_t u = 0; u < nu; ++u) add(u, static_cast<uint32_t>(rng() % nl));
    for (uint32_t v = 0; v < nl; ++v) add(static_cast<uint32_t>(rng() % nu), v);

    uint64_t cap = std::min<uint64_t>(spec.max_edges, static_cast<uint64_t>(nu) * nl);
    if (cap > edges) {
        uint64_t target = edges + rng() % (cap - edges + 1);
        for (uint64_t tries = 0; edges < target && tries < 20 * target; ++tries)
            add(static_cast<uint32_t>(rng() % nu), static_cast<uint32_t>(rng() % nl));
    }
    return b.finish();
}

inline std::vector<VertexRef> all_vertices(const BipartiteGraph& g) {
    std::vector<VertexRef> out;
    for (uint32_t o = 0; o < g.upper_count(); ++o) out.push_back({Layer::Upper, o});
    for (uint32_t o = 0; o < g.lower_count(); ++o) out.push_back({Layer::Lower, o});
    return out;
}

inline std::vector<std::pair<uint32_t, uint32_t>> edge_pairs(std::span<const Edge> es) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    out.reserve(es.size());
    for (const Edge& e : es) out.emplace_back(e.upper, e.lower);
    std::sort(out.begin(), out.end());
    return out;
}

inline bool same_edges(std::span<const Edge> a, std::span<const Edge> b) {
    return edge_pairs(a) == edge_pairs(b);
}

}  // namespace testutil
