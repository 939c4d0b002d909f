#pragma once

#include <cmath>
#include <span>

#include "bicore/decomp.hpp"

namespace bicore {

struct GraphStats {
    uint32_t n_upper = 0, n_lower = 0;
    uint64_t m = 0;
    uint32_t alpha_max = 0;       // max upper-layer degree
    uint32_t beta_max = 0;        // max lower-layer degree
    uint32_t degeneracy = 0;      // largest t with nonempty (t,t)-core
    uint64_t dense_core_size = 0; // edge count of the (delta,delta)-core
    double density = 0.0;         // m / sqrt(n_upper * n_lower)
};

inline GraphStats graph_stats(const BipartiteGraph& g) {
    if (g.empty()) throw DataError("graph_stats on an empty graph");
    GraphStats s;
    s.n_upper = g.upper_count();
    s.n_lower = g.lower_count();
    s.m = g.edge_count();
    for (uint32_t o = 0; o < g.upper_count(); ++o)
        s.alpha_max = std::max(s.alpha_max, g.degree(VertexRef{Layer::Upper, o}));
    for (uint32_t o = 0; o < g.lower_count(); ++o)
        s.beta_max = std::max(s.beta_max, g.degree(VertexRef{Layer::Lower, o}));
    DegeneracyResult d = compute_degeneracy(g);
    s.degeneracy = d.delta;
    s.dense_core_size = d.core.edge_ids.size();
    s.density = static_cast<double>(s.m) /
                std::sqrt(static_cast<double>(s.n_upper) * static_cast<double>(s.n_lower));
    return s;
}

struct CommunitySummary {
    uint32_t n_upper = 0, n_lower = 0;
    uint64_t n_edges = 0;
    double min_weight = 0.0;
    double mean_weight = 0.0;
    double density = 0.0;
};

inline CommunitySummary community_stats(std::span<const Edge> edges) {
    if (edges.empty()) throw DataError("community_stats on an empty edge set");
    CommunitySummary s;
    s.n_edges = edges.size();
    std::vector<uint32_t> us, ls;
    double sum = 0.0, mn = edges.front().weight;
    for (const Edge& e : edges) {
        us.push_back(e.upper);
        ls.push_back(e.lower);
        sum += e.weight;
        mn = std::min(mn, e.weight);
    }
    std::sort(us.begin(), us.end());
    std::sort(ls.begin(), ls.end());
    s.n_upper = static_cast<uint32_t>(std::unique(us.begin(), us.end()) - us.begin());
    s.n_lower = static_cast<uint32_t>(std::unique(ls.begin(), ls.end()) - ls.begin());
    s.min_weight = mn;
    s.mean_weight = sum / static_cast<double>(s.n_edges);
    s.density = static_cast<double>(s.n_edges) /
                std::sqrt(static_cast<double>(s.n_upper) * static_cast<double>(s.n_lower));
    return s;
}

}  // namespace bicore
