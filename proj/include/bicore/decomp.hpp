#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bicore/graph.hpp"

namespace bicore {

// Maximal subgraph where every upper vertex keeps degree >= alpha and every
// lower vertex degree >= beta. `in_core` is indexed by interleaved vid.
struct CoreSubgraph {
    std::vector<char> in_core;
    std::vector<uint32_t> edge_ids;
    bool empty() const { return edge_ids.empty(); }
    bool contains(uint32_t vid) const { return vid < in_core.size() && in_core[vid]; }
};

// Per-vertex offsets at a fixed level: kind=Alpha stores s_a(u, level)
// (the largest beta whose (level,beta)-core still holds u, 0 if u is not
// even in the (level,1)-core); kind=Beta is the symmetric s_b.
struct OffsetTable {
    enum class Kind : uint8_t { Alpha = 0, Beta = 1 };
    Kind kind{Kind::Alpha};
    uint32_t level{1};
    std::vector<uint32_t> values;  // by vid

    uint32_t at_vid(uint32_t vid) const { return vid < values.size() ? values[vid] : 0; }
    uint32_t at(VertexRef v) const { return at_vid(vid_of(v)); }
};

struct Community {
    std::vector<Edge> edges;  // sorted by (upper, lower)
    VertexRef anchor{};
    uint32_t alpha = 0, beta = 0;
    bool empty() const { return edges.empty(); }
};

inline bool edge_less(const Edge& a, const Edge& b) {
    return a.upper != b.upper ? a.upper < b.upper : a.lower < b.lower;
}
inline void canonical_sort(std::vector<Edge>& es) { std::sort(es.begin(), es.end(), edge_less); }

namespace detail {

template <typename Fn>
void for_each_vid(const BipartiteGraph& g, Fn&& fn) {
    for (uint32_t o = 0; o < g.upper_count(); ++o) fn(o << 1);
    for (uint32_t o = 0; o < g.lower_count(); ++o) fn((o << 1) | 1u);
}

}  // namespace detail

inline CoreSubgraph compute_abcore(const BipartiteGraph& g, uint32_t alpha, uint32_t beta) {
    if (alpha < 1 || beta < 1) throw std::invalid_argument("alpha and beta must be >= 1");
    const uint32_t nv = g.vid_limit();
    std::vector<uint32_t> deg(nv, 0);
    std::vector<char> alive(nv, 0);
    std::vector<uint32_t> queue;

    auto bound = [&](uint32_t vid) { return vid_is_lower(vid) ? beta : alpha; };
    detail::for_each_vid(g, [&](uint32_t vid) {
        deg[vid] = g.degree(vid);
        alive[vid] = 1;
        if (deg[vid] < bound(vid)) queue.push_back(vid);
    });
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t vid = queue[qi];
        if (!alive[vid]) continue;
        alive[vid] = 0;
        for (uint32_t eid : g.incident_edges(vid)) {
            uint32_t o = g.opposite_vid(eid, vid);
            if (alive[o] && --deg[o] + 1 == bound(o)) queue.push_back(o);
        }
    }

    CoreSubgraph core;
    core.in_core.assign(nv, 0);
    detail::for_each_vid(g, [&](uint32_t vid) { core.in_core[vid] = alive[vid]; });
    for (uint32_t eid = 0; eid < g.edge_count(); ++eid) {
        const Edge& e = g.edge(eid);
        if (core.in_core[vid_of({Layer::Upper, e.upper})] && core.in_core[vid_of({Layer::Lower, e.lower})])
            core.edge_ids.push_back(eid);
    }
    return core;
}

namespace detail {

// One linear pass: restrict to the core where the fixed side keeps degree
// >= level, then raise the staged side's bound one step at a time. A vertex
// removed while the staged bound is b was in the (level,b)-core but not the
// (level,b+1)-core, so its offset is b.
inline std::vector<uint32_t> staged_offsets(const BipartiteGraph& g, uint32_t level, Layer fixed) {
    const uint32_t nv = g.vid_limit();
    std::vector<uint32_t> deg(nv, 0), off(nv, 0);
    std::vector<char> alive(nv, 0);
    auto is_fixed = [&](uint32_t vid) {
        return (vid_is_lower(vid) ? Layer::Lower : Layer::Upper) == fixed;
    };

    // peel to the (level, 1)-core
    std::vector<uint32_t> queue;
    detail::for_each_vid(g, [&](uint32_t vid) {
        deg[vid] = g.degree(vid);
        alive[vid] = 1;
        if (deg[vid] < (is_fixed(vid) ? level : 1u)) queue.push_back(vid);
    });
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t vid = queue[qi];
        if (!alive[vid]) continue;
        alive[vid] = 0;
        for (uint32_t eid : g.incident_edges(vid)) {
            uint32_t o = g.opposite_vid(eid, vid);
            if (alive[o] && --deg[o] + 1 == (is_fixed(o) ? level : 1u)) queue.push_back(o);
        }
    }

    uint32_t max_deg = 0;
    uint64_t staged_alive = 0;
    detail::for_each_vid(g, [&](uint32_t vid) {
        if (alive[vid] && !is_fixed(vid)) {
            ++staged_alive;
            max_deg = std::max(max_deg, deg[vid]);
        }
    });
    std::vector<std::vector<uint32_t>> bucket(max_deg + 1);
    detail::for_each_vid(g, [&](uint32_t vid) {
        if (alive[vid] && !is_fixed(vid)) bucket[deg[vid]].push_back(vid);
    });

    std::vector<uint32_t> ready;
    auto drop_staged_degree = [&](uint32_t vid, uint32_t b) {
        // vid is staged and alive; its degree just dropped
        if (deg[vid] <= b) ready.push_back(vid);
        else bucket[deg[vid]].push_back(vid);
    };
    for (uint32_t b = 1; staged_alive > 0; ++b) {
        detail::require(b <= max_deg, "staged peel failed to converge");
        for (uint32_t vid : bucket[b]) ready.push_back(vid);
        bucket[b].clear();
        while (!ready.empty()) {
            uint32_t vid = ready.back();
            ready.pop_back();
            if (!alive[vid] || deg[vid] > b) continue;  // stale entry
            alive[vid] = 0;
            off[vid] = b;
            --staged_alive;
            for (uint32_t eid : g.incident_edges(vid)) {
                uint32_t fo = g.opposite_vid(eid, vid);
                if (!alive[fo]) continue;
                if (--deg[fo] < level) {
                    alive[fo] = 0;
                    off[fo] = b;
                    for (uint32_t eid2 : g.incident_edges(fo)) {
                        uint32_t so = g.opposite_vid(eid2, fo);
                        if (alive[so]) {
                            --deg[so];
                            drop_staged_degree(so, b);
                        }
                    }
                }
            }
        }
    }
    return off;
}

}  // namespace detail

inline OffsetTable compute_alpha_offsets(const BipartiteGraph& g, uint32_t alpha) {
    if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    return {OffsetTable::Kind::Alpha, alpha, detail::staged_offsets(g, alpha, Layer::Upper)};
}

inline OffsetTable compute_beta_offsets(const BipartiteGraph& g, uint32_t beta) {
    if (beta < 1) throw std::invalid_argument("beta must be >= 1");
    return {OffsetTable::Kind::Beta, beta, detail::staged_offsets(g, beta, Layer::Lower)};
}

namespace detail {

// Layer-agnostic core numbers (classic bin-sort decomposition).
inline std::vector<uint32_t> core_numbers(const BipartiteGraph& g) {
    std::vector<uint32_t> vids;
    detail::for_each_vid(g, [&](uint32_t vid) { vids.push_back(vid); });
    const size_t n = vids.size();
    const uint32_t nv = g.vid_limit();

    std::vector<uint32_t> deg(nv, 0), core(nv, 0);
    uint32_t md = 0;
    for (uint32_t vid : vids) {
        deg[vid] = g.degree(vid);
        md = std::max(md, deg[vid]);
    }
    std::vector<uint32_t> bin(md + 2, 0), pos(nv, 0), vert(n, 0);
    for (uint32_t vid : vids) ++bin[deg[vid]];
    uint32_t start = 0;
    for (uint32_t d = 0; d <= md; ++d) {
        uint32_t c = bin[d];
        bin[d] = start;
        start += c;
    }
    for (uint32_t vid : vids) {
        pos[vid] = bin[deg[vid]];
        vert[pos[vid]] = vid;
        ++bin[deg[vid]];
    }
    for (uint32_t d = md + 1; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    for (size_t i = 0; i < n; ++i) {
        uint32_t v = vert[i];
        core[v] = deg[v];
        for (uint32_t eid : g.incident_edges(v)) {
            uint32_t u = g.opposite_vid(eid, v);
            if (deg[u] > deg[v]) {
                uint32_t du = deg[u], pu = pos[u];
                uint32_t pw = bin[du], w = vert[pw];
                if (u != w) {
                    std::swap(vert[pu], vert[pw]);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    return core;
}

}  // namespace detail

struct DegeneracyResult {
    uint32_t delta = 0;        // largest t with a nonempty (t,t)-core
    CoreSubgraph core;         // the (delta,delta)-core
};

// delta equals the maximum core number of the layer-agnostic k-core
// decomposition: a (t,t)-core is exactly a subgraph of minimum degree t.
inline DegeneracyResult compute_degeneracy(const BipartiteGraph& g) {
    if (g.empty()) throw std::invalid_argument("degeneracy of an empty graph");
    std::vector<uint32_t> core = detail::core_numbers(g);
    DegeneracyResult r;
    detail::for_each_vid(g, [&](uint32_t vid) { r.delta = std::max(r.delta, core[vid]); });
    r.core.in_core.assign(g.vid_limit(), 0);
    detail::for_each_vid(g, [&](uint32_t vid) { r.core.in_core[vid] = core[vid] >= r.delta; });
    for (uint32_t eid = 0; eid < g.edge_count(); ++eid) {
        const Edge& e = g.edge(eid);
        if (r.core.in_core[vid_of({Layer::Upper, e.upper})] &&
            r.core.in_core[vid_of({Layer::Lower, e.lower})])
            r.core.edge_ids.push_back(eid);
    }
    return r;
}

// The online query algorithm: peel the whole graph, then BFS from q over
// surviving edges. The empty community (q peeled away) is a regular value;
// an unknown q is an error.
inline Community community_online(const BipartiteGraph& g, VertexRef q, uint32_t alpha, uint32_t beta) {
    uint32_t layer_count = q.layer == Layer::Upper ? g.upper_count() : g.lower_count();
    if (q.ordinal >= layer_count) throw DataError("unknown query vertex");
    Community c;
    c.anchor = q;
    c.alpha = alpha;
    c.beta = beta;

    CoreSubgraph core = compute_abcore(g, alpha, beta);
    uint32_t qv = vid_of(q);
    if (!core.contains(qv)) return c;

    std::vector<char> visited(g.vid_limit(), 0);
    std::vector<uint32_t> queue{qv};
    visited[qv] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t vid = queue[qi];
        bool emit = vid_is_lower(vid);
        for (uint32_t eid : g.incident_edges(vid)) {
            uint32_t o = g.opposite_vid(eid, vid);
            if (!core.in_core[o]) continue;
            if (emit) c.edges.push_back(g.edge(eid));
            if (!visited[o]) {
                visited[o] = 1;
                queue.push_back(o);
            }
        }
    }
    canonical_sort(c.edges);
    return c;
}

}  // namespace bicore
