#pragma once

// Reference implementations used only by tests: definition-level fixpoints
// and exhaustive searches. They share the graph data types with the library
// but none of its algorithm paths.

#include <bit>
#include <random>
#include <set>

#include "bicore/graph.hpp"

namespace oracle {

using namespace bicore;

// Iterated deletion straight from the definition: recompute degrees, delete
// one deficient vertex at a time. The deletion order is arbitrary (random
// when a generator is supplied); the fixpoint is order-independent.
inline std::vector<char> abcore_mask(const BipartiteGraph& g, uint32_t alpha, uint32_t beta,
                                     std::mt19937_64* order_rng = nullptr) {
    std::vector<char> alive(g.vid_limit(), 0);
    for (uint32_t o = 0; o < g.upper_count(); ++o) alive[o << 1] = 1;
    for (uint32_t o = 0; o < g.lower_count(); ++o) alive[(o << 1) | 1] = 1;

    for (;;) {
        std::vector<uint32_t> deg(g.vid_limit(), 0);
        for (const Edge& e : g.edges()) {
            uint32_t uv = vid_of({Layer::Upper, e.upper}), lv = vid_of({Layer::Lower, e.lower});
            if (alive[uv] && alive[lv]) {
                ++deg[uv];
                ++deg[lv];
            }
        }
        std::vector<uint32_t> deficient;
        for (uint32_t vid = 0; vid < g.vid_limit(); ++vid)
            if (alive[vid] && deg[vid] < (vid_is_lower(vid) ? beta : alpha)) deficient.push_back(vid);
        if (deficient.empty()) return alive;
        uint32_t pick = order_rng ? deficient[(*order_rng)() % deficient.size()] : deficient.front();
        alive[pick] = 0;
    }
}

inline std::vector<Edge> abcore_edges(const BipartiteGraph& g, uint32_t alpha, uint32_t beta,
                                      std::mt19937_64* order_rng = nullptr) {
    std::vector<char> alive = abcore_mask(g, alpha, beta, order_rng);
    std::vector<Edge> out;
    for (const Edge& e : g.edges())
        if (alive[vid_of({Layer::Upper, e.upper})] && alive[vid_of({Layer::Lower, e.lower})])
            out.push_back(e);
    canonical_sort(out);
    return out;
}

inline bool in_abcore(const BipartiteGraph& g, VertexRef v, uint32_t alpha, uint32_t beta) {
    return abcore_mask(g, alpha, beta)[vid_of(v)] != 0;
}

// Def.-level alpha-offset: the largest beta whose (alpha,beta)-core holds v.
inline uint32_t alpha_offset(const BipartiteGraph& g, VertexRef v, uint32_t alpha) {
    for (uint32_t beta = 1;; ++beta)
        if (!in_abcore(g, v, alpha, beta)) return beta - 1;
}

inline uint32_t beta_offset(const BipartiteGraph& g, VertexRef v, uint32_t beta) {
    for (uint32_t alpha = 1;; ++alpha)
        if (!in_abcore(g, v, alpha, beta)) return alpha - 1;
}

inline uint32_t degeneracy(const BipartiteGraph& g) {
    for (uint32_t t = 1;; ++t) {
        std::vector<char> mask = abcore_mask(g, t, t);
        bool nonempty = false;
        for (char c : mask) nonempty |= (c != 0);
        if (!nonempty) return t - 1;
    }
}

inline std::vector<Edge> community(const BipartiteGraph& g, VertexRef q, uint32_t alpha,
                                   uint32_t beta) {
    std::vector<char> mask = abcore_mask(g, alpha, beta);
    uint32_t qv = vid_of(q);
    std::vector<Edge> out;
    if (qv >= mask.size() || !mask[qv]) return out;
    std::vector<char> seen(g.vid_limit(), 0);
    std::vector<uint32_t> queue{qv};
    seen[qv] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t vid = queue[qi];
        for (uint32_t eid : g.incident_edges(vid)) {
            uint32_t o = g.opposite_vid(eid, vid);
            if (!mask[o]) continue;
            if (vid_is_lower(vid)) out.push_back(g.edge(eid));
            if (!seen[o]) {
                seen[o] = 1;
                queue.push_back(o);
            }
        }
    }
    canonical_sort(out);
    return out;
}

struct SigOracle {
    bool found = false;
    double f = 0.0;
    std::vector<Edge> edges;
};

// Exhaustive search over every vertex subset containing q and every weight
// threshold: a qualifying connected subgraph with minimum weight w always has
// an induced weight->=w witness on its vertex set, so this enumerates the
// optimum f and, as the union of all optimal witnesses, the unique maximal
// edge set achieving it.
inline SigOracle significant(const BipartiteGraph& g, VertexRef q, uint32_t alpha, uint32_t beta) {
    std::vector<uint32_t> vids;
    for (uint32_t o = 0; o < g.upper_count(); ++o) vids.push_back(o << 1);
    for (uint32_t o = 0; o < g.lower_count(); ++o) vids.push_back((o << 1) | 1u);
    const size_t n = vids.size();
    if (n > 22) throw std::runtime_error("exhaustive sig oracle limited to tiny graphs");

    std::vector<uint32_t> bit_of(g.vid_limit(), 0);
    for (size_t i = 0; i < n; ++i) bit_of[vids[i]] = static_cast<uint32_t>(i);
    const uint32_t qbit = bit_of[vid_of(q)];
    const uint32_t qneed = q.layer == Layer::Upper ? alpha : beta;
    if (g.degree(vid_of(q)) < qneed) return {};

    const auto& edges = g.edges();
    const size_t m = edges.size();
    std::vector<uint32_t> order(m);
    for (size_t i = 0; i < m; ++i) order[i] = static_cast<uint32_t>(i);
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return edges[a].weight > edges[b].weight; });
    std::vector<uint32_t> ubit(m), vbit(m);
    for (size_t i = 0; i < m; ++i) {
        ubit[i] = bit_of[vid_of({Layer::Upper, edges[i].upper})];
        vbit[i] = bit_of[vid_of({Layer::Lower, edges[i].lower})];
    }

    std::vector<uint32_t> parent(n), csize(n), deg(n);
    auto find = [&](uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    double best_f = -1.0;
    std::set<uint32_t> best_union;

    for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
        if (!((mask >> qbit) & 1ull)) continue;
        const uint32_t sz = static_cast<uint32_t>(std::popcount(mask));
        for (size_t i = 0; i < n; ++i) {
            parent[i] = static_cast<uint32_t>(i);
            csize[i] = 1;
            deg[i] = 0;
        }
        uint32_t deficient = sz;

        size_t ei = 0;
        bool ok = false;
        double f_s = 0.0;
        while (ei < m && !ok) {
            double w = edges[order[ei]].weight;
            bool any = false;
            for (; ei < m && edges[order[ei]].weight == w; ++ei) {
                uint32_t e = order[ei];
                uint32_t ub = ubit[e], vb = vbit[e];
                if (!((mask >> ub) & 1ull) || !((mask >> vb) & 1ull)) continue;
                any = true;
                if (++deg[ub] == alpha) --deficient;
                if (++deg[vb] == beta) --deficient;
                uint32_t ra = find(ub), rb = find(vb);
                if (ra != rb) {
                    if (csize[ra] < csize[rb]) std::swap(ra, rb);
                    parent[rb] = ra;
                    csize[ra] += csize[rb];
                }
            }
            if (any && deficient == 0 && csize[find(qbit)] == sz) {
                ok = true;
                f_s = w;
            }
        }
        if (!ok) continue;
        if (f_s > best_f) {
            best_f = f_s;
            best_union.clear();
        }
        if (f_s == best_f) {
            for (size_t i = 0; i < m; ++i)
                if (edges[i].weight >= best_f && ((mask >> ubit[i]) & 1ull) &&
                    ((mask >> vbit[i]) & 1ull))
                    best_union.insert(static_cast<uint32_t>(i));
        }
    }

    if (best_f < 0.0) return {};
    SigOracle out;
    out.found = true;
    out.f = best_f;
    for (uint32_t ei : best_union) out.edges.push_back(edges[ei]);
    canonical_sort(out.edges);
    return out;
}

}  // namespace oracle
