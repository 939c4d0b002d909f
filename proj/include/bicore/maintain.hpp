#pragma once

#include "bicore/index.hpp"

namespace bicore {

// One level+side slice of a maintenance step. `affected_vids` is the declared
// affected set: every vertex whose materialized offset at this level changed
// is inside it. A degeneracy level only materializes offsets >= level (other
// vertices have no entry), so `new_offsets` reports such values, with 0
// standing for "dropped below the level".
struct UpdateScope {
    uint32_t level = 0;
    OffsetTable::Kind kind = OffsetTable::Kind::Alpha;
    std::vector<uint32_t> affected_vids;
    std::vector<std::pair<uint32_t, uint32_t>> new_offsets;
};

namespace detail {

// Staged peel restricted to a region. The region is neighborhood-closed with
// respect to core membership (every core vertex adjacent to it is inside it),
// so vertices outside contribute nothing and the peel runs purely on the
// region-induced subgraph. Starts from the (t,t)-core; returned offsets are
// >= t for surviving vertices and 0 for the rest.
inline std::unordered_map<uint32_t, uint32_t> region_offsets(const BipartiteGraph& g,
                                                             const std::vector<uint32_t>& region,
                                                             uint32_t t, Layer fixed) {
    const uint32_t n = static_cast<uint32_t>(region.size());
    std::unordered_map<uint32_t, uint32_t> local;
    local.reserve(n);
    for (uint32_t i = 0; i < n; ++i) local.emplace(region[i], i);

    std::vector<std::vector<uint32_t>> adj(n);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t eid : g.incident_edges(region[i])) {
            auto it = local.find(g.opposite_vid(eid, region[i]));
            if (it != local.end()) adj[i].push_back(it->second);
        }

    std::vector<uint32_t> deg(n), off(n, 0);
    std::vector<char> alive(n, 1);
    for (uint32_t i = 0; i < n; ++i) deg[i] = static_cast<uint32_t>(adj[i].size());

    // peel to the (t,t)-core
    std::vector<uint32_t> queue;
    for (uint32_t i = 0; i < n; ++i)
        if (deg[i] < t) queue.push_back(i);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t v = queue[qi];
        if (!alive[v]) continue;
        alive[v] = 0;
        for (uint32_t o : adj[v])
            if (alive[o] && --deg[o] + 1 == t) queue.push_back(o);
    }

    auto is_staged = [&](uint32_t i) {
        Layer l = vid_is_lower(region[i]) ? Layer::Lower : Layer::Upper;
        return l != fixed;
    };
    uint32_t max_deg = 0;
    uint64_t staged_alive = 0;
    for (uint32_t i = 0; i < n; ++i)
        if (alive[i] && is_staged(i)) {
            ++staged_alive;
            max_deg = std::max(max_deg, deg[i]);
        }
    std::vector<std::vector<uint32_t>> bucket(max_deg + 1);
    for (uint32_t i = 0; i < n; ++i)
        if (alive[i] && is_staged(i)) bucket[deg[i]].push_back(i);

    std::vector<uint32_t> ready;
    for (uint32_t b = t; staged_alive > 0; ++b) {
        require(b <= max_deg, "region peel failed to converge");
        for (uint32_t v : bucket[b]) ready.push_back(v);
        bucket[b].clear();
        while (!ready.empty()) {
            uint32_t v = ready.back();
            ready.pop_back();
            if (!alive[v] || deg[v] > b) continue;
            alive[v] = 0;
            off[v] = b;
            --staged_alive;
            for (uint32_t fo : adj[v]) {
                if (!alive[fo]) continue;
                if (--deg[fo] < t) {
                    alive[fo] = 0;
                    off[fo] = b;
                    for (uint32_t so : adj[fo])
                        if (alive[so]) {
                            --deg[so];
                            if (deg[so] <= b) ready.push_back(so);
                            else bucket[deg[so]].push_back(so);
                        }
                }
            }
        }
    }

    std::unordered_map<uint32_t, uint32_t> out;
    out.reserve(n);
    for (uint32_t i = 0; i < n; ++i) out.emplace(region[i], off[i]);
    return out;
}

// Recompute one level after an edge flip. Returns false when the level cannot
// be affected (an offset change at level t needs a witness core containing the
// flipped edge, which requires both endpoints in the new/old (t,t)-core).
inline bool update_level(CommunityIndex& idx, const BipartiteGraph& g, uint32_t t, VertexRef u,
                         VertexRef v, double edge_weight, bool inserting,
                         std::vector<UpdateScope>& scopes) {
    Level& la = idx.a_levels[t - 1];
    Level& lb = idx.b_levels[t - 1];
    const uint32_t u_vid = vid_of(u), v_vid = vid_of(v);

    auto pred = [&](uint32_t vid) {
        return la.contains(vid) || (inserting && g.degree(vid) >= t);
    };
    if (!pred(u_vid) || !pred(v_vid)) return false;

    std::vector<uint32_t> region;
    std::unordered_set<uint32_t> in_region;
    auto push = [&](uint32_t vid) {
        if (pred(vid) && in_region.insert(vid).second) region.push_back(vid);
    };
    push(u_vid);
    push(v_vid);
    for (size_t qi = 0; qi < region.size(); ++qi)
        for (uint32_t eid : g.incident_edges(region[qi]))
            push(g.opposite_vid(eid, region[qi]));

    auto offA = region_offsets(g, region, t, Layer::Upper);
    auto offB = region_offsets(g, region, t, Layer::Lower);

    // Snapshot the old materialized values before touching the levels: entry
    // fixes for one vertex may create or drop map slots of a neighbor that is
    // still waiting for its own pass.
    std::unordered_map<uint32_t, std::pair<uint32_t, uint32_t>> old_vals;  // vid -> (a, b), 0 = absent
    for (uint32_t vid : region) {
        uint32_t oa = la.contains(vid) ? la.own_offset(vid) : 0u;
        uint32_t ob = lb.contains(vid) ? lb.own_offset(vid) : 0u;
        old_vals.emplace(vid, std::make_pair(oa, ob));
    }
    auto old_val = [&](const Level& l, uint32_t vid) {
        auto it = old_vals.find(vid);
        if (it != old_vals.end()) return &l == &la ? it->second.first : it->second.second;
        return l.contains(vid) ? l.own_offset(vid) : 0u;
    };
    auto member_after = [&](uint32_t vid) {
        auto it = offA.find(vid);
        return it != offA.end() ? it->second >= t : la.contains(vid);
    };

    UpdateScope sa{t, OffsetTable::Kind::Alpha, region, {}};
    UpdateScope sb{t, OffsetTable::Kind::Beta, region, {}};

    for (uint32_t vid : region) {
        uint32_t oa = old_vals.at(vid).first, na = offA.at(vid);
        uint32_t ob = old_vals.at(vid).second, nb = offB.at(vid);
        bool was_member = oa >= t;
        bool is_member = na >= t;
        if (na != oa) sa.new_offsets.emplace_back(vid, na);
        if (nb != ob) sb.new_offsets.emplace_back(vid, nb);
        if (is_member) {
            la.set_own(vid, na);
            lb.set_own(vid, nb);
        } else if (was_member) {
            la.erase_vertex(vid);
            lb.erase_vertex(vid);
        }
        if (na == oa && nb == ob && was_member == is_member) continue;

        // reposition this vertex inside every core neighbor's lists
        for (uint32_t eid : g.incident_edges(vid)) {
            uint32_t o = g.opposite_vid(eid, vid);
            if (!member_after(o)) continue;
            double w = g.edge(eid).weight;
            if (na >= t) la.set_entry(o, vid, w, na);
            else la.erase_entry(o, vid);
            if (nb > t) lb.set_entry(o, vid, w, nb);
            else lb.erase_entry(o, vid);
        }
        // a vertex entering the core brings its own lists with it
        if (is_member && !was_member) {
            for (uint32_t eid : g.incident_edges(vid)) {
                uint32_t o = g.opposite_vid(eid, vid);
                auto ita = offA.find(o);
                uint32_t ooa = ita != offA.end() ? ita->second : old_val(la, o);
                auto itb = offB.find(o);
                uint32_t oob = itb != offB.end() ? itb->second : old_val(lb, o);
                double w = g.edge(eid).weight;
                if (ooa >= t) la.set_entry(vid, o, w, ooa);
                if (oob > t) lb.set_entry(vid, o, w, oob);
            }
        }
    }

    // the flipped edge's own records: endpoint offsets may be unchanged while
    // the adjacency is not
    if (inserting) {
        uint32_t ua = offA.at(u_vid), ub = offB.at(u_vid);
        uint32_t va = offA.at(v_vid), vb = offB.at(v_vid);
        if (va >= t) {  // v in core: u's record inside v's lists
            if (ua >= t) la.set_entry(v_vid, u_vid, edge_weight, ua);
            if (ub > t) lb.set_entry(v_vid, u_vid, edge_weight, ub);
        }
        if (ua >= t) {
            if (va >= t) la.set_entry(u_vid, v_vid, edge_weight, va);
            if (vb > t) lb.set_entry(u_vid, v_vid, edge_weight, vb);
        }
    } else {
        la.erase_entry(u_vid, v_vid);
        la.erase_entry(v_vid, u_vid);
        lb.erase_entry(u_vid, v_vid);
        lb.erase_entry(v_vid, u_vid);
    }

    scopes.push_back(std::move(sa));
    scopes.push_back(std::move(sb));
    return true;
}

inline void check_maintainable(const CommunityIndex& idx, const BipartiteGraph& g) {
    if (idx.variant != IndexVariant::Degeneracy)
        throw std::invalid_argument("incremental maintenance targets the degeneracy index");
    if (!idx.fp.matches(g)) throw DataError("stale index: fingerprint does not match the graph");
}

inline VertexRef intern_checked(BipartiteGraph& g, Layer layer, std::string_view tok) {
    if (tok.empty() || tok[0] != (layer == Layer::Upper ? 'u' : 'v'))
        throw DataError("vertex token must carry its layer prefix: " + std::string(tok));
    return g.intern(layer, tok);
}

}  // namespace detail

// Insert one edge and repair the degeneracy index in place. Unknown endpoint
// tokens create fresh degree-1 vertices. If the insertion opens a new
// (delta+1, delta+1)-core, that level is built from scratch.
inline std::vector<UpdateScope> insert_edge(CommunityIndex& idx, BipartiteGraph& g,
                                            std::string_view utok, std::string_view vtok,
                                            double weight) {
    detail::check_maintainable(idx, g);
    VertexRef u = detail::intern_checked(g, Layer::Upper, utok);
    VertexRef v = detail::intern_checked(g, Layer::Lower, vtok);
    if (g.has_edge(u, v)) throw DataError("duplicate edge " + std::string(utok) + " " + std::string(vtok));
    g.add_edge(u, v, weight);

    std::vector<UpdateScope> scopes;
    for (uint32_t t = 1; t <= idx.bound; ++t)
        detail::update_level(idx, g, t, u, v, weight, true, scopes);

    uint32_t nd = idx.bound + 1;
    if (g.degree(u) >= nd && g.degree(v) >= nd) {  // a deeper core must contain the new edge
        OffsetTable offA = compute_alpha_offsets(g, nd);
        bool nonempty = false;
        detail::for_each_vid(g, [&](uint32_t vid) { nonempty |= offA.at_vid(vid) >= nd; });
        if (nonempty) {
            idx.a_levels.push_back(detail::build_level(g, offA, nd, nd, false));
            idx.b_levels.push_back(detail::build_level(g, compute_beta_offsets(g, nd), nd, nd, true));
            idx.bound = nd;
        }
    }
    detail::attach_tokens(idx, g);
    return scopes;
}

// Remove one edge and repair the index. A vertex stranded at degree zero
// leaves every level but keeps its token and ordinal. When the top core
// empties, the level is dropped and delta decremented.
inline std::vector<UpdateScope> delete_edge(CommunityIndex& idx, BipartiteGraph& g,
                                            std::string_view utok, std::string_view vtok) {
    detail::check_maintainable(idx, g);
    auto u = g.find(utok), v = g.find(vtok);
    if (!u || !v) throw DataError("unknown vertex in deletion");
    auto eid = g.edge_id(*u, *v);
    if (!eid) throw DataError("edge not present: " + std::string(utok) + " " + std::string(vtok));
    double w = g.edge(*eid).weight;
    g.remove_edge(*u, *v);

    std::vector<UpdateScope> scopes;
    for (uint32_t t = 1; t <= idx.bound; ++t)
        detail::update_level(idx, g, t, *u, *v, w, false, scopes);

    uint32_t drops = 0;
    while (idx.bound > 0 && idx.a_levels.back().empty()) {
        idx.a_levels.pop_back();
        idx.b_levels.pop_back();
        --idx.bound;
        ++drops;
    }
    detail::require(drops <= 1, "a single deletion lowered delta by more than one");
    detail::attach_tokens(idx, g);
    return scopes;
}

}  // namespace bicore
