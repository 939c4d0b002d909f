#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bicore/decomp.hpp"

namespace bicore {

struct IndexedNeighbor {
    VertexRef neighbor;
    double weight;
    uint32_t offset;
};

// One stored adjacency record. Lists are kept sorted by offset descending,
// ties broken by neighbor vid so that rebuilt and maintained indexes are
// byte-identical when serialized.
struct LevelEntry {
    uint32_t nbr_vid;
    uint32_t offset;
    double weight;
};

inline bool entry_less(const LevelEntry& a, const LevelEntry& b) {
    return a.offset != b.offset ? a.offset > b.offset : a.nbr_vid < b.nbr_vid;
}

// Offset-sorted adjacency lists of one index level, plus each member
// vertex's own offset at this level (gives the O(1) no-community answer).
class Level {
public:
    struct VertexLists {
        uint32_t own_offset = 0;
        std::vector<LevelEntry> entries;
    };

    bool contains(uint32_t vid) const { return m_.count(vid) != 0; }
    uint32_t own_offset(uint32_t vid) const { return m_.at(vid).own_offset; }
    const std::vector<LevelEntry>* list(uint32_t vid) const {
        auto it = m_.find(vid);
        return it == m_.end() ? nullptr : &it->second.entries;
    }
    std::vector<IndexedNeighbor> neighbors(uint32_t vid) const {
        std::vector<IndexedNeighbor> out;
        if (const auto* es = list(vid))
            for (const LevelEntry& e : *es)
                out.push_back({vertex_of(e.nbr_vid), e.weight, e.offset});
        return out;
    }

    size_t vertex_count() const { return m_.size(); }
    uint64_t record_count() const { return records_; }
    bool empty() const { return m_.empty(); }

    std::vector<uint32_t> sorted_vids() const {
        std::vector<uint32_t> v;
        v.reserve(m_.size());
        for (const auto& [vid, _] : m_) v.push_back(vid);
        std::sort(v.begin(), v.end());
        return v;
    }

    // --- mutation (construction and maintenance) ---

    void set_own(uint32_t vid, uint32_t off) { m_[vid].own_offset = off; }

    void erase_vertex(uint32_t vid) {
        auto it = m_.find(vid);
        if (it == m_.end()) return;
        records_ -= it->second.entries.size();
        m_.erase(it);
    }

    // Insert or reposition the (owner -> nbr) record at its canonical slot.
    void set_entry(uint32_t owner, uint32_t nbr, double weight, uint32_t offset) {
        auto& es = m_[owner].entries;
        erase_entry(owner, nbr);
        LevelEntry e{nbr, offset, weight};
        es.insert(std::lower_bound(es.begin(), es.end(), e, entry_less), e);
        ++records_;
    }

    void erase_entry(uint32_t owner, uint32_t nbr) {
        auto it = m_.find(owner);
        if (it == m_.end()) return;
        auto& es = it->second.entries;
        for (auto e = es.begin(); e != es.end(); ++e) {
            if (e->nbr_vid == nbr) {
                es.erase(e);
                --records_;
                return;
            }
        }
    }

    void insert_sorted_list(uint32_t vid, VertexLists vl) {
        records_ += vl.entries.size();
        m_[vid] = std::move(vl);
    }

    const std::unordered_map<uint32_t, VertexLists>& lists() const { return m_; }

private:
    std::unordered_map<uint32_t, VertexLists> m_;
    uint64_t records_ = 0;
};

enum class IndexVariant : uint8_t { BasicA = 0, BasicB = 1, Degeneracy = 2 };

struct Fingerprint {
    uint32_t upper_count = 0, lower_count = 0;
    uint64_t edge_count = 0;
    uint64_t content_hash = 0;

    bool matches(const BipartiteGraph& g) const {
        return upper_count == g.upper_count() && lower_count == g.lower_count() &&
               edge_count == g.edge_count() && content_hash == g.content_hash();
    }
    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

// Basic-A keeps levels 1..alpha_max of alpha-offset lists, Basic-B the
// symmetric beta side, Degeneracy keeps both families but only up to delta:
// the A part serves queries with alpha <= beta, the B part the rest.
struct CommunityIndex {
    IndexVariant variant = IndexVariant::BasicA;
    uint32_t bound = 0;  // alpha_max / beta_max / delta
    std::vector<Level> a_levels;
    std::vector<Level> b_levels;
    Fingerprint fp;
    std::vector<std::string> upper_tokens, lower_tokens;

    std::optional<VertexRef> find(std::string_view tok) const {
        if (token_maps_stale_) rebuild_token_maps();
        if (tok.empty()) return std::nullopt;
        const auto& ids = tok[0] == 'u' ? upper_ids_ : lower_ids_;
        auto it = ids.find(std::string(tok));
        if (it == ids.end()) return std::nullopt;
        return VertexRef{tok[0] == 'u' ? Layer::Upper : Layer::Lower, it->second};
    }
    const std::string& token(VertexRef v) const {
        return v.layer == Layer::Upper ? upper_tokens[v.ordinal] : lower_tokens[v.ordinal];
    }
    void invalidate_token_maps() { token_maps_stale_ = true; }

    uint64_t record_count() const {
        uint64_t n = 0;
        for (const Level& l : a_levels) n += l.record_count();
        for (const Level& l : b_levels) n += l.record_count();
        return n;
    }

    // Distinct undirected edges represented per (level, part); the quantity
    // the space bounds are stated over (a record pair u->v / v->u in the
    // same list family counts once).
    uint64_t stored_edge_instances() const {
        uint64_t n = 0;
        auto count_level = [&](const Level& l) {
            std::unordered_set<uint64_t> pairs;
            for (const auto& [vid, vl] : l.lists())
                for (const LevelEntry& e : vl.entries) {
                    uint64_t a = std::min(vid, e.nbr_vid), b = std::max(vid, e.nbr_vid);
                    pairs.insert((a << 32) | b);
                }
            n += pairs.size();
        };
        for (const Level& l : a_levels) count_level(l);
        for (const Level& l : b_levels) count_level(l);
        return n;
    }

private:
    void rebuild_token_maps() const {
        upper_ids_.clear();
        lower_ids_.clear();
        for (uint32_t i = 0; i < upper_tokens.size(); ++i) upper_ids_[upper_tokens[i]] = i;
        for (uint32_t i = 0; i < lower_tokens.size(); ++i) lower_ids_[lower_tokens[i]] = i;
        token_maps_stale_ = false;
    }
    mutable std::unordered_map<std::string, uint32_t> upper_ids_, lower_ids_;
    mutable bool token_maps_stale_ = true;
};

namespace detail {

// Levels keep a vertex iff its own offset reaches member_min; a neighbor is
// stored iff its offset clears entry_min (strictly, for the B side of the
// degeneracy index).
inline Level build_level(const BipartiteGraph& g, const OffsetTable& off, uint32_t member_min,
                         uint32_t entry_min, bool entry_strict) {
    Level lv;
    for_each_vid(g, [&](uint32_t vid) {
        uint32_t own = off.at_vid(vid);
        if (own < member_min) return;
        Level::VertexLists vl;
        vl.own_offset = own;
        for (uint32_t eid : g.incident_edges(vid)) {
            uint32_t o = g.opposite_vid(eid, vid);
            uint32_t so = off.at_vid(o);
            if (entry_strict ? so > entry_min : so >= entry_min)
                vl.entries.push_back({o, so, g.edge(eid).weight});
        }
        std::sort(vl.entries.begin(), vl.entries.end(), entry_less);
        lv.insert_sorted_list(vid, std::move(vl));
    });
    return lv;
}

inline Fingerprint fingerprint_of(const BipartiteGraph& g) {
    return {g.upper_count(), g.lower_count(), g.edge_count(), g.content_hash()};
}

inline void attach_tokens(CommunityIndex& idx, const BipartiteGraph& g) {
    idx.upper_tokens = g.upper_tokens();
    idx.lower_tokens = g.lower_tokens();
    idx.fp = fingerprint_of(g);
    idx.invalidate_token_maps();
}

inline uint32_t max_degree(const BipartiteGraph& g, Layer side) {
    uint32_t md = 0;
    uint32_t n = side == Layer::Upper ? g.upper_count() : g.lower_count();
    for (uint32_t o = 0; o < n; ++o) md = std::max(md, g.degree(VertexRef{side, o}));
    return md;
}

}  // namespace detail

inline CommunityIndex build_basic_a(const BipartiteGraph& g) {
    CommunityIndex idx;
    idx.variant = IndexVariant::BasicA;
    idx.bound = detail::max_degree(g, Layer::Upper);
    for (uint32_t a = 1; a <= idx.bound; ++a)
        idx.a_levels.push_back(detail::build_level(g, compute_alpha_offsets(g, a), 1, 1, false));
    detail::attach_tokens(idx, g);
    return idx;
}

inline CommunityIndex build_basic_b(const BipartiteGraph& g) {
    CommunityIndex idx;
    idx.variant = IndexVariant::BasicB;
    idx.bound = detail::max_degree(g, Layer::Lower);
    for (uint32_t b = 1; b <= idx.bound; ++b)
        idx.b_levels.push_back(detail::build_level(g, compute_beta_offsets(g, b), 1, 1, false));
    detail::attach_tokens(idx, g);
    return idx;
}

inline CommunityIndex build_degeneracy(const BipartiteGraph& g) {
    CommunityIndex idx;
    idx.variant = IndexVariant::Degeneracy;
    idx.bound = g.empty() ? 0 : compute_degeneracy(g).delta;
    for (uint32_t t = 1; t <= idx.bound; ++t) {
        idx.a_levels.push_back(detail::build_level(g, compute_alpha_offsets(g, t), t, t, false));
        idx.b_levels.push_back(detail::build_level(g, compute_beta_offsets(g, t), t, t, true));
    }
    detail::attach_tokens(idx, g);
    return idx;
}

struct QueryResult {
    Community community;
    uint64_t entries_read = 0;
};

// BFS over one level's offset-sorted lists. Lists break at the first entry
// below the threshold; an edge is emitted when the popped vertex is on the
// lower layer, so each community edge is reported exactly once. A query
// vertex that fails its own offset is rejected without reading any list.
inline QueryResult query_community(const CommunityIndex& idx, VertexRef q, uint32_t alpha,
                                   uint32_t beta) {
    if (alpha < 1 || beta < 1) throw std::invalid_argument("alpha and beta must be >= 1");
    uint32_t layer_count = q.layer == Layer::Upper ? idx.fp.upper_count : idx.fp.lower_count;
    if (q.ordinal >= layer_count) throw DataError("unknown query vertex");

    QueryResult r;
    r.community.anchor = q;
    r.community.alpha = alpha;
    r.community.beta = beta;

    const Level* lv = nullptr;
    uint32_t threshold = 0;
    switch (idx.variant) {
        case IndexVariant::BasicA:
            if (alpha <= idx.bound) { lv = &idx.a_levels[alpha - 1]; threshold = beta; }
            break;
        case IndexVariant::BasicB:
            if (beta <= idx.bound) { lv = &idx.b_levels[beta - 1]; threshold = alpha; }
            break;
        case IndexVariant::Degeneracy:
            if (alpha <= beta) {
                if (alpha <= idx.bound) { lv = &idx.a_levels[alpha - 1]; threshold = beta; }
            } else {
                if (beta <= idx.bound) { lv = &idx.b_levels[beta - 1]; threshold = alpha; }
            }
            break;
    }
    if (lv == nullptr) return r;  // no such level: the core is empty at these parameters

    uint32_t qv = vid_of(q);
    if (!lv->contains(qv) || lv->own_offset(qv) < threshold) return r;

    std::unordered_set<uint32_t> visited{qv};
    std::vector<uint32_t> queue{qv};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t vid = queue[qi];
        bool emit = vid_is_lower(vid);
        for (const LevelEntry& e : *lv->list(vid)) {
            ++r.entries_read;
            if (e.offset < threshold) break;
            if (emit)
                r.community.edges.push_back(
                    {vertex_of(e.nbr_vid).ordinal, vertex_of(vid).ordinal, e.weight});
            if (visited.insert(e.nbr_vid).second) queue.push_back(e.nbr_vid);
        }
    }
    canonical_sort(r.community.edges);
    return r;
}

}  // namespace bicore
