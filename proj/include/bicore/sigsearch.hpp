#pragma once

#include <optional>
#include <span>

#include "bicore/index.hpp"

namespace bicore {

struct SignificantCommunity {
    std::vector<Edge> edges;  // canonical (upper, lower) order
    VertexRef anchor{};
    uint32_t alpha = 0, beta = 0;
    double significance = 0.0;  // f: the minimum edge weight in the set
};

// Work counters shared by the search algorithms. community_reads counts index
// entries read while fetching the candidate set, edges_streamed the union-find
// insertions, peel_edge_visits the edge visits inside peels, prunes and
// extractions. edges_touched() is the sum, instrumented identically across
// algorithms so their search volumes are comparable.
struct SearchStats {
    uint64_t community_reads = 0;
    uint64_t edges_streamed = 0;
    uint64_t peel_edge_visits = 0;
    uint64_t validations = 0;
    uint64_t probes = 0;
    uint64_t bounds_rejections = 0;
    uint64_t audit_failures = 0;

    uint64_t edges_touched() const { return community_reads + edges_streamed + peel_edge_visits; }
};

struct ExpandOptions {
    double epsilon = 2.0;      // validation size gate; must be > 1
    bool audit_bounds = false; // verify the pruning-bound contrapositive on every rejection
};

// Union-find over the streamed edge universe with per-component counters:
// edge/vertex counts plus how many vertices of each layer already clear
// their degree bound, so the pruning bounds evaluate in O(1). Component
// edge lists are merged smaller-into-larger for cheap extraction.
class ComponentTracker {
public:
    ComponentTracker(uint32_t alpha, uint32_t beta) : alpha_(alpha), beta_(beta) {}

    struct Counters {
        uint64_t edges = 0;
        uint32_t uppers = 0, lowers = 0;
        uint32_t qual_upper = 0, qual_lower = 0;  // vertices at/above their layer bound
    };

    void add_edge(const Edge& e) {
        uint32_t lu = ensure(vid_of({Layer::Upper, e.upper}));
        uint32_t lv = ensure(vid_of({Layer::Lower, e.lower}));
        if (++deg_[lu] == alpha_) ++agg_[find(lu)].qual_upper;
        if (++deg_[lv] == beta_) ++agg_[find(lv)].qual_lower;
        uint32_t r = unite(lu, lv);
        ++agg_[r].edges;
        edges_[r].push_back(e);
    }

    bool has(uint32_t vid) const { return local_.count(vid) != 0; }

    uint64_t component_edge_count(uint32_t vid) {
        auto it = local_.find(vid);
        return it == local_.end() ? 0 : agg_[find(it->second)].edges;
    }

    Counters counters(uint32_t vid) {
        auto it = local_.find(vid);
        return it == local_.end() ? Counters{} : agg_[find(it->second)];
    }

    const std::vector<Edge>& component_edges(uint32_t vid) {
        static const std::vector<Edge> kEmpty;
        auto it = local_.find(vid);
        return it == local_.end() ? kEmpty : edges_[find(it->second)];
    }

    uint32_t degree(uint32_t vid) const {
        auto it = local_.find(vid);
        return it == local_.end() ? 0 : deg_[it->second];
    }

    // Necessary conditions for the target community to be inside q's current
    // component: the edge-surplus inequality, per-layer counts of vertices
    // already meeting their degree bound, and q meeting its own. Sound: a
    // false never rejects a component that already contains the answer.
    bool bounds_check(VertexRef q, uint32_t alpha, uint32_t beta) {
        detail::require(alpha == alpha_ && beta == beta_,
                        "bounds_check called with mismatched degree bounds");
        auto it = local_.find(vid_of(q));
        if (it == local_.end()) return false;
        const Counters& c = agg_[find(it->second)];
        int64_t lhs = static_cast<int64_t>(alpha) * beta - alpha - beta;
        int64_t rhs = static_cast<int64_t>(c.edges) - c.uppers - c.lowers;
        if (lhs > rhs) return false;
        if (c.qual_lower < alpha || c.qual_upper < beta) return false;
        uint32_t need = q.layer == Layer::Upper ? alpha : beta;
        return deg_[it->second] >= need;
    }

private:
    uint32_t ensure(uint32_t vid) {
        auto it = local_.find(vid);
        if (it != local_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(parent_.size());
        local_.emplace(vid, id);
        parent_.push_back(id);
        rank_.push_back(0);
        deg_.push_back(0);
        Counters c;
        (vid_is_lower(vid) ? c.lowers : c.uppers) = 1;
        agg_.push_back(c);
        edges_.emplace_back();
        return id;
    }

    uint32_t find(uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    uint32_t unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        if (rank_[a] == rank_[b]) ++rank_[a];
        parent_[b] = a;
        agg_[a].edges += agg_[b].edges;
        agg_[a].uppers += agg_[b].uppers;
        agg_[a].lowers += agg_[b].lowers;
        agg_[a].qual_upper += agg_[b].qual_upper;
        agg_[a].qual_lower += agg_[b].qual_lower;
        if (edges_[a].size() < edges_[b].size()) edges_[a].swap(edges_[b]);
        edges_[a].insert(edges_[a].end(), edges_[b].begin(), edges_[b].end());
        edges_[b].clear();
        edges_[b].shrink_to_fit();
        return a;
    }

    uint32_t alpha_, beta_;
    std::unordered_map<uint32_t, uint32_t> local_;
    std::vector<uint32_t> parent_, rank_, deg_;
    std::vector<Counters> agg_;
    std::vector<std::vector<Edge>> edges_;
};

namespace detail {

struct LocalGraph {
    std::vector<Edge> edges;
    std::unordered_map<uint32_t, uint32_t> local;  // vid -> local id
    std::vector<uint32_t> vids;                    // local id -> vid
    std::vector<std::vector<uint32_t>> inc;        // local id -> edge indices
    std::vector<uint32_t> deg;
    std::vector<char> edge_alive, vert_alive;

    explicit LocalGraph(std::vector<Edge> es) : edges(std::move(es)) {
        auto intern = [&](uint32_t vid) {
            auto it = local.find(vid);
            if (it != local.end()) return it->second;
            uint32_t id = static_cast<uint32_t>(vids.size());
            local.emplace(vid, id);
            vids.push_back(vid);
            inc.emplace_back();
            deg.push_back(0);
            vert_alive.push_back(1);
            return id;
        };
        edge_alive.assign(edges.size(), 1);
        for (uint32_t ei = 0; ei < edges.size(); ++ei) {
            uint32_t lu = intern(vid_of({Layer::Upper, edges[ei].upper}));
            uint32_t lv = intern(vid_of({Layer::Lower, edges[ei].lower}));
            inc[lu].push_back(ei);
            inc[lv].push_back(ei);
            ++deg[lu];
            ++deg[lv];
        }
    }

    uint32_t endpoint(uint32_t ei, bool lower) const {
        const Edge& e = edges[ei];
        return local.at(lower ? vid_of({Layer::Lower, e.lower}) : vid_of({Layer::Upper, e.upper}));
    }
};

// Iteratively drop vertices below their layer bound; returns surviving edges.
inline std::vector<Edge> prune_to_core_edges(std::span<const Edge> snapshot, uint32_t alpha,
                                             uint32_t beta, SearchStats* st) {
    LocalGraph lg(std::vector<Edge>(snapshot.begin(), snapshot.end()));
    if (st) st->peel_edge_visits += lg.edges.size();
    auto bound = [&](uint32_t loc) { return vid_is_lower(lg.vids[loc]) ? beta : alpha; };
    std::vector<uint32_t> queue;
    for (uint32_t v = 0; v < lg.vids.size(); ++v)
        if (lg.deg[v] < bound(v)) queue.push_back(v);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t v = queue[qi];
        if (!lg.vert_alive[v]) continue;
        lg.vert_alive[v] = 0;
        for (uint32_t ei : lg.inc[v]) {
            if (!lg.edge_alive[ei]) continue;
            lg.edge_alive[ei] = 0;
            if (st) ++st->peel_edge_visits;
            uint32_t other = lg.endpoint(ei, !vid_is_lower(lg.vids[v]));
            if (lg.vert_alive[other] && --lg.deg[other] + 1 == bound(other)) queue.push_back(other);
        }
    }
    std::vector<Edge> out;
    for (uint32_t ei = 0; ei < lg.edges.size(); ++ei)
        if (lg.edge_alive[ei]) out.push_back(lg.edges[ei]);
    return out;
}

// Connected component of q within the given edges; empty when q is absent.
inline std::vector<Edge> component_of(std::span<const Edge> edges, VertexRef q, SearchStats* st) {
    LocalGraph lg(std::vector<Edge>(edges.begin(), edges.end()));
    auto it = lg.local.find(vid_of(q));
    if (it == lg.local.end()) return {};
    std::vector<char> seen(lg.vids.size(), 0);
    std::vector<char> taken(lg.edges.size(), 0);
    std::vector<uint32_t> queue{it->second};
    seen[it->second] = 1;
    std::vector<Edge> out;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t v = queue[qi];
        for (uint32_t ei : lg.inc[v]) {
            if (st) ++st->peel_edge_visits;
            if (!taken[ei]) {
                taken[ei] = 1;
                out.push_back(lg.edges[ei]);
            }
            uint32_t other = lg.endpoint(ei, !vid_is_lower(lg.vids[v]));
            if (!seen[other]) {
                seen[other] = 1;
                queue.push_back(other);
            }
        }
    }
    return out;
}

inline SignificantCommunity make_significant(std::vector<Edge> edges, VertexRef q, uint32_t alpha,
                                             uint32_t beta) {
    require(!edges.empty(), "significant community must be nonempty");
    canonical_sort(edges);
    double f = edges.front().weight;
    for (const Edge& e : edges) f = std::min(f, e.weight);
    return {std::move(edges), q, alpha, beta, f};
}

inline bool all_weights_equal(std::span<const Edge> edges) {
    for (const Edge& e : edges)
        if (e.weight != edges.front().weight) return false;
    return true;
}

// The peeling core: strip whole minimum-weight classes and cascade vertices
// that fall below their bound; the instant q goes deficient, the graph as of
// this iteration's start (removed-set plus remainder) holds the answer:
// drop deficient vertices there and take q's component.
inline std::optional<SignificantCommunity> peel_on_community(std::vector<Edge> community,
                                                             VertexRef q, uint32_t alpha,
                                                             uint32_t beta, SearchStats* st) {
    if (community.empty()) return std::nullopt;
    if (all_weights_equal(community)) return make_significant(std::move(community), q, alpha, beta);

    LocalGraph lg(std::move(community));
    const uint32_t qloc = lg.local.at(vid_of(q));
    auto bound = [&](uint32_t loc) { return vid_is_lower(lg.vids[loc]) ? beta : alpha; };

    std::vector<uint32_t> order(lg.edges.size());
    for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return lg.edges[a].weight < lg.edges[b].weight; });

    std::vector<uint32_t> removed_now;  // S: edges removed in the current iteration
    std::vector<uint32_t> cascade;
    bool q_failed = false;

    auto remove_edge = [&](uint32_t ei) {
        lg.edge_alive[ei] = 0;
        removed_now.push_back(ei);
        if (st) ++st->peel_edge_visits;
        for (int side = 0; side < 2; ++side) {
            uint32_t loc = lg.endpoint(ei, side == 1);
            if (!lg.vert_alive[loc]) continue;
            uint32_t d = --lg.deg[loc];
            if (d + 1 == bound(loc)) {
                if (loc == qloc) q_failed = true;
                else cascade.push_back(loc);
            }
        }
    };

    size_t oi = 0;
    while (oi < order.size() && !q_failed) {
        while (oi < order.size() && !lg.edge_alive[order[oi]]) ++oi;
        if (oi == order.size()) break;
        removed_now.clear();
        cascade.clear();
        double wmin = lg.edges[order[oi]].weight;

        for (; oi < order.size() && lg.edges[order[oi]].weight == wmin && !q_failed; ++oi)
            if (lg.edge_alive[order[oi]]) remove_edge(order[oi]);

        while (!cascade.empty() && !q_failed) {
            uint32_t v = cascade.back();
            cascade.pop_back();
            if (!lg.vert_alive[v]) continue;
            lg.vert_alive[v] = 0;
            for (uint32_t ei : lg.inc[v]) {
                if (!lg.edge_alive[ei]) continue;
                remove_edge(ei);
                if (q_failed) break;
            }
        }
    }
    require(q_failed, "peeling exhausted the community without dislodging the anchor");

    std::vector<Edge> gprime;
    for (uint32_t ei : removed_now) gprime.push_back(lg.edges[ei]);
    for (uint32_t ei = 0; ei < lg.edges.size(); ++ei)
        if (lg.edge_alive[ei]) gprime.push_back(lg.edges[ei]);

    std::vector<Edge> core = prune_to_core_edges(gprime, alpha, beta, st);
    std::vector<Edge> comp = component_of(core, q, st);
    require(!comp.empty(), "peel recovery lost the anchor");
    return make_significant(std::move(comp), q, alpha, beta);
}

// Stream edges by non-increasing weight into the tracker (whole equal-weight
// class per step); validate q's component only when it changed, the pruning
// bounds pass and the epsilon size gate opens. A final mandatory validation
// covers streams that end below the gate.
inline std::optional<SignificantCommunity> expand_stream(std::vector<Edge> stream, VertexRef q,
                                                         uint32_t alpha, uint32_t beta,
                                                         const ExpandOptions& opt,
                                                         SearchStats* st) {
    if (!(opt.epsilon > 1.0)) throw std::invalid_argument("epsilon must be > 1");
    std::sort(stream.begin(), stream.end(),
              [](const Edge& a, const Edge& b) { return a.weight > b.weight; });

    ComponentTracker tracker(alpha, beta);
    const uint32_t qv = vid_of(q);
    uint64_t pre_size = 0, last_size = 0;

    auto validate = [&](std::span<const Edge> snapshot) -> std::optional<SignificantCommunity> {
        if (st) ++st->validations;
        std::vector<Edge> core = prune_to_core_edges(snapshot, alpha, beta, st);
        std::vector<Edge> comp = component_of(core, q, st);
        if (comp.empty()) return std::nullopt;
        return peel_on_community(std::move(comp), q, alpha, beta, st);
    };

    size_t i = 0;
    while (i < stream.size()) {
        double wmax = stream[i].weight;
        for (; i < stream.size() && stream[i].weight == wmax; ++i) {
            tracker.add_edge(stream[i]);
            if (st) ++st->edges_streamed;
        }
        uint64_t cur = tracker.component_edge_count(qv);
        if (cur == last_size) continue;
        last_size = cur;
        if (!tracker.bounds_check(q, alpha, beta)) {
            if (st) ++st->bounds_rejections;
            if (opt.audit_bounds && st) {
                std::vector<Edge> core =
                    prune_to_core_edges(tracker.component_edges(qv), alpha, beta, nullptr);
                if (!component_of(core, q, nullptr).empty()) ++st->audit_failures;
            }
            continue;
        }
        if (static_cast<double>(cur) >= static_cast<double>(pre_size) * opt.epsilon)
            pre_size = cur;
        else
            continue;
        if (auto sc = validate(tracker.component_edges(qv))) return sc;
    }
    if (!tracker.has(qv)) return std::nullopt;
    return validate(tracker.component_edges(qv));
}

}  // namespace detail

inline std::optional<SignificantCommunity> peel_significant(const CommunityIndex& idx, VertexRef q,
                                                            uint32_t alpha, uint32_t beta,
                                                            SearchStats* st = nullptr) {
    QueryResult qr = query_community(idx, q, alpha, beta);
    if (st) st->community_reads += qr.entries_read;
    if (qr.community.empty()) return std::nullopt;
    return detail::peel_on_community(std::move(qr.community.edges), q, alpha, beta, st);
}

inline std::optional<SignificantCommunity> expand_significant(const CommunityIndex& idx,
                                                              VertexRef q, uint32_t alpha,
                                                              uint32_t beta,
                                                              const ExpandOptions& opt = {},
                                                              SearchStats* st = nullptr) {
    QueryResult qr = query_community(idx, q, alpha, beta);
    if (st) st->community_reads += qr.entries_read;
    if (qr.community.empty()) return std::nullopt;
    if (detail::all_weights_equal(qr.community.edges))
        return detail::make_significant(std::move(qr.community.edges), q, alpha, beta);
    return detail::expand_stream(std::move(qr.community.edges), q, alpha, beta, opt, st);
}

// Binary search over the community's distinct weights for the largest
// threshold whose weight-filtered core still holds q; q's component there is
// the answer. The final extraction counts as a probe.
inline std::optional<SignificantCommunity> binary_significant(const CommunityIndex& idx,
                                                              VertexRef q, uint32_t alpha,
                                                              uint32_t beta,
                                                              SearchStats* st = nullptr) {
    QueryResult qr = query_community(idx, q, alpha, beta);
    if (st) st->community_reads += qr.entries_read;
    if (qr.community.empty()) return std::nullopt;
    const std::vector<Edge>& edges = qr.community.edges;

    std::vector<double> weights;
    weights.reserve(edges.size());
    for (const Edge& e : edges) weights.push_back(e.weight);
    std::sort(weights.begin(), weights.end());
    weights.erase(std::unique(weights.begin(), weights.end()), weights.end());

    auto probe = [&](double w) {
        if (st) {
            ++st->probes;
            st->peel_edge_visits += edges.size();
        }
        std::vector<Edge> sub;
        for (const Edge& e : edges)
            if (e.weight >= w) sub.push_back(e);
        std::vector<Edge> core = detail::prune_to_core_edges(sub, alpha, beta, st);
        return detail::component_of(core, q, st);
    };

    size_t lo = 0, hi = weights.size() - 1;  // the minimum weight always succeeds
    while (lo < hi) {
        size_t mid = lo + (hi - lo + 1) / 2;
        if (!probe(weights[mid]).empty()) lo = mid;
        else hi = mid - 1;
    }
    std::vector<Edge> comp = probe(weights[lo]);
    detail::require(!comp.empty(), "binary search lost the anchor at its optimal threshold");
    SignificantCommunity sc = detail::make_significant(std::move(comp), q, alpha, beta);
    detail::require(sc.significance == weights[lo], "binary threshold does not match the result");
    return sc;
}

// The whole-graph reference: Expand's streaming applied to every edge of the
// graph instead of the indexed community. Exists to benchmark what the
// two-step framework saves.
inline std::optional<SignificantCommunity> baseline_significant(const BipartiteGraph& g,
                                                                VertexRef q, uint32_t alpha,
                                                                uint32_t beta,
                                                                const ExpandOptions& opt = {},
                                                                SearchStats* st = nullptr) {
    uint32_t layer_count = q.layer == Layer::Upper ? g.upper_count() : g.lower_count();
    if (q.ordinal >= layer_count) throw DataError("unknown query vertex");
    if (g.empty()) return std::nullopt;
    if (detail::all_weights_equal(g.edges())) {
        if (st) st->community_reads += g.edge_count();
        Community c = community_online(g, q, alpha, beta);
        if (c.empty()) return std::nullopt;
        return detail::make_significant(std::move(c.edges), q, alpha, beta);
    }
    return detail::expand_stream(g.edges(), q, alpha, beta, opt, st);
}

// Community text format: header `q=<id> alpha=<a> beta=<b> f=<w>`, then one
// edge per line in (upper ordinal, lower ordinal) order.
template <typename TokenFn>
void write_community(std::ostream& out, std::string_view q_token, uint32_t alpha, uint32_t beta,
                     std::span<const Edge> edges, double f, TokenFn&& token) {
    out << "q=" << q_token << " alpha=" << alpha << " beta=" << beta
        << " f=" << detail::format_weight(f) << '\n';
    for (const Edge& e : edges)
        out << token(VertexRef{Layer::Upper, e.upper}) << ' '
            << token(VertexRef{Layer::Lower, e.lower}) << ' '
            << detail::format_weight(e.weight) << '\n';
}

inline void write_empty_community(std::ostream& out, std::string_view q_token, uint32_t alpha,
                                  uint32_t beta) {
    out << "q=" << q_token << " alpha=" << alpha << " beta=" << beta << " f=none\n";
}

}  // namespace bicore
