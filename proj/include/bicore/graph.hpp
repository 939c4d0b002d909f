#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bicore/errors.hpp"

namespace bicore {

enum class Layer : uint8_t { Upper = 0, Lower = 1 };

// A vertex is addressed by its layer and a dense per-layer ordinal.
struct VertexRef {
    Layer layer{Layer::Upper};
    uint32_t ordinal{0};

    friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

// Interleaved vertex id, stable under growth of either layer:
// uppers get even ids, lowers odd ids.
constexpr uint32_t vid_of(VertexRef v) {
    return (v.ordinal << 1) | (v.layer == Layer::Lower ? 1u : 0u);
}
constexpr VertexRef vertex_of(uint32_t vid) {
    return VertexRef{(vid & 1u) ? Layer::Lower : Layer::Upper, vid >> 1};
}
constexpr bool vid_is_lower(uint32_t vid) { return (vid & 1u) != 0; }

struct Edge {
    uint32_t upper;  // ordinal in U
    uint32_t lower;  // ordinal in L
    double weight;
};

inline uint32_t edge_endpoint_vid(const Edge& e, Layer side) {
    return side == Layer::Upper ? vid_of({Layer::Upper, e.upper})
                                : vid_of({Layer::Lower, e.lower});
}

namespace detail {

inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

// Shortest decimal form that round-trips the double (e.g. 6.0 -> "6").
inline std::string format_weight(double w) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), w);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// Undirected weighted bipartite graph. Adjacency is kept as contiguous
// per-vertex spans of edge ids over a single edge array; all core/offset
// algorithms are scan-dominated so this is the layout they want.
//
// Immutable for readers after construction. The mutating calls (add_edge,
// remove_edge, intern) exist for index maintenance and require exclusive
// access; they rebuild the adjacency arrays.
class BipartiteGraph {
public:
    uint32_t upper_count() const { return static_cast<uint32_t>(upper_tokens_.size()); }
    uint32_t lower_count() const { return static_cast<uint32_t>(lower_tokens_.size()); }
    uint64_t edge_count() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    // One past the largest interleaved vertex id in use.
    uint32_t vid_limit() const {
        uint32_t m = std::max(upper_count(), lower_count());
        return m == 0 ? 0 : 2 * m;
    }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(uint32_t eid) const { return edges_[eid]; }

    std::span<const uint32_t> incident_edges(uint32_t vid) const {
        VertexRef v = vertex_of(vid);
        const auto& off = v.layer == Layer::Upper ? upper_off_ : lower_off_;
        const auto& adj = v.layer == Layer::Upper ? upper_adj_ : lower_adj_;
        if (v.ordinal + 1 >= off.size()) return {};
        return std::span<const uint32_t>(adj.data() + off[v.ordinal],
                                         off[v.ordinal + 1] - off[v.ordinal]);
    }
    std::span<const uint32_t> incident_edges(VertexRef v) const { return incident_edges(vid_of(v)); }

    uint32_t degree(uint32_t vid) const { return static_cast<uint32_t>(incident_edges(vid).size()); }
    uint32_t degree(VertexRef v) const { return degree(vid_of(v)); }

    uint32_t opposite_vid(uint32_t eid, uint32_t vid) const {
        const Edge& e = edges_[eid];
        uint32_t uv = vid_of({Layer::Upper, e.upper});
        return vid == uv ? vid_of({Layer::Lower, e.lower}) : uv;
    }

    const std::string& token(VertexRef v) const {
        return v.layer == Layer::Upper ? upper_tokens_[v.ordinal] : lower_tokens_[v.ordinal];
    }
    const std::string& token_of_vid(uint32_t vid) const { return token(vertex_of(vid)); }

    std::optional<VertexRef> find(std::string_view tok) const {
        if (tok.empty()) return std::nullopt;
        if (tok[0] == 'u') {
            auto it = upper_ids_.find(std::string(tok));
            if (it != upper_ids_.end()) return VertexRef{Layer::Upper, it->second};
        } else if (tok[0] == 'v') {
            auto it = lower_ids_.find(std::string(tok));
            if (it != lower_ids_.end()) return VertexRef{Layer::Lower, it->second};
        }
        return std::nullopt;
    }

    const std::vector<std::string>& upper_tokens() const { return upper_tokens_; }
    const std::vector<std::string>& lower_tokens() const { return lower_tokens_; }

    // Hash over counts, topology and weights (tokens excluded): the index
    // staleness fingerprint.
    uint64_t content_hash() const {
        uint64_t h = detail::fnv1a64(nullptr, 0);
        uint32_t nu = upper_count(), nl = lower_count();
        h = detail::fnv1a64(&nu, sizeof nu, h);
        h = detail::fnv1a64(&nl, sizeof nl, h);
        for (const Edge& e : edges_) {
            h = detail::fnv1a64(&e.upper, sizeof e.upper, h);
            h = detail::fnv1a64(&e.lower, sizeof e.lower, h);
            h = detail::fnv1a64(&e.weight, sizeof e.weight, h);
        }
        return h;
    }

    bool has_edge(VertexRef u, VertexRef v) const {
        return edge_id(u, v).has_value();
    }
    std::optional<uint32_t> edge_id(VertexRef u, VertexRef v) const {
        if (u.layer != Layer::Upper || v.layer != Layer::Lower) return std::nullopt;
        for (uint32_t eid : incident_edges(u))
            if (edges_[eid].lower == v.ordinal) return eid;
        return std::nullopt;
    }

    // --- mutation (exclusive access only) ---

    VertexRef intern(Layer layer, std::string_view tok) {
        auto& ids = layer == Layer::Upper ? upper_ids_ : lower_ids_;
        auto& toks = layer == Layer::Upper ? upper_tokens_ : lower_tokens_;
        auto it = ids.find(std::string(tok));
        if (it != ids.end()) return {layer, it->second};
        uint32_t ord = static_cast<uint32_t>(toks.size());
        toks.emplace_back(tok);
        ids.emplace(std::string(tok), ord);
        return {layer, ord};
    }

    void add_edge(VertexRef u, VertexRef v, double w) {
        if (u.layer != Layer::Upper || v.layer != Layer::Lower)
            throw DataError("add_edge: endpoints must be (upper, lower)");
        if (has_edge(u, v))
            throw DataError("duplicate edge " + token(u) + " " + token(v));
        if (!(w >= 0.0) || !std::isfinite(w))
            throw DataError("edge weight must be a finite non-negative real");
        edges_.push_back({u.ordinal, v.ordinal, w});
        rebuild_adjacency();
    }

    void remove_edge(VertexRef u, VertexRef v) {
        auto eid = edge_id(u, v);
        if (!eid) throw DataError("edge not present: " + token(u) + " " + token(v));
        edges_.erase(edges_.begin() + *eid);
        rebuild_adjacency();
    }

private:
    friend class GraphBuilder;

    void rebuild_adjacency() {
        build_side(upper_off_, upper_adj_, Layer::Upper, upper_count());
        build_side(lower_off_, lower_adj_, Layer::Lower, lower_count());
    }

    void build_side(std::vector<uint32_t>& off, std::vector<uint32_t>& adj, Layer side, uint32_t n) {
        off.assign(n + 1, 0);
        for (const Edge& e : edges_)
            ++off[(side == Layer::Upper ? e.upper : e.lower) + 1];
        for (uint32_t i = 0; i < n; ++i) off[i + 1] += off[i];
        adj.resize(edges_.size());
        std::vector<uint32_t> cursor(off.begin(), off.end() - 1);
        for (uint32_t eid = 0; eid < edges_.size(); ++eid) {
            uint32_t o = side == Layer::Upper ? edges_[eid].upper : edges_[eid].lower;
            adj[cursor[o]++] = eid;
        }
    }

    std::vector<Edge> edges_;
    std::vector<uint32_t> upper_off_, upper_adj_;
    std::vector<uint32_t> lower_off_, lower_adj_;
    std::vector<std::string> upper_tokens_, lower_tokens_;
    std::unordered_map<std::string, uint32_t> upper_ids_, lower_ids_;
};

class GraphBuilder {
public:
    VertexRef intern(Layer layer, std::string_view tok) { return g_.intern(layer, tok); }

    // line is only used for error messages; pass 0 when not reading a file.
    void add_edge(VertexRef u, VertexRef v, double w, size_t line = 0) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ParseError(at(line) + "edge weight must be a finite non-negative real");
        uint64_t key = (static_cast<uint64_t>(u.ordinal) << 32) | v.ordinal;
        if (!seen_.emplace(key).second)
            throw ParseError(at(line) + "duplicate edge " + g_.token(u) + " " + g_.token(v));
        g_.edges_.push_back({u.ordinal, v.ordinal, w});
    }

    BipartiteGraph finish() {
        g_.rebuild_adjacency();
        return std::move(g_);
    }

private:
    static std::string at(size_t line) {
        return line ? "line " + std::to_string(line) + ": " : std::string();
    }
    BipartiteGraph g_;
    std::unordered_set<uint64_t> seen_;
};

// Edge-list text format: one edge per line, `u<token> v<token> <weight>`;
// `#` starts a comment line; fields are whitespace-separated; the weight is
// optional and defaults to 1.0. Vertex ordinals are assigned by first
// appearance within each layer.
inline BipartiteGraph load_graph(std::istream& in) {
    GraphBuilder b;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;

        std::vector<std::string_view> fields;
        std::string_view sv(line);
        size_t pos = start;
        while (pos < sv.size()) {
            size_t end = sv.find_first_of(" \t\r", pos);
            if (end == std::string_view::npos) end = sv.size();
            if (end > pos) fields.push_back(sv.substr(pos, end - pos));
            pos = sv.find_first_not_of(" \t\r", end);
            if (pos == std::string_view::npos) break;
        }
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError("line " + std::to_string(lineno) + ": expected `u<token> v<token> [weight]`");
        if (fields[0][0] != 'u')
            throw ParseError("line " + std::to_string(lineno) + ": first endpoint must be an upper vertex (u...)");
        if (fields[1][0] != 'v')
            throw ParseError("line " + std::to_string(lineno) + ": second endpoint must be a lower vertex (v...)");

        double w = 1.0;
        if (fields.size() == 3) {
            const auto& f = fields[2];
            auto res = std::from_chars(f.data(), f.data() + f.size(), w);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size())
                throw ParseError("line " + std::to_string(lineno) + ": bad weight `" + std::string(f) + "`");
        }
        VertexRef u = b.intern(Layer::Upper, fields[0]);
        VertexRef v = b.intern(Layer::Lower, fields[1]);
        b.add_edge(u, v, w, lineno);
    }
    return b.finish();
}

inline void save_graph(const BipartiteGraph& g, std::ostream& out) {
    for (uint32_t u = 0; u < g.upper_count(); ++u) {
        for (uint32_t eid : g.incident_edges(VertexRef{Layer::Upper, u})) {
            const Edge& e = g.edge(eid);
            out << g.token({Layer::Upper, e.upper}) << ' ' << g.token({Layer::Lower, e.lower})
                << ' ' << detail::format_weight(e.weight) << '\n';
        }
    }
}

}  // namespace bicore
