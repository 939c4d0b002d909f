#pragma once

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "bicore/index.hpp"

namespace bicore {

// Binary index file, version 1. Fixed-width little-endian integers.
//
//   magic "BCSI" | u32 version | u8 variant | u32 bound
//   u32 upper_count | u32 lower_count | u64 edge_count | u64 content_hash
//   u32 a_level_count | u32 b_level_count
//   per level: u8 kind (0=A,1=B) | u32 level id | u64 vertex_count | u64 record_count
//              vertex_count x (u32 vid, u32 own_offset)          -- vids ascending
//              record_count x (u32 vid, u32 neighbor vid, f64 weight, u32 offset)
//   per vertex token (uppers then lowers): u32 length | bytes
//   u64 checksum  -- FNV-1a over every byte after the magic
//
// Vertex ids are layer-interleaved ordinals (id = 2*ordinal + layer bit).

namespace detail {

constexpr char kIndexMagic[4] = {'B', 'C', 'S', 'I'};
constexpr uint32_t kIndexVersion = 1;

struct ByteWriter {
    std::string buf;
    void u8(uint8_t v) { buf.push_back(static_cast<char>(v)); }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
    void bytes(const void* p, size_t n) { buf.append(static_cast<const char*>(p), n); }
};

struct ByteReader {
    const unsigned char* p;
    size_t size;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > size) throw IoError("truncated index file");
    }
    uint8_t u8() {
        need(1);
        return p[pos++];
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str(size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(p + pos), n);
        pos += n;
        return s;
    }
};

inline void write_level(ByteWriter& w, const Level& lv, uint8_t kind, uint32_t level_id) {
    w.u8(kind);
    w.u32(level_id);
    std::vector<uint32_t> vids = lv.sorted_vids();
    w.u64(vids.size());
    w.u64(lv.record_count());
    for (uint32_t vid : vids) {
        w.u32(vid);
        w.u32(lv.own_offset(vid));
    }
    for (uint32_t vid : vids)
        for (const LevelEntry& e : *lv.list(vid)) {
            w.u32(vid);
            w.u32(e.nbr_vid);
            w.f64(e.weight);
            w.u32(e.offset);
        }
}

inline Level read_level(ByteReader& r, uint8_t expect_kind, uint32_t expect_id) {
    if (r.u8() != expect_kind) throw IoError("index level family out of order");
    if (r.u32() != expect_id) throw IoError("index level id out of order");
    uint64_t nverts = r.u64();
    uint64_t nrecords = r.u64();
    std::vector<std::pair<uint32_t, uint32_t>> own(nverts);
    for (auto& [vid, off] : own) {
        vid = r.u32();
        off = r.u32();
    }
    std::unordered_map<uint32_t, std::vector<LevelEntry>> entries;
    for (uint64_t i = 0; i < nrecords; ++i) {
        uint32_t owner = r.u32();
        LevelEntry e{};
        e.nbr_vid = r.u32();
        e.weight = r.f64();
        e.offset = r.u32();
        entries[owner].push_back(e);
    }
    Level lv;
    for (const auto& [vid, off] : own) {
        Level::VertexLists vl;
        vl.own_offset = off;
        auto it = entries.find(vid);
        if (it != entries.end()) vl.entries = std::move(it->second);
        lv.insert_sorted_list(vid, std::move(vl));
    }
    return lv;
}

}  // namespace detail

inline void save_index(const CommunityIndex& idx, std::ostream& out) {
    detail::ByteWriter w;
    w.u32(detail::kIndexVersion);
    w.u8(static_cast<uint8_t>(idx.variant));
    w.u32(idx.bound);
    w.u32(idx.fp.upper_count);
    w.u32(idx.fp.lower_count);
    w.u64(idx.fp.edge_count);
    w.u64(idx.fp.content_hash);
    w.u32(static_cast<uint32_t>(idx.a_levels.size()));
    w.u32(static_cast<uint32_t>(idx.b_levels.size()));
    for (uint32_t i = 0; i < idx.a_levels.size(); ++i)
        detail::write_level(w, idx.a_levels[i], 0, i + 1);
    for (uint32_t i = 0; i < idx.b_levels.size(); ++i)
        detail::write_level(w, idx.b_levels[i], 1, i + 1);
    for (const std::string& t : idx.upper_tokens) {
        w.u32(static_cast<uint32_t>(t.size()));
        w.bytes(t.data(), t.size());
    }
    for (const std::string& t : idx.lower_tokens) {
        w.u32(static_cast<uint32_t>(t.size()));
        w.bytes(t.data(), t.size());
    }
    uint64_t checksum = detail::fnv1a64(w.buf.data(), w.buf.size());
    out.write(detail::kIndexMagic, 4);
    out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
    detail::ByteWriter tail;
    tail.u64(checksum);
    out.write(tail.buf.data(), 8);
    if (!out) throw IoError("failed to write index");
}

inline CommunityIndex load_index(std::istream& in) {
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < 4 || std::memcmp(data.data(), detail::kIndexMagic, 4) != 0)
        throw IoError("bad index magic");
    if (data.size() < 4 + 4 + 8) throw IoError("truncated index file");

    detail::ByteReader r{reinterpret_cast<const unsigned char*>(data.data()), data.size() - 8, 4};
    uint32_t version = r.u32();
    if (version != detail::kIndexVersion)
        throw IoError("unsupported index version " + std::to_string(version));

    detail::ByteReader tail{reinterpret_cast<const unsigned char*>(data.data()), data.size(),
                            data.size() - 8};
    uint64_t expect = tail.u64();
    uint64_t actual = detail::fnv1a64(data.data() + 4, data.size() - 12);
    if (expect != actual) throw IoError("index checksum mismatch");

    CommunityIndex idx;
    idx.variant = static_cast<IndexVariant>(r.u8());
    idx.bound = r.u32();
    idx.fp.upper_count = r.u32();
    idx.fp.lower_count = r.u32();
    idx.fp.edge_count = r.u64();
    idx.fp.content_hash = r.u64();
    uint32_t na = r.u32(), nb = r.u32();
    for (uint32_t i = 0; i < na; ++i) idx.a_levels.push_back(detail::read_level(r, 0, i + 1));
    for (uint32_t i = 0; i < nb; ++i) idx.b_levels.push_back(detail::read_level(r, 1, i + 1));
    idx.upper_tokens.resize(idx.fp.upper_count);
    for (auto& t : idx.upper_tokens) t = r.str(r.u32());
    idx.lower_tokens.resize(idx.fp.lower_count);
    for (auto& t : idx.lower_tokens) t = r.str(r.u32());
    if (r.pos != r.size) throw IoError("trailing bytes in index file");
    idx.invalidate_token_maps();
    return idx;
}

inline void save_index_file(const CommunityIndex& idx, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    save_index(idx, out);
}

inline CommunityIndex load_index_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return load_index(in);
}

}  // namespace bicore
