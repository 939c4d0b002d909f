#pragma once

#include <stdexcept>
#include <string>

namespace bicore {

// Malformed input text (edge lists, update streams). Messages carry the line number.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally invalid data: duplicate edges, unknown vertices, stale indexes.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Binary index file problems: bad magic, version mismatch, truncation, checksum.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant; maps to CLI exit code 3.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

namespace detail {
inline void require(bool cond, const char* msg) {
    if (!cond) throw InternalError(msg);
}
}  // namespace detail

}  // namespace bicore
