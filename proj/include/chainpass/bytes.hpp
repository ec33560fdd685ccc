#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chainpass {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

std::string to_hex(BytesView data);
std::optional<Bytes> from_hex(const std::string& hex);

inline Bytes to_bytes(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

// 4-byte big-endian length, then the bytes. All multi-field hashed or
// encrypted payloads use this framing so field boundaries are unambiguous.
void append_length_prefixed(Bytes& out, BytesView field);
Bytes length_prefixed_concat(std::initializer_list<BytesView> fields);

// Inverse of the above; rejects trailing bytes and truncated lengths.
std::optional<std::vector<Bytes>> split_length_prefixed(BytesView data);

void append_be32(Bytes& out, uint32_t v);
std::optional<uint32_t> read_be32(BytesView data);

}  // namespace chainpass
