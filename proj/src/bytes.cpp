#include "chainpass/bytes.hpp"

namespace chainpass {

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(BytesView data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::optional<Bytes> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

void append_be32(Bytes& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

std::optional<uint32_t> read_be32(BytesView data) {
    if (data.size() < 4) return std::nullopt;
    return (uint32_t(data[0]) << 24) | (uint32_t(data[1]) << 16) |
           (uint32_t(data[2]) << 8) | uint32_t(data[3]);
}

void append_length_prefixed(Bytes& out, BytesView field) {
    append_be32(out, static_cast<uint32_t>(field.size()));
    out.insert(out.end(), field.begin(), field.end());
}

Bytes length_prefixed_concat(std::initializer_list<BytesView> fields) {
    Bytes out;
    for (const auto& f : fields) append_length_prefixed(out, f);
    return out;
}

std::optional<std::vector<Bytes>> split_length_prefixed(BytesView data) {
    std::vector<Bytes> fields;
    size_t pos = 0;
    while (pos < data.size()) {
        auto len = read_be32(data.subspan(pos));
        if (!len) return std::nullopt;
        pos += 4;
        if (data.size() - pos < *len) return std::nullopt;
        fields.emplace_back(data.begin() + pos, data.begin() + pos + *len);
        pos += *len;
    }
    return fields;
}

}  // namespace chainpass
