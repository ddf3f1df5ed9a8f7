#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace pir2::wire {

inline constexpr std::array<std::uint8_t, 8> kMagic = {'P', 'I', 'R', '2',
                                                       'L', 'V', 'L', '\0'};
inline constexpr std::uint64_t kVersion = 1;

enum class Kind : std::uint64_t { Query = 1, Answer = 2 };

// Fixed 72-byte header (magic + eight unsigned 64-bit little-endian fields)
// followed by rows*cols symbols, each one unsigned 64-bit little-endian,
// row-major. Queries carry the per-server coefficient matrix
// (rows = answer length, cols = K2 * L); answers carry a column vector.
struct WireMessage {
    Kind kind = Kind::Query;
    std::uint64_t server_id = 0;  // 1-based on the wire
    std::uint64_t message_count = 0;
    std::uint64_t message_len = 0;
    std::uint64_t modulus = 0;
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    std::vector<std::uint64_t> payload;
};

inline constexpr std::size_t kHeaderSize = 72;

std::vector<std::uint8_t> encode(const WireMessage& msg);

// Header-only parse; returns the payload byte count still to be read.
// Throws ProtocolError on bad magic, version, kind, or absurd sizes.
WireMessage decode_header(std::span<const std::uint8_t> header,
                          std::size_t* payload_bytes);

// Full-frame parse.
WireMessage decode(std::span<const std::uint8_t> frame);

}  // namespace pir2::wire
