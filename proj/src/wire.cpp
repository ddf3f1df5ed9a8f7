#include "pir2/wire.hpp"

#include <cstring>

#include "pir2/errors.hpp"

namespace pir2::wire {

namespace {

constexpr std::uint64_t kMaxSymbols = 1ULL << 28;

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode(const WireMessage& msg) {
    if (msg.payload.size() != msg.rows * msg.cols)
        throw ProtocolError("payload size does not match rows*cols");
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + msg.payload.size() * 8);
    for (std::uint8_t b : kMagic) out.push_back(b);
    put_u64(out, kVersion);
    put_u64(out, static_cast<std::uint64_t>(msg.kind));
    put_u64(out, msg.server_id);
    put_u64(out, msg.message_count);
    put_u64(out, msg.message_len);
    put_u64(out, msg.modulus);
    put_u64(out, msg.rows);
    put_u64(out, msg.cols);
    for (std::uint64_t v : msg.payload) put_u64(out, v);
    return out;
}

WireMessage decode_header(std::span<const std::uint8_t> header,
                          std::size_t* payload_bytes) {
    if (header.size() < kHeaderSize)
        throw ProtocolError("truncated header");
    if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0)
        throw ProtocolError("bad magic");
    const std::uint8_t* p = header.data() + kMagic.size();
    const std::uint64_t version = get_u64(p);
    if (version != kVersion) throw ProtocolError("unsupported version");
    WireMessage msg;
    const std::uint64_t kind = get_u64(p + 8);
    if (kind != static_cast<std::uint64_t>(Kind::Query) &&
        kind != static_cast<std::uint64_t>(Kind::Answer))
        throw ProtocolError("unknown message kind");
    msg.kind = static_cast<Kind>(kind);
    msg.server_id = get_u64(p + 16);
    msg.message_count = get_u64(p + 24);
    msg.message_len = get_u64(p + 32);
    msg.modulus = get_u64(p + 40);
    msg.rows = get_u64(p + 48);
    msg.cols = get_u64(p + 56);
    if (msg.rows > kMaxSymbols || msg.cols > kMaxSymbols ||
        (msg.cols != 0 && msg.rows > kMaxSymbols / msg.cols))
        throw ProtocolError("frame too large");
    if (payload_bytes) *payload_bytes = msg.rows * msg.cols * 8;
    return msg;
}

WireMessage decode(std::span<const std::uint8_t> frame) {
    std::size_t payload_bytes = 0;
    WireMessage msg = decode_header(frame, &payload_bytes);
    if (frame.size() != kHeaderSize + payload_bytes)
        throw ProtocolError("frame size does not match header");
    msg.payload.resize(msg.rows * msg.cols);
    const std::uint8_t* p = frame.data() + kHeaderSize;
    for (std::size_t i = 0; i < msg.payload.size(); ++i)
        msg.payload[i] = get_u64(p + 8 * i);
    return msg;
}

}  // namespace pir2::wire
