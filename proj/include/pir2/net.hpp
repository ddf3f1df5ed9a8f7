#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pir2/plan.hpp"
#include "pir2/wire.hpp"

namespace pir2::net {

enum class Transport { InProc, TcpLoopback };

// N logically independent servers, each holding its own replica of all K2
// messages. In-process and TCP transports share the exact same frame
// handling, so a query produces identical bytes either way.
class ServerPool {
  public:
    // messages: K2 vectors of equal length L with entries below q.
    ServerPool(std::vector<std::vector<std::uint64_t>> messages, int n_servers,
               std::uint64_t q, Transport transport, std::uint16_t port_base);
    ~ServerPool();

    ServerPool(const ServerPool&) = delete;
    ServerPool& operator=(const ServerPool&) = delete;

    int server_count() const;
    Transport transport() const;
    const std::vector<std::uint64_t>& message(int k) const;  // 1-based

    // Sends one query frame to one server (0-based) and returns the answer
    // frame bytes. Throws ProtocolError / TransportError on failure.
    std::vector<std::uint8_t> ask(int server,
                                  const std::vector<std::uint8_t>& query_frame);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct RetrievalTranscript {
    SystemParams params;
    Scheme scheme = Scheme::NS;
    int k_star = 0;
    std::uint64_t seed = 0;
    Transport transport = Transport::InProc;

    std::vector<long long> symbols_per_server;
    std::vector<long long> uploaded_bytes_per_server;
    std::vector<long long> downloaded_bytes_per_server;
    long long downloaded_symbols = 0;
    long long uploaded_bytes = 0;
    long long downloaded_bytes = 0;
    long long message_len = 0;
    std::uint64_t modulus = 0;

    // Raw answer frames, for byte-level transport comparisons.
    std::vector<std::vector<std::uint8_t>> answer_frames;

    std::uint64_t recovered_hash = 0;
    bool recovered_ok = false;
    double wall_seconds = 0.0;
};

// Builds the query plan from the seed, runs the three protocol steps against
// the pool, decodes, and verifies the recovery against the stored message.
// Throws RetrievalError if the recovered message does not match.
RetrievalTranscript retrieve(ServerPool& pool, const SystemParams& p,
                             Scheme scheme, int k_star, std::uint64_t seed);

// Deterministic random message store for a given seed (stream separated from
// the query randomness).
std::vector<std::vector<std::uint64_t>> random_messages(int k2, long long len,
                                                        std::uint64_t q,
                                                        std::uint64_t seed);

std::uint64_t fnv1a_hash(std::span<const std::uint64_t> symbols);

}  // namespace pir2::net
