#include "pir2/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstring>
#include <exception>
#include <thread>

#include "pir2/nb_engine.hpp"
#include "pir2/ns_engine.hpp"

namespace pir2::net {

namespace {

bool read_full(int fd, std::uint8_t* buf, std::size_t len) {
    std::size_t got = 0;
    while (got < len) {
        const ssize_t n = ::read(fd, buf + got, len - got);
        if (n == 0) return false;
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        got += static_cast<std::size_t>(n);
    }
    return true;
}

bool write_full(int fd, const std::uint8_t* buf, std::size_t len) {
    std::size_t sent = 0;
    while (sent < len) {
        const ssize_t n = ::write(fd, buf + sent, len - sent);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

class ScopedFd {
  public:
    explicit ScopedFd(int fd = -1) : fd_(fd) {}
    ~ScopedFd() { reset(); }
    ScopedFd(const ScopedFd&) = delete;
    ScopedFd& operator=(const ScopedFd&) = delete;
    int get() const { return fd_; }
    void reset(int fd = -1) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = fd;
    }
    int release() {
        int f = fd_;
        fd_ = -1;
        return f;
    }

  private:
    int fd_;
};

}  // namespace

struct ServerPool::Impl {
    // One full replica per server.
    std::vector<std::vector<std::vector<std::uint64_t>>> replicas;
    int n_servers = 0;
    std::uint64_t q = 0;
    long long msg_len = 0;
    Transport transport_kind = Transport::InProc;
    std::uint16_t port_base = 0;

    std::vector<int> listen_fds;
    std::vector<std::thread> threads;
    std::atomic<bool> stop{false};

    // Shared by both transports: validate the query frame against the
    // replica and evaluate the linear answer.
    std::vector<std::uint8_t> handle(int server,
                                     const std::vector<std::uint8_t>& frame) const {
        const wire::WireMessage msg = wire::decode(frame);
        if (msg.kind != wire::Kind::Query) throw ProtocolError("expected a query");
        if (msg.server_id != static_cast<std::uint64_t>(server + 1))
            throw ProtocolError("query addressed to a different server");
        const auto& store = replicas[server];
        if (msg.message_count != store.size())
            throw ProtocolError("query message count does not match the store");
        if (msg.message_len != static_cast<std::uint64_t>(msg_len))
            throw ProtocolError("query message length does not match the store");
        if (msg.modulus != q) throw ProtocolError("query modulus does not match");
        if (msg.cols != store.size() * static_cast<std::uint64_t>(msg_len))
            throw ProtocolError("query width does not match the store");

        std::vector<std::uint64_t> concat;
        concat.reserve(msg.cols);
        for (const auto& w : store) concat.insert(concat.end(), w.begin(), w.end());

        const Field f(q);
        Matrix coeff(msg.rows, msg.cols);
        for (std::uint64_t r = 0; r < msg.rows; ++r)
            for (std::uint64_t c = 0; c < msg.cols; ++c)
                coeff.at(r, c) = f.reduce(msg.payload[r * msg.cols + c]);
        const std::vector<std::uint64_t> out = answer(coeff, concat, f);

        wire::WireMessage reply;
        reply.kind = wire::Kind::Answer;
        reply.server_id = msg.server_id;
        reply.message_count = msg.message_count;
        reply.message_len = msg.message_len;
        reply.modulus = q;
        reply.rows = out.size();
        reply.cols = 1;
        reply.payload = out;
        return wire::encode(reply);
    }

    void serve_tcp(int server) {
        const int lfd = listen_fds[server];
        while (!stop.load()) {
            pollfd pfd{lfd, POLLIN, 0};
            const int pr = ::poll(&pfd, 1, 50);
            if (pr <= 0) continue;
            ScopedFd conn(::accept(lfd, nullptr, nullptr));
            if (conn.get() < 0) continue;
            try {
                std::vector<std::uint8_t> frame(wire::kHeaderSize);
                if (!read_full(conn.get(), frame.data(), wire::kHeaderSize)) continue;
                std::size_t payload_bytes = 0;
                wire::decode_header(frame, &payload_bytes);
                frame.resize(wire::kHeaderSize + payload_bytes);
                if (!read_full(conn.get(), frame.data() + wire::kHeaderSize,
                               payload_bytes))
                    continue;
                const std::vector<std::uint8_t> reply = handle(server, frame);
                write_full(conn.get(), reply.data(), reply.size());
            } catch (const Error&) {
                // Reject by closing without a reply.
            }
        }
    }
};

ServerPool::ServerPool(std::vector<std::vector<std::uint64_t>> messages,
                       int n_servers, std::uint64_t q, Transport transport,
                       std::uint16_t port_base)
    : impl_(std::make_unique<Impl>()) {
    if (n_servers < 1) throw ParamError("need at least one server");
    if (messages.empty()) throw ParamError("need at least one message");
    impl_->msg_len = static_cast<long long>(messages.front().size());
    for (const auto& w : messages) {
        if (static_cast<long long>(w.size()) != impl_->msg_len)
            throw ParamError("all messages must have equal length");
        for (std::uint64_t v : w)
            if (v >= q) throw ParamError("message symbol outside the field");
    }
    impl_->n_servers = n_servers;
    impl_->q = q;
    impl_->transport_kind = transport;
    impl_->port_base = port_base;
    impl_->replicas.assign(n_servers, messages);

    if (transport == Transport::TcpLoopback) {
        impl_->listen_fds.assign(n_servers, -1);
        for (int s = 0; s < n_servers; ++s) {
            ScopedFd fd(::socket(AF_INET, SOCK_STREAM, 0));
            if (fd.get() < 0) throw TransportError("socket() failed");
            const int one = 1;
            ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
            sockaddr_in addr{};
            addr.sin_family = AF_INET;
            addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
            addr.sin_port = htons(static_cast<std::uint16_t>(port_base + s));
            if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0)
                throw TransportError("bind() failed on port " +
                                     std::to_string(port_base + s));
            if (::listen(fd.get(), 8) < 0) throw TransportError("listen() failed");
            impl_->listen_fds[s] = fd.release();
        }
        for (int s = 0; s < n_servers; ++s)
            impl_->threads.emplace_back([impl = impl_.get(), s] { impl->serve_tcp(s); });
    }
}

ServerPool::~ServerPool() {
    impl_->stop.store(true);
    for (std::thread& t : impl_->threads)
        if (t.joinable()) t.join();
    for (int fd : impl_->listen_fds)
        if (fd >= 0) ::close(fd);
}

int ServerPool::server_count() const { return impl_->n_servers; }

Transport ServerPool::transport() const { return impl_->transport_kind; }

const std::vector<std::uint64_t>& ServerPool::message(int k) const {
    return impl_->replicas.front().at(k - 1);
}

std::vector<std::uint8_t> ServerPool::ask(int server,
                                          const std::vector<std::uint8_t>& query) {
    if (server < 0 || server >= impl_->n_servers)
        throw ParamError("unknown server id");
    if (impl_->transport_kind == Transport::InProc)
        return impl_->handle(server, query);

    ScopedFd fd(::socket(AF_INET, SOCK_STREAM, 0));
    if (fd.get() < 0) throw TransportError("socket() failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(impl_->port_base + server));
    if (::connect(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0)
        throw TransportError("connect() failed for server " + std::to_string(server + 1));
    if (!write_full(fd.get(), query.data(), query.size()))
        throw TransportError("short write to server " + std::to_string(server + 1));
    ::shutdown(fd.get(), SHUT_WR);
    std::vector<std::uint8_t> frame(wire::kHeaderSize);
    if (!read_full(fd.get(), frame.data(), wire::kHeaderSize))
        throw ProtocolError("server " + std::to_string(server + 1) +
                            " rejected the query");
    std::size_t payload_bytes = 0;
    wire::decode_header(frame, &payload_bytes);
    frame.resize(wire::kHeaderSize + payload_bytes);
    if (!read_full(fd.get(), frame.data() + wire::kHeaderSize, payload_bytes))
        throw TransportError("truncated answer from server " +
                             std::to_string(server + 1));
    return frame;
}

std::vector<std::vector<std::uint64_t>> random_messages(int k2, long long len,
                                                        std::uint64_t q,
                                                        std::uint64_t seed) {
    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(k2);
    for (int k = 1; k <= k2; ++k) {
        // Stream 0 is the query randomness; message k uses stream k.
        SplitMix64 rng(SplitMix64::derive(seed, static_cast<std::uint64_t>(k)));
        std::vector<std::uint64_t> w(len);
        for (long long i = 0; i < len; ++i) w[i] = rng.below(q);
        out.push_back(std::move(w));
    }
    return out;
}

std::uint64_t fnv1a_hash(std::span<const std::uint64_t> symbols) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint64_t v : symbols) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

RetrievalTranscript retrieve(ServerPool& pool, const SystemParams& p,
                             Scheme scheme, int k_star, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(seed);
    const QueryPlan plan = scheme == Scheme::NS ? ns::build_query(p, k_star, rng)
                                                : nb::build_query(p, k_star, rng);
    const Field f(plan.q);
    const int n = p.n_servers;

    RetrievalTranscript tr;
    tr.params = p;
    tr.scheme = scheme;
    tr.k_star = k_star;
    tr.seed = seed;
    tr.transport = pool.transport();
    tr.message_len = plan.msg_len;
    tr.modulus = plan.q;
    tr.symbols_per_server.assign(n, 0);
    tr.uploaded_bytes_per_server.assign(n, 0);
    tr.downloaded_bytes_per_server.assign(n, 0);
    tr.answer_frames.resize(n);

    // Queries are fixed before the ask phase; servers answer concurrently and
    // the collection below is the completion barrier.
    std::vector<std::vector<std::uint8_t>> query_frames(n);
    for (int s = 0; s < n; ++s) {
        const Matrix coeff = plan.server_query(s, f);
        wire::WireMessage msg;
        msg.kind = wire::Kind::Query;
        msg.server_id = static_cast<std::uint64_t>(s + 1);
        msg.message_count = static_cast<std::uint64_t>(p.k2);
        msg.message_len = static_cast<std::uint64_t>(plan.msg_len);
        msg.modulus = plan.q;
        msg.rows = coeff.rows();
        msg.cols = coeff.cols();
        msg.payload.reserve(coeff.rows() * coeff.cols());
        for (std::size_t r = 0; r < coeff.rows(); ++r)
            msg.payload.insert(msg.payload.end(), coeff.row(r),
                               coeff.row(r) + coeff.cols());
        query_frames[s] = wire::encode(msg);
        tr.uploaded_bytes_per_server[s] =
            static_cast<long long>(query_frames[s].size());
        tr.uploaded_bytes += tr.uploaded_bytes_per_server[s];
    }

    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::thread> workers;
        workers.reserve(n);
        for (int s = 0; s < n; ++s) {
            workers.emplace_back([&, s] {
                try {
                    tr.answer_frames[s] = pool.ask(s, query_frames[s]);
                } catch (...) {
                    errors[s] = std::current_exception();
                }
            });
        }
        for (std::thread& w : workers) w.join();
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<AnswerVector> answers(n);
    for (int s = 0; s < n; ++s) {
        const wire::WireMessage msg = wire::decode(tr.answer_frames[s]);
        if (msg.kind != wire::Kind::Answer) throw ProtocolError("expected an answer");
        if (msg.server_id != static_cast<std::uint64_t>(s + 1))
            throw ProtocolError("answer attributed to the wrong server");
        if (msg.cols != 1 || msg.rows != static_cast<std::uint64_t>(plan.per_server))
            throw ProtocolError("answer shape mismatch");
        answers[s].server = s;
        answers[s].symbols = msg.payload;
        tr.symbols_per_server[s] = static_cast<long long>(msg.rows);
        tr.downloaded_symbols += static_cast<long long>(msg.rows);
        tr.downloaded_bytes_per_server[s] =
            static_cast<long long>(tr.answer_frames[s].size());
        tr.downloaded_bytes += tr.downloaded_bytes_per_server[s];
    }

    const std::vector<std::uint64_t> recovered = decode_plan(plan, answers);
    tr.recovered_hash = fnv1a_hash(recovered);
    tr.recovered_ok = recovered == pool.message(k_star);
    tr.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!tr.recovered_ok)
        throw RetrievalError("recovered message differs from the stored message (" +
                             p.label() + ", scheme " + scheme_name(scheme) +
                             ", target " + std::to_string(k_star) + ")");
    return tr;
}

}  // namespace pir2::net
