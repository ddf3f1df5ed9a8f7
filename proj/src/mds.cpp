#include "pir2/mds.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "pir2/errors.hpp"

namespace pir2 {

namespace {

// Generator row i is the Lagrange basis polynomial through points 0..k-1
// that is 1 at point i, evaluated at all n points. Rows form [I_k | V] and
// any k columns are independent (distinct evaluation points), which is the
// MDS property.
Matrix build_generator(std::size_t n, std::size_t k, const Field& f) {
    Matrix gen(k, n);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t denom = 1;
        for (std::size_t t = 0; t < k; ++t) {
            if (t == i) continue;
            denom = f.mul(denom, f.sub(f.reduce(i), f.reduce(t)));
        }
        const std::uint64_t denom_inv = f.inv(denom);
        for (std::size_t j = 0; j < n; ++j) {
            if (j < k) {
                gen.at(i, j) = (j == i) ? 1 : 0;
                continue;
            }
            std::uint64_t num = 1;
            for (std::size_t t = 0; t < k; ++t) {
                if (t == i) continue;
                num = f.mul(num, f.sub(f.reduce(j), f.reduce(t)));
            }
            gen.at(i, j) = f.mul(num, denom_inv);
        }
    }
    return gen;
}

}  // namespace

std::vector<std::uint64_t> MdsCode::encode(
    std::span<const std::uint64_t> message, const Field& f) const {
    if (message.size() != k) throw ParamError("MDS encode: message length != k");
    std::vector<std::uint64_t> cw(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < k; ++i)
            acc = f.add(acc, f.mul(message[i], gen.at(i, j)));
        cw[j] = acc;
    }
    return cw;
}

std::vector<std::uint64_t> MdsCode::complete(
    const std::vector<std::pair<std::size_t, std::uint64_t>>& known,
    const Field& f) const {
    if (known.size() < k)
        throw InsufficientDataError("MDS completion needs at least k coordinates");
    std::vector<bool> seen(n, false);
    for (const auto& [pos, val] : known) {
        (void)val;
        if (pos >= n) throw ParamError("MDS completion: position out of range");
        if (seen[pos]) throw ParamError("MDS completion: duplicate position");
        seen[pos] = true;
    }
    // Solve for the message from the first k known coordinates: the columns
    // of the generator at those positions are independent.
    Matrix a(k, k), b(k, 1);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < k; ++i) a.at(c, i) = gen.at(i, known[c].first);
        b.at(c, 0) = known[c].second;
    }
    Matrix msg = solve_square(a, b, f);
    std::vector<std::uint64_t> message(k);
    for (std::size_t i = 0; i < k; ++i) message[i] = msg.at(i, 0);
    std::vector<std::uint64_t> cw = encode(message, f);
    for (std::size_t c = k; c < known.size(); ++c) {
        if (cw[known[c].first] != known[c].second)
            throw CorruptionError("MDS completion: inconsistent over-determined input");
    }
    return cw;
}

const MdsCode& mds_code(std::size_t n, std::size_t k, const Field& f) {
    if (k < 1 || k > n) throw ParamError("MDS code needs 1 <= k <= n");
    if (f.modulus() <= n) throw ParamError("MDS code needs q > n");
    static std::mutex mu;
    static std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>,
                    std::unique_ptr<MdsCode>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, k, f.modulus());
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto code = std::make_unique<MdsCode>(
            MdsCode{n, k, f.modulus(), build_generator(n, k, f)});
        it = cache.emplace(key, std::move(code)).first;
    }
    return *it->second;
}

}  // namespace pir2
