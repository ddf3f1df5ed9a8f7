#pragma once

#include <cstdint>
#include <string>

#include "pir2/errors.hpp"

namespace pir2 {

enum class Scheme { NS, NB };

inline const char* scheme_name(Scheme s) { return s == Scheme::NS ? "ns" : "nb"; }

// The (N, T1:K1, T2:K2) two-level system plus artifact knobs: the field
// modulus and the message-length reduction divisor (0 means "pick the
// default" for both).
struct SystemParams {
    int n_servers = 0;  // N
    int t1 = 0;
    int k1 = 0;
    int t2 = 0;
    int k2 = 0;
    std::uint64_t modulus = 0;   // 0: smallest prime above the largest code length
    long long reduction = 0;     // 0: maximal common divisor

    void validate() const {
        if (n_servers < 1) throw ParamError("need at least one server");
        if (t2 < 1 || t1 < t2 || t1 > n_servers)
            throw ParamError("privacy levels must satisfy 1 <= T2 <= T1 <= N");
        if (k1 < 1 || k2 < k1)
            throw ParamError("message counts must satisfy 1 <= K1 <= K2");
        if (k2 > 30) throw ParamError("K2 above 30 is not supported");
        if (reduction < 0) throw ParamError("reduction must be positive");
    }

    std::string label() const {
        return "(" + std::to_string(n_servers) + "," + std::to_string(t1) + ":" +
               std::to_string(k1) + "," + std::to_string(t2) + ":" +
               std::to_string(k2) + ")";
    }

    bool operator==(const SystemParams&) const = default;
};

}  // namespace pir2
