#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pir2/system_params.hpp"

namespace pir2::ns_params {

// Parameters of one coding-group composition class (i, j), where i counts
// members among the high-privacy messages 1:K1 and j counts members among
// K1+1:K2. Group sizes depend on the composition only through (i, j).
struct ClassParams {
    long long d = 0;  // per-server share of the class's top-layer symbols
    long long m = 0;  // N * d symbols placed in layer i+j
    // Code parameters when retrieving a high-privacy message (ratio N:T1);
    // absent for i = K1 since such groups cannot exclude the target.
    std::optional<long long> n1, k1;
    // Code parameters when retrieving a low-privacy message (ratio N:T2);
    // absent for j = K2-K1.
    std::optional<long long> n2, k2;
};

struct NsParameterTable {
    SystemParams p;
    long long m_const = 0;      // the integer M
    long long message_len = 0;  // N^K2 before any reduction
    int imax = 0, jmax = 0;     // K1 and K2-K1
    std::vector<ClassParams> cls;

    const ClassParams& at(int i, int j) const { return cls[i * (jmax + 1) + j]; }
    // Number of compositions in class (i, j).
    long long count(int i, int j) const;
    // Largest divisor that keeps every per-server share and every segment
    // length integral; all sizes may be divided by any divisor of this.
    long long reduction() const;
};

NsParameterTable build_table(const SystemParams& p);

// Identities the placement depends on (split sizes, segment budgets, layer
// totals), evaluated both by explicit subset enumeration and by closed
// forms; failures are reported, not thrown.
struct PlacementIdentityReport {
    enum class Rel { Eq, Le, Lt };
    struct Check {
        std::string label;
        long long lhs = 0;
        long long rhs = 0;
        Rel rel = Rel::Eq;
        bool ok = false;
    };
    std::vector<Check> checks;
    bool all_ok = true;
};

PlacementIdentityReport verify_placement_identities(const SystemParams& p);

long long reduction_factor(const SystemParams& p);

long long binomial(int n, int k);

}  // namespace pir2::ns_params
