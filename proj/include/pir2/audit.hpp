#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pir2/plan.hpp"
#include "pir2/rng.hpp"

namespace pir2::audit {

// What to certify: privacy level `level` for the messages in protected_set,
// under the given scheme.
struct AuditTarget {
    SystemParams params;
    Scheme scheme = Scheme::NS;
    std::vector<int> protected_set;  // 1-based message indices
    int level = 1;
};

struct AuditReport {
    bool pattern_ok = false;
    bool positions_ok = false;

    // One entry per (target, message, colluding set). `rows` counts the
    // answer symbols on the colluding servers that involve the message;
    // full row rank of the deterministic coefficient block (or exact
    // equality of the blocks across targets) certifies the entry.
    struct Entry {
        int k_star = 0;
        int msg = 0;
        std::vector<int> colluders;  // 1-based server ids
        long long rows = 0;
        long long rank = 0;
        long long required = 0;
        bool equal_blocks = false;  // certified by block identity instead of rank
        bool ok = false;
    };
    std::vector<Entry> entries;

    bool passed = false;
    std::string justification;
    std::optional<std::string> first_counterexample;
};

// Canonical serialization of the placement multiset
// {(server, block/layer, composition, count)}; coefficient-free, so it is
// identical across seeds by construction.
std::string pattern_signature(const QueryPlan& plan);

// Deterministic coefficient block of one message on a colluding server set
// (0-based server ids): the stacked pre-precoding coefficient rows of every
// answer symbol that involves the message, in manifest order. The block
// actually transmitted is this matrix times the message's private precoding
// matrix.
Matrix collusion_block(const QueryPlan& plan, int msg,
                       const std::vector<int>& colluding, const Field& f);

// Structural certification: identical placement across all protected
// targets, and per (message, colluding set) either identical deterministic
// blocks or full-row-rank blocks of equal shape. Either condition makes the
// transmitted blocks identically distributed, since the precoding matrices
// are uniform full-rank and independent per message.
AuditReport audit_plans(const std::vector<QueryPlan>& plans, int level);

// Builds the plans for every protected target and audits them. Non-empty
// seeds additionally rebuild the plans with each seed and verify the
// signature is seed-invariant.
AuditReport audit(const AuditTarget& target, const std::vector<std::uint64_t>& seeds);

// Deliberately non-private fixture: fetches the target message directly,
// downloading nothing else. Its placement depends on the target, so the
// audit must reject it; used as the negative control.
QueryPlan broken_plan(const SystemParams& p, int k_star);

}  // namespace pir2::audit
