#pragma once

#include "pir2/plan.hpp"
#include "pir2/rng.hpp"

namespace pir2::nb {

// Descriptor of one precoded table: either the stacked layered code carrying
// the desired message, or a pure-interference table coded at rate T2/N so a
// dedicated block can reconstruct its share of the mixed block.
struct PrecodedTable {
    enum class Kind { Active, PureInterference };
    Kind kind = Kind::PureInterference;
    std::vector<int> message_set;   // 1:K1 for Table-A, K1+1:K2 for Table-B
    long long total = 0;            // reduced table size (t1 or t2 over r)
    long long total_unreduced = 0;  // t1 or t2

    struct FormSpec {
        std::vector<int> composition;
        long long size = 0;       // reduced
        long long dedicated = 0;  // T2/N fraction placed in the table's block
    };
    std::vector<FormSpec> forms;

    // Coding groups with their reduced (n, k): for the active table these are
    // the stacked codes of the compositions excluding the target; for a pure
    // table, one rate-T2/N code per composition.
    struct GroupSpec {
        std::vector<int> members;
        long long code_n = 0;
        long long code_k = 0;
    };
    std::vector<GroupSpec> groups;
};

struct NbTables {
    SystemParams params;
    int k_star = 0;
    std::uint64_t q = 0;
    long long reduction = 1;
    long long msg_len = 0;
    PrecodedTable a, b;
    bool has_precoding = false;
    std::vector<Matrix> precoding;  // S_1..S_K2 when sampled
};

// Undefined at K1 = K2 (there is no second message class); callers should
// fall back to the layered scheme.
bool supported(const SystemParams& p);

long long max_code_length(const SystemParams& p);
long long effective_reduction(const SystemParams& p);
std::uint64_t effective_modulus(const SystemParams& p);
long long message_length(const SystemParams& p);

// Builds both precoded tables for the given target; the table containing the
// target is the stacked layered code, the other is pure interference. The
// precoding matrices are drawn here, in message order.
NbTables build_tables(const SystemParams& p, int k_star, SplitMix64& rng);

// Same descriptors without sampling any precoding (cheap; for listings and
// the audit path).
NbTables tables_structure(const SystemParams& p, int k_star);

// Deterministic three-block assembly: dedicated T2/N fractions of each table
// form blocks one and two, the remainders are paired into block three.
QueryPlan assemble_blocks(const NbTables& tables);

QueryPlan build_structure(const SystemParams& p, int k_star);
QueryPlan build_query(const SystemParams& p, int k_star, SplitMix64& rng);

std::vector<std::uint64_t> decode(const QueryPlan& plan,
                                  const std::vector<AnswerVector>& answers);

}  // namespace pir2::nb
