#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pir2/matrix.hpp"
#include "pir2/mds.hpp"
#include "pir2/system_params.hpp"

namespace pir2 {

// One linear contribution to an answer symbol: a coefficient vector over a
// segment of the precoded message stream W*_msg. With a null code the
// contribution is a unit coefficient at `offset` (a raw precoded symbol);
// otherwise it is column `coord` of the code generator applied to
// W*_msg[offset .. offset+code->k).
struct Contribution {
    int msg = 0;  // 1-based message index
    long long offset = 0;
    const MdsCode* code = nullptr;
    long long coord = 0;
};

// A form is the vector of summations sharing one composition; its
// coordinates materialize as answer symbols.
struct PlanForm {
    std::uint32_t mask = 0;       // bit (k-1) set iff message k participates
    int side = 0;                 // 0 single-table (NS); 1 = Table-A, 2 = Table-B
    long long size = 0;           // number of coordinates
    long long desired_offset = -1;  // segment start in W*_{k*}, or -1
    int top_group = -1;           // group whose leading coordinates fill this form
    int tail_group = -1;          // group whose trailing coordinates fold in here
    std::vector<long long> symbol_ids;  // coordinate -> global symbol id
};

// One MDS coding group of interference messages: each member contributes a
// fresh segment of its precoded stream, all encoded by the same (n, k) code.
struct PlanGroup {
    std::vector<int> members;            // sorted, 1-based, never the target
    const MdsCode* code = nullptr;       // (n, k) in effect for this retrieval
    std::vector<long long> member_offsets;
    int top_form = -1;
    int tail_form = -1;                  // -1 when the codeword is not split
    long long top_len = 0;               // coordinates carried by top_form
    // Pure-interference group: the whole codeword lives in top_form and can
    // be completed from the rate-matched fraction observed directly.
    bool whole = false;
};

// Placement tag of one downloaded symbol plus its decode slots. Block is 0
// for the layered scheme and 1..3 for the block scheme; block-3 symbols pair
// one coordinate from each table.
struct PlanSymbol {
    int server = 0;  // 0-based
    int block = 0;
    int layer = 0;
    std::uint32_t comp_mask = 0;
    int form_a = -1;
    long long coord_a = 0;
    int form_b = -1;
    long long coord_b = 0;
    std::vector<Contribution> contribs;
};

// Per-server answer as it travels back from a server.
struct AnswerVector {
    int server = 0;  // 0-based
    std::vector<std::uint64_t> symbols;
};

// Everything the user holds after forming queries. Only the composite
// per-server coefficient matrices (server_query) ever leave the user; the
// precoding matrices and the decode bookkeeping stay private.
struct QueryPlan {
    SystemParams params;
    Scheme scheme = Scheme::NS;
    int k_star = 0;  // 1-based
    std::uint64_t q = 0;
    long long msg_len = 0;    // message length L after reduction
    long long reduction = 1;
    long long per_server = 0;  // identical across servers

    std::vector<PlanSymbol> symbols;
    std::vector<std::vector<long long>> server_order;  // server -> symbol ids
    std::vector<PlanForm> forms;
    std::vector<PlanGroup> groups;

    bool has_precoding = false;
    std::vector<Matrix> precoding;  // S_1..S_K2 (index k-1), uniform full rank
    Matrix desired_inverse;         // inverse of S_{k*}

    long long total_symbols() const {
        return static_cast<long long>(symbols.size());
    }

    // Composite coefficient matrix for one server: per_server x (K2 * L),
    // mapping the concatenated plain messages to that server's answer. The
    // MDS coefficients are folded through the precoding so servers never see
    // the structure of any single S_k.
    Matrix server_query(int server, const Field& f) const;

    // Deterministic coefficient row of one symbol on one message's precoded
    // stream (length L); the transmitted block is this row times S_msg. This
    // is what the privacy audit reasons about.
    std::vector<std::uint64_t> deterministic_row(const PlanSymbol& sym, int msg,
                                                 const Field& f) const;
};

// Pure linear evaluation of a server's answer.
std::vector<std::uint64_t> answer(const Matrix& server_query,
                                  std::span<const std::uint64_t> messages,
                                  const Field& f);

// Shared successive/block cancellation decoder; returns W_{k*} exactly.
std::vector<std::uint64_t> decode_plan(const QueryPlan& plan,
                                       const std::vector<AnswerVector>& answers);

namespace detail {
// Sampling order is S_1..S_K2 so that a fixed seed pins every matrix.
void sample_precoding(QueryPlan& plan, const Field& f, SplitMix64& rng);
void check_uniform_load(const QueryPlan& plan);
}  // namespace detail

}  // namespace pir2
