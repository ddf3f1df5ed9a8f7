#pragma once

#include "pir2/plan.hpp"
#include "pir2/rng.hpp"

namespace pir2::ns {

// Largest MDS code length the scheme instantiates for any target, after
// reduction; the default modulus must exceed it.
long long max_code_length(const SystemParams& p);

// Resolved knobs: reduction 0 means "maximal common divisor", modulus 0 means
// "smallest prime above the largest code length". Both are independent of
// the target so queries are comparable across retrievals.
long long effective_reduction(const SystemParams& p);
std::uint64_t effective_modulus(const SystemParams& p);
long long message_length(const SystemParams& p);

// Layered structure only: placement, compositions, codes, and deterministic
// coefficients, with no precoding sampled. Enough for the privacy audit and
// pattern comparisons; not enough to retrieve.
QueryPlan build_structure(const SystemParams& p, int k_star);

// Full query construction. All randomness (the per-message uniform full-rank
// precoding matrices) is drawn from the supplied generator, before any
// message is read.
QueryPlan build_query(const SystemParams& p, int k_star, SplitMix64& rng);

std::vector<std::uint64_t> decode(const QueryPlan& plan,
                                  const std::vector<AnswerVector>& answers);

}  // namespace pir2::ns
