#include "pir2/ns_engine.hpp"

#include <algorithm>

#include "pir2/ns_params.hpp"
#include "pir2/subsets.hpp"

namespace pir2::ns {

namespace {

constexpr long long kMaxMessageLen = 1LL << 22;

long long resolve_reduction(const SystemParams& p, long long maximal) {
    if (p.reduction == 0) return maximal;
    if (p.reduction < 1 || maximal % p.reduction != 0)
        throw ParamError("reduction must divide the scheme's maximal divisor " +
                         std::to_string(maximal));
    return p.reduction;
}

struct Sizing {
    ns_params::NsParameterTable table;
    long long r = 1;
    long long msg_len = 0;

    int cls_i(std::uint32_t mask) const {
        return popcount32(mask & ((1u << table.p.k1) - 1));
    }
    int cls_j(std::uint32_t mask) const { return popcount32(mask) - cls_i(mask); }
    long long m_red(std::uint32_t mask) const {
        if (mask == 0) return 0;
        return table.at(cls_i(mask), cls_j(mask)).m / r;
    }
};

Sizing make_sizing(const SystemParams& p) {
    Sizing s;
    s.table = ns_params::build_table(p);
    s.r = resolve_reduction(p, s.table.reduction());
    s.msg_len = s.table.message_len / s.r;
    if (s.msg_len > kMaxMessageLen)
        throw ParamError("message length too large to materialize; reduce N or K2");
    return s;
}

long long max_code_length_reduced(const Sizing& s) {
    long long best = 0;
    for (int i = 0; i <= s.table.imax; ++i) {
        for (int j = 0; j <= s.table.jmax; ++j) {
            if (i + j == 0) continue;
            const auto& c = s.table.at(i, j);
            if (c.n1) best = std::max(best, *c.n1 / s.r);
            if (c.n2) best = std::max(best, *c.n2 / s.r);
        }
    }
    return best;
}

QueryPlan build_plan(const SystemParams& p, int k_star, bool with_precoding,
                     SplitMix64* rng) {
    p.validate();
    if (k_star < 1 || k_star > p.k2)
        throw ParamError("target index out of range 1..K2");

    const Sizing s = make_sizing(p);
    const std::uint64_t q =
        p.modulus ? p.modulus
                  : Field::next_prime_above(
                        std::max<long long>(max_code_length_reduced(s), 2));
    const Field f(q);
    if (static_cast<long long>(q) <= max_code_length_reduced(s))
        throw ParamError("modulus must exceed the largest MDS code length " +
                         std::to_string(max_code_length_reduced(s)));

    QueryPlan plan;
    plan.params = p;
    plan.scheme = Scheme::NS;
    plan.k_star = k_star;
    plan.q = q;
    plan.msg_len = s.msg_len;
    plan.reduction = s.r;

    const int n = p.n_servers;
    const std::uint32_t all = (1u << p.k2) - 1;
    const std::uint32_t kstar_bit = 1u << (k_star - 1);
    const std::uint32_t rest = all ^ kstar_bit;
    const bool high_target = k_star <= p.k1;

    // Forms: one per non-empty composition with symbols to place.
    std::vector<int> form_of(all + 1, -1);
    for (std::uint32_t mask = 1; mask <= all; ++mask) {
        const long long size = s.m_red(mask);
        if (size == 0) continue;
        PlanForm form;
        form.mask = mask;
        form.side = 0;
        form.size = size;
        form.symbol_ids.assign(size, -1);
        form_of[mask] = static_cast<int>(plan.forms.size());
        plan.forms.push_back(std::move(form));
    }

    // Interference coding groups, compositions ascending; each member
    // consumes a fresh segment of its precoded stream.
    std::vector<long long> next_offset(p.k2 + 1, 0);
    const std::vector<std::uint32_t> rest_subsets = submasks_ascending(rest, false);
    for (std::uint32_t mask : rest_subsets) {
        const int i = s.cls_i(mask), j = s.cls_j(mask);
        const auto& cls = s.table.at(i, j);
        const long long n_code = (high_target ? *cls.n1 : *cls.n2) / s.r;
        const long long k_code = (high_target ? *cls.k1 : *cls.k2) / s.r;
        if (n_code == 0) continue;
        const long long top_len = s.m_red(mask);
        const long long tail_len = s.m_red(mask | kstar_bit);
        if (top_len + tail_len != n_code)
            throw Error("internal: group split does not match its code length");
        PlanGroup g;
        g.members = mask_members(mask);
        g.code = &mds_code(n_code, k_code, f);
        for (int k : g.members) {
            g.member_offsets.push_back(next_offset[k]);
            next_offset[k] += k_code;
        }
        g.top_form = form_of[mask];
        g.top_len = top_len;
        g.tail_form = tail_len > 0 ? form_of[mask | kstar_bit] : -1;
        const int gid = static_cast<int>(plan.groups.size());
        plan.forms[g.top_form].top_group = gid;
        if (g.tail_form >= 0) plan.forms[g.tail_form].tail_group = gid;
        plan.groups.push_back(std::move(g));
    }
    for (int k = 1; k <= p.k2; ++k) {
        if (next_offset[k] > s.msg_len)
            throw Error("internal: interference segments exceed the message length");
    }

    // The desired message is carried as raw precoded symbols (the full-length
    // code is the identity), one segment per composition containing it.
    long long cursor = 0;
    for (std::uint32_t mask : submasks_ascending(rest, true)) {
        const std::uint32_t g_mask = mask | kstar_bit;
        const long long size = s.m_red(g_mask);
        if (size == 0) continue;
        plan.forms[form_of[g_mask]].desired_offset = cursor;
        cursor += size;
    }
    if (cursor != s.msg_len)
        throw Error("internal: desired segments do not cover the message");

    // Placement: layer by layer, compositions ascending, coordinates dealt
    // round-robin across servers.
    plan.server_order.assign(n, {});
    for (int layer = 1; layer <= p.k2; ++layer) {
        for (std::size_t fid_raw = 0; fid_raw < plan.forms.size(); ++fid_raw) {
            PlanForm& form = plan.forms[fid_raw];
            if (popcount32(form.mask) != layer) continue;
            const int fid = static_cast<int>(fid_raw);
            for (long long c = 0; c < form.size; ++c) {
                PlanSymbol sym;
                sym.server = static_cast<int>(c % n);
                sym.block = 0;
                sym.layer = layer;
                sym.comp_mask = form.mask;
                sym.form_a = fid;
                sym.coord_a = c;
                if (form.desired_offset >= 0)
                    sym.contribs.push_back(
                        {k_star, form.desired_offset + c, nullptr, 0});
                if (form.top_group >= 0) {
                    const PlanGroup& g = plan.groups[form.top_group];
                    for (std::size_t mi = 0; mi < g.members.size(); ++mi)
                        sym.contribs.push_back(
                            {g.members[mi], g.member_offsets[mi], g.code, c});
                }
                if (form.tail_group >= 0) {
                    const PlanGroup& g = plan.groups[form.tail_group];
                    for (std::size_t mi = 0; mi < g.members.size(); ++mi)
                        sym.contribs.push_back({g.members[mi], g.member_offsets[mi],
                                                g.code, g.top_len + c});
                }
                const long long sid = plan.total_symbols();
                form.symbol_ids[c] = sid;
                plan.server_order[sym.server].push_back(sid);
                plan.symbols.push_back(std::move(sym));
            }
        }
    }
    plan.per_server = plan.total_symbols() / n;
    detail::check_uniform_load(plan);

    if (with_precoding) detail::sample_precoding(plan, f, *rng);
    return plan;
}

}  // namespace

long long max_code_length(const SystemParams& p) {
    return max_code_length_reduced(make_sizing(p));
}

long long effective_reduction(const SystemParams& p) {
    return make_sizing(p).r;
}

std::uint64_t effective_modulus(const SystemParams& p) {
    if (p.modulus) return p.modulus;
    return Field::next_prime_above(std::max<long long>(max_code_length(p), 2));
}

long long message_length(const SystemParams& p) {
    return make_sizing(p).msg_len;
}

QueryPlan build_structure(const SystemParams& p, int k_star) {
    return build_plan(p, k_star, false, nullptr);
}

QueryPlan build_query(const SystemParams& p, int k_star, SplitMix64& rng) {
    return build_plan(p, k_star, true, &rng);
}

std::vector<std::uint64_t> decode(const QueryPlan& plan,
                                  const std::vector<AnswerVector>& answers) {
    if (plan.scheme != Scheme::NS)
        throw ParamError("plan was not built by the layered scheme");
    return decode_plan(plan, answers);
}

}  // namespace pir2::ns
