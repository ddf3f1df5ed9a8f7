#include "pir2/nb_engine.hpp"

#include <algorithm>
#include <numeric>

#include "pir2/subsets.hpp"

namespace pir2::nb {

namespace {

constexpr long long kMaxMessageLen = 1LL << 22;

long long checked_mul(long long a, long long b) {
    long long out;
    if (__builtin_mul_overflow(a, b, &out))
        throw ParamError("table sizes overflow 64-bit arithmetic");
    return out;
}

long long ipow(long long base, int exp) {
    long long out = 1;
    for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

// Everything about the two tables that does not depend on randomness.
struct Layout {
    SystemParams p;
    long long r = 1;
    long long msg_len = 0;      // N^K2 / r
    std::uint64_t q = 0;
    std::uint32_t a_mask = 0;   // messages 1:K1
    std::uint32_t b_mask = 0;   // messages K1+1:K2

    // Unreduced size of the composition's form, a function of cardinality.
    std::vector<long long> a_size_by_card;  // index |K1 subset| >= 1
    std::vector<long long> b_size_by_card;

    long long size_of(std::uint32_t mask) const {
        const int c = popcount32(mask);
        return (mask & a_mask) ? a_size_by_card[c] : b_size_by_card[c];
    }
    long long size_red(std::uint32_t mask) const { return size_of(mask) / r; }
    long long dedicated_red(std::uint32_t mask) const {
        return size_of(mask) * p.t2 / p.n_servers / r;
    }
};

Layout make_layout(const SystemParams& p) {
    p.validate();
    if (p.k1 >= p.k2)
        throw ParamError(
            "the block scheme needs two message classes (K1 < K2); use the "
            "layered scheme instead");
    Layout lay;
    lay.p = p;
    const long long n = p.n_servers, t1 = p.t1, t2 = p.t2;
    lay.a_mask = (1u << p.k1) - 1;
    lay.b_mask = ((1u << p.k2) - 1) ^ lay.a_mask;

    lay.a_size_by_card.assign(p.k1 + 1, 0);
    for (int c = 1; c <= p.k1; ++c)
        lay.a_size_by_card[c] = checked_mul(
            ipow(n, p.k2 - p.k1 + 1),
            checked_mul(ipow(n - t1, c - 1), ipow(t1, p.k1 - c)));
    lay.b_size_by_card.assign(p.k2 - p.k1 + 1, 0);
    for (int c = 1; c <= p.k2 - p.k1; ++c)
        lay.b_size_by_card[c] = checked_mul(
            ipow(n, p.k1 + 1),
            checked_mul(ipow(n - t2, c - 1), ipow(t2, p.k2 - p.k1 - c)));

    // Maximal reduction: every per-server share of every dedicated part and
    // every remainder part must stay integral.
    long long g = 0;
    auto fold = [&g](long long v) {
        if (v != 0) g = std::gcd(g, v);
    };
    const long long n2 = n * n;
    for (long long sz : lay.a_size_by_card)
        if (sz) {
            fold(sz * t2 / n2);
            fold(sz * (n - t2) / n2);
        }
    for (long long sz : lay.b_size_by_card)
        if (sz) {
            fold(sz * t2 / n2);
            fold(sz * (n - t2) / n2);
        }
    const long long maximal = g == 0 ? 1 : g;
    if (p.reduction == 0) {
        lay.r = maximal;
    } else {
        if (maximal % p.reduction != 0)
            throw ParamError("reduction must divide the scheme's maximal divisor " +
                             std::to_string(maximal));
        lay.r = p.reduction;
    }
    lay.msg_len = ipow(n, p.k2) / lay.r;
    if (lay.msg_len > kMaxMessageLen)
        throw ParamError("message length too large to materialize; reduce N or K2");
    return lay;
}

long long max_code_length_reduced(const Layout& lay) {
    long long best = 0;
    // Stacked codes of the active table, for either side being active.
    for (int c = 1; c < lay.p.k1; ++c)
        best = std::max(best,
                        (lay.a_size_by_card[c] + lay.a_size_by_card[c + 1]) / lay.r);
    for (int c = 1; c < lay.p.k2 - lay.p.k1; ++c)
        best = std::max(best,
                        (lay.b_size_by_card[c] + lay.b_size_by_card[c + 1]) / lay.r);
    // Pure-interference codes of both tables.
    for (int c = 1; c <= lay.p.k1; ++c)
        best = std::max(best, lay.a_size_by_card[c] / lay.r);
    for (int c = 1; c <= lay.p.k2 - lay.p.k1; ++c)
        best = std::max(best, lay.b_size_by_card[c] / lay.r);
    return best;
}

std::uint64_t resolve_modulus(const Layout& lay) {
    const long long need = max_code_length_reduced(lay);
    const std::uint64_t q =
        lay.p.modulus ? lay.p.modulus
                      : Field::next_prime_above(std::max<long long>(need, 2));
    if (static_cast<long long>(q) <= need)
        throw ParamError("modulus must exceed the largest MDS code length " +
                         std::to_string(need));
    return q;
}

PrecodedTable describe_table(const Layout& lay, std::uint32_t side_mask,
                             bool active, int k_star) {
    PrecodedTable t;
    t.kind = active ? PrecodedTable::Kind::Active
                    : PrecodedTable::Kind::PureInterference;
    t.message_set = mask_members(side_mask);
    const long long t_side = (side_mask & lay.a_mask) ? lay.p.t1 : lay.p.t2;
    for (std::uint32_t mask : submasks_ascending(side_mask, false)) {
        const long long size = lay.size_of(mask);
        if (size == 0) continue;
        t.total_unreduced += size;
        t.total += size / lay.r;
        t.forms.push_back(
            {mask_members(mask), size / lay.r, lay.dedicated_red(mask)});
        if (!active) {
            t.groups.push_back({mask_members(mask), size / lay.r,
                                size * lay.p.t2 / lay.p.n_servers / lay.r});
            continue;
        }
        if (mask & (1u << (k_star - 1))) continue;
        const long long n_code =
            (lay.size_of(mask) + lay.size_of(mask | (1u << (k_star - 1)))) / lay.r;
        const long long k_code =
            (lay.size_of(mask) + lay.size_of(mask | (1u << (k_star - 1)))) *
            t_side / lay.p.n_servers / lay.r;
        t.groups.push_back({mask_members(mask), n_code, k_code});
    }
    return t;
}

QueryPlan assemble(const Layout& lay, int k_star, const NbTables* tables,
                   bool with_precoding) {
    const SystemParams& p = lay.p;
    const Field f(lay.q);
    const int n = p.n_servers;
    const std::uint32_t kstar_bit = 1u << (k_star - 1);
    const bool a_active = k_star <= p.k1;
    const std::uint32_t active_mask = a_active ? lay.a_mask : lay.b_mask;
    const long long t_active = a_active ? p.t1 : p.t2;

    QueryPlan plan;
    plan.params = p;
    plan.scheme = Scheme::NB;
    plan.k_star = k_star;
    plan.q = lay.q;
    plan.msg_len = lay.msg_len;
    plan.reduction = lay.r;

    // Forms for both tables, Table-A compositions first, ascending.
    const std::uint32_t all = lay.a_mask | lay.b_mask;
    std::vector<int> form_of(all + 1, -1);
    auto add_forms = [&](std::uint32_t side_mask, int side) {
        for (std::uint32_t mask : submasks_ascending(side_mask, false)) {
            const long long size = lay.size_red(mask);
            if (size == 0) continue;
            PlanForm form;
            form.mask = mask;
            form.side = side;
            form.size = size;
            form.symbol_ids.assign(size, -1);
            form_of[mask] = static_cast<int>(plan.forms.size());
            plan.forms.push_back(std::move(form));
        }
    };
    add_forms(lay.a_mask, 1);
    add_forms(lay.b_mask, 2);

    // Coding groups. Active side: stacked layered codes splitting across the
    // composition and the composition plus the target. Pure side: one
    // whole-codeword group per composition at rate T2/N.
    std::vector<long long> next_offset(p.k2 + 1, 0);
    for (std::uint32_t side : {lay.a_mask, lay.b_mask}) {
        const bool active = side == active_mask;
        for (std::uint32_t mask : submasks_ascending(side, false)) {
            if (active && (mask & kstar_bit)) continue;
            const long long size = lay.size_red(mask);
            if (size == 0) continue;
            PlanGroup g;
            g.members = mask_members(mask);
            if (active) {
                const long long n_unred =
                    lay.size_of(mask) + lay.size_of(mask | kstar_bit);
                const long long n_code = n_unred / lay.r;
                const long long k_code = n_unred * t_active / n / lay.r;
                if (k_code != size)
                    throw Error("internal: stacked code rate mismatch");
                g.code = &mds_code(n_code, k_code, f);
                g.top_form = form_of[mask];
                g.top_len = size;
                const long long tail = lay.size_red(mask | kstar_bit);
                g.tail_form = tail > 0 ? form_of[mask | kstar_bit] : -1;
                g.whole = false;
            } else {
                const long long k_code = lay.size_of(mask) * p.t2 / n / lay.r;
                g.code = &mds_code(size, k_code, f);
                g.top_form = form_of[mask];
                g.top_len = size;
                g.tail_form = -1;
                g.whole = true;
            }
            for (int k : g.members) {
                g.member_offsets.push_back(next_offset[k]);
                next_offset[k] += static_cast<long long>(g.code->k);
            }
            const int gid = static_cast<int>(plan.groups.size());
            plan.forms[g.top_form].top_group = gid;
            if (g.tail_form >= 0) plan.forms[g.tail_form].tail_group = gid;
            plan.groups.push_back(std::move(g));
        }
    }
    for (int k = 1; k <= p.k2; ++k) {
        if (next_offset[k] > lay.msg_len)
            throw Error("internal: interference segments exceed the message length");
    }

    // Desired segments cover the active side's compositions containing the
    // target, in ascending composition order.
    long long cursor = 0;
    for (std::uint32_t mask : submasks_ascending(active_mask ^ kstar_bit, true)) {
        const std::uint32_t g_mask = mask | kstar_bit;
        const long long size = lay.size_red(g_mask);
        if (size == 0) continue;
        plan.forms[form_of[g_mask]].desired_offset = cursor;
        cursor += size;
    }
    if (cursor != lay.msg_len)
        throw Error("internal: desired segments do not cover the message");

    // Contribution list of one coordinate of one form.
    auto contribs_for = [&](const PlanForm& form, long long c) {
        std::vector<Contribution> out;
        if (form.desired_offset >= 0)
            out.push_back({k_star, form.desired_offset + c, nullptr, 0});
        if (form.top_group >= 0) {
            const PlanGroup& g = plan.groups[form.top_group];
            for (std::size_t mi = 0; mi < g.members.size(); ++mi)
                out.push_back({g.members[mi], g.member_offsets[mi], g.code, c});
        }
        if (form.tail_group >= 0) {
            const PlanGroup& g = plan.groups[form.tail_group];
            for (std::size_t mi = 0; mi < g.members.size(); ++mi)
                out.push_back(
                    {g.members[mi], g.member_offsets[mi], g.code, g.top_len + c});
        }
        return out;
    };

    // Blocks one and two: the dedicated T2/N fraction of each form, layered
    // by composition size, coordinates dealt round-robin.
    plan.server_order.assign(n, {});
    auto place_dedicated = [&](std::uint32_t side_mask, int block) {
        const int layers = popcount32(side_mask);
        for (int layer = 1; layer <= layers; ++layer) {
            for (std::size_t fid = 0; fid < plan.forms.size(); ++fid) {
                PlanForm& form = plan.forms[fid];
                if ((form.mask & side_mask) == 0 || popcount32(form.mask) != layer)
                    continue;
                const long long ded = lay.dedicated_red(form.mask);
                for (long long c = 0; c < ded; ++c) {
                    PlanSymbol sym;
                    sym.server = static_cast<int>(c % n);
                    sym.block = block;
                    sym.layer = layer;
                    sym.comp_mask = form.mask;
                    sym.form_a = static_cast<int>(fid);
                    sym.coord_a = c;
                    sym.contribs = contribs_for(form, c);
                    const long long sid = plan.total_symbols();
                    form.symbol_ids[c] = sid;
                    plan.server_order[sym.server].push_back(sid);
                    plan.symbols.push_back(std::move(sym));
                }
            }
        }
    };
    place_dedicated(lay.a_mask, 1);
    place_dedicated(lay.b_mask, 2);

    // Block three: the remainders of each form, spread round-robin per form,
    // then paired per server in (composition, coordinate) order; unmatched
    // remainders ride along unpaired.
    struct Slot {
        int form;
        long long coord;
    };
    std::vector<std::vector<Slot>> a_rem(n), b_rem(n);
    for (std::size_t fid = 0; fid < plan.forms.size(); ++fid) {
        const PlanForm& form = plan.forms[fid];
        const long long ded = lay.dedicated_red(form.mask);
        auto& rem = (form.mask & lay.a_mask) ? a_rem : b_rem;
        for (long long c = ded; c < form.size; ++c)
            rem[(c - ded) % n].push_back({static_cast<int>(fid), c});
    }
    for (int s = 0; s < n; ++s) {
        const std::size_t pairs = std::min(a_rem[s].size(), b_rem[s].size());
        const std::size_t longest = std::max(a_rem[s].size(), b_rem[s].size());
        for (std::size_t i = 0; i < longest; ++i) {
            PlanSymbol sym;
            sym.server = s;
            sym.block = 3;
            sym.layer = 0;
            if (i < pairs) {
                const Slot& sa = a_rem[s][i];
                const Slot& sb = b_rem[s][i];
                sym.comp_mask = plan.forms[sa.form].mask | plan.forms[sb.form].mask;
                sym.form_a = sa.form;
                sym.coord_a = sa.coord;
                sym.form_b = sb.form;
                sym.coord_b = sb.coord;
                sym.contribs = contribs_for(plan.forms[sa.form], sa.coord);
                auto more = contribs_for(plan.forms[sb.form], sb.coord);
                sym.contribs.insert(sym.contribs.end(), more.begin(), more.end());
            } else {
                const Slot& sl =
                    a_rem[s].size() > b_rem[s].size() ? a_rem[s][i] : b_rem[s][i];
                sym.comp_mask = plan.forms[sl.form].mask;
                sym.form_a = sl.form;
                sym.coord_a = sl.coord;
                sym.contribs = contribs_for(plan.forms[sl.form], sl.coord);
            }
            const long long sid = plan.total_symbols();
            plan.forms[sym.form_a].symbol_ids[sym.coord_a] = sid;
            if (sym.form_b >= 0) plan.forms[sym.form_b].symbol_ids[sym.coord_b] = sid;
            plan.server_order[s].push_back(sid);
            plan.symbols.push_back(std::move(sym));
        }
    }
    plan.per_server = plan.total_symbols() / n;
    detail::check_uniform_load(plan);

    if (with_precoding) {
        plan.precoding = tables->precoding;
        plan.desired_inverse = inverse(plan.precoding[k_star - 1], f);
        plan.has_precoding = true;
    }
    return plan;
}

}  // namespace

bool supported(const SystemParams& p) { return p.k1 < p.k2; }

long long max_code_length(const SystemParams& p) {
    return max_code_length_reduced(make_layout(p));
}

long long effective_reduction(const SystemParams& p) { return make_layout(p).r; }

std::uint64_t effective_modulus(const SystemParams& p) {
    Layout lay = make_layout(p);
    return resolve_modulus(lay);
}

long long message_length(const SystemParams& p) { return make_layout(p).msg_len; }

NbTables tables_structure(const SystemParams& p, int k_star) {
    if (k_star < 1 || k_star > p.k2)
        throw ParamError("target index out of range 1..K2");
    Layout lay = make_layout(p);
    lay.q = resolve_modulus(lay);
    NbTables t;
    t.params = p;
    t.k_star = k_star;
    t.q = lay.q;
    t.reduction = lay.r;
    t.msg_len = lay.msg_len;
    const bool a_active = k_star <= p.k1;
    t.a = describe_table(lay, lay.a_mask, a_active, k_star);
    t.b = describe_table(lay, lay.b_mask, !a_active, k_star);
    return t;
}

NbTables build_tables(const SystemParams& p, int k_star, SplitMix64& rng) {
    NbTables t = tables_structure(p, k_star);
    const Field f(t.q);
    t.precoding.reserve(p.k2);
    for (int k = 1; k <= p.k2; ++k)
        t.precoding.push_back(random_full_rank(t.msg_len, f, rng));
    t.has_precoding = true;
    return t;
}

QueryPlan assemble_blocks(const NbTables& tables) {
    Layout lay = make_layout(tables.params);
    lay.q = tables.q;
    return assemble(lay, tables.k_star, &tables, tables.has_precoding);
}

QueryPlan build_structure(const SystemParams& p, int k_star) {
    if (k_star < 1 || k_star > p.k2)
        throw ParamError("target index out of range 1..K2");
    Layout lay = make_layout(p);
    lay.q = resolve_modulus(lay);
    return assemble(lay, k_star, nullptr, false);
}

QueryPlan build_query(const SystemParams& p, int k_star, SplitMix64& rng) {
    return assemble_blocks(build_tables(p, k_star, rng));
}

std::vector<std::uint64_t> decode(const QueryPlan& plan,
                                  const std::vector<AnswerVector>& answers) {
    if (plan.scheme != Scheme::NB)
        throw ParamError("plan was not built by the block scheme");
    return decode_plan(plan, answers);
}

}  // namespace pir2::nb
