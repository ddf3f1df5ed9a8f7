#include "pir2/plan.hpp"

#include <algorithm>

#include "pir2/errors.hpp"

namespace pir2 {

Matrix QueryPlan::server_query(int server, const Field& f) const {
    if (!has_precoding)
        throw Error("plan was built without precoding; queries unavailable");
    const long long cols = static_cast<long long>(params.k2) * msg_len;
    const auto& order = server_order.at(server);
    Matrix out(order.size(), cols);
    for (std::size_t r = 0; r < order.size(); ++r) {
        const PlanSymbol& sym = symbols[order[r]];
        std::uint64_t* row = out.row(r);
        for (const Contribution& c : sym.contribs) {
            const Matrix& s = precoding[c.msg - 1];
            std::uint64_t* block = row + static_cast<long long>(c.msg - 1) * msg_len;
            if (c.code == nullptr) {
                const std::uint64_t* srow = s.row(c.offset);
                for (long long j = 0; j < msg_len; ++j)
                    block[j] = f.add(block[j], srow[j]);
                continue;
            }
            for (std::size_t t = 0; t < c.code->k; ++t) {
                const std::uint64_t coeff = c.code->gen.at(t, c.coord);
                if (coeff == 0) continue;
                const std::uint64_t* srow = s.row(c.offset + t);
                for (long long j = 0; j < msg_len; ++j)
                    block[j] = f.add(block[j], f.mul(coeff, srow[j]));
            }
        }
    }
    return out;
}

std::vector<std::uint64_t> QueryPlan::deterministic_row(const PlanSymbol& sym,
                                                        int msg,
                                                        const Field& f) const {
    std::vector<std::uint64_t> row(msg_len, 0);
    for (const Contribution& c : sym.contribs) {
        if (c.msg != msg) continue;
        if (c.code == nullptr) {
            row[c.offset] = f.add(row[c.offset], 1);
            continue;
        }
        for (std::size_t t = 0; t < c.code->k; ++t)
            row[c.offset + t] = f.add(row[c.offset + t], c.code->gen.at(t, c.coord));
    }
    return row;
}

std::vector<std::uint64_t> answer(const Matrix& server_query,
                                  std::span<const std::uint64_t> messages,
                                  const Field& f) {
    return mat_vec(server_query, messages, f);
}

namespace detail {

void sample_precoding(QueryPlan& plan, const Field& f, SplitMix64& rng) {
    plan.precoding.clear();
    plan.precoding.reserve(plan.params.k2);
    for (int k = 1; k <= plan.params.k2; ++k)
        plan.precoding.push_back(random_full_rank(plan.msg_len, f, rng));
    plan.desired_inverse = inverse(plan.precoding[plan.k_star - 1], f);
    plan.has_precoding = true;
}

void check_uniform_load(const QueryPlan& plan) {
    for (const auto& ids : plan.server_order) {
        if (static_cast<long long>(ids.size()) != plan.per_server)
            throw Error("internal: uneven per-server download");
    }
}

}  // namespace detail

std::vector<std::uint64_t> decode_plan(const QueryPlan& plan,
                                       const std::vector<AnswerVector>& answers) {
    const int n = plan.params.n_servers;
    if (static_cast<int>(answers.size()) != n)
        throw ProtocolError("expected one answer per server");
    std::vector<const AnswerVector*> by_server(n, nullptr);
    for (const AnswerVector& a : answers) {
        if (a.server < 0 || a.server >= n)
            throw ProtocolError("answer from unknown server");
        if (by_server[a.server] != nullptr)
            throw ProtocolError("duplicate answer for a server");
        if (static_cast<long long>(a.symbols.size()) != plan.per_server)
            throw ProtocolError("answer length mismatch");
        by_server[a.server] = &a;
    }

    const Field f(plan.q);

    // Observed value of every symbol, in global id order.
    std::vector<std::uint64_t> observed(plan.symbols.size(), 0);
    for (int s = 0; s < n; ++s) {
        const auto& order = plan.server_order[s];
        for (std::size_t i = 0; i < order.size(); ++i)
            observed[order[i]] = by_server[s]->symbols[i];
    }

    // Per-form values; paired block-3 symbols start unresolved.
    std::vector<std::vector<std::uint64_t>> value(plan.forms.size());
    std::vector<std::vector<bool>> resolved(plan.forms.size());
    for (std::size_t fi = 0; fi < plan.forms.size(); ++fi) {
        value[fi].assign(plan.forms[fi].size, 0);
        resolved[fi].assign(plan.forms[fi].size, false);
    }
    for (std::size_t sid = 0; sid < plan.symbols.size(); ++sid) {
        const PlanSymbol& sym = plan.symbols[sid];
        if (sym.form_b >= 0) continue;
        value[sym.form_a][sym.coord_a] = observed[sid];
        resolved[sym.form_a][sym.coord_a] = true;
    }

    // Reconstruct whole-codeword (pure interference) groups from their
    // directly observed coordinates, then peel them out of paired symbols.
    for (std::size_t gi = 0; gi < plan.groups.size(); ++gi) {
        const PlanGroup& g = plan.groups[gi];
        if (!g.whole) continue;
        std::vector<std::pair<std::size_t, std::uint64_t>> known;
        for (long long c = 0; c < g.top_len; ++c) {
            if (resolved[g.top_form][c])
                known.emplace_back(static_cast<std::size_t>(c),
                                   value[g.top_form][c]);
        }
        const std::vector<std::uint64_t> cw = g.code->complete(known, f);
        value[g.top_form].assign(cw.begin(), cw.end());
        resolved[g.top_form].assign(g.code->n, true);
    }
    for (std::size_t sid = 0; sid < plan.symbols.size(); ++sid) {
        const PlanSymbol& sym = plan.symbols[sid];
        if (sym.form_b < 0) continue;
        // Exactly one side of a pair belongs to a fully reconstructed form.
        int known_form, other_form;
        long long known_coord, other_coord;
        if (resolved[sym.form_b][sym.coord_b]) {
            known_form = sym.form_b;
            known_coord = sym.coord_b;
            other_form = sym.form_a;
            other_coord = sym.coord_a;
        } else {
            known_form = sym.form_a;
            known_coord = sym.coord_a;
            other_form = sym.form_b;
            other_coord = sym.coord_b;
        }
        if (!resolved[known_form][known_coord])
            throw CorruptionError("paired symbol with no reconstructable side");
        if (resolved[other_form][other_coord]) {
            if (f.add(value[known_form][known_coord],
                      value[other_form][other_coord]) != observed[sid])
                throw CorruptionError("paired symbol disagrees with reconstruction");
            continue;
        }
        value[other_form][other_coord] =
            f.sub(observed[sid], value[known_form][known_coord]);
        resolved[other_form][other_coord] = true;
    }
    for (std::size_t fi = 0; fi < plan.forms.size(); ++fi) {
        for (long long c = 0; c < plan.forms[fi].size; ++c)
            if (!resolved[fi][c]) throw CorruptionError("unresolved form coordinate");
    }

    // Successive cancellation: each split group's top part reconstructs the
    // trailing coordinates that were folded into the next layer.
    std::vector<std::uint64_t> desired(plan.msg_len, 0);
    for (std::size_t fi = 0; fi < plan.forms.size(); ++fi) {
        const PlanForm& form = plan.forms[fi];
        if (form.desired_offset < 0) continue;
        std::vector<std::uint64_t> segment = value[fi];
        if (form.tail_group >= 0) {
            const PlanGroup& g = plan.groups[form.tail_group];
            std::vector<std::pair<std::size_t, std::uint64_t>> known;
            known.reserve(g.top_len);
            for (long long c = 0; c < g.top_len; ++c)
                known.emplace_back(static_cast<std::size_t>(c),
                                   value[g.top_form][c]);
            const std::vector<std::uint64_t> cw = g.code->complete(known, f);
            for (long long c = 0; c < form.size; ++c)
                segment[c] = f.sub(segment[c], cw[g.top_len + c]);
        }
        for (long long c = 0; c < form.size; ++c)
            desired[form.desired_offset + c] = segment[c];
    }

    if (!plan.has_precoding)
        throw Error("plan was built without precoding; cannot invert");
    return mat_vec(plan.desired_inverse, desired, f);
}

}  // namespace pir2
