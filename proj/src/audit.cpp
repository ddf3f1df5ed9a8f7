#include "pir2/audit.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pir2/nb_engine.hpp"
#include "pir2/ns_engine.hpp"
#include "pir2/subsets.hpp"

namespace pir2::audit {

namespace {

std::string mask_to_string(std::uint32_t mask) {
    std::string out = "{";
    bool first = true;
    for (int b = 0; b < 32; ++b) {
        if (!(mask & (1u << b))) continue;
        if (!first) out += ",";
        out += std::to_string(b + 1);
        first = false;
    }
    return out + "}";
}

QueryPlan build_for(const AuditTarget& t, int k_star) {
    return t.scheme == Scheme::NS ? ns::build_structure(t.params, k_star)
                                  : nb::build_structure(t.params, k_star);
}

QueryPlan build_full_for(const AuditTarget& t, int k_star, SplitMix64& rng) {
    return t.scheme == Scheme::NS ? ns::build_query(t.params, k_star, rng)
                                  : nb::build_query(t.params, k_star, rng);
}

// All size-`level` subsets of servers 0..n-1.
std::vector<std::vector<int>> colluding_sets(int n, int level) {
    std::vector<std::vector<int>> out;
    std::vector<int> pick;
    auto rec = [&](auto&& self, int from) -> void {
        if (static_cast<int>(pick.size()) == level) {
            out.push_back(pick);
            return;
        }
        for (int s = from; s < n; ++s) {
            pick.push_back(s);
            self(self, s + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Manifest positions (server, index) of symbols involving `msg` on the
// colluding servers, plus the symbol ids themselves.
std::vector<long long> involved_symbols(const QueryPlan& plan, int msg,
                                        const std::vector<int>& colluding) {
    std::vector<long long> ids;
    for (int s : colluding) {
        for (long long sid : plan.server_order[s]) {
            if (plan.symbols[sid].comp_mask & (1u << (msg - 1))) ids.push_back(sid);
        }
    }
    return ids;
}

}  // namespace

std::string pattern_signature(const QueryPlan& plan) {
    std::ostringstream out;
    out << "scheme=" << scheme_name(plan.scheme) << " params=" << plan.params.label()
        << " L=" << plan.msg_len << " per_server=" << plan.per_server << "\n";
    // (server, block, layer, composition) -> count
    std::map<std::tuple<int, int, int, std::uint32_t>, long long> counts;
    for (int s = 0; s < plan.params.n_servers; ++s) {
        for (long long sid : plan.server_order[s]) {
            const PlanSymbol& sym = plan.symbols[sid];
            counts[{s, sym.block, sym.layer, sym.comp_mask}] += 1;
        }
    }
    for (const auto& [key, count] : counts) {
        const auto& [server, block, layer, comp] = key;
        out << "server=" << server + 1 << " block=" << block << " layer=" << layer
            << " comp=" << mask_to_string(comp) << " count=" << count << "\n";
    }
    return out.str();
}

Matrix collusion_block(const QueryPlan& plan, int msg,
                       const std::vector<int>& colluding, const Field& f) {
    const std::vector<long long> ids = involved_symbols(plan, msg, colluding);
    Matrix out(ids.size(), plan.msg_len);
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const std::vector<std::uint64_t> row =
            plan.deterministic_row(plan.symbols[ids[r]], msg, f);
        for (long long c = 0; c < plan.msg_len; ++c) out.at(r, c) = row[c];
    }
    return out;
}

AuditReport audit_plans(const std::vector<QueryPlan>& plans, int level) {
    AuditReport rep;
    if (plans.empty()) throw ParamError("audit needs at least one plan");
    const SystemParams& p = plans.front().params;
    if (level < 0 || level > p.n_servers)
        throw ParamError("privacy level must lie in 0..N");
    for (const QueryPlan& plan : plans) {
        if (!(plan.params == p))
            throw ParamError("audit plans must share one parameter set");
    }
    rep.justification =
        "Each message's precoding matrix is uniform over full-rank matrices and "
        "independent of the others, so a full-row-rank deterministic block C "
        "makes the transmitted block C*S distributed as a uniform prefix of a "
        "full-rank matrix regardless of the target; identical deterministic "
        "blocks are identically distributed trivially. With matching placement "
        "and matching block shapes, the joint query distribution on the "
        "colluding set is therefore the same for every protected target.";

    auto fail = [&rep](const std::string& why) {
        if (!rep.first_counterexample) rep.first_counterexample = why;
    };

    // (i) placement identity across targets.
    rep.pattern_ok = true;
    const std::string sig0 = pattern_signature(plans.front());
    for (std::size_t i = 1; i < plans.size(); ++i) {
        if (pattern_signature(plans[i]) != sig0) {
            rep.pattern_ok = false;
            fail("placement pattern differs between targets " +
                 std::to_string(plans.front().k_star) + " and " +
                 std::to_string(plans[i].k_star));
            break;
        }
    }

    // (ii) per-symbol composition tags in manifest order must agree, so the
    // coefficient blocks below sit at identical positions.
    rep.positions_ok = true;
    for (std::size_t i = 1; i < plans.size() && rep.positions_ok; ++i) {
        for (int s = 0; s < p.n_servers && rep.positions_ok; ++s) {
            const auto& a = plans.front().server_order[s];
            const auto& b = plans[i].server_order[s];
            if (a.size() != b.size()) {
                rep.positions_ok = false;
                fail("per-server symbol counts differ between targets");
                break;
            }
            for (std::size_t r = 0; r < a.size(); ++r) {
                if (plans.front().symbols[a[r]].comp_mask !=
                    plans[i].symbols[b[r]].comp_mask) {
                    rep.positions_ok = false;
                    fail("composition at server " + std::to_string(s + 1) +
                         " position " + std::to_string(r) + " differs between targets");
                    break;
                }
            }
        }
    }

    // (iii) every message's deterministic block on every colluding set.
    const Field f(plans.front().q);
    bool blocks_ok = true;
    if (rep.pattern_ok && rep.positions_ok) {
        for (const auto& colluders : colluding_sets(p.n_servers, level)) {
            std::vector<int> colluders_1based;
            for (int s : colluders) colluders_1based.push_back(s + 1);
            for (int msg = 1; msg <= p.k2; ++msg) {
                std::vector<Matrix> blocks;
                blocks.reserve(plans.size());
                for (const QueryPlan& plan : plans)
                    blocks.push_back(collusion_block(plan, msg, colluders, f));
                bool all_equal = true;
                for (std::size_t i = 1; i < blocks.size(); ++i)
                    all_equal = all_equal && blocks[i] == blocks.front();
                for (std::size_t i = 0; i < blocks.size(); ++i) {
                    AuditReport::Entry e;
                    e.k_star = plans[i].k_star;
                    e.msg = msg;
                    e.colluders = colluders_1based;
                    e.rows = static_cast<long long>(blocks[i].rows());
                    e.required = e.rows;
                    e.rank = static_cast<long long>(rank(blocks[i], f));
                    e.equal_blocks = all_equal;
                    e.ok = all_equal || e.rank == e.required;
                    if (!e.ok) {
                        blocks_ok = false;
                        fail("message " + std::to_string(msg) + " on servers " +
                             [&colluders_1based] {
                                 std::string s;
                                 for (int c : colluders_1based)
                                     s += (s.empty() ? "" : ",") + std::to_string(c);
                                 return s;
                             }() +
                             ": rank " + std::to_string(e.rank) + " below " +
                             std::to_string(e.required) + " for target " +
                             std::to_string(e.k_star));
                    }
                    rep.entries.push_back(std::move(e));
                }
                // Differing row counts across targets would already have
                // tripped the position check; assert anyway.
                for (std::size_t i = 1; i < blocks.size(); ++i) {
                    if (blocks[i].rows() != blocks.front().rows()) {
                        blocks_ok = false;
                        fail("block row counts differ across targets");
                    }
                }
            }
        }
    }

    rep.passed = rep.pattern_ok && rep.positions_ok && blocks_ok;
    return rep;
}

AuditReport audit(const AuditTarget& target,
                  const std::vector<std::uint64_t>& seeds) {
    target.params.validate();
    if (target.protected_set.empty())
        throw ParamError("audit needs a non-empty protected set");
    for (int k : target.protected_set) {
        if (k < 1 || k > target.params.k2)
            throw ParamError("protected set contains an invalid message index");
    }
    std::vector<QueryPlan> plans;
    plans.reserve(target.protected_set.size());
    for (int k_star : target.protected_set) plans.push_back(build_for(target, k_star));

    AuditReport rep = audit_plans(plans, target.level);

    // Seed invariance: the pattern excludes coefficients, so rebuilding with
    // real randomness must reproduce it bit for bit.
    for (std::uint64_t seed : seeds) {
        for (std::size_t i = 0; i < plans.size(); ++i) {
            SplitMix64 rng(seed);
            const QueryPlan full =
                build_full_for(target, target.protected_set[i], rng);
            if (pattern_signature(full) != pattern_signature(plans[i])) {
                rep.passed = false;
                if (!rep.first_counterexample)
                    rep.first_counterexample =
                        "pattern depends on the seed for target " +
                        std::to_string(target.protected_set[i]);
            }
        }
    }
    return rep;
}

QueryPlan broken_plan(const SystemParams& p, int k_star) {
    p.validate();
    if (k_star < 1 || k_star > p.k2)
        throw ParamError("target index out of range 1..K2");
    QueryPlan plan;
    plan.params = p;
    plan.scheme = Scheme::NS;
    plan.k_star = k_star;
    plan.q = ns::effective_modulus(p);
    plan.reduction = 1;
    long long len = 1;
    for (int i = 0; i < p.k2; ++i) len *= p.n_servers;
    plan.msg_len = len;

    PlanForm form;
    form.mask = 1u << (k_star - 1);
    form.size = len;
    form.desired_offset = 0;
    form.symbol_ids.assign(len, -1);
    plan.forms.push_back(std::move(form));

    plan.server_order.assign(p.n_servers, {});
    for (long long c = 0; c < len; ++c) {
        PlanSymbol sym;
        sym.server = static_cast<int>(c % p.n_servers);
        sym.block = 0;
        sym.layer = 1;
        sym.comp_mask = 1u << (k_star - 1);
        sym.form_a = 0;
        sym.coord_a = c;
        sym.contribs.push_back({k_star, c, nullptr, 0});
        plan.forms[0].symbol_ids[c] = c;
        plan.server_order[sym.server].push_back(c);
        plan.symbols.push_back(std::move(sym));
    }
    plan.per_server = len / p.n_servers;
    return plan;
}

}  // namespace pir2::audit
