#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "pir2/capacity.hpp"
#include "pir2/ns_engine.hpp"
#include "pir2/subsets.hpp"

using namespace pir2;

namespace {

SystemParams make(int n, int t1, int k1, int t2, int k2) {
    SystemParams p;
    p.n_servers = n;
    p.t1 = t1;
    p.k1 = k1;
    p.t2 = t2;
    p.k2 = k2;
    return p;
}

std::vector<std::vector<std::uint64_t>> random_store(const SystemParams& p,
                                                     long long len,
                                                     std::uint64_t q,
                                                     std::uint64_t seed) {
    std::vector<std::vector<std::uint64_t>> store;
    SplitMix64 rng(seed);
    for (int k = 0; k < p.k2; ++k) {
        std::vector<std::uint64_t> w(len);
        for (auto& v : w) v = rng.below(q);
        store.push_back(std::move(w));
    }
    return store;
}

std::vector<std::uint64_t> concat(const std::vector<std::vector<std::uint64_t>>& store) {
    std::vector<std::uint64_t> out;
    for (const auto& w : store) out.insert(out.end(), w.begin(), w.end());
    return out;
}

std::vector<AnswerVector> evaluate_answers(const QueryPlan& plan,
                                           const std::vector<std::vector<std::uint64_t>>& store) {
    const Field f(plan.q);
    const auto all = concat(store);
    std::vector<AnswerVector> answers;
    for (int s = 0; s < plan.params.n_servers; ++s)
        answers.push_back({s, answer(plan.server_query(s, f), all, f)});
    return answers;
}

// (server, layer) -> composition -> count, the table layout by eye.
std::map<std::pair<int, int>, std::map<std::uint32_t, long long>> layout_of(
    const QueryPlan& plan) {
    std::map<std::pair<int, int>, std::map<std::uint32_t, long long>> out;
    for (const PlanSymbol& sym : plan.symbols)
        out[{sym.server, sym.layer}][sym.comp_mask] += 1;
    return out;
}

const std::vector<SystemParams> kMatrix = {
    make(4, 2, 2, 1, 4), make(3, 2, 2, 1, 3), make(4, 2, 2, 2, 2),
    make(4, 1, 2, 1, 2), make(6, 3, 2, 1, 4)};

}  // namespace

TEST_CASE("golden layout for (4,2:2,1:4) retrieving message 1") {
    const SystemParams p = make(4, 2, 2, 1, 4);
    const QueryPlan plan = ns::build_structure(p, 1);
    CHECK(plan.msg_len == 64);
    CHECK(plan.reduction == 4);
    CHECK(plan.q == 29);
    CHECK(plan.per_server == 29);
    CHECK(plan.total_symbols() == 116);

    // Layer 1 of server 1: three of the target, three of message 2, one each
    // of messages 3 and 4.
    const auto layout = layout_of(plan);
    const auto& l1 = layout.at({0, 1});
    CHECK(l1.at(0b0001) == 3);
    CHECK(l1.at(0b0010) == 3);
    CHECK(l1.at(0b0100) == 1);
    CHECK(l1.at(0b1000) == 1);

    // Group codes are exactly the golden ones: (24,12) for {2}, (8,4) for
    // singleton low messages and mixed pairs with 2, (24,12) for {3,4} and
    // {2,3,4}.
    std::map<std::uint32_t, std::pair<long long, long long>> codes;
    for (const PlanGroup& g : plan.groups) {
        std::uint32_t mask = 0;
        for (int m : g.members) mask |= 1u << (m - 1);
        codes[mask] = {static_cast<long long>(g.code->n),
                       static_cast<long long>(g.code->k)};
    }
    CHECK(codes.at(0b0010) == std::make_pair(24LL, 12LL));
    CHECK(codes.at(0b0100) == std::make_pair(8LL, 4LL));
    CHECK(codes.at(0b1000) == std::make_pair(8LL, 4LL));
    CHECK(codes.at(0b0110) == std::make_pair(8LL, 4LL));
    CHECK(codes.at(0b1010) == std::make_pair(8LL, 4LL));
    CHECK(codes.at(0b1100) == std::make_pair(24LL, 12LL));
    CHECK(codes.at(0b1110) == std::make_pair(24LL, 12LL));
}

TEST_CASE("golden layout for (4,2:2,1:4) retrieving message 4") {
    const QueryPlan plan = ns::build_structure(make(4, 2, 2, 1, 4), 4);
    CHECK(plan.per_server == 29);
    // Every interference group is (16,4) when the target has the low level.
    for (const PlanGroup& g : plan.groups) {
        CHECK(g.code->n == 16);
        CHECK(g.code->k == 4);
    }
}

TEST_CASE("group split matches the code length") {
    for (const SystemParams& p : kMatrix) {
        for (int k_star = 1; k_star <= p.k2; ++k_star) {
            const QueryPlan plan = ns::build_structure(p, k_star);
            for (const PlanGroup& g : plan.groups) {
                const long long tail =
                    g.tail_form >= 0 ? plan.forms[g.tail_form].size : 0;
                CHECK(g.top_len + tail == static_cast<long long>(g.code->n));
                CHECK(plan.forms[g.top_form].size == g.top_len);
            }
        }
    }
}

TEST_CASE("single-message system downloads exactly L symbols") {
    const SystemParams p = make(4, 2, 1, 1, 1);
    SplitMix64 rng(3);
    const QueryPlan plan = ns::build_query(p, 1, rng);
    CHECK(plan.total_symbols() == plan.msg_len);
    CHECK(plan.groups.empty());
    const auto store = random_store(p, plan.msg_len, plan.q, 5);
    const auto recovered = ns::decode(plan, evaluate_answers(plan, store));
    CHECK(recovered == store[0]);
}

TEST_CASE("answers are linear in the store") {
    const SystemParams p = make(4, 2, 2, 1, 4);
    SplitMix64 rng(11);
    const QueryPlan plan = ns::build_query(p, 2, rng);
    const Field f(plan.q);
    const Matrix q0 = plan.server_query(0, f);

    const std::vector<std::uint64_t> zeros(4 * plan.msg_len, 0);
    for (std::uint64_t v : answer(q0, zeros, f)) CHECK(v == 0);

    const auto store = random_store(p, plan.msg_len, plan.q, 6);
    const auto base = answer(q0, concat(store), f);
    auto scaled_store = store;
    const std::uint64_t c = 17 % plan.q;
    for (auto& w : scaled_store)
        for (auto& v : w) v = f.mul(v, c);
    const auto scaled = answer(q0, concat(scaled_store), f);
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(scaled[i] == f.mul(base[i], c));
}

TEST_CASE("layer-1 target symbols equal rows of the precoded message") {
    const SystemParams p = make(4, 2, 2, 1, 4);
    SplitMix64 rng(404);
    const QueryPlan plan = ns::build_query(p, 1, rng);
    const Field f(plan.q);
    const auto store = random_store(p, plan.msg_len, plan.q, 12);
    const auto w1_star = mat_vec(plan.precoding[0], store[0], f);
    const auto answers = evaluate_answers(plan, store);

    // The {1} form holds the first segment of S_1 * W_1 in coordinate order.
    for (const PlanForm& form : plan.forms) {
        if (form.mask != 0b0001) continue;
        REQUIRE(form.desired_offset == 0);
        for (long long c = 0; c < form.size; ++c) {
            const PlanSymbol& sym = plan.symbols[form.symbol_ids[c]];
            long long idx_in_server = -1;
            const auto& order = plan.server_order[sym.server];
            for (std::size_t i = 0; i < order.size(); ++i)
                if (order[i] == form.symbol_ids[c]) idx_in_server = i;
            REQUIRE(idx_in_server >= 0);
            CHECK(answers[sym.server].symbols[idx_in_server] == w1_star[c]);
        }
    }
}

TEST_CASE("every layer-i symbol sums exactly i distinct messages") {
    for (const SystemParams& p : kMatrix) {
        for (int k_star = 1; k_star <= p.k2; ++k_star) {
            const QueryPlan plan = ns::build_structure(p, k_star);
            for (const PlanSymbol& sym : plan.symbols) {
                CHECK(popcount32(sym.comp_mask) == sym.layer);
                std::set<int> msgs;
                for (const Contribution& c : sym.contribs) msgs.insert(c.msg);
                CHECK(static_cast<int>(msgs.size()) == sym.layer);
            }
        }
    }
}

TEST_CASE("round trip across the system matrix") {
    for (const SystemParams& p : kMatrix) {
        for (int k_star = 1; k_star <= p.k2; ++k_star) {
            for (std::uint64_t seed : {1ULL, 99ULL}) {
                SplitMix64 rng(seed);
                const QueryPlan plan = ns::build_query(p, k_star, rng);
                const auto store = random_store(p, plan.msg_len, plan.q, seed + 7);
                const auto recovered = ns::decode(plan, evaluate_answers(plan, store));
                CHECK(recovered == store[k_star - 1]);
            }
        }
    }
}

TEST_CASE("download cost equals the exact scheme rate") {
    for (const SystemParams& p : kMatrix) {
        const Rational expected = capacity::rate_ns(p).inverse();
        for (int k_star = 1; k_star <= p.k2; ++k_star) {
            const QueryPlan plan = ns::build_structure(p, k_star);
            CHECK(Rational(plan.total_symbols(), plan.msg_len) == expected);
        }
    }
}

TEST_CASE("degenerate (4,2:2,2:2) reproduces the two-layer shape at L=8") {
    const QueryPlan plan = ns::build_structure(make(4, 2, 2, 2, 2), 1);
    CHECK(plan.msg_len == 8);
    CHECK(plan.per_server == 3);
    const auto layout = layout_of(plan);
    for (int s = 0; s < 4; ++s) {
        CHECK(layout.at({s, 1}).at(0b01) == 1);
        CHECK(layout.at({s, 1}).at(0b10) == 1);
        CHECK(layout.at({s, 2}).at(0b11) == 1);
    }
}

TEST_CASE("corrupting an answer symbol is detected or changes the output") {
    const SystemParams p = make(4, 2, 2, 1, 4);
    SplitMix64 rng(31);
    const QueryPlan plan = ns::build_query(p, 4, rng);
    const Field f(plan.q);
    const auto store = random_store(p, plan.msg_len, plan.q, 8);
    auto answers = evaluate_answers(plan, store);
    answers[2].symbols[5] = f.add(answers[2].symbols[5], 1);
    bool detected = false;
    try {
        const auto recovered = ns::decode(plan, answers);
        detected = recovered != store[3];
    } catch (const CorruptionError&) {
        detected = true;
    }
    CHECK(detected);
}

TEST_CASE("malformed answer sets are rejected") {
    const SystemParams p = make(3, 2, 2, 1, 3);
    SplitMix64 rng(1);
    const QueryPlan plan = ns::build_query(p, 1, rng);
    const auto store = random_store(p, plan.msg_len, plan.q, 2);
    auto answers = evaluate_answers(plan, store);
    SUBCASE("missing answer") {
        answers.pop_back();
        CHECK_THROWS_AS(ns::decode(plan, answers), ProtocolError);
    }
    SUBCASE("short answer") {
        answers[1].symbols.pop_back();
        CHECK_THROWS_AS(ns::decode(plan, answers), ProtocolError);
    }
    SUBCASE("duplicate server") {
        answers[1].server = 0;
        CHECK_THROWS_AS(ns::decode(plan, answers), ProtocolError);
    }
}

TEST_CASE("degenerate corners: T1=N, T1=T2 under K1<K2, vacuous second level") {
    const std::vector<SystemParams> corners = {
        make(3, 3, 2, 1, 3),   // zero-size groups in high layers
        make(4, 2, 2, 2, 4),   // equal levels, two classes
        make(4, 3, 2, 1, 2),   // K1 = K2 with T1 > T2
        make(2, 2, 1, 2, 2),   // full collusion
    };
    for (const SystemParams& p : corners) {
        const Rational expected = capacity::rate_ns(p).inverse();
        for (int k_star = 1; k_star <= p.k2; ++k_star) {
            SplitMix64 rng(40 + k_star);
            const QueryPlan plan = ns::build_query(p, k_star, rng);
            CHECK(Rational(plan.total_symbols(), plan.msg_len) == expected);
            const auto store = random_store(p, plan.msg_len, plan.q, 50 + k_star);
            const auto recovered = ns::decode(plan, evaluate_answers(plan, store));
            CHECK(recovered == store[k_star - 1]);
        }
    }
}

TEST_CASE("modulus and reduction overrides are validated") {
    SystemParams p = make(4, 2, 2, 1, 4);
    p.modulus = 23;  // below the largest code length 24
    CHECK_THROWS_AS(ns::build_structure(p, 1), ParamError);
    p.modulus = 31;
    CHECK_NOTHROW(ns::build_structure(p, 1));
    p.modulus = 0;
    p.reduction = 3;  // does not divide 4
    CHECK_THROWS_AS(ns::build_structure(p, 1), ParamError);
    p.reduction = 2;
    const QueryPlan plan = ns::build_structure(p, 1);
    CHECK(plan.msg_len == 128);
    CHECK(plan.total_symbols() == 232);
    CHECK_THROWS_AS(ns::build_structure(make(4, 2, 2, 1, 4), 0), ParamError);
    CHECK_THROWS_AS(ns::build_structure(make(4, 2, 2, 1, 4), 5), ParamError);
}
