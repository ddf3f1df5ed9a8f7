#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "pir2/capacity.hpp"

using namespace pir2;
using namespace pir2::capacity;

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

// Every valid tuple with N <= n_max, K2 <= k_max.
std::vector<SystemParams> all_systems(int n_max, int k_max) {
    std::vector<SystemParams> out;
    for (int n = 1; n <= n_max; ++n)
        for (int t2 = 1; t2 <= n; ++t2)
            for (int t1 = t2; t1 <= n; ++t1)
                for (int k1 = 1; k1 <= k_max; ++k1)
                    for (int k2 = k1; k2 <= k_max; ++k2)
                        out.push_back(make(n, t1, k1, t2, k2));
    return out;
}

}  // namespace

TEST_CASE("dstar golden values") {
    CHECK(dstar(4, 2, 2) == Rational(3, 2));
    CHECK(dstar(7, 1, 3) == Rational(1));
    CHECK(dstar(4, 4, 2) == Rational(15, 8));
    CHECK(dstar(4, 0, 2) == Rational(0));
    CHECK(dstar(3, 2, 2) == Rational(5, 3));
    CHECK(dstar(10, 4, 2) == Rational(156, 125));
    CHECK_THROWS_AS(dstar(0, 1, 1), ParamError);
}

TEST_CASE("rate golden values") {
    CHECK(rate_upper(make(3, 2, 2, 1, 3)) == Rational(9, 17));
    CHECK(rate_ns(make(4, 2, 2, 1, 4)) == Rational(16, 29));
    CHECK(rate_nb(make(4, 2, 2, 1, 4)) == Rational(16, 29));
    CHECK(naive_cost(make(4, 2, 2, 1, 4)) == Rational(15, 8));
    CHECK(rate_ns(make(3, 2, 2, 1, 3)) == Rational(9, 19));
    CHECK(rate_nb(make(3, 2, 2, 1, 3)) == Rational(1, 2));
}

TEST_CASE("degenerate identities") {
    // K1 = K2 collapses the upper bound to the single-level capacity.
    for (const SystemParams& p : all_systems(6, 4)) {
        if (p.k1 != p.k2) continue;
        CHECK(rate_upper(p) == dstar(p.n_servers, p.k2, p.t1).inverse());
        if (p.t1 == p.t2)
            CHECK(rate_ns(p) == dstar(p.n_servers, p.k2, p.t1).inverse());
    }
}

TEST_CASE("rate_ns lies strictly between naive and upper at (10,6:2,2:6)") {
    const SystemParams p = make(10, 6, 2, 2, 6);
    const Rational naive = naive_cost(p).inverse();
    CHECK(naive < rate_ns(p));
    CHECK(rate_ns(p) < rate_upper(p));
}

TEST_CASE("ordering and identities over the sweep matrix") {
    for (const SystemParams& p : all_systems(12, 8)) {
        const Rational ns = rate_ns(p);
        const Rational nb = rate_nb(p);
        const Rational upper = rate_upper(p);
        const Rational naive = naive_cost(p).inverse();
        const Rational best = ns > nb ? ns : nb;
        CHECK(naive <= best);
        CHECK(best <= upper);
        if (p.t1 == p.t2) CHECK(ns == upper);

        // Gap and coding-gain closed forms hold exactly.
        CHECK(ns_gap(p) == ns_gap_closed_form(p));
        CHECK(coding_gain(p) == coding_gain_closed_form(p));
        if (p.k2 - p.k1 <= 1) CHECK(coding_gain(p).is_zero());
        if (p.k2 - p.k1 >= 2 && p.t1 > p.t2) CHECK(coding_gain(p).signum() > 0);

        // best_scheme throws if the exact comparison ever disagrees with the
        // symbolic case analysis, so calling it is itself the cross-check.
        (void)best_scheme(p);

        // T1 = N makes the block scheme meet the upper bound.
        if (p.t1 == p.n_servers && p.k1 < p.k2) {
            const Rational d1 = dstar(p.n_servers, p.k1, p.t1);
            const Rational d2 = dstar(p.n_servers, p.k2 - p.k1, p.t2);
            if (d1 >= d2) CHECK(nb == upper);
        }
    }
}

TEST_CASE("symmetric halves make the two block-scheme arguments coincide") {
    // K1 = K2 - K1 and T1 = T2: both arguments of the max are equal.
    const SystemParams p = make(6, 2, 2, 2, 4);
    const Rational d1 = dstar(6, 2, 2);
    const Rational expected = (d1 + Rational(2, 6) * d1).inverse();
    CHECK(rate_nb(p) == expected);
}

TEST_CASE("best_scheme examples") {
    CHECK(best_scheme(make(4, 2, 2, 1, 4)) == Winner::Tie);
    CHECK(best_scheme(make(10, 10, 2, 2, 6)) == Winner::NB);
    CHECK(best_scheme(make(10, 2, 2, 2, 6)) == Winner::NS);
    CHECK(best_scheme(make(3, 2, 2, 1, 3)) == Winner::NB);
}

TEST_CASE("refined bound for (3,2:2,1:3)") {
    const Rational bound = prop1_bound();
    CHECK(bound == Rational(11, 21));
    CHECK(bound < Rational(9, 17));  // 187 < 189 by cross-multiplication
    const SystemParams p = make(3, 2, 2, 1, 3);
    CHECK(rate_ns(p) <= bound);
    CHECK(rate_nb(p) <= bound);
}

TEST_CASE("figure sweep: gap shrinks in K1") {
    SweepSpec spec;
    spec.vary = SweepSpec::Vary::K1;
    spec.lo = 1;
    spec.hi = 8;
    spec.n_servers = 10;
    spec.t1 = 6;
    spec.t2 = 2;
    spec.k2_minus_k1 = 4;
    const auto rows = sweep(spec);
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].second.d_gap == ns_gap_closed_form(rows[i].first));
        if (i > 0) CHECK(rows[i].second.d_gap < rows[i - 1].second.d_gap);
    }
}

TEST_CASE("figure sweep: endpoints in T1") {
    SweepSpec spec;
    spec.vary = SweepSpec::Vary::T1;
    spec.lo = 2;
    spec.hi = 10;
    spec.n_servers = 10;
    spec.t2 = 2;
    spec.k1 = 2;
    spec.k2 = 6;
    const auto rows = sweep(spec);
    REQUIRE(rows.size() == 9);
    CHECK(rows.front().second.r_ns == rows.front().second.r_upper);  // T1 = T2
    CHECK(rows.back().second.r_nb == rows.back().second.r_upper);    // T1 = N
    // One transition from layered-favoring to block-favoring as T1 grows.
    bool seen_nb = false;
    for (const auto& [p, rep] : rows) {
        if (rep.best == Winner::NB) seen_nb = true;
        if (seen_nb) CHECK(rep.best == Winner::NB);
    }
    CHECK(rows.front().second.best != Winner::NB);
    CHECK(seen_nb);
}

TEST_CASE("sweep rejects an empty range") {
    SweepSpec spec;
    spec.vary = SweepSpec::Vary::T1;
    spec.lo = 5;
    spec.hi = 4;
    spec.n_servers = 10;
    spec.t2 = 2;
    spec.k1 = 2;
    spec.k2 = 6;
    CHECK_THROWS_AS(sweep(spec), ParamError);
}

TEST_CASE("CSV rendering carries fractions and decimals") {
    SweepSpec spec;
    spec.vary = SweepSpec::Vary::T1;
    spec.lo = 2;
    spec.hi = 3;
    spec.n_servers = 4;
    spec.t2 = 2;
    spec.k1 = 1;
    spec.k2 = 2;
    const std::string csv = sweep_csv(sweep(spec));
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    CHECK(header ==
          "N,T1,K1,T2,K2,r_ns,r_nb,r_upper,r_naive,best,"
          "r_ns_dec,r_nb_dec,r_upper_dec,r_naive_dec");
    std::getline(in, row);
    CHECK(row.substr(0, 11) == "4,2,1,2,2,2");
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(rate_ns(make(4, 1, 2, 2, 4)), ParamError);   // T2 > T1
    CHECK_THROWS_AS(rate_ns(make(4, 5, 2, 1, 4)), ParamError);   // T1 > N
    CHECK_THROWS_AS(rate_ns(make(4, 2, 3, 1, 2)), ParamError);   // K1 > K2
    CHECK_THROWS_AS(rate_ns(make(4, 2, 0, 1, 2)), ParamError);   // K1 < 1
}
