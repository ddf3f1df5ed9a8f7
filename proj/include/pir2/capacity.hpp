#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pir2/rational.hpp"
#include "pir2/system_params.hpp"

namespace pir2::capacity {

enum class Winner { NS, NB, Tie };

inline const char* winner_name(Winner w) {
    switch (w) {
        case Winner::NS: return "ns";
        case Winner::NB: return "nb";
        default: return "tie";
    }
}

// D*_N(K, T) = sum_{i=0}^{K-1} (T/N)^i, the download cost of the optimal
// T-colluding code; K = 0 yields 0 so the two-level formulas hold verbatim
// at K1 = K2.
Rational dstar(long long n, long long k, long long t);

// Capacity upper bound and the two scheme rates (all exact).
Rational rate_upper(const SystemParams& p);
Rational rate_ns(const SystemParams& p);
Rational rate_nb(const SystemParams& p);

// Download cost of running a plain T1-private code over all K2 messages.
Rational naive_cost(const SystemParams& p);

// D_NS - 1/rate_upper, and its closed form; the two must agree exactly.
Rational ns_gap(const SystemParams& p);
Rational ns_gap_closed_form(const SystemParams& p);

// naive_cost - D_NS, and its closed form; zero iff K2 - K1 <= 1.
Rational coding_gain(const SystemParams& p);
Rational coding_gain_closed_form(const SystemParams& p);

// Exact comparison of the two scheme rates, cross-checked against the
// symbolic case analysis; a disagreement throws (it would be a bug).
Winner best_scheme(const SystemParams& p);

// The refined 11/21 bound for (3, 2:2, 1:3); construction asserts that it
// sharpens the generic bound 9/17 and dominates both scheme rates there.
Rational prop1_bound();

struct RateReport {
    Rational r_ns, r_nb, r_upper, r_naive;
    Rational d_gap;        // D_NS - D_upper
    Rational coding_gain;  // naive cost - D_NS
    Winner best;
};

RateReport rate_report(const SystemParams& p);

struct SweepSpec {
    enum class Vary { K1, T1 };
    Vary vary = Vary::K1;
    int lo = 0, hi = 0;   // inclusive range of the varying coordinate
    int n_servers = 0;
    int t1 = 0, t2 = 0;   // t1 ignored when varying T1
    int k1 = 0, k2 = 0;   // k1 ignored when varying K1
    // When varying K1, keep K2 - K1 fixed at this offset; otherwise K2 is
    // taken from k2 above.
    int k2_minus_k1 = 0;
};

std::vector<std::pair<SystemParams, RateReport>> sweep(const SweepSpec& spec);

// CSV with the exact fractions followed by 12-significant-digit decimals.
std::string sweep_csv(const std::vector<std::pair<SystemParams, RateReport>>& rows);

}  // namespace pir2::capacity
