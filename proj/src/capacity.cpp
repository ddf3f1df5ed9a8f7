#include "pir2/capacity.hpp"

#include <sstream>

namespace pir2::capacity {

namespace {

Rational ratio(long long t, long long n) { return Rational(t, n); }

Rational d_upper_cost(const SystemParams& p) {
    const Rational head = dstar(p.n_servers, p.k1, p.t1);
    const Rational tail = Rational(p.t2, p.n_servers) *
                          Rational::pow(ratio(p.t1, p.n_servers), p.k1 - 1) *
                          dstar(p.n_servers, p.k2 - p.k1, p.t2);
    return head + tail;
}

Rational d_ns_cost(const SystemParams& p) {
    const Rational head = dstar(p.n_servers, p.k1, p.t1);
    const Rational tail = Rational::pow(ratio(p.t1, p.n_servers), p.k1) *
                          dstar(p.n_servers, p.k2 - p.k1, p.t2);
    return head + tail;
}

Rational d_nb_cost(const SystemParams& p) {
    const Rational d1 = dstar(p.n_servers, p.k1, p.t1);
    const Rational d2 = dstar(p.n_servers, p.k2 - p.k1, p.t2);
    const Rational frac = ratio(p.t2, p.n_servers);
    const Rational a = d1 + frac * d2;
    const Rational b = d2 + frac * d1;
    return a > b ? a : b;
}

// The two symbolic conditions under which the block scheme strictly wins.
bool nb_strictly_better_symbolically(const SystemParams& p) {
    const Rational d1 = dstar(p.n_servers, p.k1, p.t1);
    const Rational d2 = dstar(p.n_servers, p.k2 - p.k1, p.t2);
    const Rational t1_pow = Rational::pow(ratio(p.t1, p.n_servers), p.k1);
    const Rational t2_frac = ratio(p.t2, p.n_servers);
    if (d1 >= d2 && t2_frac < t1_pow) return true;
    // d1/(1 - t1_pow) > d2/(1 - t2_frac), cross-multiplied (both
    // denominators are >= 0, so this form also covers T1 = N).
    if (d1 < d2 && d1 * (Rational(1) - t2_frac) > d2 * (Rational(1) - t1_pow))
        return true;
    return false;
}

}  // namespace

Rational dstar(long long n, long long k, long long t) {
    if (n < 1 || k < 0 || t < 0) throw ParamError("dstar needs N >= 1, K, T >= 0");
    // sum_{i<K} (T/N)^i = (sum_{i<K} T^i N^{K-1-i}) / N^{K-1}
    if (k == 0) return Rational(0);
    BigInt num = 0;
    for (long long i = 0; i < k; ++i)
        num += BigInt::pow(BigInt(t), i) * BigInt::pow(BigInt(n), k - 1 - i);
    return Rational(num, BigInt::pow(BigInt(n), k - 1));
}

Rational rate_upper(const SystemParams& p) {
    p.validate();
    return d_upper_cost(p).inverse();
}

Rational rate_ns(const SystemParams& p) {
    p.validate();
    return d_ns_cost(p).inverse();
}

Rational rate_nb(const SystemParams& p) {
    p.validate();
    return d_nb_cost(p).inverse();
}

Rational naive_cost(const SystemParams& p) {
    p.validate();
    return dstar(p.n_servers, p.k2, p.t1);
}

Rational ns_gap(const SystemParams& p) { return d_ns_cost(p) - d_upper_cost(p); }

Rational ns_gap_closed_form(const SystemParams& p) {
    return Rational(p.t1 - p.t2, p.n_servers) *
           Rational::pow(ratio(p.t1, p.n_servers), p.k1 - 1) *
           dstar(p.n_servers, p.k2 - p.k1, p.t2);
}

Rational coding_gain(const SystemParams& p) {
    return naive_cost(p) - d_ns_cost(p);
}

Rational coding_gain_closed_form(const SystemParams& p) {
    return Rational::pow(ratio(p.t1, p.n_servers), p.k1) *
           (dstar(p.n_servers, p.k2 - p.k1, p.t1) -
            dstar(p.n_servers, p.k2 - p.k1, p.t2));
}

Winner best_scheme(const SystemParams& p) {
    p.validate();
    const Rational ns = rate_ns(p);
    const Rational nb = rate_nb(p);
    const int cmp = Rational::compare(nb, ns);
    // The case analysis presumes two message classes; with K1 = K2 both
    // expressions collapse to the single-level rate and tie trivially.
    if (p.k1 == p.k2) {
        if (cmp != 0)
            throw Error("degenerate system failed to tie at " + p.label());
        return Winner::Tie;
    }
    const bool nb_symbolic = nb_strictly_better_symbolically(p);
    if (nb_symbolic != (cmp > 0))
        throw Error("scheme comparison disagrees with the symbolic case analysis at " +
                    p.label());
    if (cmp > 0) return Winner::NB;
    if (cmp < 0) return Winner::NS;
    return Winner::Tie;
}

Rational prop1_bound() {
    const Rational bound(11, 21);
    const SystemParams p{3, 2, 2, 1, 3, 0, 0};
    if (!(bound < rate_upper(p)))
        throw Error("refined bound fails to sharpen the generic bound");
    const Rational best = rate_ns(p) > rate_nb(p) ? rate_ns(p) : rate_nb(p);
    if (!(best <= bound))
        throw Error("refined bound contradicts an achievable rate");
    return bound;
}

RateReport rate_report(const SystemParams& p) {
    RateReport r;
    r.r_ns = rate_ns(p);
    r.r_nb = rate_nb(p);
    r.r_upper = rate_upper(p);
    r.r_naive = naive_cost(p).inverse();
    r.d_gap = ns_gap(p);
    r.coding_gain = coding_gain(p);
    r.best = best_scheme(p);
    return r;
}

std::vector<std::pair<SystemParams, RateReport>> sweep(const SweepSpec& spec) {
    if (spec.lo > spec.hi) throw ParamError("empty sweep range");
    std::vector<std::pair<SystemParams, RateReport>> rows;
    for (int v = spec.lo; v <= spec.hi; ++v) {
        SystemParams p;
        p.n_servers = spec.n_servers;
        p.t2 = spec.t2;
        if (spec.vary == SweepSpec::Vary::K1) {
            p.t1 = spec.t1;
            p.k1 = v;
            p.k2 = v + spec.k2_minus_k1;
        } else {
            p.t1 = v;
            p.k1 = spec.k1;
            p.k2 = spec.k2;
        }
        p.validate();
        rows.emplace_back(p, rate_report(p));
    }
    return rows;
}

std::string sweep_csv(
    const std::vector<std::pair<SystemParams, RateReport>>& rows) {
    std::ostringstream out;
    out << "N,T1,K1,T2,K2,r_ns,r_nb,r_upper,r_naive,best,"
           "r_ns_dec,r_nb_dec,r_upper_dec,r_naive_dec\n";
    for (const auto& [p, r] : rows) {
        out << p.n_servers << ',' << p.t1 << ',' << p.k1 << ',' << p.t2 << ','
            << p.k2 << ',' << r.r_ns.to_fraction_string() << ','
            << r.r_nb.to_fraction_string() << ','
            << r.r_upper.to_fraction_string() << ','
            << r.r_naive.to_fraction_string() << ',' << winner_name(r.best)
            << ',' << r.r_ns.to_decimal_string() << ','
            << r.r_nb.to_decimal_string() << ','
            << r.r_upper.to_decimal_string() << ','
            << r.r_naive.to_decimal_string() << '\n';
    }
    return out.str();
}

}  // namespace pir2::capacity
