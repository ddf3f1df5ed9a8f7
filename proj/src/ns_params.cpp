#include "pir2/ns_params.hpp"

#include <numeric>

namespace pir2::ns_params {

namespace {

long long checked_mul(long long a, long long b) {
    long long out;
    if (__builtin_mul_overflow(a, b, &out))
        throw ParamError("parameter table overflows 64-bit arithmetic");
    return out;
}

long long checked_add(long long a, long long b) {
    long long out;
    if (__builtin_add_overflow(a, b, &out))
        throw ParamError("parameter table overflows 64-bit arithmetic");
    return out;
}

long long ipow(long long base, int exp) {
    long long out = 1;
    for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

// sum_{a=0}^{k-1} n^a t^{k-1-a}; the division-free form of (n^k - t^k)/(n - t).
long long geometric(long long n, long long t, int k) {
    long long out = 0;
    for (int a = 0; a < k; ++a)
        out = checked_add(out, checked_mul(ipow(n, a), ipow(t, k - 1 - a)));
    return out;
}

}  // namespace

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long out = 1;
    for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
    return out;
}

long long NsParameterTable::count(int i, int j) const {
    return binomial(imax, i) * binomial(jmax, j);
}

long long NsParameterTable::reduction() const {
    long long g = 0;
    auto fold = [&g](long long v) {
        if (v != 0) g = std::gcd(g, v);
    };
    for (int i = 0; i <= imax; ++i) {
        for (int j = 0; j <= jmax; ++j) {
            if (i + j == 0) continue;
            const ClassParams& c = at(i, j);
            fold(c.d);
            if (c.k1) fold(*c.k1);
            if (c.k2) fold(*c.k2);
        }
    }
    return g == 0 ? 1 : g;
}

NsParameterTable build_table(const SystemParams& p) {
    p.validate();
    NsParameterTable t;
    t.p = p;
    t.imax = p.k1;
    t.jmax = p.k2 - p.k1;
    const long long n = p.n_servers, t1 = p.t1, t2 = p.t2;

    t.m_const = checked_add(ipow(t2, t.jmax),
                            checked_mul(t1 - t2, geometric(n, t2, t.jmax)));
    t.message_len = ipow(n, p.k2);

    auto d_of = [&](int i, int j) -> long long {
        if (i + j == 0) return 0;
        if (j == 0)
            return checked_mul(t.m_const,
                               checked_mul(ipow(t1, t.imax - i), ipow(n - t1, i - 1)));
        return checked_mul(
            checked_mul(ipow(t1, t.imax - i), ipow(n - t1, i)),
            checked_mul(ipow(t2, t.jmax - j), ipow(n - t2, j - 1)));
    };

    t.cls.resize((t.imax + 1) * (t.jmax + 1));
    for (int i = 0; i <= t.imax; ++i) {
        for (int j = 0; j <= t.jmax; ++j) {
            ClassParams c;
            c.d = d_of(i, j);
            c.m = checked_mul(n, c.d);
            if (i < t.imax) {
                const long long n1 = checked_add(c.m, checked_mul(n, d_of(i + 1, j)));
                if ((t1 * n1) % n != 0)
                    throw Error("non-integer k1 entry; parameter table is inconsistent");
                c.n1 = n1;
                c.k1 = t1 * n1 / n;
            }
            if (j < t.jmax) {
                const long long n2 = checked_add(c.m, checked_mul(n, d_of(i, j + 1)));
                if ((t2 * n2) % n != 0)
                    throw Error("non-integer k2 entry; parameter table is inconsistent");
                c.n2 = n2;
                c.k2 = t2 * n2 / n;
            }
            t.cls[i * (t.jmax + 1) + j] = c;
        }
    }
    return t;
}

long long reduction_factor(const SystemParams& p) {
    return build_table(p).reduction();
}

namespace {

void add_check(PlacementIdentityReport& rep, std::string label, long long lhs,
               long long rhs, PlacementIdentityReport::Rel rel = PlacementIdentityReport::Rel::Eq) {
    PlacementIdentityReport::Check c;
    c.label = std::move(label);
    c.lhs = lhs;
    c.rhs = rhs;
    c.rel = rel;
    switch (rel) {
        case PlacementIdentityReport::Rel::Eq: c.ok = lhs == rhs; break;
        case PlacementIdentityReport::Rel::Le: c.ok = lhs <= rhs; break;
        case PlacementIdentityReport::Rel::Lt: c.ok = lhs < rhs; break;
    }
    rep.all_ok = rep.all_ok && c.ok;
    rep.checks.push_back(std::move(c));
}

// Sum of f(composition class) over all subsets of 1:K2 that contain `incl`
// and exclude `excl` (0 = no constraint), by explicit enumeration.
template <typename F>
long long enumerate_sum(const NsParameterTable& t, int incl, int excl, F f) {
    const int k2 = t.p.k2;
    long long total = 0;
    for (unsigned mask = 1; mask < (1u << k2); ++mask) {
        if (incl && !(mask & (1u << (incl - 1)))) continue;
        if (excl && (mask & (1u << (excl - 1)))) continue;
        int i = 0, j = 0;
        for (int b = 0; b < k2; ++b) {
            if (mask & (1u << b)) (b < t.p.k1 ? i : j) += 1;
        }
        total = checked_add(total, f(i, j));
    }
    return total;
}

}  // namespace

PlacementIdentityReport verify_placement_identities(const SystemParams& p) {
    const NsParameterTable t = build_table(p);
    const long long n = p.n_servers, t1 = p.t1, t2 = p.t2;
    const long long big_l = t.message_len;
    PlacementIdentityReport rep;

    // Item 1 plus the adjacent-class ratio identities.
    for (int i = 0; i <= t.imax; ++i) {
        for (int j = 0; j <= t.jmax; ++j) {
            if (i + j == 0) {
                add_check(rep, "d(0,0) == 0", t.at(0, 0).d, 0);
                continue;
            }
            const ClassParams& c = t.at(i, j);
            const std::string cl = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (c.k1) add_check(rep, "k1 == m @" + cl, *c.k1, c.m);
            if (c.k2)
                add_check(rep, "k2 <= m @" + cl, *c.k2, c.m, PlacementIdentityReport::Rel::Le);
            if (i < t.imax)
                add_check(rep, "d ratio T1:(N-T1) @" + cl,
                          checked_mul(c.d, n - t1),
                          checked_mul(t.at(i + 1, j).d, t1));
            if (j < t.jmax)
                add_check(rep, "d ratio >= T2:(N-T2) @" + cl,
                          checked_mul(t.at(i, j + 1).d, t2),
                          checked_mul(c.d, n - t2), PlacementIdentityReport::Rel::Le);
        }
    }

    auto m_of = [&t](int i, int j) { return t.at(i, j).m; };
    auto k1_of = [&t](int i, int j) { return t.at(i, j).k1.value_or(0); };
    auto k2_of = [&t](int i, int j) { return t.at(i, j).k2.value_or(0); };

    // Item 2: sum of m over groups containing the target equals L, both for a
    // high-privacy and (when present) a low-privacy target, and the
    // binomial-weighted closed form agrees with the enumeration.
    {
        const long long lhs = enumerate_sum(t, 1, 0, m_of);
        add_check(rep, "sum m (k*=1) == L", lhs, big_l);
        long long weighted = 0;
        for (int i = 1; i <= t.imax; ++i)
            for (int j = 0; j <= t.jmax; ++j)
                weighted = checked_add(
                    weighted, checked_mul(binomial(t.imax - 1, i - 1) *
                                              binomial(t.jmax, j),
                                          m_of(i, j)));
        add_check(rep, "sum m (k*=1) enumeration == weighted form", lhs, weighted);
    }
    if (p.k2 > p.k1) {
        const long long lhs = enumerate_sum(t, p.k1 + 1, 0, m_of);
        add_check(rep, "sum m (k*=K1+1) == L", lhs, big_l);
    }

    // Item 3: interference budget per non-target message fits the message
    // length and matches the aggregate closed forms. The inequality is strict
    // except at T = N, where the segments fill the stream exactly.
    const auto strict1 =
        t1 < n ? PlacementIdentityReport::Rel::Lt : PlacementIdentityReport::Rel::Le;
    const auto strict2 =
        t2 < n ? PlacementIdentityReport::Rel::Lt : PlacementIdentityReport::Rel::Le;
    if (p.k1 >= 2) {
        const long long lhs = enumerate_sum(t, 2, 1, k1_of);
        const long long closed = checked_mul(t1, ipow(n, p.k2 - 1));
        add_check(rep, "sum k1 (k*=1, k=2) == T1*N^(K2-1)", lhs, closed);
        add_check(rep, "sum k1 (k*=1, k=2) fits L", lhs, big_l, strict1);
    }
    if (p.k2 > p.k1) {
        const long long lhs = enumerate_sum(t, p.k1 + 1, 1, k1_of);
        const long long closed = checked_mul(t1, ipow(n, p.k2 - 1));
        add_check(rep, "sum k1 (k*=1, k low) == T1*N^(K2-1)", lhs, closed);
        add_check(rep, "sum k1 (k*=1, k low) fits L", lhs, big_l, strict1);

        // The budget is T2*N^(K2-1) for either class of k: summing the
        // binomial-weighted pieces telescopes to the same total.
        const long long lhs2 = enumerate_sum(t, 1, p.k1 + 1, k2_of);
        const long long closed2 = checked_mul(t2, ipow(n, p.k2 - 1));
        add_check(rep, "sum k2 (k* low, k=1) == T2*N^(K2-1)", lhs2, closed2);
        add_check(rep, "sum k2 (k* low, k=1) fits L", lhs2, big_l, strict2);
    }
    if (p.k2 - p.k1 >= 2) {
        const long long lhs = enumerate_sum(t, p.k1 + 2, p.k1 + 1, k2_of);
        const long long closed = checked_mul(t2, ipow(n, p.k2 - 1));
        add_check(rep, "sum k2 (k* low, k low) == T2*N^(K2-1)", lhs, closed);
        add_check(rep, "sum k2 (k* low, k low) fits L", lhs, big_l, strict2);
    }
    return rep;
}

}  // namespace pir2::ns_params
