#pragma once

#include "cya/linalg.hpp"
#include "cya/polynomial.hpp"

namespace cya {

// Cyclotomic polynomial Phi_m, cached.
inline const Poly& cyclotomic_poly(long m) {
    static std::map<long, Poly> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    // x^m - 1 divided by all proper Phi_d
    std::vector<Rat> xm(static_cast<std::size_t>(m) + 1, Rat(0));
    xm[0] = -1;
    xm.back() = 1;
    Poly p{std::move(xm)};
    for (long d = 1; d < m; ++d)
        if (m % d == 0) p = p / cyclotomic_poly(d);
    return cache.emplace(m, std::move(p)).first->second;
}

inline long euler_phi(long m) { return cyclotomic_poly(m).degree(); }

// Element of Q(zeta_m), coefficients in the power basis 1, zeta, ...,
// zeta^(phi(m)-1).  Binary operations promote both sides to the lcm
// conductor; results are eagerly reduced to the smallest conductor.
struct Cyc {
    long m = 1;
    std::vector<Rat> c;  // size phi(m)

    Cyc() : m(1), c{Rat(0)} {}
    /* implicit */ Cyc(const Rat& r) : m(1), c{r} {}
    /* implicit */ Cyc(long n) : m(1), c{Rat(n)} {}
    Cyc(long mm, std::vector<Rat> cc) : m(mm), c(std::move(cc)) {
        c.resize(static_cast<std::size_t>(euler_phi(m)), Rat(0));
    }

    bool is_zero() const {
        for (auto& x : c)
            if (x != 0) return false;
        return true;
    }
};

namespace detail {

// reduce a plain polynomial in zeta mod Phi_m into the power basis
inline std::vector<Rat> cyc_reduce_poly(Poly p, long m) {
    p = p % cyclotomic_poly(m);
    std::vector<Rat> c(static_cast<std::size_t>(euler_phi(m)), Rat(0));
    for (int i = 0; i <= p.degree(); ++i) c[static_cast<std::size_t>(i)] = p.coeff(i);
    return c;
}

}  // namespace detail

// zeta_m^k as an element of Q(zeta_m)
inline Cyc cyc_root(long m, long k) {
    k %= m;
    if (k < 0) k += m;
    return Cyc(m, detail::cyc_reduce_poly(poly_mono(Rat(1), static_cast<int>(k)), m));
}

// Galois action zeta -> zeta^j (gcd(j, m) = 1)
inline Cyc cyc_galois(const Cyc& a, long j) {
    Poly p;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        long e = (static_cast<long>(i) * j) % a.m;
        p += poly_mono(a.c[i], static_cast<int>(e));
    }
    return Cyc(a.m, detail::cyc_reduce_poly(p, a.m));
}

// Rewrite a in the smallest cyclotomic field containing it.
inline Cyc cyc_reduce(const Cyc& a) {
    if (a.m == 1) return a;
    {
        bool rational = true;
        for (std::size_t i = 1; i < a.c.size(); ++i)
            if (a.c[i] != 0) {
                rational = false;
                break;
            }
        if (rational) return Cyc(a.c.empty() ? Rat(0) : a.c[0]);
    }
    for (long d = 1; d < a.m; ++d) {
        if (a.m % d != 0) continue;
        bool fixed = true;
        for (long j = 1; j < a.m && fixed; ++j) {
            if (std::gcd(j, a.m) != 1 || j % d != 1) continue;
            Cyc s = cyc_galois(a, j);
            if (s.c != a.c) fixed = false;
        }
        if (!fixed) continue;
        // solve for coordinates in the zeta_d power basis
        long phi_d = euler_phi(d);
        long phi_m = euler_phi(a.m);
        Mat<Rat> sys(static_cast<std::size_t>(phi_m), static_cast<std::size_t>(phi_d));
        for (long k = 0; k < phi_d; ++k) {
            Cyc bk = cyc_root(a.m, (a.m / d) * k);
            for (long r = 0; r < phi_m; ++r)
                sys(static_cast<std::size_t>(r), static_cast<std::size_t>(k)) =
                    bk.c[static_cast<std::size_t>(r)];
        }
        auto sol = solve(sys, a.c);
        if (sol) return Cyc(d, *sol);
    }
    return a;
}

inline Cyc cyc_promote(const Cyc& a, long L) {
    if (a.m == L) return a;
    if (L % a.m != 0) throw std::invalid_argument("cyc_promote: bad conductor");
    Poly p;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (a.c[i] != 0) p += poly_mono(a.c[i], static_cast<int>(i * static_cast<std::size_t>(L / a.m)));
    return Cyc(L, detail::cyc_reduce_poly(p, L));
}

inline Cyc operator+(const Cyc& a, const Cyc& b) {
    long L = std::lcm(a.m, b.m);
    Cyc x = cyc_promote(a, L), y = cyc_promote(b, L);
    for (std::size_t i = 0; i < x.c.size(); ++i) x.c[i] += y.c[i];
    return L == a.m && L == b.m ? x : cyc_reduce(x);
}
inline Cyc operator-(const Cyc& a) {
    Cyc r = a;
    for (auto& x : r.c) x = -x;
    return r;
}
inline Cyc operator-(const Cyc& a, const Cyc& b) { return a + (-b); }
inline Cyc operator*(const Cyc& a, const Cyc& b) {
    long L = std::lcm(a.m, b.m);
    Cyc x = cyc_promote(a, L), y = cyc_promote(b, L);
    Poly pa, pb;
    for (std::size_t i = 0; i < x.c.size(); ++i) pa += poly_mono(x.c[i], static_cast<int>(i));
    for (std::size_t i = 0; i < y.c.size(); ++i) pb += poly_mono(y.c[i], static_cast<int>(i));
    Cyc r(L, detail::cyc_reduce_poly(pa * pb, L));
    return cyc_reduce(r);
}
inline Cyc& operator+=(Cyc& a, const Cyc& b) { return a = a + b; }
inline Cyc& operator-=(Cyc& a, const Cyc& b) { return a = a - b; }
inline Cyc& operator*=(Cyc& a, const Cyc& b) { return a = a * b; }

inline bool operator==(const Cyc& a, const Cyc& b) { return (a - b).is_zero(); }
inline bool operator!=(const Cyc& a, const Cyc& b) { return !(a == b); }

// inverse via extended euclid against Phi_m
inline Cyc cyc_inv(const Cyc& a) {
    if (a.is_zero()) throw std::domain_error("cyc_inv(0)");
    Poly pa;
    for (std::size_t i = 0; i < a.c.size(); ++i) pa += poly_mono(a.c[i], static_cast<int>(i));
    Poly r0 = cyclotomic_poly(a.m), r1 = pa;
    Poly s0, s1(Rat(1));  // coefficients of pa in the Bezout identity
    while (!r1.is_zero()) {
        auto [q, r2] = poly_divrem(r0, r1);
        Poly s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    // r0 = gcd (a nonzero constant since Phi_m is irreducible)
    if (r0.degree() != 0) throw std::domain_error("cyc_inv: not invertible");
    Poly inv = s0 * (1 / r0.coeff(0));
    return cyc_reduce(Cyc(a.m, detail::cyc_reduce_poly(inv, a.m)));
}

inline Cyc operator/(const Cyc& a, const Cyc& b) { return a * cyc_inv(cyc_promote(b, std::lcm(a.m, b.m))); }

}  // namespace cya
