#pragma once

#include <algorithm>
#include <cassert>
#include <sstream>
#include <utility>

#include "cya/rational.hpp"

namespace cya {

// Dense univariate polynomial over Q.  Coefficient i is the coefficient of
// z^i; trailing (high-degree) zeros are always stripped, so the zero
// polynomial has an empty coefficient vector and degree -1.
struct Poly {
    std::vector<Rat> c;

    Poly() = default;
    explicit Poly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { normalize(); }
    /* implicit */ Poly(const Rat& r) {
        if (r != 0) c.push_back(r);
    }
    /* implicit */ Poly(long n) {
        if (n != 0) c.push_back(Rat(n));
    }

    void normalize() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    const Rat& coeff(int i) const {
        static const Rat zero(0);
        if (i < 0 || i >= static_cast<int>(c.size())) return zero;
        return c[static_cast<std::size_t>(i)];
    }
    Rat& at(int i) {
        if (i >= static_cast<int>(c.size())) c.resize(static_cast<std::size_t>(i) + 1, Rat(0));
        return c[static_cast<std::size_t>(i)];
    }
    const Rat& lc() const {
        assert(!c.empty());
        return c.back();
    }

    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return !(*this == o); }
};

inline Poly poly_z() { return Poly(std::vector<Rat>{Rat(0), Rat(1)}); }

// monomial r * z^k
inline Poly poly_mono(const Rat& r, int k) {
    if (r == 0) return Poly();
    std::vector<Rat> v(static_cast<std::size_t>(k) + 1, Rat(0));
    v.back() = r;
    return Poly(std::move(v));
}

inline Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    if (b.c.size() > r.c.size()) r.c.resize(b.c.size(), Rat(0));
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.normalize();
    return r;
}

inline Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

inline Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

inline Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    }
    return Poly(std::move(r));
}

inline Poly operator*(const Poly& a, const Rat& s) {
    Poly r = a;
    for (auto& x : r.c) x *= s;
    r.normalize();
    return r;
}
inline Poly operator*(const Rat& s, const Poly& a) { return a * s; }

inline Poly& operator+=(Poly& a, const Poly& b) { return a = a + b; }
inline Poly& operator-=(Poly& a, const Poly& b) { return a = a - b; }
inline Poly& operator*=(Poly& a, const Poly& b) { return a = a * b; }

// quotient and remainder over Q
inline std::pair<Poly, Poly> poly_divrem(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("poly division by zero");
    Poly rem = a, quo;
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        int k = rem.degree() - b.degree();
        Rat f = rem.lc() / b.lc();
        quo.at(k) += f;
        for (int i = 0; i <= b.degree(); ++i) rem.at(i + k) -= f * b.coeff(i);
        rem.normalize();
    }
    quo.normalize();
    return {quo, rem};
}

inline Poly operator/(const Poly& a, const Poly& b) {
    auto [q, r] = poly_divrem(a, b);
    if (!r.is_zero()) throw std::domain_error("inexact poly division");
    return q;
}

inline Poly operator%(const Poly& a, const Poly& b) { return poly_divrem(a, b).second; }

// monic gcd
inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        Rat inv = 1 / a.lc();
        for (auto& x : a.c) x *= inv;
    }
    return a;
}

inline Poly poly_derivative(const Poly& a) {
    if (a.c.size() <= 1) return Poly();
    std::vector<Rat> r(a.c.size() - 1);
    for (std::size_t i = 1; i < a.c.size(); ++i) r[i - 1] = a.c[i] * Rat(static_cast<long>(i));
    return Poly(std::move(r));
}

template <class F>
F poly_eval(const Poly& a, const F& x) {
    F acc(0);
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = acc * x + F(*it);
    return acc;
}

inline Rat poly_eval(const Poly& a, const Rat& x) { return poly_eval<Rat>(a, x); }

// Taylor shift: p(z + t)
inline Poly poly_shift(const Poly& p, const Rat& t) {
    Poly out;
    Poly base(Rat(1));
    Poly lin(std::vector<Rat>{t, Rat(1)});
    for (std::size_t i = 0; i < p.c.size(); ++i) {
        if (p.c[i] != 0) out += base * p.c[i];
        base *= lin;
    }
    return out;
}

inline Poly poly_pow(const Poly& p, int e) {
    Poly r(Rat(1));
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

// p(q(z)) for polynomial q
inline Poly poly_compose(const Poly& p, const Poly& q) {
    Poly acc;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * q + Poly(*it);
    return acc;
}

// Rational content (gcd of coefficients); content(0) = 0.
inline Rat poly_content(const Poly& p) {
    Rat g(0);
    for (auto& x : p.c) g = rat_gcd(g, x);
    return g;
}

// Multiplicity of z^k dividing p (valuation at 0); the zero polynomial
// reports -1.
inline int poly_val0(const Poly& p) {
    if (p.is_zero()) return -1;
    int v = 0;
    while (p.coeff(v) == 0) ++v;
    return v;
}

// p(z)/z^k
inline Poly poly_shr(const Poly& p, int k) {
    if (p.is_zero()) return p;
    assert(poly_val0(p) >= k);
    return Poly(std::vector<Rat>(p.c.begin() + k, p.c.end()));
}

// All rational roots of p with multiplicities.
inline std::vector<std::pair<Rat, int>> rational_roots(Poly p) {
    std::vector<std::pair<Rat, int>> out;
    if (p.degree() <= 0) return out;
    int v0 = poly_val0(p);
    if (v0 > 0) {
        out.push_back({Rat(0), v0});
        p = poly_shr(p, v0);
    }
    if (p.degree() == 0) return out;
    // scale to primitive integer polynomial
    Rat cont = poly_content(p);
    Poly q = p * (1 / cont);
    Int a0 = q.c.front().get_num();  // all denominators are 1 after scaling
    Int an = q.c.back().get_num();
    auto dn = divisors(a0);
    auto dd = divisors(an);
    for (const Int& num : dn) {
        for (const Int& den : dd) {
            for (int sgn : {1, -1}) {
                Rat cand(sgn * num, den);
                cand.canonicalize();
                if (cand.get_num() != sgn * num || cand.get_den() != den)
                    continue;  // not coprime; same value seen elsewhere
                if (poly_eval(q, cand) != 0) continue;
                int mult = 0;
                Poly lin(std::vector<Rat>{-cand, Rat(1)});
                while (true) {
                    auto [quo, rem] = poly_divrem(q, lin);
                    if (!rem.is_zero()) break;
                    q = quo;
                    ++mult;
                }
                out.push_back({cand, mult});
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// Square root of a rational if it is a perfect square.
inline std::optional<Rat> rat_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    if (mpz_perfect_square_p(r.get_num_mpz_t()) && mpz_perfect_square_p(r.get_den_mpz_t())) {
        Rat s;
        mpz_sqrt(s.get_num_mpz_t(), r.get_num_mpz_t());
        mpz_sqrt(s.get_den_mpz_t(), r.get_den_mpz_t());
        return s;
    }
    return std::nullopt;
}

// Factorization of p into rational roots, irreducible monic quadratics and a
// leading constant.  Throws if an irreducible factor of degree > 2 remains.
struct PolyFactors {
    Rat unit;                                 // leading coefficient
    std::vector<std::pair<Rat, int>> roots;   // (root, multiplicity)
    std::vector<std::pair<Poly, int>> quads;  // (monic irreducible quadratic, multiplicity)
};

inline PolyFactors factor_roots_quadratics(const Poly& p) {
    if (p.is_zero()) throw std::domain_error("factoring zero polynomial");
    PolyFactors f;
    f.unit = p.lc();
    Poly q = p * (1 / p.lc());
    f.roots = rational_roots(q);
    for (auto& [r, m] : f.roots) {
        Poly lin(std::vector<Rat>{-r, Rat(1)});
        for (int i = 0; i < m; ++i) q = q / lin;
    }
    while (q.degree() >= 2) {
        if (q.degree() == 2) {
            Poly quad = q * (1 / q.lc());
            // count multiplicity against remaining factor (it may be a power)
            f.quads.push_back({quad, 1});
            q = Poly(Rat(1));
            break;
        }
        // try to peel a repeated quadratic: gcd with derivative
        Poly g = poly_gcd(q, poly_derivative(q));
        if (g.degree() >= 1) {
            // q = g * (q/g); recurse on parts
            Poly rest = q / g;
            PolyFactors fg = factor_roots_quadratics(g);
            PolyFactors fr = factor_roots_quadratics(rest);
            auto merge = [&](std::vector<std::pair<Poly, int>>& dst,
                             const std::vector<std::pair<Poly, int>>& src) {
                for (const auto& [pp, mm] : src) {
                    bool found = false;
                    for (auto& [dp, dm] : dst)
                        if (dp == pp) {
                            dm += mm;
                            found = true;
                        }
                    if (!found) dst.push_back({pp, mm});
                }
            };
            merge(f.quads, fg.quads);
            merge(f.quads, fr.quads);
            return f;  // roots were already stripped before this point
        }
        if (q.degree() == 4) {
            // Split a squarefree quartic with no rational roots into two
            // rational quadratics, if possible, via the resolvent cubic of
            // the depressed form z^4 + P z^2 + Q z + R.
            Poly mq = q * (1 / q.lc());
            Rat a = mq.coeff(3);
            Poly dep = poly_shift(mq, -a / 4);
            Rat P = dep.coeff(2), Q = dep.coeff(1), R = dep.coeff(0);
            Poly res(std::vector<Rat>{-Q * Q, P * P - 4 * R, 2 * P, Rat(1)});
            bool split = false;
            for (auto& [w, m] : rational_roots(res)) {
                (void)m;
                auto t = rat_sqrt(w);
                if (!t) continue;
                Rat tt = *t;
                Rat mm, nn;
                if (tt == 0) {
                    // (z^2+m)(z^2+n): m+n = P, mn = R
                    auto disc = rat_sqrt(P * P - 4 * R);
                    if (!disc) continue;
                    mm = (P - *disc) / 2;
                    nn = (P + *disc) / 2;
                } else {
                    nn = (P + w + Q / tt) / 2;
                    mm = (P + w - Q / tt) / 2;
                }
                Poly f1(std::vector<Rat>{mm, tt, Rat(1)});
                Poly f2(std::vector<Rat>{nn, -tt, Rat(1)});
                // undo the depressing shift
                f1 = poly_shift(f1, a / 4);
                f2 = poly_shift(f2, a / 4);
                if (f1 * f2 != mq) continue;
                f.quads.push_back({f1, 1});
                f.quads.push_back({f2, 1});
                split = true;
                break;
            }
            if (split) {
                q = Poly(Rat(1));
                break;
            }
        }
        throw std::domain_error("irreducible factor of degree > 2");
    }
    return f;
}

inline std::string poly_str(const Poly& p, const std::string& var = "z") {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= p.degree(); ++i) {
        const Rat& c = p.coeff(i);
        if (c == 0) continue;
        Rat a = c;
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (i == 0)
            os << rat_str(a);
        else {
            if (a != 1) os << rat_str(a) << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

}  // namespace cya
