#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cya {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long n, long d = 1) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) {
    return r.get_str();
}

// Parses "p", "-p", or "p/q".
inline Rat parse_rat(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int rat_floor(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

// Representative of r mod 1 in [0, 1).
inline Rat mod1(const Rat& r) {
    Rat f = r - Rat(rat_floor(r));
    return f;
}

inline Rat rat_pow(const Rat& b, long e) {
    if (e == 0) return 1;
    Rat p;
    if (e < 0) {
        if (b == 0) throw std::domain_error("0^negative");
        mpz_pow_ui(p.get_num_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(-e));
        mpz_pow_ui(p.get_den_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(-e));
    } else {
        mpz_pow_ui(p.get_num_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(p.get_den_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(e));
    }
    p.canonicalize();
    return p;
}

// gcd for rationals: gcd(p1/q1, p2/q2) = gcd(p1,p2)/lcm(q1,q2).
// Useful as a content notion; gcd(0,x) = |x|.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    Rat g;
    mpz_gcd(g.get_num_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
    mpz_lcm(g.get_den_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
    g.canonicalize();
    return g;
}

// --- integer factorization (trial division + Pollard rho) ---

namespace detail {

inline Int pollard_rho(const Int& n, unsigned long seed) {
    // Standard Pollard rho with Brent-style batching is overkill here;
    // a plain Floyd variant with gmp arithmetic suffices for our sizes.
    Int x(seed), y(seed), c(seed / 2 + 1), d(1);
    while (d == 1) {
        x = (x * x + c) % n;
        y = (y * y + c) % n;
        y = (y * y + c) % n;
        Int diff = x - y;
        if (diff < 0) diff = -diff;
        if (diff == 0) return 0;
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    return d == n ? Int(0) : d;
}

}  // namespace detail

// Factors |n| into primes. Throws if n == 0.
inline std::map<Int, unsigned> factor_integer(Int n) {
    if (n < 0) n = -n;
    if (n == 0) throw std::domain_error("factor_integer(0)");
    std::map<Int, unsigned> out;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out[Int(p)]++;
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    Int p(17);
    // trial division by 17, 19, 23, ... up to 1e6
    while (n > 1 && p * p <= n && p < 1000000) {
        if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            out[p]++;
            mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        } else {
            p += 2;
        }
    }
    if (n == 1) return out;
    // Now n has no factor below 1e6; peel off large factors recursively.
    std::vector<Int> stack{n};
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (mpz_probab_prime_p(m.get_mpz_t(), 40)) {
            out[m]++;
            continue;
        }
        Int d;
        for (unsigned long seed = 2;; ++seed) {
            d = detail::pollard_rho(m, seed);
            if (d > 1) break;
            if (seed > 100) throw std::runtime_error("factorization failed");
        }
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return out;
}

// All positive divisors of |n| (n != 0).  Throws if there would be more
// than `cap` of them.
inline std::vector<Int> divisors(const Int& n, std::size_t cap = 1u << 16) {
    auto f = factor_integer(n);
    std::vector<Int> divs{Int(1)};
    for (auto& [p, e] : f) {
        std::size_t old = divs.size();
        if (old * (e + 1) > cap) throw std::runtime_error("too many divisors");
        Int pk(1);
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < old; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

}  // namespace cya
