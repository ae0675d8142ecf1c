#pragma once

#include "cya/polynomial.hpp"

namespace cya {

// Element of Q(z), kept with monic denominator and gcd(num, den) = 1.
struct RatFunc {
    Poly num, den;

    RatFunc() : num(), den(Rat(1)) {}
    /* implicit */ RatFunc(Poly n) : num(std::move(n)), den(Rat(1)) {}
    /* implicit */ RatFunc(const Rat& r) : num(r), den(Rat(1)) {}
    /* implicit */ RatFunc(long n) : num(Rat(n)), den(Rat(1)) {}
    RatFunc(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) { reduce(); }

    void reduce() {
        if (den.is_zero()) throw std::domain_error("zero denominator");
        if (num.is_zero()) {
            den = Poly(Rat(1));
            return;
        }
        Poly g = poly_gcd(num, den);
        if (g.degree() > 0) {
            num = num / g;
            den = den / g;
        }
        Rat inv = 1 / den.lc();
        if (inv != 1) {
            num = num * inv;
            den = den * inv;
        }
    }

    bool is_zero() const { return num.is_zero(); }
    bool operator==(const RatFunc& o) const { return num == o.num && den == o.den; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }
};

inline RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
}
inline RatFunc operator-(const RatFunc& a) {
    RatFunc r = a;
    r.num = -r.num;
    return r;
}
inline RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
inline RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.num, a.den * b.den);
}
inline RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("division by zero rational function");
    return RatFunc(a.num * b.den, a.den * b.num);
}
inline RatFunc& operator+=(RatFunc& a, const RatFunc& b) { return a = a + b; }
inline RatFunc& operator-=(RatFunc& a, const RatFunc& b) { return a = a - b; }
inline RatFunc& operator*=(RatFunc& a, const RatFunc& b) { return a = a * b; }
inline RatFunc& operator/=(RatFunc& a, const RatFunc& b) { return a = a / b; }

inline RatFunc rf_derivative(const RatFunc& f) {
    return RatFunc(poly_derivative(f.num) * f.den - f.num * poly_derivative(f.den),
                   f.den * f.den);
}

// theta = z d/dz
inline RatFunc rf_theta(const RatFunc& f) {
    RatFunc d = rf_derivative(f);
    return RatFunc(poly_z() * d.num, d.den);
}

// f(g(z))
inline RatFunc rf_compose(const RatFunc& f, const RatFunc& g) {
    RatFunc acc(Rat(0)), accd(Rat(1));
    // Horner on numerator and denominator separately
    auto eval = [&](const Poly& p) {
        RatFunc r(Rat(0));
        for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) r = r * g + RatFunc(*it);
        return r;
    };
    acc = eval(f.num);
    accd = eval(f.den);
    return acc / accd;
}

inline Rat rf_eval(const RatFunc& f, const Rat& x) {
    Rat d = poly_eval(f.den, x);
    if (d == 0) throw std::domain_error("pole in evaluation");
    return poly_eval(f.num, x) / d;
}

inline std::string rf_str(const RatFunc& f, const std::string& var = "z") {
    if (f.den == Poly(Rat(1))) return poly_str(f.num, var);
    return "(" + poly_str(f.num, var) + ")/(" + poly_str(f.den, var) + ")";
}

}  // namespace cya
