#pragma once

#include "cya/polynomial.hpp"
#include "cya/rational_function.hpp"
#include "cya/series.hpp"

namespace cya {

// Differential operator in Q[z][theta] with theta = z d/dz, stored by
// theta-power: a[i] is the z-polynomial coefficient of theta^i.
struct ThetaOp {
    std::vector<Poly> a;

    ThetaOp() = default;
    explicit ThetaOp(std::vector<Poly> coeffs) : a(std::move(coeffs)) { normalize(); }

    void normalize() {
        while (!a.empty() && a.back().is_zero()) a.pop_back();
    }
    bool is_zero() const { return a.empty(); }
    int order() const { return static_cast<int>(a.size()) - 1; }
    int degz() const {
        int d = -1;
        for (auto& p : a) d = std::max(d, p.degree());
        return d;
    }
    const Poly& coeff(int i) const {
        static const Poly zero;
        return (i >= 0 && i < static_cast<int>(a.size())) ? a[static_cast<std::size_t>(i)] : zero;
    }
    bool operator==(const ThetaOp& o) const { return a == o.a; }
    bool operator!=(const ThetaOp& o) const { return !(*this == o); }
};

// z-layout: L = sum_i z^i P_i(theta); returns the P_i as polynomials in theta.
std::vector<Poly> z_layout(const ThetaOp& l);
ThetaOp from_z_layout(const std::vector<Poly>& p);

ThetaOp operator+(const ThetaOp& x, const ThetaOp& y);
ThetaOp operator-(const ThetaOp& x, const ThetaOp& y);
ThetaOp operator*(const ThetaOp& x, const ThetaOp& y);  // composition x after y
ThetaOp operator*(const Rat& c, const ThetaOp& x);

// Divide out the polynomial content of the coefficients and scale by a
// rational so the integer coefficients are coprime with positive leading
// coefficient of the top theta-coefficient.
ThetaOp reduce(const ThetaOp& l);

// ---------------------------------------------------------------------------
// Skew polynomials in theta over Q(z) for Euclidean operations.

struct ThetaOpF {
    std::vector<RatFunc> a;

    ThetaOpF() = default;
    explicit ThetaOpF(std::vector<RatFunc> coeffs) : a(std::move(coeffs)) { normalize(); }
    void normalize() {
        while (!a.empty() && a.back().is_zero()) a.pop_back();
    }
    bool is_zero() const { return a.empty(); }
    int order() const { return static_cast<int>(a.size()) - 1; }
    const RatFunc& coeff(int i) const {
        static const RatFunc zero;
        return (i >= 0 && i < static_cast<int>(a.size())) ? a[static_cast<std::size_t>(i)] : zero;
    }
};

ThetaOpF to_field(const ThetaOp& l);
ThetaOp clear_denominators(const ThetaOpF& l);  // reduced integral multiple

ThetaOpF operator+(const ThetaOpF& x, const ThetaOpF& y);
ThetaOpF operator-(const ThetaOpF& x, const ThetaOpF& y);
ThetaOpF operator*(const ThetaOpF& x, const ThetaOpF& y);
ThetaOpF operator*(const RatFunc& c, const ThetaOpF& x);

// x = q * y + r with order(r) < order(y)
std::pair<ThetaOpF, ThetaOpF> right_divide(const ThetaOpF& x, const ThetaOpF& y);
// true iff y is a right factor of x (zero remainder)
bool right_divides(const ThetaOp& y, const ThetaOp& x);
// exact quotient: throws when the division leaves a remainder
ThetaOp exact_quotient(const ThetaOp& x, const ThetaOp& y);

ThetaOpF gcrd(const ThetaOpF& x, const ThetaOpF& y);
ThetaOpF lclm(const ThetaOpF& x, const ThetaOpF& y);

// ---------------------------------------------------------------------------
// d/dz layout

// Operator sum_j b[j] d^j with polynomial coefficients.
struct DOp {
    std::vector<Poly> b;

    DOp() = default;
    explicit DOp(std::vector<Poly> coeffs) : b(std::move(coeffs)) { normalize(); }
    void normalize() {
        while (!b.empty() && b.back().is_zero()) b.pop_back();
    }
    int order() const { return static_cast<int>(b.size()) - 1; }
};

// z^order * L  rewritten in theta form
ThetaOp to_theta(const DOp& l);
// theta^i expanded as sum_k S(i,k) z^k d^k (no denominators appear)
DOp to_d(const ThetaOp& l);

// ---------------------------------------------------------------------------
// applying operators to (log-)series

Series apply(const ThetaOp& l, const Series& s);
LogSeries apply(const ThetaOp& l, const LogSeries& s);

// ---------------------------------------------------------------------------
// transforms

// anti-automorphism z -> z, theta -> -theta, normalized by (-1)^order
ThetaOp adjoint(const ThetaOp& l);
// image of L under z -> 1/z, theta -> -theta (local data at infinity becomes
// local data at zero)
ThetaOp at_infinity(const ThetaOp& l);
// image under z -> z + p (operator whose local data at 0 is that of L at p)
ThetaOp shift_point(const ThetaOp& l, const Rat& p);
// image under z -> -z (theta fixed, z-coefficients alternate in sign)
ThetaOp negate_z(const ThetaOp& l);

// conjugation by a twisting function g: annihilator of g*y for solutions y
// of L, where r = theta(g)/g; substitutes theta -> theta - r.  For g = z^a
// the exponents at 0 shift by +a.
ThetaOp twist(const ThetaOp& l, const RatFunc& r);
// convenience: g = prod f_i^{e_i}, passed as (f_i, e_i) pairs
ThetaOp twist_by_powers(const ThetaOp& l, const std::vector<std::pair<Poly, Rat>>& factors);

// pullback along phi: annihilator of y(phi(z)); phi nonconstant rational
ThetaOp pullback(const ThetaOp& l, const RatFunc& phi);
// inverse of z -> z^n: requires L in Q[z^n, theta]; z^n -> z, theta -> n theta
ThetaOp root_transform(const ThetaOp& l, int n);
// true iff only z-powers divisible by n occur
bool in_zn_subring(const ThetaOp& l, int n);

// ---------------------------------------------------------------------------
// self-duality

// For an irreducible operator L of order n, decide whether the adjoint of L
// is the twist of L by a rational power product alpha (projective
// self-duality).  On success returns the factorization of alpha; the witness
// is certified by an exact operator identity.
struct SelfdualWitness {
    bool selfdual = false;
    std::vector<std::pair<Poly, Rat>> alpha;  // alpha = prod f^e
};
SelfdualWitness selfdual_witness(const ThetaOp& l);

// ---------------------------------------------------------------------------
// text format: one line per theta-power, "theta^i: c0 + c1*z + ..."

std::string op_str(const ThetaOp& l);
ThetaOp parse_op(const std::string& text);

}  // namespace cya
