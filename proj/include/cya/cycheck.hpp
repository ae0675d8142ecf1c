#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cya/series.hpp"
#include "cya/theta_operator.hpp"

namespace cya {

// ---------------------------------------------------------------------------
// local analysis at z = 0 for operators whose exponents there are all zero
// (maximally unipotent monodromy in the normalized position)

// Coefficients A(0..m) of the holomorphic solution sum A(nu) z^nu, A(0) = 1,
// computed from the recurrence sum_i P_i(nu - i) A(nu - i) = 0.  Throws when
// a resonance P_0(nu) = 0, nu > 0, carries a nonzero right-hand side (the
// would-be holomorphic solution picks up logarithms).
std::vector<Rat> holo_coeffs(const ThetaOp& l, int m);

// Basis y_0..y_{n-1} at z = 0 with y_k = log(z)^k/k! y_0 + lower log order,
// y_0 = 1 + O(z) and y_1 = log(z) y_0 + r, r in z Q[[z]].  Requires all
// exponents at 0 to vanish; throws otherwise, listing the exponents.
struct MumBasis {
    int trunc = 0;
    std::vector<LogSeries> y;
};
MumBasis mum_basis(const ThetaOp& l, int m);

// Smallest N <= n_max with N^k a_k integral for all k <= m, or none.  The
// index in the vector is the power of z the coefficient belongs to.
std::optional<long> n_integrality(const std::vector<Rat>& a, long n_max, int m);

// q = exp(y_1/y_0) = z (1 + O(z)) and the inverse mirror map z(q).
struct SpecialCoordinate {
    Series q_over_z;  // unit part of q
    Series z_of_q;    // z as a series in q, valuation one
};
SpecialCoordinate special_coordinate(const ThetaOp& l, int m);

// Structure series alpha_1..alpha_n of the local factorization
//   L o y_0 = u * theta (1/alpha_{n-1}) theta ... (1/alpha_1) theta,
// with alpha_i = W_{i-1} W_{i+1} / W_i^2 built from the theta-Wronskians
// W_i of y_0..y_{i-1} and alpha_n the leading unit u normalized to constant
// term one.  The factorization identity is certified by multiplying the
// right-hand side out; certification failure throws.
std::vector<Series> structure_series(const ThetaOp& l, int m);

// q-expansion of the Yukawa coupling K_ttt for a self-dual order-four
// operator: K_z solves d/dz log K_z = -(1/2) a_3/a_4 (coefficients of the
// d/dz form), normalized so z^3 K_z -> 1, and
// K_ttt(q) = K_z(z(q)) (dz/dt)^3 y_0(z(q))^{-2} with t = log q.
Series yukawa(const ThetaOp& l, int m);

// Genus-zero instanton numbers from the Lambert expansion
// K_ttt = 1 + sum_d raw_d d^3 q^d/(1-q^d).  When a reference triple is
// given, n0 is the positive rational with n0 * raw_d = reference_d (if one
// exists); otherwise n0 = 1.  "strange" flags raw numbers admitting no
// integrality constant N <= 60 over the computed range (the denominator
// prime set keeps growing), so no calibration makes them Z[1/N]-integral.
struct InstantonData {
    std::vector<Rat> raw;  // raw_1..raw_dmax
    Rat n0 = Rat(1);
    bool calibrated = false;
    bool strange = false;
    std::vector<Rat> numbers() const {
        std::vector<Rat> out;
        for (auto& r : raw) out.push_back(n0 * r);
        return out;
    }
};
InstantonData instantons(const ThetaOp& l, int d_max,
                         const std::vector<Rat>* reference = nullptr);

// Coordinate scaling z -> lambda z (on solutions: pullback along lambda z).
ThetaOp scale_z(const ThetaOp& l, const Rat& lambda);

// The scaling making the special coordinate integral and minimal: for each
// prime the exponent is the least one with q in z Z[[z]] to order m, so no
// further prime power divides out of all coefficients.  Exponents are
// limited to [-8, 8]; throws when integrality needs more.
std::pair<Rat, ThetaOp> normalize_lambda(const ThetaOp& l, int m = 40);

// ---------------------------------------------------------------------------
// certification

enum class Flag { Pass, Fail, Unknown };

struct CYReport {
    Flag p = Flag::Unknown;  // self-duality
    Flag m = Flag::Unknown;  // all exponents at 0 equal and integral
    Flag n = Flag::Unknown;  // holomorphic solution N-integral
    Flag q = Flag::Unknown;  // special coordinate N-integral
    Flag s = Flag::Unknown;  // structure series N-integral
    long n_holo = 0;         // minimal N found for y_0 (0 = none)
    long n_q = 0;            // minimal N found for q
    long n_alpha = 0;        // largest minimal N over the alpha_i
    Rat lambda = Rat(1);     // coordinate normalization used
    std::vector<Rat> q_coeffs;  // first coefficients of the normalized q
    std::vector<Series> alpha;
    Series k_ttt;
    InstantonData inst;
    int trunc = 0;
    long n_bound = 0;
    std::string diagnostics;

    bool cy() const {
        return p == Flag::Pass && m == Flag::Pass && n == Flag::Pass &&
               q == Flag::Pass && s == Flag::Pass;
    }
};

// Finite verification of the CY properties at truncation order m with
// integrality bound n_max.  Failures are recorded as flags, not thrown.
CYReport certify(const ThetaOp& l, int m = 100, long n_max = 60);

}  // namespace cya
