#pragma once

#include <optional>
#include <string>

#include "cya/local_data.hpp"
#include "cya/theta_operator.hpp"

namespace cya {

// ---------------------------------------------------------------------------
// Hadamard products

// I_a := theta - z*(theta + a); annihilates (1-z)^{-a}
ThetaOp op_I(const Rat& a);

// H_a(L) := sum_i z^i prod_{j<i}(theta+a+j) prod_{k<m-i}(theta-k) P_i for
// L = sum_i z^i P_i of z-degree m.  The middle Hadamard product L *_H I_a is
// an irreducible right factor of this operator.
ThetaOp hadamard_H(const ThetaOp& l, const Rat& a);

// Lowest-order operator with polynomial coefficients within the given bounds
// annihilating all inputs up to their truncation order.  Throws when no
// annihilator exists within the bounds.
ThetaOp minimal_annihilator(const std::vector<LogSeries>& sols, int order_bound, int zdeg_bound);

// Right factor of the given order, reconstructed from the local solutions of
// h at 0 and certified by exact right division.  Throws when no certified
// factor is found.
ThetaOp right_factor(const ThetaOp& h, int order);

// Degree of L *_H I_a predicted from the local monodromy data:
// sum_{p != 0} gamma(T_p) - n + gamma(exp(2 pi i a) T_0) with
// gamma(T) = n - dim ker(T - 1).
int mh_degree(const ThetaOp& l, const Rat& a);

// The middle Hadamard product L *_H I_a: the certified right factor of
// H_a(L) of the expected degree (taken from mh_degree when 0 is passed).
ThetaOp middle_hadamard(const ThetaOp& l, const Rat& a, int expected_degree = 0);

// ---------------------------------------------------------------------------
// module constructions (cyclic-vector machinery over Q(z))

// Reduced operator of minimal order annihilating the products y1*y2 of
// solutions; order <= order(l1)*order(l2).
ThetaOp tensor_op(const ThetaOp& l1, const ThetaOp& l2);

// Minimal annihilator of the k-th symmetric power (k in {2, 3}) resp. the
// exterior square of the solution module.
ThetaOp sym_power_op(const ThetaOp& l, int k);
ThetaOp ext_square_op(const ThetaOp& l);

// Delta(R) := (z^{1/2})^*(R tensor (-z)^*R)
ThetaOp delta_op(const ThetaOp& r);

// ---------------------------------------------------------------------------
// Heun operators

// R(h) = 4 theta s1 s2 (theta - t)
//        - 4z(theta^2(s1+s2) + theta(s1(1-v) + s2(1-u) - t(s1+s2)) + c)
//        + z^2 (2 theta + 2-t-u-v+w)(2 theta + 2-t-u-v-w)
// with signature (t,u,v,w).  The singular points s1, s2 are either rational
// or a conjugate quadratic pair (then u = v and only the symmetric functions
// e1 = s1+s2, e2 = s1*s2 enter).
struct HeunParams {
    Rat t, u, v, w;
    Rat c;
    Rat e1, e2;                // s1 + s2 and s1 * s2
    std::optional<Rat> s1;     // set when the singular points are rational
    std::optional<Rat> s2;
};
ThetaOp heun(const HeunParams& h);

// Read (e1, e2, c) of the displayed R(h) normalization back off a reduced
// Heun operator with known signature.
HeunParams heun_params_from_op(const ThetaOp& op, const Rat& t, const Rat& u, const Rat& v,
                               const Rat& w);

// ---------------------------------------------------------------------------
// family builders

struct FamilySpec {
    std::string family;  // "Q1".."Q5", "Pa1", "Pa2", "P3"
    HeunParams seed;     // Q families: the order-two operator data
    Rat a;               // the rotation parameter (a resp. lambda)
    ThetaOp seed_op;     // P3: the order-two seed operator
};

// Runs the complete pipeline of the corresponding proposition and returns
// the reduced order-four operator.
ThetaOp build_family(const FamilySpec& spec);

// Displayed closed forms (polynomial identities the pipelines must match).
ThetaOp q1_closed(const Rat& c, const Rat& e1, const Rat& e2, const Rat& a);
ThetaOp q2_closed(const Rat& c, const Rat& e1, const Rat& e2, const Rat& lambda);
ThetaOp q3_closed(const Rat& s1, const Rat& s2, const Rat& lambda, const Rat& c);
ThetaOp q4_closed(const Rat& s1, const Rat& s2, const Rat& c, const Rat& lambda);
ThetaOp q5_closed(const Rat& e1, const Rat& e2, const Rat& c, const Rat& a);
ThetaOp q5_seed_closed(const Rat& e1, const Rat& e2, const Rat& c, const Rat& a);
ThetaOp sa_closed(const Rat& a);
ThetaOp pa1_closed(const Rat& a);
ThetaOp pa2_closed(const Rat& a);

// The Q3/Q4 displays are symmetric in s1, s2; these variants take the
// symmetric functions e1 = s1 + s2, e2 = s1 * s2 directly so conjugate
// quadratic singularities stay inside Q.
ThetaOp q3_closed_sym(const Rat& e1, const Rat& e2, const Rat& lambda, const Rat& c);
ThetaOp q4_closed_sym(const Rat& e1, const Rat& e2, const Rat& c, const Rat& lambda);

}  // namespace cya
