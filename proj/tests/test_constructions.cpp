#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cya/constructions.hpp"
#include "cya/local_data.hpp"

using namespace cya;

namespace {

ThetaOp TH(std::vector<Poly> layers) { return from_z_layout(std::move(layers)); }

// theta + c
Poly tl(const Rat& c, const Rat& k = Rat(1)) { return Poly(std::vector<Rat>{c, k}); }

// coefficients of (1-z)^{-a}
Series binom_series(const Rat& a, int t) {
    Series s(t);
    s.at(0) = 1;
    for (int k = 1; k < t; ++k) s.at(k) = s.coeff(k - 1) * (a + Rat(k - 1)) / Rat(k);
    return s;
}

// hypergeometric theta-form operator theta^2 - z(theta+a)(theta+b)
ThetaOp gauss2(const Rat& a, const Rat& b) {
    return TH({Poly(std::vector<Rat>{Rat(0), Rat(0), Rat(1)}), -tl(a) * tl(b)});
}

HeunParams heun_sym(const Rat& t, const Rat& u, const Rat& v, const Rat& w, const Rat& c,
                    const Rat& e1, const Rat& e2) {
    HeunParams h;
    h.t = t;
    h.u = u;
    h.v = v;
    h.w = w;
    h.c = c;
    h.e1 = e1;
    h.e2 = e2;
    return h;
}

HeunParams heun_with(const Rat& t, const Rat& u, const Rat& v, const Rat& w, const Rat& c,
                     const Rat& s1, const Rat& s2) {
    HeunParams h;
    h.t = t;
    h.u = u;
    h.v = v;
    h.w = w;
    h.c = c;
    h.e1 = s1 + s2;
    h.e2 = s1 * s2;
    h.s1 = s1;
    h.s2 = s2;
    return h;
}

}  // namespace

TEST_CASE("one-factor Hadamard layout") {
    // H_a applied to I_b: layout entries carry the announced falling/rising factors
    ThetaOp h = hadamard_H(op_I(Rat(1, 3)), Rat(1, 2));
    // I_b has z-degree 1: entry 0 gains (theta - 0), entry 1 gains (theta + a)
    auto zl = z_layout(h);
    CHECK(zl.size() == 2);
    ThetaOp direct = reduce(TH({poly_z() * poly_z(), -tl(Rat(1, 2)) * tl(Rat(1, 3))}));
    CHECK(h == direct);
}

TEST_CASE("middle Hadamard of two first-order operators is hypergeometric") {
    // I_b *_H I_c = theta^2 - z(theta+b)(theta+c)
    Rat b(1, 3), c(1, 2);
    CHECK(mh_degree(op_I(b), c) == 2);
    ThetaOp f = middle_hadamard(op_I(b), c);
    CHECK(f == reduce(gauss2(b, c)));
    // the Hadamard product series of the two binomial solutions solves it
    int t = 30;
    Series s1 = binom_series(b, t), s2 = binom_series(c, t), prod(t);
    for (int k = 0; k < t; ++k) prod.at(k) = s1.coeff(k) * s2.coeff(k);
    CHECK(apply(f, prod).known_zero());
}

TEST_CASE("minimal annihilator recovers small operators") {
    int t = 20;
    // {1, log z} -> theta^2
    LogSeries one{Series(t, {Rat(1)})};
    LogSeries logz(Rat(0), {Series(t), Series(t, {Rat(1)})});
    ThetaOp a = minimal_annihilator({one, logz}, 3, 1);
    CHECK(a == TH({Poly(std::vector<Rat>{Rat(0), Rat(0), Rat(1)})}));
    // the binomial series alone recovers I_b
    LogSeries bin{binom_series(Rat(2, 7), t)};
    CHECK(minimal_annihilator({bin}, 2, 1) == reduce(op_I(Rat(2, 7))));
}

TEST_CASE("tensor with a first-order operator matches a twist") {
    ThetaOp l = gauss2(Rat(1, 2), Rat(1, 3));
    ThetaOp t = tensor_op(l, op_I(Rat(1, 5)));
    ThetaOp tw = reduce(twist_by_powers(l, {{Poly(std::vector<Rat>{Rat(1), Rat(-1)}), Rat(-1, 5)}}));
    CHECK(t == tw);
}

TEST_CASE("symmetric powers and exterior square of small operators") {
    // Sym^2 of theta^2 - z(theta+a)(theta+b) kills the square of the solution
    ThetaOp l = gauss2(Rat(1, 2), Rat(1, 2));
    ThetaOp s2 = sym_power_op(l, 2);
    CHECK(s2.order() == 3);
    int t = 40;
    Series f = holo_solution(l, t);
    CHECK(apply(s2, f * f).known_zero());
    // Sym^3 of the displayed seed equals the displayed quartic
    for (Rat a : {Rat(1, 5), Rat(1, 7), Rat(3, 11)}) {
        ThetaOp base = TH({Poly(std::vector<Rat>{Rat(0), Rat(0), Rat(1)}),
                           -tl(Rat(1, 4) + a) * tl(Rat(1, 4) - a)});
        CHECK(sym_power_op(base, 3) == sa_closed(a));
    }
    // exterior square of an order-2 operator is first order (the Wronskian)
    ThetaOp e = ext_square_op(gauss2(Rat(1, 3), Rat(1, 5)));
    CHECK(e.order() == 1);
}

TEST_CASE("delta construction on a hypergeometric operator") {
    ThetaOp r = gauss2(Rat(1, 2), Rat(1, 2));
    ThetaOp d = delta_op(r);
    CHECK(d.order() == 4);
    // solutions of Delta(R) include f(sqrt z) * f(-sqrt z): even part squares
    int t = 40;
    Series f = holo_solution(r, 2 * t);
    Series prod(t);
    for (int k = 0; k < t; ++k) {
        Rat acc(0);
        for (int i = 0; i <= 2 * k; ++i) acc += f.coeff(i) * f.coeff(2 * k - i) * Rat((i % 2) ? -1 : 1);
        prod.at(k) = acc;
    }
    CHECK(apply(d, prod).known_zero());
}

TEST_CASE("Heun operator: scheme, signature and parameter extraction") {
    HeunParams h = heun_with(Rat(0), Rat(1, 2), Rat(1, 2), Rat(1, 3), Rat(2, 7), Rat(2), Rat(-3));
    ThetaOp r = heun(h);
    CHECK(r.order() == 2);
    auto scheme = riemann_scheme(r);
    CHECK(fuchs_sum_check(scheme, 2));
    // exponents: {0,0} at 0, {0,1/2} at 2 and -3, 1 - (t+u+v -+ w)/2 at infinity
    auto e0 = exponents_at(r, SingularPoint::zero());
    CHECK(e0 == std::vector<std::pair<Rat, int>>{{Rat(0), 2}});
    auto es1 = exponents_at(r, SingularPoint::finite(Rat(2)));
    CHECK(es1 == std::vector<std::pair<Rat, int>>{{Rat(0), 1}, {Rat(1, 2), 1}});
    auto einf = exponents_at(r, SingularPoint::infinity());
    CHECK(einf == std::vector<std::pair<Rat, int>>{{Rat(1) - (Rat(1) + Rat(1, 3)) / 2, 1},
                                                   {Rat(1) - (Rat(1) - Rat(1, 3)) / 2, 1}});
    HeunParams back = heun_params_from_op(r, h.t, h.u, h.v, h.w);
    CHECK(back.e1 == Rat(-1));
    CHECK(back.e2 == Rat(-6));
    CHECK(back.c == Rat(2, 7));
    REQUIRE(back.s1.has_value());
    CHECK(*back.s1 + *back.s2 == Rat(-1));
    CHECK(*back.s1 * *back.s2 == Rat(-6));
}

TEST_CASE("parameter extraction on stored catalog operators") {
    // theta^2 - z(11 theta^2 + 11 theta + 3) - z^2 (theta+1)^2, c = -3
    ThetaOp r2 = TH({Poly(std::vector<Rat>{Rat(0), Rat(0), Rat(1)}),
                     -Poly(std::vector<Rat>{Rat(3), Rat(11), Rat(11)}), -tl(Rat(1)) * tl(Rat(1))});
    HeunParams h2 = heun_params_from_op(r2, Rat(0), Rat(0), Rat(0), Rat(0));
    CHECK(h2.c == Rat(-3));
    CHECK(h2.e1 == Rat(-11));
    CHECK(h2.e2 == Rat(-1));
    CHECK(reduce(heun(h2)) == reduce(r2));
    // theta^2 - 2z(12 theta^2 + 6 theta + 1) + 4 z^2 (2 theta + 1)^2, c = 1/8
    ThetaOp r4 = TH({Poly(std::vector<Rat>{Rat(0), Rat(0), Rat(1)}),
                     Rat(-2) * Poly(std::vector<Rat>{Rat(1), Rat(6), Rat(12)}),
                     Rat(4) * tl(Rat(1), Rat(2)) * tl(Rat(1), Rat(2))});
    HeunParams h4 = heun_params_from_op(r4, Rat(0), Rat(1, 2), Rat(1, 2), Rat(0));
    CHECK(h4.c == Rat(1, 8));
    CHECK(reduce(heun(h4)) == reduce(r4));
}

TEST_CASE("Q1 pipeline matches the displayed closed form") {
    for (auto& [c, s1, s2, a] :
         std::vector<std::array<Rat, 4>>{{Rat(-3), Rat(1, 8), Rat(-1), Rat(1, 2)},
                                         {Rat(1, 4), Rat(2), Rat(3), Rat(1, 3)}}) {
        FamilySpec spec;
        spec.family = "Q1";
        spec.seed = heun_with(Rat(0), Rat(0), Rat(0), Rat(0), c, s1, s2);
        spec.a = a;
        CHECK(build_family(spec) == q1_closed(c, s1 + s2, s1 * s2, a));
    }
}

TEST_CASE("Q2 pipeline matches the displayed closed form") {
    // a rational and a conjugate-quadratic pair of singular points
    for (auto& [c, e1, e2, l] :
         std::vector<std::array<Rat, 4>>{{Rat(1, 5), Rat(5), Rat(6), Rat(1, 3)},
                                         {Rat(1, 8), Rat(3, 2), Rat(1, 16), Rat(1, 2)}}) {
        FamilySpec spec;
        spec.family = "Q2";
        spec.seed = heun_sym(Rat(0), Rat(1, 2), Rat(1, 2), l, c, e1, e2);
        spec.a = l;
        CHECK(build_family(spec) == q2_closed(c, e1, e2, l));
    }
}

TEST_CASE("Q3 pipeline matches the displayed closed form") {
    for (auto& [s1, s2, l, c] :
         std::vector<std::array<Rat, 4>>{{Rat(1, 8), Rat(-1), Rat(1, 3), Rat(-1, 4)},
                                         {Rat(2), Rat(3), Rat(1, 5), Rat(1)}}) {
        FamilySpec spec;
        spec.family = "Q3";
        spec.seed = heun_with(Rat(0), l, l, Rat(0), c, s1, s2);
        spec.a = l;
        CHECK(build_family(spec) == q3_closed(s1, s2, l, c));
    }
}

TEST_CASE("Q4 pipeline matches the displayed closed form") {
    FamilySpec spec;
    spec.family = "Q4";
    spec.seed = heun_with(Rat(0), Rat(1, 2), Rat(1, 2), Rat(1, 3), Rat(1, 5), Rat(2), Rat(3));
    spec.a = Rat(1, 3);
    CHECK(build_family(spec) == q4_closed(Rat(2), Rat(3), Rat(1, 5), Rat(1, 3)));
}

TEST_CASE("Q5 pipeline matches the displayed closed form") {
    FamilySpec spec;
    spec.family = "Q5";
    spec.seed = heun_sym(Rat(0), Rat(1, 2), Rat(1, 2), Rat(0), Rat(1, 7), Rat(5, 2), Rat(1));
    spec.a = Rat(1, 3);
    CHECK(build_family(spec) == q5_closed(Rat(5, 2), Rat(1), Rat(1, 7), Rat(1, 3)));
}

TEST_CASE("three-singularity families match the displayed closed forms") {
    for (Rat a : {Rat(1, 6), Rat(1, 8)}) {
        FamilySpec s1;
        s1.family = "Pa1";
        s1.a = a;
        CHECK(build_family(s1) == pa1_closed(a));
        FamilySpec s2;
        s2.family = "Pa2";
        s2.a = a;
        CHECK(build_family(s2) == pa2_closed(a));
    }
}

TEST_CASE("family operators satisfy the structural invariants") {
    ThetaOp q = q1_closed(Rat(-3), Rat(-11), Rat(-1), Rat(1, 2));
    CHECK(is_mum(q));
    CHECK(fuchs_sum_check(riemann_scheme(q), 4));
    CHECK(selfdual_witness(q).selfdual);
    ThetaOp q5 = q5_closed(Rat(5, 2), Rat(1), Rat(1, 7), Rat(1, 3));
    CHECK(is_mum(q5));
    CHECK(fuchs_sum_check(riemann_scheme(q5), 4));
    CHECK(selfdual_witness(q5).selfdual);
}
