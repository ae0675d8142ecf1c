#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cya/local_data.hpp"
#include "cya/theta_operator.hpp"

using namespace cya;

namespace {
std::mt19937 rng(90210u);

Poly Z() { return poly_z(); }

// theta as an operator
ThetaOp TH() { return ThetaOp({Poly(), Poly(Rat(1))}); }

// the hypergeometric building block theta - z*(theta + a)
ThetaOp op_ia(const Rat& a) {
    return from_z_layout({poly_z(), -Poly(std::vector<Rat>{a, Rat(1)})});
}

// Gauss operator theta*(theta+c-1) - z*(theta+a)*(theta+b)
ThetaOp gauss(const Rat& a, const Rat& b, const Rat& c) {
    Poly th = poly_z();  // stands for theta in the z-layout
    return from_z_layout({th * (th + Poly(Rat(c - 1))),
                          -(th + Poly(a)) * (th + Poly(b))});
}

ThetaOp random_op(int max_order, int max_deg) {
    std::uniform_int_distribution<int> dn(1, max_order), dd(0, max_deg), dc(-4, 4);
    int n = dn(rng);
    std::vector<Poly> a;
    for (int i = 0; i <= n; ++i) {
        std::vector<Rat> c;
        for (int j = 0; j <= dd(rng); ++j) c.push_back(Rat(dc(rng)));
        a.push_back(Poly(std::move(c)));
    }
    if (a.back().is_zero()) a.back() = Poly(Rat(1));
    return ThetaOp(std::move(a));
}

// coefficients of (1-z)^{-a}: rising factorial a(a+1)...(a+k-1)/k!
Series binom_series(const Rat& a, int trunc) {
    Series s(trunc);
    Rat v(1);
    s.at(0) = v;
    for (int k = 1; k < trunc; ++k) {
        v *= (a + Rat(k - 1)) / Rat(k);
        s.at(k) = v;
    }
    return s;
}

Series poly_series(const Poly& p, int trunc) {
    Series s(trunc);
    for (int i = 0; i <= p.degree() && i < trunc; ++i) s.at(i) = p.coeff(i);
    return s;
}
}  // namespace

TEST_CASE("theta-op arithmetic and layouts") {
    // theta * z = z * (theta + 1)
    ThetaOp z_op({Poly(Z())});
    CHECK(TH() * z_op == ThetaOp({Poly(Z()), Poly(Z())}));
    // z-layout roundtrip and product layout identity
    for (int t = 0; t < 25; ++t) {
        ThetaOp x = random_op(3, 3), y = random_op(3, 3);
        CHECK(from_z_layout(z_layout(x)) == x);
        CHECK((x + y) - y == x);
        ThetaOp w = random_op(2, 2);
        CHECK((x * y) * w == x * (y * w));
    }
    // reduce: clears content, including z powers
    ThetaOp l = gauss(rat(1, 2), rat(1, 2), Rat(1));
    ThetaOp scaled = rat(3, 7) * (ThetaOp({Poly(Z() * Z())}) * l);
    CHECK(reduce(scaled) == reduce(l));
}

TEST_CASE("theta and d/dz layouts agree") {
    for (int t = 0; t < 25; ++t) {
        ThetaOp l = random_op(4, 3);
        CHECK(reduce(to_theta(to_d(l))) == reduce(l));
    }
    // theta^2 = z d + z^2 d^2
    DOp d = to_d(ThetaOp({Poly(), Poly(), Poly(Rat(1))}));
    CHECK(d.b == std::vector<Poly>{Poly(), Poly(Z()), Poly(Z() * Z())});
}

TEST_CASE("operators annihilate their series solutions") {
    // theta - z(theta + a) kills (1-z)^{-a}
    for (Rat a : {rat(1, 2), rat(2, 3), Rat(3)}) {
        Series s = apply(op_ia(a), binom_series(a, 20));
        CHECK(s.known_zero());
    }
    // Gauss operator kills 2F1(a,b;c;z)
    Rat a = rat(1, 3), b = rat(1, 2), c = rat(5, 4);
    Series f(18);
    Rat v(1);
    f.at(0) = v;
    for (int k = 1; k < 18; ++k) {
        v *= (a + Rat(k - 1)) * (b + Rat(k - 1)) / ((c + Rat(k - 1)) * Rat(k));
        f.at(k) = v;
    }
    CHECK(apply(gauss(a, b, c), f).known_zero());
}

TEST_CASE("right division, gcrd and lclm") {
    for (int t = 0; t < 12; ++t) {
        ThetaOpF x = to_field(random_op(3, 2));
        ThetaOpF y = to_field(random_op(2, 2));
        auto [q, r] = right_divide(x, y);
        CHECK(r.order() < y.order());
        ThetaOpF back = q * y + r;
        CHECK(clear_denominators(back - x).is_zero());
    }
    // common right factor is found by the gcrd
    ThetaOpF g = to_field(op_ia(rat(1, 2)));
    ThetaOpF x = to_field(random_op(2, 2)) * g;
    ThetaOpF y = to_field(gauss(rat(1, 3), rat(1, 5), Rat(1))) * g;
    ThetaOpF h = gcrd(x, y);
    CHECK(h.order() >= 1);
    CHECK(right_divide(h, g).second.is_zero());
    // lclm of two order-1 operators with distinct solutions has order 2 and
    // kills both solutions
    ThetaOp la = op_ia(rat(1, 2)), lb = op_ia(rat(1, 3));
    ThetaOp m = clear_denominators(lclm(to_field(la), to_field(lb)));
    CHECK(m.order() == 2);
    CHECK(right_divides(la, m));
    CHECK(right_divides(lb, m));
    CHECK(apply(m, binom_series(rat(1, 2), 16)).known_zero());
    CHECK(apply(m, binom_series(rat(1, 3), 16)).known_zero());
    // exact quotient inverts composition
    ThetaOp prod = reduce(la * lb);
    CHECK(reduce(exact_quotient(prod, lb) * lb) == prod);
}

TEST_CASE("adjoint is an involution up to normalization") {
    for (int t = 0; t < 20; ++t) {
        ThetaOp l = random_op(4, 3);
        CHECK(reduce(adjoint(adjoint(l))) == reduce(l));
    }
}

TEST_CASE("point transforms move local data as expected") {
    Rat a = rat(1, 5), b = rat(2, 5);
    ThetaOp l = gauss(a, b, Rat(1));
    // exponents of 2F1 at infinity are a and b; at_infinity brings them to 0
    auto ei = exponents_at(at_infinity(l), SingularPoint::zero());
    CHECK(ei == std::vector<std::pair<Rat, int>>{{a, 1}, {b, 1}});
    // exponents at 1 are 0 and c - a - b
    auto e1 = exponents_at(shift_point(l, Rat(1)), SingularPoint::zero());
    CHECK(e1 == std::vector<std::pair<Rat, int>>{{Rat(0), 1}, {Rat(1) - a - b, 1}});
    // ... and exponents_at reads them off directly at the finite point
    CHECK(exponents_at(l, SingularPoint::finite(Rat(1))) == e1);
    // negate_z moves the singular point -1 of the pullback to +1
    ThetaOp p = pullback(l, RatFunc(Poly(Z() * Z())));
    CHECK(exponents_at(negate_z(p), SingularPoint::finite(Rat(1))) ==
          exponents_at(p, SingularPoint::finite(Rat(-1))));
}

TEST_CASE("twists shift exponents") {
    ThetaOp l = gauss(rat(1, 2), rat(1, 2), Rat(1));
    // twist by z^{1/3}: exponents at 0 shift up by 1/3
    ThetaOp t = twist_by_powers(l, {{Poly(Z()), rat(1, 3)}});
    auto e0 = exponents_at(t, SingularPoint::zero());
    CHECK(e0 == std::vector<std::pair<Rat, int>>{{rat(1, 3), 2}});
    // twist by (1-z)^{1/2}: exponents at 1 shift, those at 0 stay
    ThetaOp u = twist_by_powers(l, {{Poly(Rat(1)) - Z(), rat(1, 2)}});
    CHECK(exponents_at(u, SingularPoint::zero()) ==
          std::vector<std::pair<Rat, int>>{{Rat(0), 2}});
    auto e1 = exponents_at(u, SingularPoint::finite(Rat(1)));
    CHECK(e1 == std::vector<std::pair<Rat, int>>{{rat(1, 2), 2}});
    // twisting back is the identity up to reduce
    ThetaOp back = twist_by_powers(u, {{Poly(Rat(1)) - Z(), rat(-1, 2)}});
    CHECK(reduce(back) == reduce(l));
}

TEST_CASE("pullback and root transform") {
    ThetaOp l = op_ia(Rat(1));  // kills 1/(1-z)
    ThetaOp p = pullback(l, RatFunc(Poly(Z() * Z())));
    // 1/(1-z^2) has coefficients 1,0,1,0,...
    Series s(16);
    for (int k = 0; k < 16; k += 2) s.at(k) = Rat(1);
    CHECK(apply(p, s).known_zero());
    CHECK(in_zn_subring(p, 2));
    CHECK(reduce(root_transform(p, 2)) == reduce(l));
    // rational (non-polynomial) pullback: z/(z-1) sends 1/(1-z) to 1-z
    ThetaOp q = pullback(l, RatFunc(Poly(Z()), Poly(Z()) - Poly(Rat(1))));
    CHECK(apply(q, poly_series(Poly(Rat(1)) - Z(), 12)).known_zero());
    for (int n : {2, 3}) {
        ThetaOp g = gauss(rat(1, 3), rat(1, 4), rat(7, 6));
        CHECK(reduce(root_transform(pullback(g, RatFunc(poly_mono(Rat(1), n))), n)) ==
              reduce(g));
    }
}

TEST_CASE("self-duality witness") {
    // the order-4 hypergeometric operator with parameters 1/5,2/5,3/5,4/5
    Poly th = poly_z();
    Poly rhs(Rat(1));
    for (int i = 1; i <= 4; ++i) rhs = rhs * (th + Poly(rat(i, 5)));
    ThetaOp quintic = from_z_layout({th * th * th * th, -rhs});
    auto w = selfdual_witness(quintic);
    CHECK(w.selfdual);
    // certificate sanity: adjoint(L) is the alpha-twist of L
    CHECK(reduce(twist_by_powers(quintic, w.alpha)) == reduce(adjoint(quintic)));
    // asymmetric parameters are not projectively self-dual
    Poly rhs3 = (th + Poly(rat(1, 2))) * (th + Poly(rat(1, 3))) * (th + Poly(rat(1, 5)));
    ThetaOp asym = from_z_layout({th * th * th, -rhs3});
    CHECK_FALSE(selfdual_witness(asym).selfdual);
}

TEST_CASE("singular locus and riemann scheme") {
    ThetaOp l = gauss(rat(1, 2), rat(1, 3), rat(5, 4));
    RiemannScheme rs = riemann_scheme(l);
    REQUIRE(rs.columns.size() == 3);
    CHECK(rs.columns[0].point.kind == SingularPoint::Kind::Zero);
    CHECK(rs.columns[0].exponents ==
          std::vector<std::pair<Rat, int>>{{rat(-1, 4), 1}, {Rat(0), 1}});
    CHECK(rs.columns[1].point.kind == SingularPoint::Kind::Finite);
    CHECK(rs.columns[1].point.p == Rat(1));
    CHECK(rs.columns[2].point.kind == SingularPoint::Kind::Infinity);
    CHECK(rs.columns[2].exponents ==
          std::vector<std::pair<Rat, int>>{{rat(1, 3), 1}, {rat(1, 2), 1}});
    CHECK(fuchs_sum_check(rs, 2));
    for (auto& col : rs.columns) CHECK_FALSE(col.apparent);
}

TEST_CASE("apparent singularities") {
    // annihilator of {z, z^2 + 1}: (z^2-1) d^2 - 2z d + 2, apparent at +-1
    DOp d({Poly(Rat(2)), poly_mono(Rat(-2), 1), Poly(Z()) * Poly(Z()) - Poly(Rat(1))});
    ThetaOp l = reduce(to_theta(d));
    CHECK(apply(l, poly_series(Poly(Z()), 10)).known_zero());
    CHECK(apply(l, poly_series(Poly(Z()) * Poly(Z()) + Poly(Rat(1)), 10)).known_zero());
    for (Rat p : {Rat(1), Rat(-1)}) {
        auto s = SingularPoint::finite(p);
        CHECK(exponents_at(l, s) == std::vector<std::pair<Rat, int>>{{Rat(0), 1}, {Rat(2), 1}});
        CHECK(is_apparent(l, s));
    }
    RiemannScheme rs = riemann_scheme(l);
    CHECK(fuchs_sum_check(rs, 2));
    // half-integer exponents are never apparent
    ThetaOp g = gauss(rat(1, 2), rat(1, 2), Rat(1));
    CHECK_FALSE(is_apparent(g, SingularPoint::finite(Rat(1))));
    // integer exponent with a logarithm is not apparent either: solutions of
    // the annihilator of {1, log(1-z)} at z=1
    ThetaOp lg = reduce(to_theta(DOp({Poly(Rat(-1)), Poly(Rat(1)) - Z()})) * TH());
    CHECK_FALSE(is_apparent(lg, SingularPoint::finite(Rat(1))));
}

TEST_CASE("quadratic singular points") {
    // (z^2+1) y' = 2z y has solution z^2 + 1: exponent 1 at z = +-i
    DOp d1({poly_mono(Rat(-2), 1), Poly(Z()) * Poly(Z()) + Poly(Rat(1))});
    ThetaOp l1 = to_theta(d1);
    auto locus = singular_locus(l1);
    bool found = false;
    for (auto& s : locus)
        if (s.kind == SingularPoint::Kind::Quadratic) {
            found = true;
            CHECK(s.quad == Poly(Z()) * Poly(Z()) + Poly(Rat(1)));
            CHECK(exponents_at(l1, s) == std::vector<std::pair<Rat, int>>{{Rat(1), 1}});
            CHECK(is_apparent(l1, s));
        }
    CHECK(found);
    // (z^2+1) y' = z y has solution sqrt(z^2+1): exponent 1/2, not apparent
    DOp d2({poly_mono(Rat(-1), 1), Poly(Z()) * Poly(Z()) + Poly(Rat(1))});
    ThetaOp l2 = to_theta(d2);
    for (auto& s : singular_locus(l2))
        if (s.kind == SingularPoint::Kind::Quadratic) {
            CHECK(exponents_at(l2, s) == std::vector<std::pair<Rat, int>>{{rat(1, 2), 1}});
            CHECK_FALSE(is_apparent(l2, s));
        }
    CHECK(fuchs_sum_check(riemann_scheme(l2), 1));
}

TEST_CASE("frobenius solutions in a single exponent class") {
    // theta^2: solutions 1 and log z
    ThetaOp th2({Poly(), Poly(), Poly(Rat(1))});
    auto sols = frobenius_class(th2, Rat(0), 8);
    REQUIRE(sols.size() == 2);
    int with_log = 0;
    for (auto& v : sols) {
        CHECK(apply(th2, v).known_zero());
        if (v.max_log() > 0) ++with_log;
    }
    CHECK(with_log == 1);
    // theta(theta-1): solutions 1 and z, same class, no log
    ThetaOp t01 = from_z_layout({poly_z() * (poly_z() - Poly(Rat(1)))});
    for (auto& v : frobenius_class(t01, Rat(0), 8)) CHECK(v.max_log() == 0);
    // resonance with log forced: Gauss with a=b=c=1 shifted... use
    // theta^2 - z(theta+1)^2, class of exponent 0 (double root)
    ThetaOp g = gauss(Rat(1), Rat(1), Rat(1));
    auto gs = frobenius_class(g, Rat(0), 10);
    REQUIRE(gs.size() == 2);
    for (auto& v : gs) CHECK(apply(g, v).known_zero());
}

TEST_CASE("local solutions across classes") {
    // exponents 0 and 1/2 at the origin
    Poly th = poly_z();
    ThetaOp l = from_z_layout({th * (th - Poly(rat(1, 2))),
                               -(th + Poly(rat(1, 6))) * (th + Poly(rat(1, 3)))});
    auto sols = local_solutions(l, 10);
    REQUIRE(sols.size() == 2);
    std::vector<Rat> mus{sols[0].mu, sols[1].mu};
    std::sort(mus.begin(), mus.end());
    CHECK(mus == std::vector<Rat>{Rat(0), rat(1, 2)});
    for (auto& v : sols) {
        CHECK(v.max_log() == 0);
        CHECK(apply(l, v).known_zero());
    }
}

TEST_CASE("normalized frobenius basis at a MUM point") {
    ThetaOp g = gauss(rat(1, 2), rat(1, 2), Rat(1));
    CHECK(is_mum(g));
    CHECK_FALSE(is_mum(gauss(rat(1, 2), rat(1, 2), rat(3, 2))));
    auto basis = frobenius_basis(g, 12);
    REQUIRE(basis.size() == 2);
    // y0 = 2F1(1/2,1/2;1;z): coefficients ((1/2)_k / k!)^2
    Series y0 = holo_solution(g, 12);
    CHECK(y0.coeff(0) == Rat(1));
    CHECK(y0.coeff(1) == rat(1, 4));
    CHECK(y0.coeff(2) == rat(9, 64));
    CHECK(y0.coeff(3) == rat(25, 256));
    CHECK(basis[0].max_log() == 0);
    CHECK(basis[0].part(0).c == y0.c);
    // y1 = y0 * log(z) + holomorphic part vanishing at 0
    REQUIRE(basis[1].max_log() == 1);
    CHECK(basis[1].part(1).c == y0.c);
    CHECK(basis[1].part(0).coeff(0) == Rat(0));
    for (auto& v : basis) CHECK(apply(g, v).known_zero());

    // order-4 check on the quintic-type operator
    Poly th = poly_z();
    Poly rhs(rat(3125, 1));
    for (int i = 1; i <= 4; ++i) rhs = rhs * (th + Poly(rat(i, 5)));
    ThetaOp q = from_z_layout({th * th * th * th, -rhs});
    CHECK(is_mum(q));
    Series h = holo_solution(q, 8);
    // coefficients (5k)!/(k!)^5
    CHECK(h.coeff(0) == Rat(1));
    CHECK(h.coeff(1) == Rat(120));
    CHECK(h.coeff(2) == Rat(113400));
    CHECK(h.coeff(3) == Rat(168168000));
    auto qb = frobenius_basis(q, 8);
    REQUIRE(qb.size() == 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(qb[static_cast<std::size_t>(k)].max_log() == k);
        for (int j = 0; j < k; ++j)
            CHECK(qb[static_cast<std::size_t>(k)].part(j).coeff(0) == Rat(0));
        CHECK(apply(q, qb[static_cast<std::size_t>(k)]).known_zero());
    }
}

TEST_CASE("text format roundtrip") {
    ThetaOp g = gauss(rat(1, 2), rat(1, 3), rat(5, 4));
    CHECK(parse_op(op_str(g)) == g);
    for (int t = 0; t < 20; ++t) {
        ThetaOp l = random_op(4, 4);
        CHECK(parse_op(op_str(l)) == l);
    }
    // fixed sample: exact text layout
    ThetaOp i2 = op_ia(rat(1, 2));
    CHECK(op_str(i2) == "theta^0: -1/2*z\ntheta^1: 1 - z\n");
    CHECK(parse_op("theta^0: -1/2*z\ntheta^1: 1 - z") == i2);
}
