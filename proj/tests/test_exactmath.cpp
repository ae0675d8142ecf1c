#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cya/cyclotomic.hpp"
#include "cya/linalg.hpp"
#include "cya/polynomial.hpp"
#include "cya/rational_function.hpp"
#include "cya/series.hpp"

using namespace cya;

namespace {
std::mt19937 rng(20260826u);
Rat rand_rat(int num_bound = 20, int den_bound = 9) {
    std::uniform_int_distribution<int> dn(-num_bound, num_bound), dd(1, den_bound);
    return rat(dn(rng), dd(rng));
}
}  // namespace

TEST_CASE("rational basics") {
    CHECK(parse_rat("-3/6") == rat(-1, 2));
    CHECK(rat_str(rat(22, -4)) == "-11/2");
    CHECK(mod1(rat(-7, 3)) == rat(2, 3));
    CHECK(mod1(rat(5, 1)) == 0);
    CHECK(rat_gcd(rat(4, 9), rat(2, 3)) == rat(2, 9));
    CHECK(rat_pow(rat(-2, 3), -2) == rat(9, 4));
}

TEST_CASE("integer factorization") {
    auto f = factor_integer(Int(2 * 2 * 3 * 49 * 101));
    CHECK(f[Int(2)] == 2);
    CHECK(f[Int(3)] == 1);
    CHECK(f[Int(7)] == 2);
    CHECK(f[Int(101)] == 1);
    // a product of two primes above the trial-division bound
    Int p("10000000019"), q("1000003");
    auto g = factor_integer(p * q);
    CHECK(g[p] == 1);
    CHECK(g[q] == 1);
    CHECK(divisors(Int(12)).size() == 6);
}

TEST_CASE("polynomial arithmetic and roots") {
    Poly p = poly_mono(rat(2), 2) - Poly(std::vector<Rat>{rat(1), rat(1)});  // 2z^2 - z - 1
    auto roots = rational_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == std::pair<Rat, int>{rat(-1, 2), 1});
    CHECK(roots[1] == std::pair<Rat, int>{rat(1), 1});

    Poly q = poly_pow(Poly(std::vector<Rat>{rat(-1, 3), rat(1)}), 3) * poly_mono(rat(5), 2);
    auto r2 = rational_roots(q);
    REQUIRE(r2.size() == 2);
    CHECK(r2[0] == std::pair<Rat, int>{rat(0), 2});
    CHECK(r2[1] == std::pair<Rat, int>{rat(1, 3), 3});

    CHECK(poly_shift(poly_z(), rat(3)) == Poly(std::vector<Rat>{rat(3), rat(1)}));
    CHECK(poly_eval(p, rat(2)) == rat(5));
    auto [quo, rem] = poly_divrem(p, Poly(std::vector<Rat>{rat(-1), rat(2)}));
    CHECK(quo * Poly(std::vector<Rat>{rat(-1), rat(2)}) + rem == p);
}

TEST_CASE("quartic splits into quadratics") {
    // (z^2+1)(z^2+z+1)
    Poly a(std::vector<Rat>{rat(0), rat(0), rat(1)});
    a.at(0) = 1;
    Poly f1(std::vector<Rat>{rat(1), rat(0), rat(1)});
    Poly f2(std::vector<Rat>{rat(1), rat(1), rat(1)});
    auto fac = factor_roots_quadratics(f1 * f2);
    CHECK(fac.roots.empty());
    REQUIRE(fac.quads.size() == 2);
    Poly prod(Rat(1));
    for (auto& [qd, m] : fac.quads)
        for (int i = 0; i < m; ++i) prod *= qd;
    CHECK(prod == f1 * f2);
}

TEST_CASE("rational functions") {
    RatFunc f(poly_z(), Poly(std::vector<Rat>{rat(1), rat(1)}));  // z/(1+z)
    RatFunc g = f + RatFunc(rat(1));
    CHECK(g == RatFunc(Poly(std::vector<Rat>{rat(1), rat(2)}), Poly(std::vector<Rat>{rat(1), rat(1)})));
    CHECK(rf_theta(RatFunc(poly_mono(rat(1), 3))) == RatFunc(poly_mono(rat(3), 3)));
    RatFunc h = rf_compose(f, f);  // z/(1+2z)
    CHECK(h == RatFunc(poly_z(), Poly(std::vector<Rat>{rat(1), rat(2)})));
}

TEST_CASE("rank agrees across elimination orders and algorithms") {
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 6);
        std::size_t r = dim(rng), c = dim(rng);
        Mat<Rat> m(r, c);
        for (auto& x : m.a) x = rand_rat(6, 4);
        std::vector<std::size_t> order(c);
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t r1 = rank_gauss(m);
        std::size_t r2 = rank_gauss(m, &order);
        std::size_t r3 = rank_bareiss(m);
        CHECK(r1 == r2);
        CHECK(r1 == r3);
    }
}

TEST_CASE("solve and nullspace") {
    // Vandermonde system has a unique solution
    std::vector<Rat> pts{rat(1), rat(2), rat(3)};
    Mat<Rat> v(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) v(i, j) = rat_pow(pts[i], static_cast<long>(j));
    std::vector<Rat> b{rat(2), rat(5), rat(10)};  // 1 + z^2
    auto x = solve(v, b);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 1);
    CHECK((*x)[1] == 0);
    CHECK((*x)[2] == 1);
    CHECK(nullspace(v).empty());

    Mat<Rat> s(2, 3);
    s(0, 0) = 1;
    s(0, 2) = 1;
    s(1, 1) = 1;
    auto ns = nullspace(s);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] == -ns[0][2]);
    CHECK(ns[0][1] == 0);
}

TEST_CASE("series exp/log round trip") {
    for (int trial = 0; trial < 100; ++trial) {
        Series a(12);
        for (int i = 1; i < a.trunc; ++i) a.at(i) = rand_rat(8, 5);
        Series e = series_exp(a);
        CHECK(series_log(e).c == a.c);
    }
}

TEST_CASE("series reversion against Lagrange inversion") {
    // rev(z - z^2) = sum_k Catalan(k-1) z^k = z + z^2 + 2z^3 + 5z^4 + 14z^5 + ...
    Series s(8);
    s.at(1) = 1;
    s.at(2) = -1;
    Series t = series_reversion(s);
    std::vector<long> catalan{0, 1, 1, 2, 5, 14, 42, 132};
    for (int i = 1; i < 8; ++i) CHECK(t.coeff(i) == Rat(catalan[static_cast<std::size_t>(i)]));
    // round trip for random series
    for (int trial = 0; trial < 20; ++trial) {
        Series u(10);
        u.at(1) = rand_rat(6, 4);
        while (u.coeff(1) == 0) u.at(1) = rand_rat(6, 4);
        for (int i = 2; i < u.trunc; ++i) u.at(i) = rand_rat(6, 4);
        Series v = series_reversion(u);
        Series id = series_compose(u, v);
        CHECK(id.coeff(1) == 1);
        for (int i = 2; i < id.trunc; ++i) CHECK(id.coeff(i) == 0);
    }
}

TEST_CASE("log series arithmetic") {
    // v = z^(1/2) (1 + log z * z)
    LogSeries v(rat(1, 2), {Series(6, {rat(1)}), Series(6, {rat(0), rat(1)})});
    LogSeries tv = ls_theta(v);
    // theta v = 1/2 z^(1/2) + z^(3/2)(log z * 3/2 + 1)
    CHECK(tv.part(0).coeff(0) == rat(1, 2));
    CHECK(tv.part(0).coeff(1) == rat(1));
    CHECK(tv.part(1).coeff(1) == rat(3, 2));
    LogSeries d = ls_dlog(v);
    CHECK(d.max_log() == 0);
    CHECK(d.part(0).coeff(1) == 1);
    CHECK(ls_dlog(d).known_zero());
    LogSeries prod = v * v;
    CHECK(prod.mu == 1);
    CHECK(prod.part(1).coeff(1) == 2);
}

TEST_CASE("cyclotomic arithmetic") {
    Cyc z3 = cyc_root(3, 1);
    Cyc s = z3 * z3 * z3;
    CHECK(s == Cyc(1));
    // 1 + zeta_3 + zeta_3^2 = 0
    CHECK(Cyc(1) + z3 + z3 * z3 == Cyc(0));
    // conductor reduction: zeta_12^2 lives in Q(zeta_6) ~ Q(zeta_3)
    Cyc z12sq = cyc_root(12, 2);
    Cyc red = cyc_reduce(z12sq);
    CHECK(red.m < 12);
    CHECK(cyc_promote(red, 12) == z12sq);
    // inverse
    Cyc a = Cyc(1) + z3;
    CHECK(a * cyc_inv(a) == Cyc(1));
    // mixed conductors
    Cyc z4 = cyc_root(4, 1);
    Cyc p = z3 * z4;
    CHECK(p == cyc_root(12, 7));
}

TEST_CASE("cyclotomic matrix rank") {
    Mat<Cyc> m(2, 2);
    m(0, 0) = cyc_root(4, 1);
    m(0, 1) = Cyc(1);
    m(1, 0) = Cyc(1);
    m(1, 1) = -cyc_root(4, 1);  // determinant -i*i - 1 = 0
    CHECK(rank_gauss(m) == 1);
}
