#include "cya/local_data.hpp"

#include <algorithm>
#include <map>

#include "cya/linalg.hpp"
#include <sstream>

namespace cya {

std::string SingularPoint::str() const {
    switch (kind) {
        case Kind::Zero:
            return "0";
        case Kind::Finite:
            return rat_str(p);
        case Kind::Quadratic:
            return "roots of " + poly_str(quad);
        case Kind::Infinity:
            return "inf";
    }
    return "?";
}

std::vector<SingularPoint> singular_locus(const ThetaOp& raw) {
    ThetaOp l = reduce(raw);
    if (l.is_zero()) throw std::invalid_argument("zero operator");
    std::vector<SingularPoint> pts;
    pts.push_back(SingularPoint::zero());
    PolyFactors fac = factor_roots_quadratics(l.a.back());
    for (auto& [root, mult] : fac.roots)
        if (root != 0) pts.push_back(SingularPoint::finite(root));
    for (auto& [quad, mult] : fac.quads) pts.push_back(SingularPoint::quadratic(quad));
    pts.push_back(SingularPoint::infinity());
    return pts;
}

ThetaOp local_op(const ThetaOp& l, const SingularPoint& s) {
    switch (s.kind) {
        case SingularPoint::Kind::Zero:
            return l;
        case SingularPoint::Kind::Finite:
            return shift_point(l, s.p);
        case SingularPoint::Kind::Infinity:
            return at_infinity(l);
        case SingularPoint::Kind::Quadratic:
            throw std::invalid_argument("no rational shift onto a quadratic point");
    }
    throw std::logic_error("unreachable");
}

Poly indicial(const ThetaOp& l) {
    std::vector<Rat> c;
    for (auto& p : l.a) c.push_back(p.coeff(0));
    return Poly(std::move(c));
}

namespace {

// Arithmetic in Q[x]/(q) for a monic irreducible quadratic q; elements are
// polynomials of degree at most one.
struct QElem {
    Poly v;
    bool is_zero() const { return v.is_zero(); }
};
QElem qadd(const QElem& a, const QElem& b) { return {a.v + b.v}; }
QElem qsub(const QElem& a, const QElem& b) { return {a.v - b.v}; }
QElem qscale(const Rat& c, const QElem& a) { return {a.v * Poly(c)}; }
QElem qmul(const QElem& a, const QElem& b, const Poly& q) {
    return {poly_divrem(a.v * b.v, q).second};
}
QElem qinv(const QElem& a, const Poly& q) {
    // extended Euclid: find b with a*b = 1 mod q
    Poly r0 = q, r1 = a.v, b0, b1(Rat(1));
    while (!r1.is_zero()) {
        auto [qu, r2] = poly_divrem(r0, r1);
        Poly b2 = b0 - qu * b1;
        r0 = r1;
        r1 = r2;
        b0 = b1;
        b1 = b2;
    }
    if (r0.degree() != 0) throw std::domain_error("element not invertible");
    return {b0 * Poly(Rat(1) / r0.lc())};
}

// Taylor coefficients b^{(l)}(x)/l! mod q, l = 0..count-1
std::vector<QElem> taylor_mod(const Poly& b, const Poly& q, int count) {
    std::vector<QElem> t;
    Poly cur = b;
    Rat fact(1);
    for (int l = 0; l < count; ++l) {
        if (l > 0) {
            cur = poly_derivative(cur);
            fact *= Rat(l);
        }
        t.push_back({poly_divrem(cur * Poly(Rat(1) / fact), q).second});
    }
    return t;
}

// z-layout of the operator moved to a root x of q, starting at the first
// nonvanishing layer (the indicial one): coefficients of theta^j in P_k are
// elements of Q[x]/(q).  layout[k][j] is the theta^j coefficient.
std::vector<std::vector<QElem>> quadratic_z_layout(const ThetaOp& l, const Poly& q) {
    DOp d = to_d(l);
    int n = d.order();
    int maxdeg = 0;
    for (auto& b : d.b) maxdeg = std::max(maxdeg, b.degree());
    int kmax = n + maxdeg;
    std::vector<std::vector<QElem>> layout(
        static_cast<std::size_t>(kmax + 1),
        std::vector<QElem>(static_cast<std::size_t>(n + 1), QElem{}));
    for (int j = 0; j <= n; ++j) {
        const Poly& bj = d.b[static_cast<std::size_t>(j)];
        if (bj.is_zero()) continue;
        auto t = taylor_mod(bj, q, bj.degree() + 1);
        Poly ff(Rat(1));
        for (int i = 0; i < j; ++i) ff *= Poly(std::vector<Rat>{Rat(-i), Rat(1)});
        // b_j(z+x) z^{n-j} ff_j(theta): z^k picks Taylor index k-(n-j)
        for (int k = 0; k <= kmax; ++k) {
            int idx = k - (n - j);
            if (idx < 0 || idx >= static_cast<int>(t.size())) continue;
            if (t[static_cast<std::size_t>(idx)].is_zero()) continue;
            for (int i = 0; i <= ff.degree(); ++i)
                layout[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                    qadd(layout[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)],
                         qscale(ff.coeff(i), t[static_cast<std::size_t>(idx)]));
        }
    }
    // drop leading zero layers
    auto layer_zero = [](const std::vector<QElem>& row) {
        for (auto& c : row)
            if (!c.is_zero()) return false;
        return true;
    };
    std::size_t k0 = 0;
    while (k0 < layout.size() && layer_zero(layout[k0])) ++k0;
    if (k0 == layout.size()) throw std::logic_error("vanishing operator layout");
    layout.erase(layout.begin(), layout.begin() + static_cast<long>(k0));
    return layout;
}

std::vector<std::pair<Rat, int>> sorted_exponents(std::vector<std::pair<Rat, int>> e) {
    std::sort(e.begin(), e.end());
    return e;
}

}  // namespace

std::vector<std::pair<Rat, int>> exponents_at(const ThetaOp& raw, const SingularPoint& s) {
    ThetaOp l = reduce(raw);
    int n = l.order();
    if (s.kind != SingularPoint::Kind::Quadratic) {
        Poly ind = indicial(reduce(local_op(l, s)));
        if (ind.degree() != n)
            throw std::domain_error("operator is not fuchsian at " + s.str());
        auto roots = rational_roots(ind);
        int total = 0;
        for (auto& [r, m] : roots) total += m;
        if (total != n) throw std::domain_error("irrational exponent at " + s.str());
        return sorted_exponents(roots);
    }
    auto layout = quadratic_z_layout(l, s.quad);
    // indicial polynomial I0(nu) + x I1(nu)
    std::vector<Rat> i0c, i1c;
    for (auto& c : layout[0]) {
        i0c.push_back(c.v.coeff(0));
        i1c.push_back(c.v.coeff(1));
    }
    Poly i0(std::move(i0c)), i1(std::move(i1c));
    if (std::max(i0.degree(), i1.degree()) != n)
        throw std::domain_error("operator is not fuchsian at " + s.str());
    std::vector<std::pair<Rat, int>> out;
    int total = 0;
    if (i1.is_zero()) {
        out = rational_roots(i0);
    } else {
        auto r0 = rational_roots(i0);
        auto r1 = rational_roots(i1);
        for (auto& [r, m] : r0)
            for (auto& [r2, m2] : r1)
                if (r == r2) out.push_back({r, std::min(m, m2)});
    }
    for (auto& [r, m] : out) total += m;
    if (total != n) throw std::domain_error("irrational exponent at " + s.str());
    return sorted_exponents(out);
}

namespace {

// Log-freeness check by running the power-series recurrence through every
// resonance; exponents must already be distinct non-negative integers.
// layout[k][j]: theta^j coefficient of P_k over the coefficient field; eval
// and arithmetic are supplied generically.
template <class F, class Eval, class Inv>
bool series_extends(const std::vector<std::vector<F>>& layout, long e0, long top, Eval eval_p,
                    Inv inv) {
    std::vector<F> c(static_cast<std::size_t>(top - e0 + 1), F{});
    c[0] = eval_p(-1, Rat(1));  // multiplicative identity
    for (long k = 1; k + e0 <= top; ++k) {
        F rhs{};
        for (long i = 1; i < static_cast<long>(layout.size()) && i <= k; ++i) {
            F pv = eval_p(i, Rat(e0 + k - i));
            if (pv.is_zero()) continue;
            rhs = qadd_generic(rhs, mul_generic(pv, c[static_cast<std::size_t>(k - i)]));
        }
        F p0 = eval_p(0, Rat(e0 + k));
        if (p0.is_zero()) {
            if (!rhs.is_zero()) return false;  // a logarithm is forced
            c[static_cast<std::size_t>(k)] = F{};
        } else {
            c[static_cast<std::size_t>(k)] = mul_generic(inv(p0), negate_generic(rhs));
        }
    }
    return true;
}

template <class F, class Eval, class Inv>
bool series_solutions_fill(const std::vector<std::vector<F>>& layout,
                           const std::vector<long>& exps, Eval eval_p, Inv inv) {
    long top = exps.back();
    for (long e0 : exps)
        if (!series_extends(layout, e0, top, eval_p, inv)) return false;
    return true;
}

// tiny generic helpers so the template above reads uniformly
QElem qadd_generic(const QElem& a, const QElem& b) { return qadd(a, b); }
QElem negate_generic(const QElem& a) { return {Poly() - a.v}; }
struct RElem {
    Rat v;
    bool is_zero() const { return v == 0; }
};
RElem qadd_generic(const RElem& a, const RElem& b) { return {a.v + b.v}; }
RElem negate_generic(const RElem& a) { return {-a.v}; }
QElem mul_generic(const QElem& a, const QElem& b);  // defined below with modulus capture
RElem mul_generic(const RElem& a, const RElem& b) { return {a.v * b.v}; }

// the quadratic modulus for mul_generic; set before use
thread_local const Poly* g_quad_mod = nullptr;
QElem mul_generic(const QElem& a, const QElem& b) { return qmul(a, b, *g_quad_mod); }

}  // namespace

bool is_apparent(const ThetaOp& raw, const SingularPoint& s) {
    ThetaOp l = reduce(raw);
    std::vector<std::pair<Rat, int>> exps;
    try {
        exps = exponents_at(l, s);
    } catch (const std::domain_error&) {
        return false;
    }
    std::vector<long> ints;
    for (auto& [r, m] : exps) {
        if (m != 1 || !is_integer(r) || r < 0) return false;
        ints.push_back(static_cast<long>(r.get_num().get_si()));
    }
    if (s.kind != SingularPoint::Kind::Quadratic) {
        ThetaOp sh = reduce(local_op(l, s));
        auto zl = z_layout(sh);
        std::vector<std::vector<RElem>> layout;
        for (auto& p : zl) {
            std::vector<RElem> row;
            for (int j = 0; j <= p.degree(); ++j) row.push_back({p.coeff(j)});
            layout.push_back(std::move(row));
        }
        auto eval_p = [&](long i, const Rat& nu) -> RElem {
            if (i < 0) return {Rat(1)};
            if (i >= static_cast<long>(layout.size())) return {};
            Rat acc(0), pw(1);
            for (auto& c : layout[static_cast<std::size_t>(i)]) {
                acc += c.v * pw;
                pw *= nu;
            }
            return {acc};
        };
        auto inv = [](const RElem& a) -> RElem { return {Rat(1) / a.v}; };
        return series_solutions_fill(layout, ints, eval_p, inv);
    }
    auto layout = quadratic_z_layout(l, s.quad);
    g_quad_mod = &s.quad;
    auto eval_p = [&](long i, const Rat& nu) -> QElem {
        if (i < 0) return {Poly(Rat(1))};
        if (i >= static_cast<long>(layout.size())) return {};
        QElem acc{};
        Rat pw(1);
        for (auto& c : layout[static_cast<std::size_t>(i)]) {
            acc = qadd(acc, qscale(pw, c));
            pw *= nu;
        }
        return acc;
    };
    auto inv = [&](const QElem& a) -> QElem { return qinv(a, s.quad); };
    bool ok = series_solutions_fill(layout, ints, eval_p, inv);
    g_quad_mod = nullptr;
    return ok;
}

RiemannScheme riemann_scheme(const ThetaOp& l) {
    RiemannScheme scheme;
    for (auto& pt : singular_locus(l)) {
        SchemeColumn col;
        col.point = pt;
        col.exponents = exponents_at(l, pt);
        col.apparent = is_apparent(l, pt);
        scheme.columns.push_back(std::move(col));
    }
    return scheme;
}

bool fuchs_sum_check(const RiemannScheme& scheme, int order) {
    Rat n(order);
    Rat half = n * (n - 1) / 2;
    Rat total(0);
    for (auto& col : scheme.columns) {
        Rat s(0);
        for (auto& [e, m] : col.exponents) s += e * Rat(m);
        Rat contrib = s - half;
        if (col.point.kind == SingularPoint::Kind::Quadratic) contrib *= 2;
        total += contrib;
    }
    return total == -n * (n - 1);
}

std::string RiemannScheme::str() const {
    std::ostringstream out;
    for (auto& col : columns) {
        out << col.point.str();
        if (col.apparent) out << " (apparent)";
        out << ":";
        for (auto& [e, m] : col.exponents)
            for (int i = 0; i < m; ++i) out << " " << rat_str(e);
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------

namespace {
// derivative tables dp[i][l] = P_i^{(l)} / l!
std::vector<std::vector<Poly>> derivative_table(const std::vector<Poly>& p, int lmax) {
    std::vector<std::vector<Poly>> dp(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        Poly cur = p[i];
        Rat fact(1);
        for (int l = 0; l <= lmax; ++l) {
            if (l > 0) {
                cur = poly_derivative(cur);
                fact *= Rat(l);
            }
            dp[i].push_back(cur * Poly(Rat(1) / fact));
        }
    }
    return dp;
}

// extend coefficients c[k][j] (divided log powers) past the resonances using
// the triangular recurrence; c must already hold rows 0..start-1
void extend_rows(std::vector<std::vector<Rat>>& c, const std::vector<std::vector<Poly>>& dp,
                 const Rat& nu, int start, int trunc, int t) {
    for (int k = start; k < trunc; ++k) {
        c.push_back(std::vector<Rat>(static_cast<std::size_t>(t), Rat(0)));
        Rat p0 = poly_eval(dp[0][0], Rat(nu + Rat(k)));
        if (p0 == 0) throw std::logic_error("unexpected resonance during extension");
        for (int j = t - 1; j >= 0; --j) {
            Rat rhs(0);
            for (int l = 1; j + l < t; ++l) {
                const Rat v = poly_eval(dp[0][static_cast<std::size_t>(l)], Rat(nu + Rat(k)));
                if (v != 0) rhs += v * c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j + l)];
            }
            for (std::size_t i = 1; i < dp.size() && static_cast<int>(i) <= k; ++i)
                for (int l = 0; j + l < t; ++l) {
                    const Rat v = poly_eval(dp[i][static_cast<std::size_t>(l)], Rat(nu + Rat(k - static_cast<int>(i))));
                    if (v != 0)
                        rhs += v * c[static_cast<std::size_t>(k - static_cast<int>(i))][static_cast<std::size_t>(j + l)];
                }
            c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = -rhs / p0;
        }
    }
}

LogSeries rows_to_logseries(const std::vector<std::vector<Rat>>& c, const Rat& nu, int trunc, int t) {
    // divided log powers to plain log powers
    std::vector<Series> parts(static_cast<std::size_t>(t), Series(trunc));
    Rat fact(1);
    for (int j = 0; j < t; ++j) {
        if (j > 0) fact *= Rat(j);
        for (int k = 0; k < trunc && k < static_cast<int>(c.size()); ++k)
            parts[static_cast<std::size_t>(j)].at(k) =
                c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] / fact;
    }
    return LogSeries(nu, std::move(parts));
}
}  // namespace

std::vector<LogSeries> frobenius_class(const ThetaOp& raw, const Rat& nu0, int trunc) {
    ThetaOp l = reduce(raw);
    auto p = z_layout(l);
    Poly p0 = indicial(l);
    auto roots = rational_roots(p0);
    Rat nu_min;
    bool found = false;
    int t = 0;
    long kres = 0;
    for (auto& [r, m] : roots) {
        if (!is_integer(r - nu0)) continue;
        if (!found || r < nu_min) nu_min = found ? std::min(nu_min, r) : r;
        found = true;
        t += m;
    }
    if (!found) return {};
    for (auto& [r, m] : roots)
        if (is_integer(r - nu0)) kres = std::max(kres, Rat(r - nu_min).get_num().get_si());
    auto dp = derivative_table(p, t - 1);
    int K = static_cast<int>(kres);
    // constraint matrix over coefficients c_{k,j}, k = 0..K, j = 0..t-1
    std::size_t dim = static_cast<std::size_t>((K + 1) * t);
    Mat<Rat> sys(dim, dim);
    auto idx = [&](int k, int j) { return static_cast<std::size_t>(k * t + j); };
    for (int kk = 0; kk <= K; ++kk)
        for (int jj = 0; jj < t; ++jj)
            for (int i = 0; static_cast<std::size_t>(i) < p.size() && i <= kk; ++i)
                for (int l = 0; jj + l < t; ++l) {
                    Rat v = poly_eval(dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)],
                                      Rat(nu_min + Rat(kk - i)));
                    if (v != 0) sys(idx(kk, jj), idx(kk - i, jj + l)) += v;
                }
    auto ns = nullspace(sys);
    if (static_cast<int>(ns.size()) != t)
        throw std::logic_error("local solution space has unexpected dimension");
    std::vector<LogSeries> out;
    int total = std::max(trunc, K + 1);
    for (auto& v : ns) {
        std::vector<std::vector<Rat>> c;
        for (int k = 0; k <= K; ++k) {
            std::vector<Rat> row;
            for (int j = 0; j < t; ++j) row.push_back(v[idx(k, j)]);
            c.push_back(std::move(row));
        }
        extend_rows(c, dp, nu_min, K + 1, total, t);
        out.push_back(rows_to_logseries(c, nu_min, trunc, t));
    }
    return out;
}

std::vector<LogSeries> local_solutions(const ThetaOp& raw, int trunc) {
    ThetaOp l = reduce(raw);
    Poly p0 = indicial(l);
    if (p0.degree() != l.order()) throw std::domain_error("operator is not fuchsian at 0");
    auto roots = rational_roots(p0);
    int total = 0;
    for (auto& [r, m] : roots) total += m;
    if (total != l.order()) throw std::domain_error("irrational exponent at 0");
    std::vector<Rat> reps;
    for (auto& [r, m] : roots) {
        bool seen = false;
        for (auto& q : reps)
            if (is_integer(r - q)) seen = true;
        if (!seen) reps.push_back(r);
    }
    std::vector<LogSeries> out;
    for (auto& q : reps)
        for (auto& s : frobenius_class(l, q, trunc)) out.push_back(std::move(s));
    return out;
}

bool is_mum(const ThetaOp& raw) {
    ThetaOp l = reduce(raw);
    Poly p0 = indicial(l);
    if (p0.degree() != l.order()) return false;
    for (int i = 0; i < p0.degree(); ++i)
        if (p0.coeff(i) != 0) return false;
    return true;
}

std::vector<LogSeries> frobenius_basis(const ThetaOp& raw, int trunc) {
    ThetaOp l = reduce(raw);
    if (!is_mum(l)) throw std::invalid_argument("origin is not a point of maximally unipotent monodromy");
    int n = l.order();
    auto p = z_layout(l);
    auto dp = derivative_table(p, n - 1);
    std::vector<LogSeries> basis;
    for (int k = 0; k < n; ++k) {
        std::vector<std::vector<Rat>> c;
        std::vector<Rat> row(static_cast<std::size_t>(n), Rat(0));
        row[static_cast<std::size_t>(k)] = 1;
        c.push_back(std::move(row));
        extend_rows(c, dp, Rat(0), 1, trunc, n);
        basis.push_back(rows_to_logseries(c, Rat(0), trunc, n));
    }
    return basis;
}

int log_free_dim_in_class(const ThetaOp& raw, const Rat& nu0) {
    ThetaOp l = reduce(raw);
    Poly ind = indicial(l);
    if (ind.degree() != l.order()) throw std::domain_error("operator is not fuchsian at 0");
    auto roots = rational_roots(ind);
    int t = 0;
    bool found = false;
    Rat rmin, rmax;
    for (auto& [r, m] : roots) {
        if (!is_integer(r - nu0)) continue;
        t += m;
        if (!found) {
            rmin = rmax = r;
            found = true;
        } else {
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
    }
    if (!found) return 0;
    int trunc = static_cast<int>(Rat(rmax - rmin).get_num().get_si()) + 2;
    auto fc = frobenius_class(l, nu0, trunc);
    int maxlog = 0;
    for (auto& v : fc) maxlog = std::max(maxlog, v.max_log());
    if (maxlog == 0) return t;
    Mat<Rat> m(fc.size(), static_cast<std::size_t>(maxlog * trunc));
    for (std::size_t i = 0; i < fc.size(); ++i)
        for (int j = 1; j <= maxlog; ++j)
            for (int k = 0; k < trunc; ++k)
                m(i, static_cast<std::size_t>((j - 1) * trunc + k)) = fc[i].part(j).coeff(k);
    return t - static_cast<int>(rank_gauss(m));
}

int integer_log_free_dim(const ThetaOp& raw, const SingularPoint& s) {
    ThetaOp l = reduce(raw);
    if (s.kind != SingularPoint::Kind::Quadratic)
        return log_free_dim_in_class(reduce(local_op(l, s)), Rat(0));
    auto exps = exponents_at(l, s);
    std::vector<long> ints;
    for (auto& [r, m] : exps) {
        if (!is_integer(r)) continue;
        if (m != 1)
            throw std::domain_error("repeated integer exponent at a quadratic point");
        ints.push_back(static_cast<long>(r.get_num().get_si()));
    }
    if (ints.empty()) return 0;
    auto layout = quadratic_z_layout(l, s.quad);
    g_quad_mod = &s.quad;
    auto eval_p = [&](long i, const Rat& nu) -> QElem {
        if (i < 0) return {Poly(Rat(1))};
        if (i >= static_cast<long>(layout.size())) return {};
        QElem acc{};
        Rat pw(1);
        for (auto& c : layout[static_cast<std::size_t>(i)]) {
            acc = qadd(acc, qscale(pw, c));
            pw *= nu;
        }
        return acc;
    };
    auto inv = [&](const QElem& a) -> QElem { return qinv(a, s.quad); };
    long top = ints.back();
    int dim = 0;
    for (long e0 : ints)
        if (series_extends(layout, e0, top, eval_p, inv)) ++dim;
    g_quad_mod = nullptr;
    return dim;
}

Series holo_solution(const ThetaOp& raw, int trunc) {
    ThetaOp l = reduce(raw);
    if (!is_mum(l)) throw std::invalid_argument("origin is not a point of maximally unipotent monodromy");
    auto p = z_layout(l);
    Series s(trunc);
    s.at(0) = 1;
    Poly p0 = indicial(l);
    for (int k = 1; k < trunc; ++k) {
        Rat rhs(0);
        for (std::size_t i = 1; i < p.size() && static_cast<int>(i) <= k; ++i)
            rhs += poly_eval(p[i], Rat(k - static_cast<int>(i))) * s.coeff(k - static_cast<int>(i));
        s.at(k) = -rhs / poly_eval(p0, Rat(k));
    }
    return s;
}

}  // namespace cya
