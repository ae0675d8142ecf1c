#include "cya/theta_operator.hpp"

#include <map>
#include <sstream>

#include "cya/linalg.hpp"

namespace cya {

std::vector<Poly> z_layout(const ThetaOp& l) {
    int m = l.degz();
    std::vector<Poly> p(static_cast<std::size_t>(std::max(m + 1, 0)));
    for (int k = 0; k <= m; ++k) {
        std::vector<Rat> c;
        for (std::size_t i = 0; i < l.a.size(); ++i) c.push_back(l.a[i].coeff(k));
        p[static_cast<std::size_t>(k)] = Poly(std::move(c));
    }
    return p;
}

ThetaOp from_z_layout(const std::vector<Poly>& p) {
    int ord = -1;
    for (auto& q : p) ord = std::max(ord, q.degree());
    std::vector<Poly> a(static_cast<std::size_t>(ord + 1));
    for (int i = 0; i <= ord; ++i) {
        std::vector<Rat> c;
        for (auto& q : p) c.push_back(q.coeff(i));
        a[static_cast<std::size_t>(i)] = Poly(std::move(c));
    }
    return ThetaOp(std::move(a));
}

ThetaOp operator+(const ThetaOp& x, const ThetaOp& y) {
    std::vector<Poly> a(std::max(x.a.size(), y.a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = x.coeff(static_cast<int>(i)) + y.coeff(static_cast<int>(i));
    return ThetaOp(std::move(a));
}

ThetaOp operator-(const ThetaOp& x, const ThetaOp& y) {
    std::vector<Poly> a(std::max(x.a.size(), y.a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = x.coeff(static_cast<int>(i)) - y.coeff(static_cast<int>(i));
    return ThetaOp(std::move(a));
}

ThetaOp operator*(const ThetaOp& x, const ThetaOp& y) {
    // in z-layout: (x y)_k = sum_{i+j=k} P_i(theta + j) Q_j(theta)
    auto p = z_layout(x), q = z_layout(y);
    if (p.empty() || q.empty()) return ThetaOp();
    std::vector<Poly> r(p.size() + q.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) continue;
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (q[j].is_zero()) continue;
            r[i + j] += poly_shift(p[i], Rat(static_cast<long>(j))) * q[j];
        }
    }
    return from_z_layout(r);
}

ThetaOp operator*(const Rat& c, const ThetaOp& x) {
    std::vector<Poly> a = x.a;
    for (auto& p : a) p *= Poly(c);
    return ThetaOp(std::move(a));
}

ThetaOp reduce(const ThetaOp& l) {
    if (l.is_zero()) return l;
    Poly g;
    for (auto& p : l.a)
        if (!p.is_zero()) g = g.is_zero() ? p : poly_gcd(g, p);
    std::vector<Poly> a;
    for (auto& p : l.a) a.push_back(p.is_zero() ? p : poly_divrem(p, g).first);
    // scale to coprime integers with positive top leading coefficient
    Int num_gcd(0), den_lcm(1);
    for (auto& p : a)
        for (auto& c : p.c) {
            if (c == 0) continue;
            num_gcd = gcd(num_gcd, c.get_num());
            den_lcm = den_lcm / gcd(den_lcm, c.get_den()) * c.get_den();
        }
    Rat scale(den_lcm, num_gcd == 0 ? Int(1) : num_gcd);
    if (a.back().lc() * scale < 0) scale = -scale;
    for (auto& p : a) p *= Poly(scale);
    return ThetaOp(std::move(a));
}

// ---------------------------------------------------------------------------

ThetaOpF to_field(const ThetaOp& l) {
    std::vector<RatFunc> a;
    for (auto& p : l.a) a.push_back(RatFunc(p));
    return ThetaOpF(std::move(a));
}

ThetaOp clear_denominators(const ThetaOpF& l) {
    Poly lcm(Rat(1));
    for (auto& c : l.a)
        if (!c.is_zero()) lcm = poly_divrem(lcm * c.den, poly_gcd(lcm, c.den)).first;
    std::vector<Poly> a;
    for (auto& c : l.a)
        a.push_back(c.is_zero() ? Poly() : c.num * poly_divrem(lcm, c.den).first);
    return reduce(ThetaOp(std::move(a)));
}

ThetaOpF operator+(const ThetaOpF& x, const ThetaOpF& y) {
    std::vector<RatFunc> a(std::max(x.a.size(), y.a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = x.coeff(static_cast<int>(i)) + y.coeff(static_cast<int>(i));
    return ThetaOpF(std::move(a));
}

ThetaOpF operator-(const ThetaOpF& x, const ThetaOpF& y) {
    std::vector<RatFunc> a(std::max(x.a.size(), y.a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = x.coeff(static_cast<int>(i)) - y.coeff(static_cast<int>(i));
    return ThetaOpF(std::move(a));
}

namespace {
// theta * (sum c_j theta^j) = sum (c_j theta^{j+1} + theta(c_j) theta^j)
ThetaOpF theta_mul(const ThetaOpF& y) {
    std::vector<RatFunc> a(y.a.size() + 1);
    for (std::size_t j = 0; j < y.a.size(); ++j) {
        a[j + 1] += y.a[j];
        a[j] += rf_theta(y.a[j]);
    }
    return ThetaOpF(std::move(a));
}
}  // namespace

ThetaOpF operator*(const ThetaOpF& x, const ThetaOpF& y) {
    ThetaOpF acc, pow = y;
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        if (i > 0) pow = theta_mul(pow);
        if (!x.a[i].is_zero()) acc = acc + x.a[i] * pow;
    }
    return acc;
}

ThetaOpF operator*(const RatFunc& c, const ThetaOpF& x) {
    std::vector<RatFunc> a = x.a;
    for (auto& v : a) v = c * v;
    return ThetaOpF(std::move(a));
}

std::pair<ThetaOpF, ThetaOpF> right_divide(const ThetaOpF& x, const ThetaOpF& y) {
    if (y.is_zero()) throw std::domain_error("division by zero operator");
    ThetaOpF r = x;
    std::vector<RatFunc> q(x.a.size() > y.a.size() ? x.a.size() - y.a.size() + 1 : 1, RatFunc());
    while (!r.is_zero() && r.order() >= y.order()) {
        int k = r.order() - y.order();
        RatFunc c = r.a.back() / y.a.back();
        // subtract c * theta^k * y
        ThetaOpF t = y;
        for (int i = 0; i < k; ++i) t = theta_mul(t);
        r = r - c * t;
        if (r.order() == static_cast<int>(y.a.size()) - 1 + k)
            throw std::logic_error("division failed to lower the order");
        q[static_cast<std::size_t>(k)] += c;
    }
    return {ThetaOpF(std::move(q)), r};
}

bool right_divides(const ThetaOp& y, const ThetaOp& x) {
    return right_divide(to_field(x), to_field(y)).second.is_zero();
}

ThetaOp exact_quotient(const ThetaOp& x, const ThetaOp& y) {
    auto [q, r] = right_divide(to_field(x), to_field(y));
    if (!r.is_zero()) throw std::domain_error("operator division leaves a remainder");
    return clear_denominators(q);
}

namespace {
// control coefficient blowup during Euclidean iterations
ThetaOpF tidy(const ThetaOpF& x) { return to_field(clear_denominators(x)); }
}  // namespace

ThetaOpF gcrd(const ThetaOpF& x, const ThetaOpF& y) {
    ThetaOpF a = tidy(x), b = tidy(y);
    while (!b.is_zero()) {
        ThetaOpF r = right_divide(a, b).second;
        a = b;
        b = tidy(r);
    }
    return a;
}

ThetaOpF lclm(const ThetaOpF& x, const ThetaOpF& y) {
    if (x.is_zero() || y.is_zero()) return ThetaOpF();
    int n = x.order(), m = y.order();
    // remainders of theta^i modulo x and modulo y, as coefficient vectors
    auto rem_tower = [](const ThetaOpF& d, int count) {
        std::vector<ThetaOpF> r;
        ThetaOpF cur(std::vector<RatFunc>{RatFunc(Rat(1))});
        for (int i = 0; i < count; ++i) {
            r.push_back(cur);
            cur = right_divide(theta_mul(cur), d).second;
        }
        return r;
    };
    int top = n + m;
    auto rx = rem_tower(x, top + 1), ry = rem_tower(y, top + 1);
    for (int ord = std::max(n, m); ord <= top; ++ord) {
        Mat<RatFunc> sys(static_cast<std::size_t>(n + m), static_cast<std::size_t>(ord + 1));
        for (int i = 0; i <= ord; ++i) {
            for (int j = 0; j < n; ++j) sys(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = rx[static_cast<std::size_t>(i)].coeff(j);
            for (int j = 0; j < m; ++j) sys(static_cast<std::size_t>(n + j), static_cast<std::size_t>(i)) = ry[static_cast<std::size_t>(i)].coeff(j);
        }
        auto ns = nullspace(sys);
        if (ns.empty()) continue;
        for (auto& v : ns)
            if (!v[static_cast<std::size_t>(ord)].is_zero()) return ThetaOpF(std::move(v));
        // kernel exists only in lower order; the loop will have found it earlier
    }
    throw std::logic_error("least common left multiple not found");
}

// ---------------------------------------------------------------------------

namespace {
// falling factorial theta (theta-1) ... (theta-j+1)
Poly falling_factorial(int j) {
    Poly r(Rat(1));
    for (int i = 0; i < j; ++i) r *= Poly(std::vector<Rat>{Rat(-i), Rat(1)});
    return r;
}

// Stirling numbers of the second kind S(i, k)
std::vector<std::vector<Rat>> stirling2(int imax) {
    std::vector<std::vector<Rat>> s(static_cast<std::size_t>(imax + 1));
    for (int i = 0; i <= imax; ++i) {
        s[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), Rat(0));
        for (int k = 0; k <= i; ++k) {
            if (i == 0) {
                s[0][0] = 1;
            } else if (k > 0) {
                s[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                    s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] +
                    (k < i ? Rat(k) * s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)] : Rat(0));
            }
        }
    }
    return s;
}
}  // namespace

ThetaOp to_theta(const DOp& l) {
    int n = l.order();
    if (n < 0) return ThetaOp();
    ThetaOp out;
    for (int j = 0; j <= n; ++j) {
        const Poly& bj = l.b[static_cast<std::size_t>(j)];
        if (bj.is_zero()) continue;
        Poly zpart = bj * poly_mono(Rat(1), n - j);
        Poly ff = falling_factorial(j);
        std::vector<Poly> term(static_cast<std::size_t>(ff.degree() + 1));
        for (int i = 0; i <= ff.degree(); ++i) term[static_cast<std::size_t>(i)] = zpart * Poly(ff.coeff(i));
        out = out + ThetaOp(std::move(term));
    }
    return reduce(out);
}

DOp to_d(const ThetaOp& l) {
    int n = l.order();
    if (n < 0) return DOp();
    auto s = stirling2(n);
    std::vector<Poly> b(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        if (l.a[static_cast<std::size_t>(i)].is_zero()) continue;
        for (int k = 0; k <= i; ++k) {
            const Rat& c = s[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (c == 0) continue;
            b[static_cast<std::size_t>(k)] += l.a[static_cast<std::size_t>(i)] * poly_mono(c, k);
        }
    }
    return DOp(std::move(b));
}

// ---------------------------------------------------------------------------

Series apply(const ThetaOp& l, const Series& s) {
    auto p = z_layout(l);
    Series out(s.trunc);
    for (int n = 0; n < s.trunc; ++n) {
        Rat acc(0);
        for (std::size_t i = 0; i < p.size() && static_cast<int>(i) <= n; ++i)
            acc += poly_eval(p[i], Rat(static_cast<long>(n - static_cast<int>(i)))) * s.coeff(n - static_cast<int>(i));
        out.at(n) = acc;
    }
    return out;
}

LogSeries apply(const ThetaOp& l, const LogSeries& s) {
    auto p = z_layout(l);
    int jmax = s.max_log();
    int t = s.trunc();
    std::vector<Series> parts(static_cast<std::size_t>(jmax + 1), Series(t));
    // derivatives of the P_i, divided by factorials
    std::vector<std::vector<Poly>> dp(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        Poly cur = p[i];
        Rat fact(1);
        for (int lidx = 0; lidx <= jmax; ++lidx) {
            if (lidx > 0) {
                cur = poly_derivative(cur);
                fact *= Rat(lidx);
            }
            dp[i].push_back(cur * Poly(Rat(1) / fact));
        }
    }
    // z^i P(theta) (z^{mu+k} log^j) contributes
    //   P^{(l)}(mu+k)/l! * j!/(j-l)! * z^{mu+k+i} log^{j-l}
    for (int j = 0; j <= jmax; ++j) {
        const Series& src = s.part(j);
        for (int k = 0; k < t; ++k) {
            const Rat& c = src.coeff(k);
            if (c == 0) continue;
            Rat arg = s.mu + Rat(k);
            for (std::size_t i = 0; i < p.size(); ++i) {
                int kk = k + static_cast<int>(i);
                if (kk >= t) break;
                Rat fall(1);
                for (int lidx = 0; lidx <= j; ++lidx) {
                    if (lidx > 0) fall *= Rat(j - lidx + 1);
                    Rat v = poly_eval(dp[i][static_cast<std::size_t>(lidx)], arg);
                    if (v == 0) continue;
                    parts[static_cast<std::size_t>(j - lidx)].at(kk) += v * fall * c;
                }
            }
        }
    }
    return LogSeries(s.mu, std::move(parts));
}

// ---------------------------------------------------------------------------

ThetaOp adjoint(const ThetaOp& l) {
    auto p = z_layout(l);
    int n = l.order();
    std::vector<Poly> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        // adj(z^i P(theta)) = P(-theta) z^i = z^i P(-theta - i)
        Poly m = p[i];
        for (int k = 1; k <= m.degree(); k += 2) m.at(k) = -m.at(k);  // P(-x)
        q[i] = poly_shift(m, Rat(static_cast<long>(i)));
        // P(-x) shifted: P(-(x+i)) = P(-x-i)
    }
    ThetaOp out = from_z_layout(q);
    if (n % 2 != 0) out = Rat(-1) * out;
    return out;
}

ThetaOp at_infinity(const ThetaOp& l) {
    auto p = z_layout(l);
    std::vector<Poly> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        Poly m = p[p.size() - 1 - i];
        for (int k = 1; k <= m.degree(); k += 2) m.at(k) = -m.at(k);
        q[i] = m;
    }
    return from_z_layout(q);
}

ThetaOp shift_point(const ThetaOp& l, const Rat& p) {
    DOp d = to_d(l);
    for (auto& b : d.b) b = poly_shift(b, p);
    return to_theta(d);
}

ThetaOp negate_z(const ThetaOp& l) {
    std::vector<Poly> a = l.a;
    for (auto& q : a)
        for (int k = 1; k <= q.degree(); k += 2) q.at(k) = -q.at(k);
    return ThetaOp(std::move(a));
}

ThetaOp twist(const ThetaOp& l, const RatFunc& r) {
    ThetaOpF t(std::vector<RatFunc>{-r, RatFunc(Rat(1))});  // theta - r
    ThetaOpF acc, pow(std::vector<RatFunc>{RatFunc(Rat(1))});
    for (std::size_t i = 0; i < l.a.size(); ++i) {
        if (i > 0) pow = t * pow;
        if (!l.a[i].is_zero()) acc = acc + RatFunc(l.a[i]) * pow;
    }
    return clear_denominators(acc);
}

ThetaOp twist_by_powers(const ThetaOp& l, const std::vector<std::pair<Poly, Rat>>& factors) {
    RatFunc r;
    for (auto& [f, e] : factors)
        r += RatFunc(e) * RatFunc(poly_z() * poly_derivative(f), f);
    return twist(l, r);
}

namespace {
// d-layout skew product helpers over Q(z): d * c = c d + c'
std::vector<RatFunc> d_mul(const std::vector<RatFunc>& y) {
    std::vector<RatFunc> a(y.size() + 1);
    for (std::size_t j = 0; j < y.size(); ++j) {
        a[j + 1] += y[j];
        a[j] += rf_derivative(y[j]);
    }
    return a;
}
}  // namespace

ThetaOp pullback(const ThetaOp& l, const RatFunc& phi) {
    RatFunc dphi = rf_derivative(phi);
    if (dphi.is_zero()) throw std::invalid_argument("pullback along a constant map");
    DOp d = to_d(l);
    int n = d.order();
    // powers of A = (1/phi') d
    std::vector<std::vector<RatFunc>> apow;
    apow.push_back({RatFunc(Rat(1))});
    for (int j = 1; j <= n; ++j) {
        auto next = d_mul(apow.back());
        for (auto& c : next) c = c / dphi;
        apow.push_back(std::move(next));
    }
    std::vector<RatFunc> acc(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        const Poly& bj = d.b[static_cast<std::size_t>(j)];
        if (bj.is_zero()) continue;
        // b_j evaluated at phi
        RatFunc val;
        for (int k = bj.degree(); k >= 0; --k) val = val * phi + RatFunc(bj.coeff(k));
        for (std::size_t k = 0; k < apow[static_cast<std::size_t>(j)].size(); ++k)
            acc[k] += val * apow[static_cast<std::size_t>(j)][k];
    }
    // clear denominators to polynomial d-form, then convert
    Poly lcm(Rat(1));
    for (auto& c : acc)
        if (!c.is_zero()) lcm = poly_divrem(lcm * c.den, poly_gcd(lcm, c.den)).first;
    std::vector<Poly> b;
    for (auto& c : acc) b.push_back(c.is_zero() ? Poly() : c.num * poly_divrem(lcm, c.den).first);
    return reduce(to_theta(DOp(std::move(b))));
}

bool in_zn_subring(const ThetaOp& l, int n) {
    auto p = z_layout(l);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (static_cast<int>(i) % n != 0 && !p[i].is_zero()) return false;
    return true;
}

ThetaOp root_transform(const ThetaOp& l, int n) {
    if (!in_zn_subring(l, n)) throw std::invalid_argument("operator does not lie in Q[z^n, theta]");
    auto p = z_layout(l);
    std::vector<Poly> q;
    for (std::size_t i = 0; i < p.size(); i += static_cast<std::size_t>(n))
        q.push_back(poly_compose(p[i], poly_mono(Rat(n), 1)));  // P(n theta)
    return reduce(from_z_layout(q));
}

// ---------------------------------------------------------------------------

SelfdualWitness selfdual_witness(const ThetaOp& raw) {
    SelfdualWitness w;
    ThetaOp l = reduce(raw);
    int n = l.order();
    if (n < 1) return w;
    const Poly& an = l.a[static_cast<std::size_t>(n)];
    const Poly& an1 = n >= 1 ? l.a[static_cast<std::size_t>(n - 1)] : an;
    // candidate logarithmic derivative: theta(alpha)/alpha = u with
    // u = (2 a_{n-1} - n theta(a_n)) / (n a_n), recovered as a power product
    RatFunc u = (RatFunc(Rat(2)) * RatFunc(an1) - RatFunc(Rat(n)) * rf_theta(RatFunc(an))) /
                (RatFunc(Rat(n)) * RatFunc(an));
    // decompose u = e0 + sum e_i z f_i'/f_i
    std::vector<std::pair<Poly, Rat>> factors;
    RatFunc rest = u;
    PolyFactors fac = factor_roots_quadratics(rest.den);
    for (auto& [root, mult] : fac.roots) {
        if (mult != 1) return w;  // not a logarithmic derivative of a power product
        Poly f(std::vector<Rat>{-root, Rat(1)});
        // residue of u/z at the root (for root != 0), or of u at 0
        RatFunc g = root == 0 ? u : u / RatFunc(poly_z());
        Poly cof = poly_divrem(g.den, f).first;
        Rat res = poly_eval(g.num, root) / poly_eval(cof, root);
        if (root == 0) {
            // z f'/f = 1 - handled by the constant term; a simple pole of u at
            // zero cannot come from a power product
            return w;
        }
        if (res != 0) {
            factors.push_back({f, res});
            rest = rest - RatFunc(res) * RatFunc(poly_z() * poly_derivative(f), f);
        }
    }
    for (auto& [quad, mult] : fac.quads) {
        if (mult != 1) return w;
        RatFunc g = u / RatFunc(poly_z());
        Poly cof = poly_divrem(g.den, quad).first;
        // polar part: g = A/quad + smooth with A = num * cof^{-1} mod quad
        Poly a0, a1(Rat(1)), b0(Rat(1)), b1;  // extended Euclid for cof mod quad
        Poly r0 = quad, r1 = poly_divrem(cof, quad).second;
        while (!r1.is_zero()) {
            auto [q, r2] = poly_divrem(r0, r1);
            Poly b2 = b0 - q * b1;
            r0 = r1;
            r1 = r2;
            b0 = b1;
            b1 = b2;
        }
        if (r0.degree() != 0) return w;  // cof not invertible: repeated pole
        Poly inv = b0 * Poly(Rat(1) / r0.lc());
        Poly part = poly_divrem(poly_divrem(g.num, quad).second * inv, quad).second;
        // require A = e * quad'
        Poly dq = poly_derivative(quad);
        Rat e = part.degree() == dq.degree() ? part.lc() / dq.lc() : Rat(0);
        if (e == 0 || !(part == dq * Poly(e))) return w;
        factors.push_back({quad, e});
        rest = rest - RatFunc(e) * RatFunc(poly_z() * poly_derivative(quad), quad);
    }
    // remaining part must be the constant exponent of z
    if (rest.den.degree() != 0 || rest.num.degree() > 0) return w;
    Rat e0 = rest.num.degree() == 0 ? rest.num.coeff(0) / rest.den.coeff(0) : Rat(0);
    if (e0 != 0) factors.push_back({poly_z(), e0});
    // certify: the adjoint must be the twist of L by alpha
    RatFunc r;
    for (auto& [f, e] : factors) r += RatFunc(e) * RatFunc(poly_z() * poly_derivative(f), f);
    ThetaOp lhs = reduce(adjoint(l));
    if (reduce(twist(l, r)) == lhs) {
        w.selfdual = true;
        w.alpha = std::move(factors);
        return w;
    }
    if (reduce(twist(l, RatFunc() - r)) == lhs) {
        for (auto& [f, e] : factors) e = -e;
        w.selfdual = true;
        w.alpha = std::move(factors);
        return w;
    }
    return w;
}

// ---------------------------------------------------------------------------

std::string op_str(const ThetaOp& l) {
    std::ostringstream out;
    for (std::size_t i = 0; i < l.a.size(); ++i) {
        const Poly& p = l.a[i];
        if (p.is_zero()) continue;
        out << "theta^" << i << ":";
        bool first = true;
        for (int k = 0; k <= p.degree(); ++k) {
            const Rat& c = p.coeff(k);
            if (c == 0) continue;
            Rat abs = c < 0 ? -c : c;
            out << (first ? (c < 0 ? " -" : " ") : (c < 0 ? " - " : " + "));
            first = false;
            if (k == 0) {
                out << rat_str(abs);
            } else {
                if (abs != 1) out << rat_str(abs) << "*";
                out << "z";
                if (k > 1) out << "^" << k;
            }
        }
        out << "\n";
    }
    if (l.is_zero()) out << "theta^0: 0\n";
    return out.str();
}

ThetaOp parse_op(const std::string& text) {
    std::map<int, Poly> coeff;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (line.rfind("theta^", 0) != 0) throw std::invalid_argument("operator line must start with theta^i:");
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("missing ':' in operator line");
        int power = std::stoi(line.substr(6, colon - 6));
        std::string expr = line.substr(colon + 1);
        Poly p;
        std::size_t pos = 0;
        int sign = 1;
        bool any = false;
        auto skip_ws = [&] { while (pos < expr.size() && std::isspace(static_cast<unsigned char>(expr[pos]))) ++pos; };
        skip_ws();
        while (pos < expr.size()) {
            if (expr[pos] == '+') { sign = 1; ++pos; skip_ws(); continue; }
            if (expr[pos] == '-') { sign = -1; ++pos; skip_ws(); continue; }
            // term: [rat][*][z[^k]]
            Rat c(1);
            bool have_num = false;
            std::size_t tstart = pos;
            while (pos < expr.size() && (std::isdigit(static_cast<unsigned char>(expr[pos])) || expr[pos] == '/')) ++pos;
            if (pos > tstart) {
                c = parse_rat(expr.substr(tstart, pos - tstart));
                have_num = true;
            }
            skip_ws();
            if (pos < expr.size() && expr[pos] == '*') { ++pos; skip_ws(); }
            int k = 0;
            if (pos < expr.size() && expr[pos] == 'z') {
                ++pos;
                k = 1;
                if (pos < expr.size() && expr[pos] == '^') {
                    ++pos;
                    std::size_t estart = pos;
                    while (pos < expr.size() && std::isdigit(static_cast<unsigned char>(expr[pos]))) ++pos;
                    k = std::stoi(expr.substr(estart, pos - estart));
                }
            } else if (!have_num) {
                throw std::invalid_argument("malformed operator term near: " + expr.substr(tstart));
            }
            p += poly_mono(Rat(sign) * c, k);
            any = true;
            sign = 1;
            skip_ws();
        }
        if (!any && !coeff.count(power)) coeff[power] = Poly();
        if (any) coeff[power] += p;
    }
    int ord = -1;
    for (auto& [k, p] : coeff)
        if (!p.is_zero()) ord = std::max(ord, k);
    std::vector<Poly> a(static_cast<std::size_t>(ord + 1));
    for (auto& [k, p] : coeff)
        if (k <= ord) a[static_cast<std::size_t>(k)] = p;
    return ThetaOp(std::move(a));
}

}  // namespace cya
