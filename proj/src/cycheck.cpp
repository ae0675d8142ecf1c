#include "cya/cycheck.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "cya/local_data.hpp"

namespace cya {

namespace {

// ---------------------------------------------------------------------------
// truncated polynomials in the exponent deformation epsilon

using Jet = std::vector<Rat>;

Jet jet_of_poly(const Poly& p, const Rat& nu, int len) {
    Poly s = poly_shift(p, nu);
    Jet out(static_cast<std::size_t>(len), Rat(0));
    for (int i = 0; i < len; ++i) out[static_cast<std::size_t>(i)] = s.coeff(i);
    return out;
}

Jet jet_mul(const Jet& a, const Jet& b) {
    int len = static_cast<int>(a.size());
    Jet out(a.size(), Rat(0));
    for (int i = 0; i < len; ++i) {
        if (a[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; i + j < len; ++j)
            out[static_cast<std::size_t>(i + j)] +=
                a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    }
    return out;
}

Jet jet_inv(const Jet& a) {
    if (a.empty() || a[0] == 0) throw std::domain_error("jet not invertible");
    int len = static_cast<int>(a.size());
    Jet out(a.size(), Rat(0));
    out[0] = 1 / a[0];
    for (int k = 1; k < len; ++k) {
        Rat s(0);
        for (int j = 1; j <= k; ++j)
            s += a[static_cast<std::size_t>(j)] * out[static_cast<std::size_t>(k - j)];
        out[static_cast<std::size_t>(k)] = -s / a[0];
    }
    return out;
}

// Checks P_0 = c theta^n and returns the z-layout.
std::vector<Poly> mum_layout(const ThetaOp& l) {
    int n = l.order();
    if (n < 1) throw std::domain_error("operator of order zero");
    auto p = z_layout(l);
    const Poly& p0 = p[0];
    bool ok = p0.degree() == n;
    for (int i = 0; ok && i < n; ++i) ok = p0.coeff(i) == 0;
    if (!ok) {
        std::ostringstream os;
        os << "exponents at 0 are not all zero:";
        for (auto& [e, m] : exponents_at(l, SingularPoint::zero()))
            os << " " << e << " (x" << m << ")";
        throw std::domain_error(os.str());
    }
    return p;
}

// A(nu) as jets mod epsilon^n, from the deformed recurrence
// P_0(nu + eps) A(nu) = -sum_{i>=1} P_i(nu - i + eps) A(nu - i), A(0) = 1.
std::vector<Jet> mum_jet_coeffs(const ThetaOp& l, int m) {
    int n = l.order();
    auto p = mum_layout(l);
    int dz = static_cast<int>(p.size()) - 1;
    std::vector<Jet> a(static_cast<std::size_t>(m + 1),
                       Jet(static_cast<std::size_t>(n), Rat(0)));
    a[0][0] = 1;
    for (int nu = 1; nu <= m; ++nu) {
        Jet rhs(static_cast<std::size_t>(n), Rat(0));
        for (int i = 1; i <= std::min(nu, dz); ++i) {
            if (p[static_cast<std::size_t>(i)].is_zero()) continue;
            Jet t = jet_mul(jet_of_poly(p[static_cast<std::size_t>(i)], Rat(nu - i), n),
                            a[static_cast<std::size_t>(nu - i)]);
            for (int k = 0; k < n; ++k)
                rhs[static_cast<std::size_t>(k)] -= t[static_cast<std::size_t>(k)];
        }
        a[static_cast<std::size_t>(nu)] =
            jet_mul(jet_inv(jet_of_poly(p[0], Rat(nu), n)), rhs);
    }
    return a;
}

// ---------------------------------------------------------------------------
// log-series arithmetic at mu = 0

LogSeries ls_mul(const LogSeries& a, const LogSeries& b) {
    if (a.mu != 0 || b.mu != 0) throw std::domain_error("ls_mul: mu != 0");
    if (a.known_zero() || b.known_zero()) return LogSeries();
    int t = std::min(a.trunc(), b.trunc());
    std::vector<Series> parts(static_cast<std::size_t>(a.max_log() + b.max_log() + 1),
                              Series(t));
    for (int i = 0; i <= a.max_log(); ++i)
        for (int j = 0; j <= b.max_log(); ++j)
            parts[static_cast<std::size_t>(i + j)] += a.part(i) * b.part(j);
    return LogSeries(Rat(0), std::move(parts));
}

LogSeries ls_det(const std::vector<std::vector<LogSeries>>& mat) {
    std::size_t k = mat.size();
    if (k == 1) return mat[0][0];
    LogSeries out;
    Rat sign(1);
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<std::vector<LogSeries>> minor_rows;
        for (std::size_t r = 1; r < k; ++r) {
            std::vector<LogSeries> row;
            for (std::size_t cc = 0; cc < k; ++cc)
                if (cc != c) row.push_back(mat[r][cc]);
            minor_rows.push_back(std::move(row));
        }
        LogSeries term = ls_mul(mat[0][c], ls_det(minor_rows));
        if (sign < 0) term = -term;
        out = out + term;
        sign = -sign;
    }
    return out;
}

Series series_shift_down(const Series& s) {
    Series out(s.trunc);
    for (int k = 0; k + 1 < s.trunc; ++k) out.at(k) = s.coeff(k + 1);
    return out;
}

struct LocalData {
    Series y0;        // holomorphic solution
    Series q_over_z;  // unit part of the special coordinate
    Series z_of_q;    // inverse mirror map, valuation one
};

LocalData local_data(const ThetaOp& l, int m) {
    MumBasis fb = mum_basis(l, m);
    LocalData out;
    out.y0 = fb.y[0].part(0);
    Series r = fb.y[1].part(0);
    out.q_over_z = series_exp(series_div(r, out.y0));
    Series q(m);
    for (int k = 0; k + 1 < m; ++k) q.at(k + 1) = out.q_over_z.coeff(k);
    out.z_of_q = series_reversion(q);
    return out;
}

// prime factorization helpers over a fixed small-prime table

std::vector<long> primes_up_to(long b) {
    std::vector<long> out;
    for (long p = 2; p <= b; ++p) {
        bool prime = true;
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) { prime = false; break; }
        if (prime) out.push_back(p);
    }
    return out;
}

int remove_factor(mpz_class& v, long p) {
    int e = 0;
    while (v != 0 && mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
        ++e;
    }
    return e;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Rat> holo_coeffs(const ThetaOp& l, int m) {
    auto p = z_layout(l);
    if (p.empty()) throw std::domain_error("zero operator");
    const Poly& p0 = p[0];
    if (poly_eval(p0, Rat(0)) != 0)
        throw std::domain_error("0 is not an exponent at the origin");
    int dz = static_cast<int>(p.size()) - 1;
    std::vector<Rat> a(static_cast<std::size_t>(m + 1), Rat(0));
    a[0] = 1;
    for (int nu = 1; nu <= m; ++nu) {
        Rat s(0);
        for (int i = 1; i <= std::min(nu, dz); ++i)
            s += poly_eval(p[static_cast<std::size_t>(i)], Rat(nu - i)) *
                 a[static_cast<std::size_t>(nu - i)];
        Rat d = poly_eval(p0, Rat(nu));
        if (d == 0) {
            if (s != 0)
                throw std::domain_error(
                    "resonance obstruction: the holomorphic solution acquires logarithms");
            a[static_cast<std::size_t>(nu)] = 0;
        } else {
            a[static_cast<std::size_t>(nu)] = -s / d;
        }
    }
    return a;
}

MumBasis mum_basis(const ThetaOp& l, int m) {
    int n = l.order();
    auto jets = mum_jet_coeffs(l, m - 1);
    MumBasis fb;
    fb.trunc = m;
    Rat fact(1);
    std::vector<Rat> inv_factorial(static_cast<std::size_t>(n), Rat(1));
    for (int j = 1; j < n; ++j) {
        fact *= j;
        inv_factorial[static_cast<std::size_t>(j)] = 1 / fact;
    }
    for (int k = 0; k < n; ++k) {
        std::vector<Series> parts(static_cast<std::size_t>(k + 1), Series(m));
        for (int j = 0; j <= k; ++j)
            for (int nu = 0; nu < m; ++nu)
                parts[static_cast<std::size_t>(j)].at(nu) =
                    jets[static_cast<std::size_t>(nu)][static_cast<std::size_t>(k - j)] *
                    inv_factorial[static_cast<std::size_t>(j)];
        fb.y.emplace_back(Rat(0), std::move(parts));
    }
    return fb;
}

std::optional<long> n_integrality(const std::vector<Rat>& a, long n_max, int m) {
    auto primes = primes_up_to(n_max);
    std::vector<int> exps(primes.size(), 0);
    int top = std::min<int>(m, static_cast<int>(a.size()) - 1);
    for (int k = 1; k <= top; ++k) {
        mpz_class den = a[static_cast<std::size_t>(k)].get_den();
        if (den == 1) continue;
        for (std::size_t i = 0; i < primes.size() && den != 1; ++i) {
            int v = remove_factor(den, primes[i]);
            if (v > 0) {
                int need = (v + k - 1) / k;  // ceil(v / k)
                exps[i] = std::max(exps[i], need);
            }
        }
        if (den != 1) return std::nullopt;  // prime beyond the bound
    }
    long n = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (int e = 0; e < exps[i]; ++e) {
            n *= primes[i];
            if (n > n_max) return std::nullopt;
        }
    return n;
}

SpecialCoordinate special_coordinate(const ThetaOp& l, int m) {
    LocalData d = local_data(l, m);
    return {d.q_over_z, d.z_of_q};
}

std::vector<Series> structure_series(const ThetaOp& l, int m) {
    int n = l.order();
    MumBasis fb = mum_basis(l, m);

    // theta-derivative table: rows k, columns j hold theta^k y_j
    std::vector<std::vector<LogSeries>> der(static_cast<std::size_t>(n));
    der[0] = fb.y;
    for (int k = 1; k < n; ++k)
        for (int j = 0; j < n; ++j)
            der[static_cast<std::size_t>(k)].push_back(
                ls_theta(der[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)]));

    std::vector<Series> w(static_cast<std::size_t>(n + 1), Series(m));
    w[0].at(0) = 1;
    for (int i = 1; i <= n; ++i) {
        std::vector<std::vector<LogSeries>> mat;
        for (int k = 0; k < i; ++k) {
            std::vector<LogSeries> row;
            for (int j = 0; j < i; ++j)
                row.push_back(der[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
            mat.push_back(std::move(row));
        }
        LogSeries det = ls_det(mat);
        for (int j = 1; j <= det.max_log(); ++j)
            if (!det.part(j).known_zero())
                throw std::logic_error("Wronskian is not log-free");
        w[static_cast<std::size_t>(i)] = det.part(0);
        if (w[static_cast<std::size_t>(i)].coeff(0) == 0)
            throw std::logic_error("Wronskian is not a unit series");
    }

    std::vector<Series> alpha;
    for (int i = 1; i < n; ++i) {
        Series num = w[static_cast<std::size_t>(i - 1)] * w[static_cast<std::size_t>(i + 1)];
        Series den = w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
        alpha.push_back(series_div(num, den));
    }

    // certification: L o y_0 = u * theta (1/alpha_{n-1}) theta ... (1/alpha_1) theta
    std::vector<Series> thpow(static_cast<std::size_t>(n + 1), Series(m));
    thpow[0] = fb.y[0].part(0);
    for (int k = 1; k <= n; ++k)
        thpow[static_cast<std::size_t>(k)] = series_theta(thpow[static_cast<std::size_t>(k - 1)]);
    std::vector<Series> b(static_cast<std::size_t>(n + 1), Series(m));
    for (int k = 0; k <= n; ++k) {
        for (int i = k; i <= n; ++i) {
            // binomial(i, k)
            Rat c(1);
            for (int j = 0; j < k; ++j) c = c * Rat(i - j) / Rat(j + 1);
            b[static_cast<std::size_t>(k)] +=
                series_from_poly(l.a[static_cast<std::size_t>(i)], m) * c *
                thpow[static_cast<std::size_t>(i - k)];
        }
    }

    // right-hand side built from the right: theta, then 1/alpha_i, theta, ...
    std::vector<Series> c(static_cast<std::size_t>(n + 1), Series(m));
    c[1].at(0) = 1;  // theta
    for (int i = 1; i < n; ++i) {
        Series g = series_div(Series(m, {Rat(1)}), alpha[static_cast<std::size_t>(i - 1)]);
        for (auto& ck : c) ck = g * ck;
        for (int k = i + 1; k >= 1; --k)
            c[static_cast<std::size_t>(k)] =
                series_theta(c[static_cast<std::size_t>(k)]) + c[static_cast<std::size_t>(k - 1)];
        c[0] = series_theta(c[0]);
    }

    for (int k = 0; k < n; ++k)
        if (!(b[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(n)] -
              c[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(n)])
                 .known_zero())
            throw std::logic_error("structure series certification failed");

    Series u = series_div(b[static_cast<std::size_t>(n)], c[static_cast<std::size_t>(n)]);
    alpha.push_back(u * (1 / u.coeff(0)));
    return alpha;
}

Series yukawa(const ThetaOp& l, int m) {
    if (l.order() != 4) throw std::domain_error("Yukawa coupling needs an order-four operator");
    int mm = m + 4;
    DOp d = to_d(l);
    const Poly& b4 = d.b[4];
    const Poly& b3 = d.b[3];
    if (poly_val0(b4) != 4)
        throw std::domain_error("leading coefficient has unexpected vanishing order at 0");
    Series w = series_div(series_from_poly(poly_shr(b3, 3), mm),
                          series_from_poly(poly_shr(b4, 4), mm));
    if (w.coeff(0) != 6)
        throw std::domain_error("subleading coefficient has unexpected behaviour at 0");
    Series t(mm);
    for (int k = 1; k < mm; ++k) t.at(k) = -w.coeff(k) / (2 * k);
    Series kz3 = series_exp(t);  // z^3 K_z

    LocalData ld = local_data(l, mm);
    Series vq(mm);
    for (int k = 0; k + 1 < mm; ++k) vq.at(k) = ld.z_of_q.coeff(k + 1);
    Series ratio = series_div(series_shift_down(series_theta(ld.z_of_q)), vq);  // q z'(q)/z(q)
    Series y0q = series_compose(ld.y0, ld.z_of_q);
    Series k_ttt = series_div(series_compose(kz3, ld.z_of_q) * ratio * ratio * ratio,
                              y0q * y0q);
    Series out(m);
    for (int k = 0; k < m; ++k) out.at(k) = k_ttt.coeff(k);
    return out;
}

InstantonData instantons(const ThetaOp& l, int d_max, const std::vector<Rat>* reference) {
    Series k = yukawa(l, d_max + 2);
    InstantonData out;
    for (int dd = 1; dd <= d_max; ++dd) {
        Rat s = k.coeff(dd);
        for (int e = 1; e < dd; ++e)
            if (dd % e == 0)
                s -= out.raw[static_cast<std::size_t>(e - 1)] * Rat(e) * Rat(e) * Rat(e);
        out.raw.push_back(s / (Rat(dd) * Rat(dd) * Rat(dd)));
    }
    std::vector<Rat> padded(1, Rat(0));
    padded.insert(padded.end(), out.raw.begin(), out.raw.end());
    out.strange = !n_integrality(padded, 60, d_max).has_value();
    if (reference && !reference->empty() && !out.raw.empty() && out.raw[0] != 0) {
        Rat n0 = (*reference)[0] / out.raw[0];
        bool ok = n0 > 0;
        for (std::size_t i = 0; ok && i < reference->size() && i < out.raw.size(); ++i)
            ok = n0 * out.raw[i] == (*reference)[i];
        if (ok) {
            out.n0 = n0;
            out.calibrated = true;
        }
    }
    return out;
}

ThetaOp scale_z(const ThetaOp& l, const Rat& lambda) {
    std::vector<Poly> a;
    for (const Poly& p : l.a) {
        Poly q = p;
        Rat pw(1);
        for (int j = 0; j <= q.degree(); ++j) {
            q.at(j) *= pw;
            pw *= lambda;
        }
        q.normalize();
        a.push_back(std::move(q));
    }
    return reduce(ThetaOp(std::move(a)));
}

std::pair<Rat, ThetaOp> normalize_lambda(const ThetaOp& l, int m) {
    SpecialCoordinate sc = special_coordinate(l, m);
    // q_k for k >= 2; scaling z -> lambda z turns q_k into lambda^{k-1} q_k
    auto primes = primes_up_to(97);
    std::vector<int> exps(primes.size(), 0);
    std::vector<bool> seen(primes.size(), false);
    for (int k = 2; k < m; ++k) {
        Rat qk = sc.q_over_z.coeff(k - 1);
        if (qk == 0) continue;
        mpz_class num = abs(qk.get_num());
        mpz_class den = qk.get_den();
        for (std::size_t i = 0; i < primes.size(); ++i) {
            int v = remove_factor(num, primes[i]) - remove_factor(den, primes[i]);
            // least exponent e with v + (k-1) e >= 0, i.e. ceil(-v / (k-1))
            int need = v < 0 ? (-v + (k - 2)) / (k - 1) : -(v / (k - 1));
            if (!seen[i]) {
                exps[i] = need;
                seen[i] = true;
            } else {
                exps[i] = std::max(exps[i], need);
            }
        }
        if (den != 1)
            throw std::domain_error(
                "no admissible coordinate scaling: coefficient denominators contain "
                "primes beyond the search space");
    }
    Rat lambda(1);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!seen[i] || exps[i] == 0) continue;
        if (exps[i] > 8 || exps[i] < -8)
            throw std::domain_error("no admissible coordinate scaling within exponent range");
        Rat f(primes[i]);
        for (int e = 0; e < exps[i]; ++e) lambda *= f;
        for (int e = 0; e > exps[i]; --e) lambda /= f;
    }
    return {lambda, scale_z(l, lambda)};
}

CYReport certify(const ThetaOp& l, int m, long n_max) {
    CYReport rep;
    rep.trunc = m;
    rep.n_bound = n_max;
    std::ostringstream diag;
    ThetaOp L = reduce(l);
    int n = L.order();

    try {
        rep.p = selfdual_witness(L).selfdual ? Flag::Pass : Flag::Fail;
    } catch (const std::exception& e) {
        rep.p = Flag::Fail;
        diag << "(P) " << e.what() << "; ";
    }

    try {
        auto exps = exponents_at(L, SingularPoint::zero());
        int mult = 0;
        for (auto& [e, k] : exps) mult += k;
        bool ok = exps.size() == 1 && mult == n && exps[0].first.get_den() == 1;
        rep.m = ok ? Flag::Pass : Flag::Fail;
        if (ok && exps[0].first != 0)
            L = reduce(twist_by_powers(L, {{poly_z(), -exps[0].first}}));
    } catch (const std::exception& e) {
        rep.m = Flag::Fail;
        diag << "(M) " << e.what() << "; ";
    }
    if (rep.m != Flag::Pass) {
        rep.n = rep.q = rep.s = Flag::Fail;
        rep.diagnostics = diag.str();
        return rep;
    }

    try {
        auto [lam, scaled] = normalize_lambda(L, std::min(m, 40));
        rep.lambda = lam;
        L = scaled;
    } catch (const std::exception& e) {
        diag << "(normalization) " << e.what() << "; ";
    }

    try {
        auto hc = holo_coeffs(L, m);
        auto nn = n_integrality(hc, n_max, m);
        rep.n_holo = nn.value_or(0);
        rep.n = nn ? Flag::Pass : Flag::Fail;
    } catch (const std::exception& e) {
        rep.n = Flag::Fail;
        diag << "(N) " << e.what() << "; ";
    }

    try {
        SpecialCoordinate sc = special_coordinate(L, m);
        std::vector<Rat> q(static_cast<std::size_t>(m), Rat(0));
        for (int k = 1; k < m; ++k) q[static_cast<std::size_t>(k)] = sc.q_over_z.coeff(k - 1);
        auto nn = n_integrality(q, n_max, m - 1);
        rep.n_q = nn.value_or(0);
        rep.q = nn ? Flag::Pass : Flag::Fail;
        for (int k = 0; k < std::min(m, 20); ++k)
            rep.q_coeffs.push_back(q[static_cast<std::size_t>(k)]);
    } catch (const std::exception& e) {
        rep.q = Flag::Fail;
        diag << "(Q) " << e.what() << "; ";
    }

    try {
        rep.alpha = structure_series(L, m);
        long worst = 1;
        bool ok = true;
        for (const Series& al : rep.alpha) {
            std::vector<Rat> coeffs(al.c.begin(), al.c.end());
            auto nn = n_integrality(coeffs, n_max, m - 1);
            if (!nn) {
                ok = false;
                break;
            }
            worst = std::max(worst, *nn);
        }
        rep.n_alpha = ok ? worst : 0;
        rep.s = ok ? Flag::Pass : Flag::Fail;
    } catch (const std::exception& e) {
        rep.s = Flag::Fail;
        diag << "(S) " << e.what() << "; ";
    }

    if (n == 4) {
        try {
            rep.k_ttt = yukawa(L, 13);
            rep.inst = instantons(L, 8);
        } catch (const std::exception& e) {
            diag << "(instantons) " << e.what() << "; ";
        }
    }
    rep.diagnostics = diag.str();
    return rep;
}

}  // namespace cya
