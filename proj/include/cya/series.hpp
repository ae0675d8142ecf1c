#pragma once

#include "cya/polynomial.hpp"
#include "cya/rational_function.hpp"

namespace cya {

// Truncated power series over Q: coefficients of z^0..z^(trunc-1) are known.
struct Series {
    int trunc = 0;
    std::vector<Rat> c;  // size == trunc

    Series() = default;
    explicit Series(int t) : trunc(t), c(static_cast<std::size_t>(t), Rat(0)) {}
    Series(int t, std::vector<Rat> coeffs) : trunc(t), c(std::move(coeffs)) {
        c.resize(static_cast<std::size_t>(t), Rat(0));
    }

    const Rat& coeff(int i) const {
        static const Rat zero(0);
        if (i < 0 || i >= trunc) return zero;
        return c[static_cast<std::size_t>(i)];
    }
    Rat& at(int i) { return c.at(static_cast<std::size_t>(i)); }

    bool known_zero() const {
        for (auto& x : c)
            if (x != 0) return false;
        return true;
    }
    int valuation() const {  // first nonzero index, or trunc if none known
        for (int i = 0; i < trunc; ++i)
            if (c[static_cast<std::size_t>(i)] != 0) return i;
        return trunc;
    }
    Series truncated(int t) const {
        Series r(std::min(t, trunc));
        for (int i = 0; i < r.trunc; ++i) r.at(i) = coeff(i);
        return r;
    }
};

inline Series series_from_poly(const Poly& p, int t) {
    Series s(t);
    for (int i = 0; i < t && i <= p.degree(); ++i) s.at(i) = p.coeff(i);
    return s;
}

inline Series operator+(const Series& a, const Series& b) {
    Series r(std::min(a.trunc, b.trunc));
    for (int i = 0; i < r.trunc; ++i) r.at(i) = a.coeff(i) + b.coeff(i);
    return r;
}
inline Series operator-(const Series& a) {
    Series r = a;
    for (auto& x : r.c) x = -x;
    return r;
}
inline Series operator-(const Series& a, const Series& b) { return a + (-b); }
inline Series operator*(const Series& a, const Series& b) {
    Series r(std::min(a.trunc, b.trunc));
    for (int i = 0; i < r.trunc; ++i) {
        if (a.coeff(i) == 0) continue;
        for (int j = 0; i + j < r.trunc; ++j)
            if (b.coeff(j) != 0) r.at(i + j) += a.coeff(i) * b.coeff(j);
    }
    return r;
}
inline Series operator*(const Series& a, const Rat& s) {
    Series r = a;
    for (auto& x : r.c) x *= s;
    return r;
}
inline Series operator*(const Rat& s, const Series& a) { return a * s; }
inline Series& operator+=(Series& a, const Series& b) { return a = a + b; }
inline Series& operator-=(Series& a, const Series& b) { return a = a - b; }

// a / b with b(0) != 0
inline Series series_div(const Series& a, const Series& b) {
    if (b.trunc == 0 || b.coeff(0) == 0) throw std::domain_error("series_div: b(0) == 0");
    Series r(std::min(a.trunc, b.trunc));
    Rat inv = 1 / b.coeff(0);
    for (int i = 0; i < r.trunc; ++i) {
        Rat acc = a.coeff(i);
        for (int j = 0; j < i; ++j)
            if (b.coeff(i - j) != 0) acc -= r.coeff(j) * b.coeff(i - j);
        r.at(i) = acc * inv;
    }
    return r;
}

// z d/dz
inline Series series_theta(const Series& a) {
    Series r = a;
    for (int i = 0; i < r.trunc; ++i) r.at(i) *= Rat(i);
    return r;
}

// d/dz (loses one order of precision)
inline Series series_derivative(const Series& a) {
    Series r(std::max(a.trunc - 1, 0));
    for (int i = 0; i < r.trunc; ++i) r.at(i) = a.coeff(i + 1) * Rat(i + 1);
    return r;
}

// exp(a), requires a(0) == 0.  Uses the standard ODE recurrence
// (exp a)' = a' exp a.
inline Series series_exp(const Series& a) {
    if (a.trunc > 0 && a.coeff(0) != 0) throw std::domain_error("series_exp: a(0) != 0");
    Series r(a.trunc);
    if (r.trunc == 0) return r;
    r.at(0) = 1;
    for (int n = 1; n < r.trunc; ++n) {
        Rat acc(0);
        for (int k = 1; k <= n; ++k)
            if (a.coeff(k) != 0) acc += Rat(k) * a.coeff(k) * r.coeff(n - k);
        r.at(n) = acc / Rat(n);
    }
    return r;
}

// log(a), requires a(0) == 1.
inline Series series_log(const Series& a) {
    if (a.trunc > 0 && a.coeff(0) != 1) throw std::domain_error("series_log: a(0) != 1");
    Series th = series_div(series_theta(a), a);
    Series r(a.trunc);
    for (int n = 1; n < r.trunc; ++n) r.at(n) = th.coeff(n) / Rat(n);
    return r;
}

// a^e for rational e, requires a(0) == 1.
inline Series series_pow(const Series& a, const Rat& e) {
    return series_exp(series_log(a) * e);
}

// a(b(z)) with b(0) == 0.
inline Series series_compose(const Series& a, const Series& b) {
    if (b.trunc > 0 && b.coeff(0) != 0) throw std::domain_error("series_compose: b(0) != 0");
    int t = std::min(a.trunc, b.trunc);
    Series acc(t);
    for (int i = a.trunc - 1; i >= 0; --i) {
        acc = acc * b.truncated(t);
        acc.at(0) += a.coeff(i);
    }
    return acc;
}

// Compositional inverse: given s = s1 z + ..., s1 != 0, returns t with
// s(t(q)) = q + O(q^trunc).
inline Series series_reversion(const Series& s) {
    if (s.trunc < 2 || s.coeff(0) != 0 || s.coeff(1) == 0)
        throw std::domain_error("series_reversion needs s = s1 z + ..., s1 != 0");
    int M = s.trunc;
    Series t(M);
    t.at(1) = 1 / s.coeff(1);
    // Newton iteration t <- t - (s(t) - q) / s'(t), doubling accuracy.
    Series q(M);
    if (M > 1) q.at(1) = 1;
    int prec = 2;
    Series ds = series_derivative(s);
    ds = Series(M, ds.c);  // repad so compositions keep full length
    while (prec < M) {
        prec = std::min(2 * prec, M);
        Series err = series_compose(s, t) - q;
        Series slope = series_compose(ds, t);
        t -= series_div(err, slope);
    }
    return t;
}

// Expansion of f at 0 as z^v * unit; returns valuation v and the unit's
// series.  f must be nonzero.
inline std::pair<int, Series> rf_expand0(const RatFunc& f, int t) {
    if (f.is_zero()) throw std::domain_error("rf_expand0(0)");
    int vn = poly_val0(f.num), vd = poly_val0(f.den);
    Series n = series_from_poly(poly_shr(f.num, vn), t);
    Series d = series_from_poly(poly_shr(f.den, vd), t);
    return {vn - vd, series_div(n, d)};
}

// Series expansion of f at 0 (requires no pole at 0).
inline Series rf_series(const RatFunc& f, int t) {
    if (f.is_zero()) return Series(t);
    auto [v, u] = rf_expand0(f, t);
    if (v < 0) throw std::domain_error("rf_series: pole at 0");
    Series r(t);
    for (int i = v; i < t; ++i) r.at(i) = u.coeff(i - v);
    return r;
}

// ---------------------------------------------------------------------------
// Logarithmic series: z^mu * sum_j (log z)^j * S_j(z) with rational mu.
// Truncation is relative to the offset: part j knows z^(mu+k) for
// k < parts[j].trunc.
struct LogSeries {
    Rat mu;
    std::vector<Series> parts;  // index = log power

    LogSeries() = default;
    LogSeries(Rat m, std::vector<Series> p) : mu(std::move(m)), parts(std::move(p)) { prune(); }
    explicit LogSeries(Series s) : mu(0), parts{std::move(s)} {}

    void prune() {
        while (!parts.empty() && parts.back().known_zero()) parts.pop_back();
    }
    int max_log() const { return static_cast<int>(parts.size()) - 1; }
    bool known_zero() const { return parts.empty(); }
    int trunc() const {
        int t = parts.empty() ? 0 : parts[0].trunc;
        for (auto& p : parts) t = std::min(t, p.trunc);
        return t;
    }
    const Series& part(int j) const {
        static const Series empty;
        if (j < 0 || j > max_log()) return empty;
        return parts[static_cast<std::size_t>(j)];
    }
};

// Shift the expansion base: returns the same element written with offset
// mu' = mu - k (coefficients move up by k >= 0), losing k orders at the top.
inline LogSeries ls_rebase(const LogSeries& v, const Rat& new_mu) {
    Rat diff = v.mu - new_mu;
    if (!is_integer(diff) || diff < 0)
        throw std::domain_error("ls_rebase: offset difference must be a nonneg integer");
    long k = diff.get_num().get_si();
    LogSeries r;
    r.mu = new_mu;
    for (auto& p : v.parts) {
        Series s(p.trunc + static_cast<int>(k));
        for (int i = 0; i < p.trunc; ++i) s.at(i + static_cast<int>(k)) = p.coeff(i);
        r.parts.push_back(std::move(s));
    }
    r.prune();
    return r;
}

inline LogSeries operator+(const LogSeries& a, const LogSeries& b) {
    if (a.known_zero()) return b;
    if (b.known_zero()) return a;
    Rat mu = std::min(a.mu, b.mu);
    LogSeries x = ls_rebase(a, mu), y = ls_rebase(b, mu);
    LogSeries r;
    r.mu = mu;
    std::size_t n = std::max(x.parts.size(), y.parts.size());
    int t = std::min(x.trunc(), y.trunc());
    for (std::size_t j = 0; j < n; ++j) {
        Series s = (x.part(static_cast<int>(j)) + y.part(static_cast<int>(j)));
        // parts missing from one side still constrain truncation
        if (j >= x.parts.size()) s = y.part(static_cast<int>(j));
        if (j >= y.parts.size()) s = x.part(static_cast<int>(j));
        r.parts.push_back(s.truncated(t));
    }
    r.prune();
    return r;
}

inline LogSeries operator-(const LogSeries& a) {
    LogSeries r = a;
    for (auto& p : r.parts) p = -p;
    return r;
}
inline LogSeries operator-(const LogSeries& a, const LogSeries& b) { return a + (-b); }

inline LogSeries operator*(const LogSeries& a, const LogSeries& b) {
    LogSeries r;
    if (a.known_zero() || b.known_zero()) return r;
    r.mu = a.mu + b.mu;
    r.parts.assign(a.parts.size() + b.parts.size() - 1, Series());
    int t = std::min(a.trunc(), b.trunc());
    for (auto& p : r.parts) p = Series(t);
    for (std::size_t i = 0; i < a.parts.size(); ++i)
        for (std::size_t j = 0; j < b.parts.size(); ++j)
            r.parts[i + j] += (a.parts[i].truncated(t) * b.parts[j].truncated(t));
    r.prune();
    return r;
}

inline LogSeries operator*(const LogSeries& a, const Rat& s) {
    LogSeries r = a;
    for (auto& p : r.parts) p = p * s;
    r.prune();
    return r;
}

// theta = z d/dz acting on z^mu log^j S(z)
inline LogSeries ls_theta(const LogSeries& v) {
    LogSeries r;
    r.mu = v.mu;
    r.parts.assign(v.parts.size(), Series());
    for (std::size_t j = 0; j < v.parts.size(); ++j) {
        Series s = series_theta(v.parts[j]) + v.parts[j] * v.mu;
        if (j + 1 < v.parts.size())
            s += v.parts[j + 1].truncated(s.trunc) * Rat(static_cast<long>(j + 1));
        r.parts[j] = s;
    }
    r.prune();
    return r;
}

// Formal d/d(log z): log^j -> j log^(j-1); kills the log-free layer.
inline LogSeries ls_dlog(const LogSeries& v) {
    LogSeries r;
    r.mu = v.mu;
    for (std::size_t j = 1; j < v.parts.size(); ++j)
        r.parts.push_back(v.parts[j] * Rat(static_cast<long>(j)));
    r.prune();
    return r;
}

// Multiply by a plain power series (log-free, integer offset 0).
inline LogSeries ls_mul_series(const LogSeries& v, const Series& s) {
    LogSeries r = v;
    for (auto& p : r.parts) p = p * s;
    r.prune();
    return r;
}

// Multiply by z^e.
inline LogSeries ls_shift_exponent(const LogSeries& v, const Rat& e) {
    LogSeries r = v;
    r.mu += e;
    return r;
}

}  // namespace cya
