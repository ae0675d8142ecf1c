#pragma once

#include <functional>
#include <numeric>

#include "cya/rational.hpp"

namespace cya {

// Minimal dense matrix with exact field coefficients.  F must support
// +, -, *, /, ==, construction from 0/1, and is_zero-style comparison
// against F(0).
template <class F>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<F> a;  // row-major

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, F(0)) {}

    F& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }
};

template <class F>
Mat<F> mat_mul(const Mat<F>& x, const Mat<F>& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mat_mul shape");
    Mat<F> r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x(i, k) == F(0)) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
        }
    return r;
}

template <class F>
Mat<F> mat_add(const Mat<F>& x, const Mat<F>& y) {
    Mat<F> r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

// Kronecker product
template <class F>
Mat<F> mat_kron(const Mat<F>& x, const Mat<F>& y) {
    Mat<F> r(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            if (x(i, j) == F(0)) continue;
            for (std::size_t k = 0; k < y.rows; ++k)
                for (std::size_t l = 0; l < y.cols; ++l)
                    r(i * y.rows + k, j * y.cols + l) = x(i, j) * y(k, l);
        }
    return r;
}

// Rank by Gaussian elimination over a field.  `col_order` optionally permutes
// the columns processed (same rank must result for any order).
template <class F>
std::size_t rank_gauss(Mat<F> m, const std::vector<std::size_t>* col_order = nullptr) {
    std::vector<std::size_t> order(m.cols);
    std::iota(order.begin(), order.end(), 0u);
    if (col_order) order = *col_order;
    std::size_t rank = 0;
    for (std::size_t oc = 0; oc < order.size() && rank < m.rows; ++oc) {
        std::size_t c = order[oc];
        std::size_t piv = rank;
        while (piv < m.rows && m(piv, c) == F(0)) ++piv;
        if (piv == m.rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(rank, j));
        F inv = F(1) / m(rank, c);
        for (std::size_t j = 0; j < m.cols; ++j) m(rank, j) = m(rank, j) * inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == rank || m(i, c) == F(0)) continue;
            F f = m(i, c);
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = m(i, j) - f * m(rank, j);
        }
        ++rank;
    }
    return rank;
}

// Fraction-free Bareiss rank over Q (exercises integer-preserving pivoting;
// agrees with rank_gauss by construction).
inline std::size_t rank_bareiss(Mat<Rat> m) {
    std::size_t rank = 0;
    Rat prev(1);
    for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
        std::size_t piv = rank;
        while (piv < m.rows && m(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(rank, j));
        for (std::size_t i = rank + 1; i < m.rows; ++i) {
            for (std::size_t j = c + 1; j < m.cols; ++j)
                m(i, j) = (m(rank, c) * m(i, j) - m(i, c) * m(rank, j)) / prev;
            m(i, c) = 0;
        }
        prev = m(rank, c);
        ++rank;
    }
    return rank;
}

// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<std::size_t> rref(Mat<F>& m) {
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
        std::size_t piv = rank;
        while (piv < m.rows && m(piv, c) == F(0)) ++piv;
        if (piv == m.rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(rank, j));
        F inv = F(1) / m(rank, c);
        for (std::size_t j = 0; j < m.cols; ++j) m(rank, j) = m(rank, j) * inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == rank || m(i, c) == F(0)) continue;
            F f = m(i, c);
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = m(i, j) - f * m(rank, j);
        }
        pivots.push_back(c);
        ++rank;
    }
    return pivots;
}

// Basis of the right nullspace of m (as column vectors).
template <class F>
std::vector<std::vector<F>> nullspace(Mat<F> m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t fc = 0; fc < m.cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<F> v(m.cols, F(0));
        v[fc] = F(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F(0) - m(r, fc);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves m x = b; returns nullopt if inconsistent.
template <class F>
std::optional<std::vector<F>> solve(Mat<F> m, const std::vector<F>& b) {
    if (b.size() != m.rows) throw std::invalid_argument("solve shape");
    Mat<F> aug(m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
        aug(i, m.cols) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;
    std::vector<F> x(m.cols, F(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols);
    return x;
}

}  // namespace cya
