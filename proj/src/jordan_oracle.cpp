#include <numeric>

#include "cya/jordan.hpp"

namespace cya {

namespace {

long rot_conductor(const Rat& r) { return r.get_den().get_si(); }

Cyc rot_to_cyc(const Rat& r, long m) {
    long q = rot_conductor(r);
    long p = static_cast<long>(r.get_num().get_si());
    return cyc_root(m, (m / q) * p);
}

}  // namespace

Mat<Cyc> jordan_matrix(const JordanForm& j) {
    long m = 1;
    for (auto& [r, s] : j.blocks) m = std::lcm(m, rot_conductor(r));
    int n = j.rank();
    Mat<Cyc> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    std::size_t pos = 0;
    for (auto& [r, s] : j.blocks) {
        Cyc ev = rot_to_cyc(r, m);
        for (int k = 0; k < s; ++k) {
            a(pos + static_cast<std::size_t>(k), pos + static_cast<std::size_t>(k)) = ev;
            if (k + 1 < s)
                a(pos + static_cast<std::size_t>(k), pos + static_cast<std::size_t>(k) + 1) = Cyc(1);
        }
        pos += static_cast<std::size_t>(s);
    }
    return a;
}

JordanForm jordan_of_matrix(const Mat<Cyc>& m, long conductor) {
    std::size_t n = m.rows;
    std::vector<std::pair<Rat, int>> blocks;
    std::size_t total = 0;
    for (long k = 0; k < conductor && total < n; ++k) {
        if (std::gcd(k, conductor) != 1 && k != 0) {
            // rotation k/conductor has smaller conductor; handled at that
            // value of k only if coprime -- so enumerate all k and rely on
            // rotation normalization instead
        }
        Rat rot(k, conductor);
        rot.canonicalize();
        Cyc ev = rot_to_cyc(mod1(rot), conductor);
        Mat<Cyc> shifted = m;
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) = shifted(i, i) - ev;
        // rank sequence of powers
        std::vector<std::size_t> ranks{n};
        Mat<Cyc> pw = Mat<Cyc>::identity(n);
        while (true) {
            pw = mat_mul(pw, shifted);
            std::size_t r = rank_gauss(pw);
            ranks.push_back(r);
            if (r == ranks[ranks.size() - 2]) break;
        }
        for (std::size_t k2 = 1; k2 + 1 <= ranks.size() - 1; ++k2) {
            // number of blocks of size exactly k2
            long cnt = static_cast<long>(ranks[k2 - 1]) - 2 * static_cast<long>(ranks[k2]) +
                       static_cast<long>(k2 + 1 < ranks.size() ? ranks[k2 + 1]
                                                               : ranks[ranks.size() - 1]);
            for (long c = 0; c < cnt; ++c) {
                blocks.push_back({mod1(rot), static_cast<int>(k2)});
                total += k2;
            }
        }
    }
    if (total != n)
        throw std::domain_error("jordan_of_matrix: eigenvalues not covered by conductor");
    return JordanForm(std::move(blocks));
}

namespace {

// matrix of the induced action on Sym^k (basis: multisets) or Lambda^2
// (basis: ordered pairs i<j), extracted from A tensor ... tensor A.
Mat<Cyc> sym_power_matrix(const Mat<Cyc>& a, int k) {
    std::size_t n = a.rows;
    // enumerate weakly increasing index tuples
    std::vector<std::vector<std::size_t>> basis;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        basis.push_back(idx);
        int p = k - 1;
        while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - 1) --p;
        if (p < 0) break;
        std::size_t v = ++idx[static_cast<std::size_t>(p)];
        for (int q = p + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = v;
    }
    std::map<std::vector<std::size_t>, std::size_t> pos;
    for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = i;
    Mat<Cyc> out(basis.size(), basis.size());
    // column j: image of symmetrized basis vector e_{basis[j]} under A^{tensor k},
    // coefficients read off in the symmetrized basis.
    for (std::size_t j = 0; j < basis.size(); ++j) {
        // expand product over t of (A e_{basis[j][t]}) and symmetrize indices
        std::map<std::vector<std::size_t>, Cyc> acc{{{}, Cyc(1)}};
        for (int t = 0; t < k; ++t) {
            std::map<std::vector<std::size_t>, Cyc> next;
            for (auto& [tuple, coeff] : acc) {
                for (std::size_t i = 0; i < n; ++i) {
                    const Cyc& aij = a(i, basis[j][static_cast<std::size_t>(t)]);
                    if (aij.is_zero()) continue;
                    auto tup = tuple;
                    tup.push_back(i);
                    std::sort(tup.begin(), tup.end());
                    auto it = next.find(tup);
                    if (it == next.end())
                        next.emplace(std::move(tup), coeff * aij);
                    else
                        it->second += coeff * aij;
                }
            }
            acc = std::move(next);
        }
        for (auto& [tuple, coeff] : acc) out(pos.at(tuple), j) = coeff;
    }
    return out;
}

Mat<Cyc> ext_square_matrix(const Mat<Cyc>& a) {
    std::size_t n = a.rows;
    std::vector<std::pair<std::size_t, std::size_t>> basis;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) basis.push_back({i, j});
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pos;
    for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = i;
    Mat<Cyc> out(basis.size(), basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
        auto [p, q] = basis[col];
        // (A e_p) wedge (A e_q)
        for (std::size_t i = 0; i < n; ++i) {
            if (a(i, p).is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || a(j, q).is_zero()) continue;
                Cyc coeff = a(i, p) * a(j, q);
                if (i < j)
                    out(pos.at({i, j}), col) += coeff;
                else
                    out(pos.at({j, i}), col) -= coeff;
            }
        }
    }
    return out;
}

long form_conductor(const JordanForm& j) {
    long m = 1;
    for (auto& [r, s] : j.blocks) m = std::lcm(m, r.get_den().get_si());
    return m;
}

}  // namespace

JordanForm jf_sym_power(const JordanForm& j, int k) {
    Mat<Cyc> a = jordan_matrix(j);
    return jordan_of_matrix(sym_power_matrix(a, k), form_conductor(j));
}

JordanForm jf_ext_square(const JordanForm& j) {
    Mat<Cyc> a = jordan_matrix(j);
    return jordan_of_matrix(ext_square_matrix(a), form_conductor(j));
}

JordanForm sp4_to_so5(const JordanForm& j) {
    if (!sp4_realizable(j)) throw std::domain_error("sp4_to_so5: not an Sp4 form");
    JordanForm l2 = jf_ext_square(j);
    // remove one unit J(1) block (the invariant line of the symplectic form)
    for (std::size_t i = 0; i < l2.blocks.size(); ++i) {
        if (l2.blocks[i].first == 0 && l2.blocks[i].second == 1) {
            l2.blocks.erase(l2.blocks.begin() + static_cast<std::ptrdiff_t>(i));
            return l2;
        }
    }
    throw std::domain_error("sp4_to_so5: no unit block in the exterior square");
}

}  // namespace cya
