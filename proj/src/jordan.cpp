#include "cya/jordan.hpp"

#include <set>
#include <sstream>

namespace cya {

JordanForm jf_block(const Rat& rot, int size, int mult) {
    std::vector<std::pair<Rat, int>> b;
    for (int i = 0; i < mult; ++i) b.push_back({rot, size});
    return JordanForm(std::move(b));
}

JordanForm jf_sum(const std::vector<JordanForm>& parts) {
    std::vector<std::pair<Rat, int>> b;
    for (auto& p : parts) b.insert(b.end(), p.blocks.begin(), p.blocks.end());
    return JordanForm(std::move(b));
}

JordanForm jf_sum(const std::initializer_list<JordanForm>& parts) {
    return jf_sum(std::vector<JordanForm>(parts));
}

JordanForm jf_pair(const Rat& rot) {
    Rat r = mod1(rot);
    if (r == mod1(-r)) return jf_block(r, 2);
    return jf_sum({jf_block(r, 1), jf_block(mod1(-r), 1)});
}

int gamma(const JordanForm& j) {
    int n = j.rank();
    for (auto& [r, s] : j.blocks)
        if (r == 0) n -= 1;
    return n;
}

namespace {

// block sizes per rotation
std::map<Rat, std::vector<int>> partitions_by_rot(const JordanForm& j) {
    std::map<Rat, std::vector<int>> m;
    for (auto& [r, s] : j.blocks) m[r].push_back(s);
    for (auto& [r, v] : m) std::sort(v.begin(), v.end(), std::greater<int>());
    return m;
}

// dim of the GL centralizer of a unipotent with given block sizes
// (sorted descending): sum (2i-1) b_i
int gl_centralizer_dim(const std::vector<int>& sizes) {
    int d = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        d += (2 * static_cast<int>(i) + 1) * sizes[static_cast<std::size_t>(i)];
    return d;
}

// dim of the Sp centralizer of a (+-1)-eigenvalue part with the given block
// sizes: (sum of conjugate-partition squares + number of odd parts)/2
int sp_centralizer_dim(const std::vector<int>& sizes) {
    if (sizes.empty()) return 0;
    int maxs = sizes.front();
    int sq = 0;
    for (int k = 1; k <= maxs; ++k) {
        int lk = 0;  // conjugate partition entry
        for (int s : sizes)
            if (s >= k) ++lk;
        sq += lk * lk;
    }
    int odd = 0;
    for (int s : sizes)
        if (s % 2 == 1) ++odd;
    return (sq + odd) / 2;
}

// same for SO: (sum of conjugate-partition squares - number of odd parts)/2
// ... the orthogonal centralizer of a unipotent with blocks lambda has
// dimension (sum lambda'_i^2 - #odd parts)/2; even parts must have even
// multiplicity.
int so_centralizer_dim(const std::vector<int>& sizes) {
    if (sizes.empty()) return 0;
    int maxs = sizes.front();
    int sq = 0;
    for (int k = 1; k <= maxs; ++k) {
        int lk = 0;
        for (int s : sizes)
            if (s >= k) ++lk;
        sq += lk * lk;
    }
    int odd = 0;
    for (int s : sizes)
        if (s % 2 == 1) ++odd;
    return (sq - odd) / 2;
}

}  // namespace

int delta_gl(const JordanForm& j) {
    int n = j.rank();
    int c = 0;
    for (auto& [r, sizes] : partitions_by_rot(j)) c += gl_centralizer_dim(sizes);
    return n * n - c;
}

bool sp4_realizable(const JordanForm& j) {
    if (j.rank() != 4) return false;
    auto parts = partitions_by_rot(j);
    for (auto& [r, sizes] : parts) {
        Rat inv = mod1(-r);
        if (r == inv) {
            // +-1 eigenvalue: odd block sizes need even multiplicity
            std::map<int, int> cnt;
            for (int s : sizes) cnt[s]++;
            for (auto& [s, c] : cnt)
                if (s % 2 == 1 && c % 2 == 1) return false;
        } else {
            auto it = parts.find(inv);
            if (it == parts.end() || it->second != sizes) return false;
        }
    }
    return true;
}

namespace {

bool so_realizable(const JordanForm& j) {
    auto parts = partitions_by_rot(j);
    for (auto& [r, sizes] : parts) {
        Rat inv = mod1(-r);
        if (r == inv) {
            // even block sizes need even multiplicity
            std::map<int, int> cnt;
            for (int s : sizes) cnt[s]++;
            for (auto& [s, c] : cnt)
                if (s % 2 == 0 && c % 2 == 1) return false;
        } else {
            auto it = parts.find(inv);
            if (it == parts.end() || it->second != sizes) return false;
        }
    }
    return true;
}

int sp_or_so_delta(const JordanForm& j, bool symplectic, int dim_g) {
    auto parts = partitions_by_rot(j);
    int c = 0;
    std::set<Rat> done;
    for (auto& [r, sizes] : parts) {
        if (done.count(r)) continue;
        Rat inv = mod1(-r);
        if (r == inv) {
            c += symplectic ? sp_centralizer_dim(sizes) : so_centralizer_dim(sizes);
        } else {
            c += gl_centralizer_dim(sizes);  // one GL factor per {r, -r} pair
            done.insert(inv);
        }
        done.insert(r);
    }
    return dim_g - c;
}

}  // namespace

int delta_sp4(const JordanForm& j) {
    if (!sp4_realizable(j)) throw std::domain_error("form not realizable in Sp4: " + jf_str(j));
    return sp_or_so_delta(j, true, 10);
}

int delta_so5(const JordanForm& j) {
    if (j.rank() != 5 || !so_realizable(j))
        throw std::domain_error("form not realizable in SO5: " + jf_str(j));
    return sp_or_so_delta(j, false, 10);
}

JordanForm jf_twist(const JordanForm& j, const Rat& rot) {
    JordanForm r = j;
    for (auto& [e, s] : r.blocks) e = mod1(e + rot);
    r.canonicalize();
    return r;
}

JordanForm jf_inverse(const JordanForm& j) {
    JordanForm r = j;
    for (auto& [e, s] : r.blocks) e = mod1(-e);
    r.canonicalize();
    return r;
}

JordanForm jf_square(const JordanForm& j) {
    JordanForm r = j;
    for (auto& [e, s] : r.blocks) e = mod1(e + e);
    r.canonicalize();
    return r;
}

JordanForm jf_tensor(const JordanForm& a, const JordanForm& b) {
    std::vector<std::pair<Rat, int>> blocks;
    for (auto& [ra, sa] : a.blocks)
        for (auto& [rb, sb] : b.blocks) {
            int lo = std::abs(sa - sb) + 1, hi = sa + sb - 1;
            for (int k = lo; k <= hi; k += 2) blocks.push_back({mod1(ra + rb), k});
        }
    return JordanForm(std::move(blocks));
}

void validate(const JordanTuple& t) {
    if (t.entries.empty()) throw std::invalid_argument("empty tuple");
    int n = t.entries[0].rank();
    for (auto& e : t.entries)
        if (e.rank() != n) throw std::invalid_argument("tuple entries of unequal rank");
    if (t.group == Group::Sp4)
        for (auto& e : t.entries)
            if (!sp4_realizable(e))
                throw std::invalid_argument("entry not realizable in Sp4: " + jf_str(e));
}

Rat det_rotation_sum(const JordanTuple& t) {
    Rat s(0);
    for (auto& e : t.entries)
        for (auto& [r, k] : e.blocks) s += r * Rat(k);
    return mod1(s);
}

int rigidity_index(const JordanTuple& t) {
    validate(t);
    int sum = 0;
    switch (t.group) {
        case Group::GL: {
            int n = t.rank();
            for (auto& e : t.entries) sum += delta_gl(e);
            return sum - 2 * (n * n - 1);
        }
        case Group::Sp4:
            for (auto& e : t.entries) sum += delta_sp4(e);
            return sum - 2 * 10;
        case Group::SO5:
            for (auto& e : t.entries) sum += delta_so5(e);
            return sum - 2 * 10;
    }
    throw std::logic_error("unreachable");
}

int scott_defect(const JordanTuple& t) {
    int s = 0;
    for (auto& e : t.entries) s += gamma(e);
    return s - 2 * t.rank();
}

JordanTuple kummer_twist(const JordanTuple& t, int i, int j, const Rat& rot) {
    if (i < 1 || j < 1 || i > static_cast<int>(t.size()) || j > static_cast<int>(t.size()) || i == j)
        throw std::invalid_argument("kummer_twist: bad entry indices");
    JordanTuple r = t;
    r.entries[static_cast<std::size_t>(i - 1)] =
        jf_twist(r.entries[static_cast<std::size_t>(i - 1)], rot);
    r.entries[static_cast<std::size_t>(j - 1)] =
        jf_twist(r.entries[static_cast<std::size_t>(j - 1)], -rot);
    return r;
}

JordanTuple tuple_tensor(const JordanTuple& a, const JordanTuple& b) {
    if (a.size() != b.size()) throw std::invalid_argument("tuple_tensor: length mismatch");
    JordanTuple r;
    r.group = Group::GL;
    for (std::size_t i = 0; i < a.size(); ++i)
        r.entries.push_back(jf_tensor(a.entries[i], b.entries[i]));
    return r;
}

JordanTuple tuple_square(const JordanTuple& t) {
    if (t.size() < 2) throw std::invalid_argument("tuple_square needs >= 2 entries");
    JordanTuple r;
    r.group = t.group;
    r.entries.push_back(jf_square(t.entries.front()));
    for (std::size_t rep = 0; rep < 2; ++rep)
        for (std::size_t i = 1; i + 1 < t.size(); ++i) r.entries.push_back(t.entries[i]);
    r.entries.push_back(jf_square(t.entries.back()));
    return r;
}

JordanTuple tuple_sym_square(const JordanTuple& t) {
    JordanTuple r;
    r.group = Group::GL;
    for (auto& e : t.entries) r.entries.push_back(jf_sym_power(e, 2));
    return r;
}

namespace {

struct McCounts {
    int C;
    std::vector<int> c;
};

McCounts mc_counts(const JordanTuple& t, const Rat& rot) {
    int n = t.rank();
    std::size_t r1 = t.size();
    McCounts mc;
    mc.C = -n;
    for (std::size_t i = 0; i + 1 < r1; ++i) mc.C += gamma(t.entries[i]);
    mc.C += gamma(jf_twist(t.entries.back(), -rot));
    for (std::size_t i = 0; i + 1 < r1; ++i)
        mc.c.push_back(gamma(t.entries[i]) + n - gamma(jf_twist(t.entries[i], rot)));
    mc.c.push_back(gamma(jf_twist(t.entries.back(), -rot)) + n - gamma(t.entries.back()));
    return mc;
}

}  // namespace

JordanTuple mc_jordan(const JordanTuple& t, const Rat& rot) {
    validate(t);
    Rat a = mod1(rot);
    if (a == 0) throw std::invalid_argument("mc_jordan: alpha must differ from 1");
    auto mc = mc_counts(t, a);
    for (int ci : mc.c)
        if (ci > mc.C)
            throw std::domain_error("mc_jordan: defect condition c_i <= C violated");
    JordanTuple out;
    // group bookkeeping: MC_{-1} exchanges symplectic and orthogonal tuples;
    // other parameters land in GL
    if (a == Rat(1, 2) && t.group == Group::Sp4)
        out.group = Group::SO5;
    else if (a == Rat(1, 2) && t.group == Group::SO5)
        out.group = Group::Sp4;
    else
        out.group = Group::GL;
    std::size_t r1 = t.size();
    for (std::size_t i = 0; i < r1; ++i) {
        bool last = (i + 1 == r1);
        std::vector<std::pair<Rat, int>> blocks;
        for (auto& [e, s] : t.entries[i].blocks) {
            if (!last) {
                if (e == 0) {
                    if (s >= 2) blocks.push_back({a, s - 1});
                } else if (e == mod1(-a)) {
                    blocks.push_back({Rat(0), s + 1});
                } else {
                    blocks.push_back({mod1(e + a), s});
                }
            } else {
                if (e == 0) {
                    blocks.push_back({mod1(-a), s + 1});
                } else if (e == a) {
                    if (s >= 2) blocks.push_back({Rat(0), s - 1});
                } else {
                    blocks.push_back({mod1(e - a), s});
                }
            }
        }
        int fill = mc.C - mc.c[i];
        for (int k = 0; k < fill; ++k) blocks.push_back({last ? mod1(-a) : Rat(0), 1});
        out.entries.push_back(JordanForm(std::move(blocks)));
    }
    return out;
}

JordanTuple mh_jordan(const JordanTuple& t, const Rat& rot) {
    JordanTuple twisted = kummer_twist(t, static_cast<int>(t.size()), 1, -rot);
    return mc_jordan(twisted, mod1(-rot));
}

int mh_expected_degree(const JordanTuple& t, const Rat& rot) {
    int n = t.rank();
    int d = -n;
    for (std::size_t i = 1; i < t.size(); ++i) d += gamma(t.entries[i]);
    d += gamma(jf_twist(t.entries.front(), rot));
    return d;
}

bool similar(const JordanTuple& a, const JordanTuple& b) {
    if (a.size() != b.size() || a.rank() != b.rank()) return false;
    std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    do {
        // per position, collect admissible twist rotations
        std::vector<std::vector<Rat>> options(n);
        bool feasible = true;
        for (std::size_t i = 0; i < n && feasible; ++i) {
            const JordanForm& x = a.entries[i];
            const JordanForm& y = b.entries[perm[i]];
            if (x.blocks.size() != y.blocks.size()) {
                feasible = false;
                break;
            }
            std::set<Rat> cands;
            for (auto& [re, se] : y.blocks)
                if (se == x.blocks.front().second) cands.insert(mod1(re - x.blocks.front().first));
            for (const Rat& tcand : cands)
                if (jf_twist(x, tcand) == y) options[i].push_back(tcand);
            if (options[i].empty()) feasible = false;
        }
        if (!feasible) continue;
        // search for a selection with rotation sum 0 mod 1
        std::vector<std::size_t> pick(n, 0);
        std::function<bool(std::size_t, Rat)> dfs = [&](std::size_t i, Rat acc) -> bool {
            if (i == n) return mod1(acc) == 0;
            for (const Rat& tcand : options[i])
                if (dfs(i + 1, acc + tcand)) return true;
            return false;
        };
        if (dfs(0, Rat(0))) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

bool cy_type(const JordanTuple& t) {
    int n = t.rank();
    if (n % 2 == 0 && t.group != Group::Sp4) return false;
    if (n % 2 == 1 && t.group != Group::SO5) return false;
    for (auto& e : t.entries)
        if (e.blocks.size() == 1 && e.blocks[0] == std::pair<Rat, int>{Rat(0), n}) return true;
    return false;
}

std::string group_str(Group g) {
    switch (g) {
        case Group::GL: return "GL";
        case Group::Sp4: return "Sp4";
        case Group::SO5: return "SO5";
    }
    return "?";
}

std::string jf_str(const JordanForm& j) {
    std::ostringstream os;
    bool first = true;
    for (auto& [r, s] : j.blocks) {
        if (!first) os << ",";
        first = false;
        os << rat_str(r) << ":" << s;
    }
    return os.str();
}

std::string tuple_str(const JordanTuple& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << "; ";
        os << jf_str(t.entries[i]);
    }
    os << " @" << group_str(t.group);
    return os.str();
}

namespace {
std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}
}  // namespace

JordanForm parse_jordan_form(const std::string& s) {
    std::vector<std::pair<Rat, int>> blocks;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (item.empty()) continue;
        auto pos = item.find(':');
        if (pos == std::string::npos) throw std::invalid_argument("bad jordan block: " + item);
        blocks.push_back({parse_rat(strip(item.substr(0, pos))),
                          std::stoi(strip(item.substr(pos + 1)))});
    }
    return JordanForm(std::move(blocks));
}

JordanTuple parse_jordan_tuple(const std::string& s) {
    JordanTuple t;
    std::string body = s;
    auto at = body.find('@');
    if (at != std::string::npos) {
        std::string g = strip(body.substr(at + 1));
        body = body.substr(0, at);
        if (g == "GL")
            t.group = Group::GL;
        else if (g == "Sp4")
            t.group = Group::Sp4;
        else if (g == "SO5")
            t.group = Group::SO5;
        else
            throw std::invalid_argument("bad group tag: " + g);
    }
    std::stringstream ss(body);
    std::string entry;
    while (std::getline(ss, entry, ';')) {
        entry = strip(entry);
        if (!entry.empty()) t.entries.push_back(parse_jordan_form(entry));
    }
    validate(t);
    return t;
}

}  // namespace cya
