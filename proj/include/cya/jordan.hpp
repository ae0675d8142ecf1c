#pragma once

#include "cya/cyclotomic.hpp"
#include "cya/rational.hpp"

namespace cya {

// Eigenvalues of quasi-unipotent matrices are roots of unity; we represent
// exp(2*pi*i*r) by its rotation number r in [0, 1).

// A Jordan form: multiset of blocks (rotation, size), kept sorted.
struct JordanForm {
    std::vector<std::pair<Rat, int>> blocks;  // (rotation in [0,1), size)

    JordanForm() = default;
    explicit JordanForm(std::vector<std::pair<Rat, int>> b) : blocks(std::move(b)) {
        canonicalize();
    }
    void canonicalize() {
        for (auto& [r, s] : blocks) {
            r = mod1(r);
            if (s <= 0) throw std::invalid_argument("jordan block size must be positive");
        }
        std::sort(blocks.begin(), blocks.end());
    }
    int rank() const {
        int n = 0;
        for (auto& [r, s] : blocks) n += s;
        return n;
    }
    bool operator==(const JordanForm& o) const { return blocks == o.blocks; }
    bool operator!=(const JordanForm& o) const { return !(*this == o); }
    bool operator<(const JordanForm& o) const { return blocks < o.blocks; }
};

// Convenience constructors.
JordanForm jf_block(const Rat& rot, int size, int mult = 1);
JordanForm jf_sum(const std::initializer_list<JordanForm>& parts);
JordanForm jf_sum(const std::vector<JordanForm>& parts);
// [alpha]: alpha J(1) + alpha^-1 J(1) if alpha != alpha^-1, else alpha J(2).
JordanForm jf_pair(const Rat& rot);

// gamma(A) = rank(A - 1)
int gamma(const JordanForm& j);
// delta in GL_n: n^2 - dim centralizer
int delta_gl(const JordanForm& j);
// delta in Sp_4 (throws if the form is not realizable in Sp_4)
int delta_sp4(const JordanForm& j);
// delta in SO_5 (throws if not realizable; used through the exceptional
// isomorphism)
int delta_so5(const JordanForm& j);
bool sp4_realizable(const JordanForm& j);

// multiply all eigenvalues by exp(2 pi i rot)
JordanForm jf_twist(const JordanForm& j, const Rat& rot);
// J -> J^-1
JordanForm jf_inverse(const JordanForm& j);
// Jordan form of J^2 (block sizes survive; rotations double)
JordanForm jf_square(const JordanForm& j);
// Clebsch-Gordan tensor product
JordanForm jf_tensor(const JordanForm& a, const JordanForm& b);
// Sym^k and Lambda^2 via explicit matrices over cyclotomic fields
JordanForm jf_sym_power(const JordanForm& j, int k);
JordanForm jf_ext_square(const JordanForm& j);
// image under Sp4 ~ SO5: Lambda^2 minus one unit J(1) block
JordanForm sp4_to_so5(const JordanForm& j);

enum class Group { GL, Sp4, SO5 };
std::string group_str(Group g);

// Tuple of Jordan forms (entry 1 at z=0, last entry at infinity by the usual
// convention).
struct JordanTuple {
    std::vector<JordanForm> entries;
    Group group = Group::GL;

    int rank() const { return entries.empty() ? 0 : entries[0].rank(); }
    std::size_t size() const { return entries.size(); }
    bool operator==(const JordanTuple& o) const {
        return entries == o.entries && group == o.group;
    }
};

// All entries must have equal rank; for Sp4/SO5 tags each entry must be
// realizable in the group.
void validate(const JordanTuple& t);
// sum of rotation * size over all blocks of all entries, mod 1 (vanishes for
// tuples coming from M-tuples with product of determinants one)
Rat det_rotation_sum(const JordanTuple& t);

int rigidity_index(const JordanTuple& t);
int scott_defect(const JordanTuple& t);  // sum gamma - 2n

// tensor by the rank-one tuple K^j_i(alpha): entry i twisted by alpha,
// entry j by alpha^-1 (1-based indices)
JordanTuple kummer_twist(const JordanTuple& t, int i, int j, const Rat& rot);
// entrywise tensor product
JordanTuple tuple_tensor(const JordanTuple& a, const JordanTuple& b);
// square: ends squared, middle entries doubled
JordanTuple tuple_square(const JordanTuple& t);
// entrywise Sym^2 / Lambda^2
JordanTuple tuple_sym_square(const JordanTuple& t);

// middle convolution on Jordan data; alpha = exp(2 pi i rot), rot != 0
JordanTuple mc_jordan(const JordanTuple& t, const Rat& rot);
// middle Hadamard product MH_alpha = MC_{alpha^-1} ( . tensor K^{r+1}_1(alpha))
JordanTuple mh_jordan(const JordanTuple& t, const Rat& rot);
// expected factor degree of the middle Hadamard product on operator level
int mh_expected_degree(const JordanTuple& t, const Rat& rot);

// similarity: entries permuted and twisted by a rank-one tuple whose
// rotations sum to 0 mod 1
bool similar(const JordanTuple& a, const JordanTuple& b);

// CY-type: symplectic tag for even rank / orthogonal for odd rank,
// quasi-unipotent entries (always true in this representation), one entry
// maximally unipotent
bool cy_type(const JordanTuple& t);

// ---------------------------------------------------------------------------
// classification of CY-type Sp4 tuples with rigidity index two

struct Family {
    std::string name;  // N1, N2, M1..M5
    JordanTuple representative;
};

// The seven families, instantiated at sample generic rotations.
std::vector<Family> known_families();
// Enumerates candidate tuples over the Sp4 local-form alphabet, applies the
// rigidity/Scott filters and similarity reduction, and returns the surviving
// families matched by name.
std::vector<Family> classify_index2();

// ---------------------------------------------------------------------------
// matrix oracle over cyclotomic fields

Mat<Cyc> jordan_matrix(const JordanForm& j);
// Jordan form of an explicit matrix whose eigenvalues are roots of unity
// with conductor dividing m.
JordanForm jordan_of_matrix(const Mat<Cyc>& m, long conductor);

std::string jf_str(const JordanForm& j);
std::string tuple_str(const JordanTuple& t);
JordanForm parse_jordan_form(const std::string& s);
// Format: "rot:size,rot:size; rot:size ... [@Sp4|@SO5|@GL]"
JordanTuple parse_jordan_tuple(const std::string& s);

}  // namespace cya
