#pragma once

#include "cya/theta_operator.hpp"

namespace cya {

// A point of the singular locus on P^1 over Q: the origin, a finite rational
// point, a conjugate pair of quadratic-irrational points (given by their
// minimal polynomial), or infinity.
struct SingularPoint {
    enum class Kind { Zero, Finite, Quadratic, Infinity };
    Kind kind = Kind::Zero;
    Rat p;      // Kind::Finite
    Poly quad;  // Kind::Quadratic: monic irreducible quadratic

    static SingularPoint zero() { return {Kind::Zero, Rat(0), Poly()}; }
    static SingularPoint finite(const Rat& v) { return {Kind::Finite, v, Poly()}; }
    static SingularPoint quadratic(Poly q) { return {Kind::Quadratic, Rat(0), std::move(q)}; }
    static SingularPoint infinity() { return {Kind::Infinity, Rat(0), Poly()}; }
    std::string str() const;
};

// All candidate singular points: roots of the discriminant plus 0 and
// infinity.  Throws when the discriminant has factors of degree above two.
std::vector<SingularPoint> singular_locus(const ThetaOp& l);

// Operator whose local data at 0 equals that of l at the given point (not
// available for quadratic points).
ThetaOp local_op(const ThetaOp& l, const SingularPoint& s);

// Indicial polynomial at 0 (the constant z-coefficient in the z-layout).
Poly indicial(const ThetaOp& l);

// Exponents (with multiplicity) at a point; throws when an exponent is
// irrational.
std::vector<std::pair<Rat, int>> exponents_at(const ThetaOp& l, const SingularPoint& s);

struct SchemeColumn {
    SingularPoint point;
    std::vector<std::pair<Rat, int>> exponents;
    bool apparent = false;
};
struct RiemannScheme {
    std::vector<SchemeColumn> columns;
    std::string str() const;
};

// Riemann scheme over the singular locus, with apparent singularities marked.
RiemannScheme riemann_scheme(const ThetaOp& l);

// Classical Fuchs relation: the exponent sums over all of P^1 satisfy
// sum_p (sum_i e_{i,p} - n(n-1)/2) = -n(n-1).
bool fuchs_sum_check(const RiemannScheme& scheme, int order);

// True when every local solution at the point is holomorphic: the exponents
// are distinct non-negative integers and no logarithms occur.
bool is_apparent(const ThetaOp& l, const SingularPoint& s);

// Dimension of the space of logarithm-free local solutions at 0 whose
// exponents lie in nu0 + Z.
int log_free_dim_in_class(const ThetaOp& l, const Rat& nu0);

// Dimension of the space of single-valued local solutions at the point
// (integer exponent and no logarithm); this is dim ker(T - 1) for the local
// monodromy T.  At quadratic points the integer exponents must be simple.
int integer_log_free_dim(const ThetaOp& l, const SingularPoint& s);

// ---------------------------------------------------------------------------
// Frobenius solutions at z = 0

// Basis of the local solutions at 0 whose exponents lie in nu0 + Z, as
// truncated log-series.
std::vector<LogSeries> frobenius_class(const ThetaOp& l, const Rat& nu0, int trunc);

// Full basis at 0 (requires all exponents rational).
std::vector<LogSeries> local_solutions(const ThetaOp& l, int trunc);

// True when 0 is a point of maximally unipotent monodromy: the indicial
// polynomial is a constant times nu^order.
bool is_mum(const ThetaOp& l);

// Normalized Frobenius basis y_0, ..., y_{n-1} at a MUM point: writing
// log-powers in divided form lambda_j = log(z)^j / j!, the coefficient of
// lambda_k in y_k is the holomorphic solution y_0 = 1 + O(z) and the lower
// log-parts of y_k vanish at z = 0.
std::vector<LogSeries> frobenius_basis(const ThetaOp& l, int trunc);

// Coefficients of the holomorphic solution 1 + O(z) at a MUM point.
Series holo_solution(const ThetaOp& l, int trunc);

}  // namespace cya
