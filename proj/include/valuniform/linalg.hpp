#pragma once

// Exact linear algebra over Z and Q on GMP integers and rationals.
// Matrices are row-major: a matrix is a vector of rows.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace valuniform {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

Rat make_rat(const Int& num, const Int& den);
// Accepts "a", "a/b", "-a/b" (also the unicode minus sign).
Rat parse_rat(const std::string& text);
std::string to_string(const Rat& q);
std::string to_string(const Int& z);

Int floor_rat(const Rat& q);
Rat frac_rat(const Rat& q);

IntVec to_int_vec(const std::vector<long long>& v);
RatVec to_rat(const IntVec& v);
RatMat to_rat(const IntMat& m);

Int dot(const IntVec& a, const IntVec& b);
Rat dot(const RatVec& a, const RatVec& b);
IntVec add(const IntVec& a, const IntVec& b);
IntVec sub(const IntVec& a, const IntVec& b);
IntVec scale(const Int& c, const IntVec& a);
IntVec negate(const IntVec& a);
bool is_zero(const IntVec& v);
bool is_zero(const RatVec& v);
IntMat transpose(const IntMat& m);
RatMat transpose(const RatMat& m);

Int gcd_of(const IntVec& v);
// Smallest positive integer vector on the ray through v (v != 0).
IntVec primitive(const IntVec& v);
IntVec primitive(const RatVec& v);
bool is_primitive(const IntVec& v);

// Reduced row echelon form, in place; returns pivot columns.
std::vector<std::size_t> rref(RatMat& m);
std::size_t rank(const RatMat& m);
std::size_t rank(const IntMat& m);
// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
RatMat kernel(const RatMat& m, std::size_t cols);
// Z-basis of {x in Z^cols : m x = 0}.
IntMat integer_kernel(const IntMat& m, std::size_t cols);
// Coefficients c with sum_i c_i vectors[i] = target, if any (vectors independent
// gives a unique answer; otherwise some solution).
std::optional<RatVec> express(const RatMat& vectors, const RatVec& target);
std::optional<RatVec> express(const IntMat& vectors, const IntVec& target);
// Inverse of a square rational matrix, or nullopt when singular.
std::optional<RatMat> inverse(const RatMat& m);
Int det(const IntMat& m);
Rat det(const RatMat& m);

// Unimodular column reduction: a * v = [h | 0] with h lower-triangular of size
// rank. Columns of v beyond the rank span the integer kernel of a.
struct ColumnReduction {
    IntMat h;   // rows(a) x rank
    IntMat v;   // cols(a) x cols(a), unimodular
    IntMat v_inverse;
    std::size_t rank = 0;
};
ColumnReduction column_reduce(const IntMat& a, std::size_t cols);

// Z-basis (rows, Hermite normal form) of the subgroup generated by the rows.
IntMat lattice_basis(const IntMat& vectors, std::size_t cols);
// Z^n intersected with the Q-span of the rows.
IntMat saturated_basis(const IntMat& vectors, std::size_t cols);
// Invariant factors (nonzero diagonal of the Smith normal form).
std::vector<Int> smith_invariants(const IntMat& m);
// Index of the sublattice spanned by `sub` inside the lattice spanned by `super`
// (0 when the ranks differ, i.e. infinite index). `sub` must lie in `super`.
Int lattice_index(const IntMat& sub, const IntMat& super, std::size_t cols);
// Integer coordinates of v in a lattice basis, or nullopt if v is outside.
std::optional<IntVec> lattice_coords(const IntMat& basis, const IntVec& v);
// gcd of all maximal minors: the index of span_Z(rows) in its saturation.
Int multiplicity(const IntMat& rows);

bool lex_less(const IntVec& a, const IntVec& b);

}  // namespace valuniform
