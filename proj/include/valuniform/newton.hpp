#pragma once

// Newton polygons of polynomials over a valued base, and the root-distance
// statistics derived from them without any root finding.

#include "valuniform/exactval.hpp"
#include "valuniform/polynomial.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace valuniform {

using QPoly = Polynomial<PAdicRational>;
using SeriesPoly = Polynomial<TruncatedPuiseux>;

QPoly make_qpoly(const std::vector<Rat>& coeffs, const Int& prime);

struct NewtonSegment {
    Rat slope;
    long length = 0;
    bool operator==(const NewtonSegment&) const = default;
};

struct NewtonPolygon {
    std::vector<std::pair<long, Rat>> vertices;  // lower hull corners, sorted by index
    std::vector<NewtonSegment> segments;         // strictly increasing slopes
    long zero_order = 0;                         // multiplicity of the root 0
    // Smallest truncation order among the coefficients; nullopt when exact.
    std::optional<Rat> certified_precision;

    // v(alpha) = -slope, with multiplicity = segment length (nonzero roots only).
    std::map<Rat, long> root_valuations() const;
};

// Lower convex hull of the points (i, v(a_i)). `valuations` is indexed by i;
// AtLeast entries must lie on or above the hull, else a precision error.
NewtonPolygon newton_polygon_from_valuations(const std::vector<Valuation>& valuations,
                                             std::optional<Rat> certified_precision);

template <class S>
std::optional<Rat> coefficient_precision(const Polynomial<S>& f) {
    std::optional<Rat> prec;
    if constexpr (std::is_same_v<S, TruncatedPuiseux>) {
        for (const auto& c : f.coeffs())
            if (c.truncation() && (!prec || *c.truncation() < *prec)) prec = *c.truncation();
    }
    return prec;
}

template <class S>
NewtonPolygon newton_polygon(const Polynomial<S>& f) {
    if (f.is_zero()) throw precondition("zero-polynomial", "newton polygon of the zero polynomial");
    std::vector<Valuation> vals;
    for (const auto& c : f.coeffs()) vals.push_back(c.valuation());
    return newton_polygon_from_valuations(vals, coefficient_precision(f));
}

/// Multiset {v(alpha_i - alpha_j) : i != j}, each unordered pair counted twice.
struct DistanceMultiset {
    std::map<Rat, long> entries;
    std::optional<Rat> certified_precision;

    long total() const;
    // Largest valuation: the smallest distance between distinct roots.
    Rat max_valuation() const;
    // Smallest valuation: the largest distance.
    Rat min_valuation() const;
};

template <class S>
void require_squarefree(const Polynomial<S>& f) {
    if (f.degree() < 1) throw precondition("degree", "polynomial of positive degree required");
    auto fp = f.derivative();
    if (fp.is_zero()) throw precondition("not-squarefree", "derivative vanishes identically (inseparable)");
    Valuation r = resultant(f, fp).valuation();
    if (r.is_infinite()) throw precondition("not-squarefree", "gcd(f, f') is not a unit: f has repeated roots");
    if (r.is_bound())
        throw precision_error("squarefree-uncertified",
                              "Res(f, f') vanishes to known precision " + r.value().get_str());
}

template <class S>
DistanceMultiset pairwise_root_distances(const Polynomial<S>& f) {
    require_squarefree(f);
    DistanceMultiset out;
    out.certified_precision = coefficient_precision(f);
    if (f.degree() < 2) return out;
    auto diff = difference_polynomial(f);
    auto np = newton_polygon(diff);
    if (np.zero_order != 0) throw precondition("not-squarefree", "difference polynomial vanishes at 0");
    out.entries = np.root_valuations();
    if (out.total() != f.degree() * (f.degree() - 1))
        throw precondition("degenerate-resultant", "difference polynomial has the wrong degree");
    return out;
}

enum class Irreducibility { Asserted, Unchecked };

// Single Newton segment whose slope has denominator d: every root generates a
// totally ramified degree-d extension, so f is irreducible over a henselian base.
bool irreducibility_certified(const NewtonPolygon& np, long degree);

template <class S>
void require_irreducible(const Polynomial<S>& f, Irreducibility claim) {
    auto np = newton_polygon(f);
    if (np.zero_order > 0 || np.segments.size() > 1)
        throw precondition("reducible", "Newton polygon has several slopes: factor f first");
    if (claim == Irreducibility::Unchecked && !irreducibility_certified(np, f.degree()))
        throw precondition("irreducibility-uncertified",
                           "irreducibility is neither asserted nor certified by the Newton polygon");
}

template <class S>
bool is_monic(const Polynomial<S>& f) {
    return !f.is_zero() && f.leading() == f.prototype().one();
}

/// v(f'(alpha_1)) = v(Res(f, f')) / d for monic irreducible f over a henselian
/// base, where all conjugates share the value.
template <class S>
Rat derivative_valuation_at_root(const Polynomial<S>& f, Irreducibility claim = Irreducibility::Unchecked) {
    if (!is_monic(f)) throw precondition("not-monic", "f must be monic");
    require_irreducible(f, claim);
    auto fp = f.derivative();
    if (fp.is_zero()) throw precondition("not-squarefree", "derivative vanishes identically (inseparable)");
    Valuation r = resultant(f, fp).valuation();
    if (r.is_infinite()) throw precondition("not-squarefree", "f has repeated roots");
    if (r.is_bound()) throw precision_error("below-truncation", "Res(f, f') is below the known precision");
    return r.value() / Rat(f.degree());
}

}  // namespace valuniform
