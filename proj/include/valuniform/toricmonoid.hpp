#pragma once

// Fine monoids P in Z^n given by generators (additive notation: the identity
// is 0 and N plays the role of the multiplicative pi^N), their Grothendieck
// groups, units, sharp quotients, saturations and isogenies.

#include "valuniform/cone.hpp"
#include "valuniform/linalg.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace valuniform {

// Cached structure, computed once per monoid.
struct MonoidStructure {
    IntMat group_basis;    // Z-basis of P^gp (ambient coordinates)
    IntMat coords;         // generators in group_basis coordinates
    HRep cone;             // P_R in group coordinates (full-dimensional)
    std::vector<bool> unit_generator;  // generator g with -g in P_R
    IntMat units_basis;    // Z-basis of P^x (group coordinates)
    IntMat units_hnf;      // same lattice in Hermite normal form, for coset reduction
    IntVec positive_functional;  // > 0 on non-unit generators, 0 on units
    std::vector<Int> unit_relation;  // sum_i r_i g_i = 0 with r_i >= 1 exactly on unit generators
};

class ToricMonoid {
public:
    ToricMonoid(std::size_t ambient_rank, IntMat generators);

    std::size_t ambient_rank() const { return rank_; }
    const IntMat& generators() const { return gens_; }
    std::size_t group_rank() const { return structure().group_basis.size(); }
    const MonoidStructure& structure() const;

    // Group coordinates of an ambient vector, or nullopt if outside P^gp.
    std::optional<IntVec> group_coords(const IntVec& v) const;
    IntVec ambient_of(const IntVec& group_coords) const;
    bool is_sharp() const { return structure().units_basis.empty(); }

private:
    struct Cache {
        std::once_flag once;
        MonoidStructure data;
    };
    std::size_t rank_;
    IntMat gens_;
    std::shared_ptr<Cache> cache_;
};

struct Membership {
    bool inside = false;
    std::vector<long> coefficients;  // N-combination of the generators when inside
    // Certified search bound: every N-combination equal to v has
    // sum_i c_i * phi(g_i) = phi(v) for the positive functional phi.
    Int bound;
};

// Exact membership v in P by search over N-combinations bounded through the
// positive functional of the dual description.
Membership membership(const ToricMonoid& p, const IntVec& v);

struct SplitResult {
    IntMat units;          // Z-basis of P^x (ambient)
    ToricMonoid sharp;     // image of P in P^gp / P^x, in complement coordinates
    IntMat section;        // row j: ambient image of the j-th complement basis vector
};

// P = P^x (+) section(P_sharp). Throws when P^gp / P^x has torsion (then P
// has no such splitting).
SplitResult units_and_split(const ToricMonoid& p);

enum class SaturationLattice {
    Grothendieck,  // saturate inside P^gp
    Ambient,       // saturate inside Z^n intersected with the Q-span of P
};

struct Saturation {
    ToricMonoid monoid;        // generated by +-units and the sharp Hilbert basis
    IntMat units;              // Z-basis of the units of the saturation (ambient)
    IntMat hilbert_basis;      // minimal generators of the sharp part, lifted (ambient)
    bool input_was_saturated;  // P already equals its saturation
};

Saturation saturate(const ToricMonoid& p, SaturationLattice lattice = SaturationLattice::Grothendieck);
bool is_saturated(const ToricMonoid& p);

// Hilbert basis of the lattice points of a pointed full-dimensional cone in Z^d.
IntMat pointed_hilbert_basis(const IntMat& generators, std::size_t d);

// Hilbert basis of (cone generated by `generators`) intersected with the
// lattice spanned by `lattice_basis` (which must contain the generators and
// have full rank in their span). Returns units basis and sharp Hilbert basis.
std::pair<IntMat, IntMat> saturated_generators(const IntMat& generators, const IntMat& lattice_basis,
                                               std::size_t ambient);

struct FreenessReport {
    bool applied_to_sharp_part = false;
    std::size_t extreme_ray_count = 0;
    std::size_t rank = 0;
    bool simplex_shape = false;
    bool free = false;
    IntMat edge_generators;  // primitive (in P^gp) generators of the extreme rays, ambient
    Int edge_index;          // [P^gp : span of edge generators], 0 when not simplex
};

FreenessReport freeness(const ToricMonoid& p);

struct IsogenyWitness {
    Int rank;                      // [Q^gp : P^gp]
    std::vector<Int> invariants;   // Smith invariants of P^gp inside Q^gp
    bool unit_iso_check = false;
    bool saturation_check = false;
    bool valid() const { return unit_iso_check && saturation_check && rank > 0; }
};

// `map` row i is the image of the i-th ambient basis vector of P in Q's
// ambient lattice; empty means the identity.
IsogenyWitness isogeny_rank(const ToricMonoid& p, const ToricMonoid& q, const IntMat& map = {});

struct ChartMonoid {
    ToricMonoid monoid;           // Z^num_units (+) Mbar
    IntMat center_ideal;          // generators of M \ M^x (lifted minimal generators of Mbar)
};

ChartMonoid chart_monoid(std::size_t num_units, const ToricMonoid& mbar);

// Generators of P that are not N-combinations of the other generators.
IntMat minimal_generators(const ToricMonoid& p);

}  // namespace valuniform
