#pragma once

// Rational polyhedral cones by brute-force double description. Cones are
// small (rank <= 5, a few dozen generators), so facets are found by testing
// every candidate hyperplane spanned by generators.

#include "valuniform/linalg.hpp"

#include <vector>

namespace valuniform {

// {x : u . x >= 0 for u in inequalities, w . x = 0 for w in equations}
struct HRep {
    IntMat inequalities;
    IntMat equations;
    std::size_t ambient = 0;

    bool contains(const IntVec& x) const;
    bool contains(const RatVec& x) const;
    // Strictly inside every inequality (and on every equation).
    bool in_relative_interior(const IntVec& x) const;
};

// Facet normals (primitive, chosen inside the linear span) and the
// orthogonal complement of the span. Handles cones with lineality.
HRep facets_of(const IntMat& generators, std::size_t ambient);

// Extreme rays (primitive) of a pointed cone given by inequalities; throws
// if the cone contains a line.
IntMat rays_of(const HRep& h);

// Primitive directions of the generators that span extreme rays of the
// (pointed) cone they generate, deduplicated and sorted.
IntMat extreme_rays(const IntMat& generators, std::size_t ambient);

// Pulling triangulation of a pointed cone given by its extreme rays: each
// simplex is a list of indices into `rays` of size rank.
std::vector<std::vector<std::size_t>> triangulate(const IntMat& rays, std::size_t ambient);

// Lattice points of the half-open parallelepiped sum [0,1) v_i for linearly
// independent v_i spanning Z^d (full rank square matrix); includes 0.
IntMat parallelepiped_points(const IntMat& simplex_rays);

}  // namespace valuniform
