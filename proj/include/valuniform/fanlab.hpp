#pragma once

// Rational polyhedral fans in N_R = R^n: validity, regularity, stellar
// subdivision, regular refinement, stalks sigma^v cap Z^n, and centers of
// lex valuations.

#include "valuniform/cone.hpp"
#include "valuniform/errors.hpp"
#include "valuniform/linalg.hpp"
#include "valuniform/toricmonoid.hpp"
#include "valuniform/uniformizer.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace valuniform {

using RaySet = std::vector<std::size_t>;  // sorted indices into Fan::rays()

class Fan {
public:
    // Cones are given by generators (typically the maximal cones); faces are
    // added and the intersection condition is verified. Throws on invalid input.
    Fan(std::size_t ambient, const std::vector<IntMat>& cones);

    std::size_t ambient() const { return n_; }
    const IntMat& rays() const { return rays_; }
    // All cones, including {0}, sorted by (dimension, index set).
    const std::vector<RaySet>& cones() const { return cones_; }
    std::vector<RaySet> maximal_cones() const;
    IntMat cone_rays(const RaySet& c) const;
    std::size_t dimension(const RaySet& c) const;
    bool complete() const { return complete_; }
    std::optional<RaySet> find(const IntMat& generators) const;
    // Re-checks that pairwise intersections of maximal cones are common faces.
    void validate() const;

private:
    friend Fan make_fan_unchecked(std::size_t, const IntMat&, const std::set<RaySet>&);
    Fan() = default;
    void compute_complete();

    std::size_t n_ = 0;
    IntMat rays_;
    std::vector<RaySet> cones_;
    bool complete_ = false;
};

// All faces of the cone spanned by the given rays (as index sets into rays),
// including the empty set and the full set.
std::set<RaySet> face_sets(const IntMat& rays, const RaySet& cone, std::size_t ambient);

struct RegularityReport {
    bool regular = true;
    std::optional<RaySet> offending;
    std::string reason;  // "non-simplicial" or "multiplicity N"
};

RegularityReport is_regular(const Fan& f);

// Stellar subdivision of every cone containing sigma at the ray through v.
// v must lie in the relative interior of sigma.
Fan stellar_subdivide(const Fan& f, const RaySet& sigma, const IntVec& v);

class RefinementCapError : public Error {
public:
    RefinementCapError(const std::string& message, Fan partial)
        : Error(ErrorKind::IterationCap, "iteration-cap", message), partial_(std::move(partial)) {}
    const Fan& partial() const { return partial_; }

private:
    Fan partial_;
};

struct RefinementStep {
    RaySet cone;
    IntVec ray;
};

struct Refinement {
    Fan fan;
    std::vector<RefinementStep> steps;
};

Refinement regular_refine(const Fan& f);

// Every cone of `fine` lies in a cone of `coarse`.
bool refines(const Fan& fine, const Fan& coarse);
// Support of `fine` covers each maximal cone of `coarse` (pseudo-manifold
// wall test plus sample points); together with refines() this gives equal support.
bool covers_support(const Fan& fine, const Fan& coarse, std::size_t samples_per_cone = 16);

// sigma^v cap Z^n; units sigma^perp cap Z^n.
ToricMonoid stalk(const Fan& f, const RaySet& sigma);

struct Center {
    RaySet cone;
    ToricMonoid stalk;
};

// The cone of a complete fan whose relative interior contains the lex point W.
Center center_of_valuation(const WeightMatrix& w, const Fan& f);

}  // namespace valuniform
