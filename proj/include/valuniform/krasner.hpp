#pragma once

// Disc analysis around a root of a monic irreducible polynomial: Krasner
// radii, the embedding test, split-disc classification, critical radii, and
// the approximation probe over p^m-ramified extensions of F_p((t)).
//
// All radii are additive valuations: a radius r = |base|^rho is stored as rho,
// so larger values mean smaller discs.

#include "valuniform/newton.hpp"

#include <string>
#include <vector>

namespace valuniform {

template <class S>
struct KrasnerData {
    Polynomial<S> f;
    Rat r_f;       // v of the smallest conjugate distance (max distance valuation)
    Rat max_dist;  // v of the largest conjugate distance (min distance valuation)
    Rat derivative_valuation;  // v(f'(alpha_1))
    Rat R_f;       // r_f + v(f'(alpha_1))
    DistanceMultiset distances;
};

template <class S>
KrasnerData<S> krasner_data(const Polynomial<S>& f, Irreducibility claim = Irreducibility::Unchecked) {
    if (f.degree() < 2) throw precondition("degree", "Krasner data needs degree >= 2");
    Rat dv = derivative_valuation_at_root(f, claim);
    DistanceMultiset dist = pairwise_root_distances(f);
    KrasnerData<S> k{f, dist.max_valuation(), dist.min_valuation(), dv, dist.max_valuation() + dv, dist};
    if (k.R_f != k.r_f + k.derivative_valuation || k.r_f < k.max_dist)
        throw precondition("internal", "Krasner data identity violated");
    return k;
}

enum class EmbedVerdict { Embeds, Inconclusive };
std::string to_string(EmbedVerdict v);

struct EmbedResult {
    EmbedVerdict verdict;
    Valuation value;  // v(f(x))
    Rat threshold;    // R_f
};

/// "Embeds" iff v(f(x)) > R_f: then k(alpha_1) embeds into the completion of k(x).
template <class S>
EmbedResult krasner_embed_test(const KrasnerData<S>& data, const S& x) {
    Valuation v = data.f.evaluate(x).valuation();
    bool embeds = v.is_infinite() || v.value() > data.R_f;
    return {embeds ? EmbedVerdict::Embeds : EmbedVerdict::Inconclusive, v, data.R_f};
}

enum class DiscVerdict { KDisc, LSplit, BoundaryAlmostSplit };
std::string to_string(DiscVerdict v);

struct DiscClassification {
    Rat radius;
    DiscVerdict verdict;
    long splitting_field_degree;  // d for l-split, 1 otherwise
    Rat split_threshold;          // r_f: l-split strictly above
    Rat k_threshold;              // max_dist: k-disc strictly below
};

// rho > r_f: l-split. rho < max_dist: k-disc, split over k. The closed strip
// [max_dist, r_f] (endpoints included) is reported as boundary territory.
DiscClassification classify_radius(const Rat& rho, const Rat& r_f, const Rat& max_dist, long degree);

template <class S>
DiscClassification disc_classify(const KrasnerData<S>& data, const Rat& rho) {
    return classify_radius(rho, data.r_f, data.max_dist, data.f.degree());
}

/// Distinct conjugate-distance valuations, ascending.
std::vector<Rat> critical_radii(const DistanceMultiset& distances);

struct ProbeLevel {
    unsigned m = 0;                    // base F_p((t^(1/p^m)))
    Rat best_valuation;                // best v(alpha - c) found
    std::vector<Rat> trajectory;       // value after each accepted step
    TruncatedPuiseux best_candidate;   // the c achieving it
};

struct ProbeResult {
    std::vector<ProbeLevel> levels;
    Rat max_dist;  // valuation of the largest conjugate distance over the base
};

/// For m = 0..max_m, extend the base to F_p((t^(1/p^m))) and build c term by
/// term: at each of at most `depth` steps, try every c + a t^nu with a in
/// F_p^x and nu = v(alpha - c), keeping the best. v(alpha - c) is read off the
/// single-slope Newton polygon of f(x + c).
ProbeResult distance_to_field_probe(const SeriesPoly& f, unsigned max_m, unsigned depth);

// v(alpha - c) for every root alpha of f, or an error when they differ.
Rat root_distance_valuation(const SeriesPoly& f, const TruncatedPuiseux& c);

}  // namespace valuniform
