#include "valuniform/krasner.hpp"

namespace valuniform {

std::string to_string(EmbedVerdict v) { return v == EmbedVerdict::Embeds ? "embeds" : "inconclusive"; }

std::string to_string(DiscVerdict v) {
    switch (v) {
        case DiscVerdict::KDisc: return "k-disc";
        case DiscVerdict::LSplit: return "l-split";
        case DiscVerdict::BoundaryAlmostSplit: return "boundary-almost-split";
    }
    return {};
}

DiscClassification classify_radius(const Rat& rho, const Rat& r_f, const Rat& max_dist, long degree) {
    DiscClassification c{rho, DiscVerdict::BoundaryAlmostSplit, 1, r_f, max_dist};
    if (rho > r_f) {
        c.verdict = DiscVerdict::LSplit;
        c.splitting_field_degree = degree;
    } else if (rho < max_dist) {
        c.verdict = DiscVerdict::KDisc;
    }
    return c;
}

std::vector<Rat> critical_radii(const DistanceMultiset& distances) {
    std::vector<Rat> out;
    for (const auto& [v, m] : distances.entries) out.push_back(v);
    return out;
}

Rat root_distance_valuation(const SeriesPoly& f, const TruncatedPuiseux& c) {
    auto np = newton_polygon(f.shift(c));
    if (np.zero_order > 0) throw precondition("root-in-base", "the candidate is a root of f");
    auto roots = np.root_valuations();
    if (roots.size() != 1)
        throw precondition("reducible", "roots of f are not equidistant from the candidate: f splits over the probe field");
    return roots.begin()->first;
}

ProbeResult distance_to_field_probe(const SeriesPoly& f, unsigned max_m, unsigned depth) {
    if (f.degree() < 2) throw precondition("degree", "probe needs degree >= 2");
    const auto& proto = f.prototype();
    const unsigned long p = proto.prime();
    ProbeResult out;
    out.max_dist = pairwise_root_distances(f).min_valuation();
    Int cap = proto.ramification_cap();
    for (unsigned m = 0; m <= max_m; ++m) {
        std::vector<TruncatedPuiseux> lifted;
        for (const auto& a : f.coeffs()) lifted.push_back(a.with_cap(cap));
        SeriesPoly g(std::move(lifted), proto.with_cap(cap));
        TruncatedPuiseux c = g.prototype().zero();
        Rat best = root_distance_valuation(g, c);
        ProbeLevel level{m, best, {best}, c};
        for (unsigned step = 0; step < depth; ++step) {
            // Only a term of exponent exactly nu can cancel the leading part of alpha - c.
            if (cap % Int(best.get_den()) != 0) break;
            std::optional<Rat> step_best;
            TruncatedPuiseux step_c = c;
            for (unsigned long a = 1; a < p; ++a) {
                TruncatedPuiseux cand = c + TruncatedPuiseux::monomial(p, cap, static_cast<long>(a), best);
                Rat v = root_distance_valuation(g, cand);
                if (!step_best || v > *step_best) {
                    step_best = v;
                    step_c = cand;
                }
            }
            if (!step_best || *step_best <= best) break;
            best = *step_best;
            c = step_c;
            level.trajectory.push_back(best);
        }
        level.best_valuation = best;
        level.best_candidate = c;
        out.levels.push_back(std::move(level));
        cap *= Int(p);
    }
    return out;
}

}  // namespace valuniform
