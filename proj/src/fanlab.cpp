#include "valuniform/fanlab.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

namespace valuniform {

Fan make_fan_unchecked(std::size_t ambient, const IntMat& rays, const std::set<RaySet>& cones);

namespace {

bool subset_of(const RaySet& a, const RaySet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

IntMat identity(std::size_t n) {
    IntMat m(n, IntVec(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMat pick(const IntMat& rays, const RaySet& c) {
    IntMat out;
    for (auto i : c) out.push_back(rays[i]);
    return out;
}

std::string vec_string(const IntVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

}  // namespace

std::set<RaySet> face_sets(const IntMat& rays, const RaySet& cone, std::size_t ambient) {
    std::set<RaySet> out;
    std::function<void(const RaySet&)> rec = [&](const RaySet& c) {
        if (!out.insert(c).second || c.empty()) return;
        HRep h = facets_of(pick(rays, c), ambient);
        for (const auto& u : h.inequalities) {
            RaySet f;
            for (auto i : c)
                if (dot(u, rays[i]) == 0) f.push_back(i);
            rec(f);
        }
    };
    rec(cone);
    return out;
}

Fan make_fan_unchecked(std::size_t ambient, const IntMat& rays, const std::set<RaySet>& cones) {
    // Canonical form: rays sorted lexicographically.
    std::vector<std::size_t> order(rays.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(rays[a], rays[b]); });
    std::vector<std::size_t> remap(rays.size());
    Fan f;
    f.n_ = ambient;
    for (std::size_t k = 0; k < order.size(); ++k) {
        remap[order[k]] = k;
        f.rays_.push_back(rays[order[k]]);
    }
    std::vector<std::pair<std::size_t, RaySet>> keyed;
    for (const auto& c : cones) {
        RaySet m;
        for (auto i : c) m.push_back(remap[i]);
        std::sort(m.begin(), m.end());
        keyed.emplace_back(rank(pick(f.rays_, m)), std::move(m));
    }
    std::sort(keyed.begin(), keyed.end());
    for (auto& [d, c] : keyed) f.cones_.push_back(std::move(c));
    f.compute_complete();
    return f;
}

Fan::Fan(std::size_t ambient, const std::vector<IntMat>& cones) : n_(ambient) {
    std::set<IntVec> ray_set;
    std::vector<IntMat> extremes;
    for (const auto& gens : cones) {
        for (const auto& g : gens)
            if (g.size() != ambient) throw precondition("dimension-mismatch", "cone generator has wrong length");
        HRep h = facets_of(gens, ambient);
        for (const auto& g : gens)
            if (!is_zero(g) && h.contains(negate(g)))
                throw precondition("not-pointed", "fan cones must be pointed");
        IntMat ext = extreme_rays(gens, ambient);
        ray_set.insert(ext.begin(), ext.end());
        extremes.push_back(std::move(ext));
    }
    IntMat rays(ray_set.begin(), ray_set.end());
    std::map<IntVec, std::size_t> index;
    for (std::size_t i = 0; i < rays.size(); ++i) index[rays[i]] = i;
    std::set<RaySet> all;
    all.insert(RaySet{});
    for (const auto& ext : extremes) {
        RaySet c;
        for (const auto& r : ext) c.push_back(index[r]);
        std::sort(c.begin(), c.end());
        auto faces = face_sets(rays, c, ambient);
        all.insert(faces.begin(), faces.end());
    }
    *this = make_fan_unchecked(ambient, rays, all);
    validate();
}

std::vector<RaySet> Fan::maximal_cones() const {
    std::vector<RaySet> out;
    for (std::size_t i = 0; i < cones_.size(); ++i) {
        bool maximal = true;
        for (std::size_t j = 0; j < cones_.size() && maximal; ++j)
            if (j != i && cones_[j].size() > cones_[i].size() && subset_of(cones_[i], cones_[j])) maximal = false;
        if (maximal) out.push_back(cones_[i]);
    }
    return out;
}

IntMat Fan::cone_rays(const RaySet& c) const { return pick(rays_, c); }

std::size_t Fan::dimension(const RaySet& c) const { return rank(cone_rays(c)); }

std::optional<RaySet> Fan::find(const IntMat& generators) const {
    IntMat ext = extreme_rays(generators, n_);
    RaySet c;
    for (const auto& r : ext) {
        auto it = std::find(rays_.begin(), rays_.end(), r);
        if (it == rays_.end()) return std::nullopt;
        c.push_back(static_cast<std::size_t>(it - rays_.begin()));
    }
    std::sort(c.begin(), c.end());
    if (std::find(cones_.begin(), cones_.end(), c) == cones_.end()) return std::nullopt;
    return c;
}

void Fan::validate() const {
    auto maxes = maximal_cones();
    std::vector<HRep> hreps;
    std::vector<std::set<RaySet>> faces;
    for (const auto& c : maxes) {
        hreps.push_back(facets_of(cone_rays(c), n_));
        faces.push_back(face_sets(rays_, c, n_));
    }
    for (std::size_t i = 0; i < maxes.size(); ++i)
        for (std::size_t j = i + 1; j < maxes.size(); ++j) {
            HRep both;
            both.ambient = n_;
            for (const HRep* h : {&hreps[i], &hreps[j]}) {
                both.inequalities.insert(both.inequalities.end(), h->inequalities.begin(), h->inequalities.end());
                both.equations.insert(both.equations.end(), h->equations.begin(), h->equations.end());
            }
            RaySet meet;
            for (const auto& r : rays_of(both)) {
                auto it = std::find(rays_.begin(), rays_.end(), r);
                if (it == rays_.end())
                    throw precondition("invalid-fan", "cones meet along the new ray " + vec_string(r));
                meet.push_back(static_cast<std::size_t>(it - rays_.begin()));
            }
            std::sort(meet.begin(), meet.end());
            if (!faces[i].count(meet) || !faces[j].count(meet))
                throw precondition("invalid-fan", "two cones intersect in a set that is not a common face");
        }
}

void Fan::compute_complete() {
    complete_ = false;
    auto maxes = maximal_cones();
    for (const auto& c : maxes)
        if (dimension(c) != n_) return;
    if (n_ == 0) {
        complete_ = true;
        return;
    }
    std::map<RaySet, int> walls;
    for (const auto& c : maxes) {
        HRep h = facets_of(cone_rays(c), n_);
        for (const auto& u : h.inequalities) {
            RaySet w;
            for (auto i : c)
                if (dot(u, rays_[i]) == 0) w.push_back(i);
            ++walls[w];
        }
    }
    complete_ = !maxes.empty();
    for (const auto& [w, k] : walls)
        if (k != 2) complete_ = false;
}

RegularityReport is_regular(const Fan& f) {
    RegularityReport r;
    for (const auto& c : f.cones()) {
        IntMat rays = f.cone_rays(c);
        if (rank(rays) != rays.size()) {
            r.regular = false;
            r.offending = c;
            r.reason = "non-simplicial";
            return r;
        }
        Int m = multiplicity(rays);
        if (m != 1) {
            r.regular = false;
            r.offending = c;
            r.reason = "multiplicity " + m.get_str();
            return r;
        }
    }
    return r;
}

namespace {

Fan stellar_unchecked(const Fan& f, const RaySet& sigma, const IntVec& v) {
    if (std::find(f.cones().begin(), f.cones().end(), sigma) == f.cones().end())
        throw precondition("not-a-cone", "sigma is not a cone of the fan");
    if (v.size() != f.ambient()) throw precondition("dimension-mismatch", "ray length differs from the ambient rank");
    const IntVec p = primitive(v);
    HRep h = facets_of(f.cone_rays(sigma), f.ambient());
    if (is_zero(v) || !h.in_relative_interior(p))
        throw precondition("not-interior", "subdivision ray " + vec_string(v) + " is not in the relative interior of sigma");
    if (sigma.size() == 1) return f;
    IntMat rays = f.rays();
    const std::size_t vi = rays.size();
    rays.push_back(p);
    std::set<RaySet> out;
    for (const auto& c : f.cones()) {
        if (!subset_of(sigma, c)) {
            out.insert(c);
            continue;
        }
        for (const auto& face : f.cones()) {
            if (!subset_of(face, c) || subset_of(sigma, face)) continue;
            RaySet joined = face;
            joined.push_back(vi);
            out.insert(joined);
        }
    }
    return make_fan_unchecked(f.ambient(), rays, out);
}

}  // namespace

Fan stellar_subdivide(const Fan& f, const RaySet& sigma, const IntVec& v) {
    Fan out = stellar_unchecked(f, sigma, v);
    out.validate();
    return out;
}

Refinement regular_refine(const Fan& f) {
    Refinement result{f, {}};
    Fan& cur = result.fan;
    const std::size_t n = f.ambient();
    const std::size_t cap = iteration_cap();
    while (true) {
        if (result.steps.size() >= cap)
            throw RefinementCapError("regular_refine exceeded " + std::to_string(cap) + " subdivisions", cur);
        // Simplicial first: lowest-dimensional non-simplicial cone at its ray sum.
        std::optional<RaySet> nonsimplicial;
        for (const auto& c : cur.cones())
            if (rank(cur.cone_rays(c)) != c.size()) {
                nonsimplicial = c;
                break;
            }
        if (nonsimplicial) {
            IntVec sum(n, Int(0));
            for (const auto& r : cur.cone_rays(*nonsimplicial)) sum = add(sum, r);
            sum = primitive(sum);
            result.steps.push_back({*nonsimplicial, sum});
            cur = stellar_unchecked(cur, *nonsimplicial, sum);
            continue;
        }
        std::optional<RaySet> worst;
        Int worst_mult = 1;
        for (const auto& c : cur.cones()) {
            Int m = multiplicity(cur.cone_rays(c));
            if (m > worst_mult) {
                worst_mult = m;
                worst = c;
            }
        }
        if (!worst) break;
        const IntMat rays = cur.cone_rays(*worst);
        auto hilbert = saturated_generators(rays, saturated_basis(rays, n), n).second;
        std::optional<IntVec> best;
        RaySet best_face;
        Int best_score;
        for (const auto& h : hilbert) {
            if (std::find(rays.begin(), rays.end(), h) != rays.end()) continue;
            RatVec lambda = *express(rays, h);
            RaySet face;
            Int score = 0;
            for (std::size_t k = 0; k < rays.size(); ++k) {
                if (lambda[k] <= 0) continue;
                face.push_back((*worst)[k]);
                IntMat sub = rays;
                sub[k] = h;
                Int m = multiplicity(sub);
                if (m > score) score = m;
            }
            if (!best || score < best_score || (score == best_score && lex_less(h, *best))) {
                best = h;
                best_face = face;
                best_score = score;
            }
        }
        if (!best) throw Error(ErrorKind::IterationCap, "no-hilbert-point", "nonregular cone without interior Hilbert point");
        result.steps.push_back({best_face, *best});
        cur = stellar_unchecked(cur, best_face, *best);
    }
    cur.validate();
    return result;
}

bool refines(const Fan& fine, const Fan& coarse) {
    std::vector<HRep> hs;
    for (const auto& c : coarse.maximal_cones()) hs.push_back(facets_of(coarse.cone_rays(c), coarse.ambient()));
    for (const auto& c : fine.maximal_cones()) {
        IntMat rays = fine.cone_rays(c);
        bool inside = false;
        for (const auto& h : hs) {
            bool all = true;
            for (const auto& r : rays) all = all && h.contains(r);
            if (all) {
                inside = true;
                break;
            }
        }
        if (!inside) return false;
    }
    return true;
}

bool covers_support(const Fan& fine, const Fan& coarse, std::size_t samples_per_cone) {
    const std::size_t n = coarse.ambient();
    std::vector<HRep> fine_h;
    for (const auto& c : fine.maximal_cones()) fine_h.push_back(facets_of(fine.cone_rays(c), n));
    std::mt19937_64 rng(0x5eed);
    for (const auto& sigma : coarse.maximal_cones()) {
        IntMat srays = coarse.cone_rays(sigma);
        HRep hs = facets_of(srays, n);
        const std::size_t d = rank(srays);
        std::vector<RaySet> pieces;
        for (const auto& c : fine.cones()) {
            if (fine.dimension(c) != d) continue;
            bool inside = true;
            for (const auto& r : fine.cone_rays(c)) inside = inside && hs.contains(r);
            if (inside) pieces.push_back(c);
        }
        if (pieces.empty()) return false;
        // Walls of the pieces: interior walls shared by exactly two pieces.
        std::map<RaySet, int> walls;
        for (const auto& c : pieces) {
            HRep h = facets_of(fine.cone_rays(c), n);
            for (const auto& u : h.inequalities) {
                RaySet w;
                for (auto i : c)
                    if (dot(u, fine.rays()[i]) == 0) w.push_back(i);
                ++walls[w];
            }
        }
        for (const auto& [w, k] : walls) {
            bool on_boundary = false;
            for (const auto& u : hs.inequalities) {
                bool all = true;
                for (auto i : w) all = all && dot(u, fine.rays()[i]) == 0;
                if (all) {
                    on_boundary = true;
                    break;
                }
            }
            if (on_boundary ? k != 1 : k != 2) return false;
        }
        std::uniform_int_distribution<int> coef(1, 7);
        for (std::size_t s = 0; s < samples_per_cone; ++s) {
            IntVec pt(n, Int(0));
            for (const auto& r : srays) pt = add(pt, scale(Int(coef(rng)), r));
            bool found = false;
            for (const auto& h : fine_h)
                if (h.contains(pt)) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
    }
    return true;
}

ToricMonoid stalk(const Fan& f, const RaySet& sigma) {
    const std::size_t n = f.ambient();
    if (std::find(f.cones().begin(), f.cones().end(), sigma) == f.cones().end())
        throw precondition("not-a-cone", "sigma is not a cone of the fan");
    HRep h = facets_of(f.cone_rays(sigma), n);
    IntMat dual = h.inequalities;
    for (const auto& e : h.equations) {
        dual.push_back(e);
        dual.push_back(negate(e));
    }
    IntMat gens;
    if (n > 0) {
        auto [units, hilbert] = saturated_generators(dual, identity(n), n);
        gens = hilbert;
        for (const auto& u : units) {
            gens.push_back(u);
            gens.push_back(negate(u));
        }
    }
    return ToricMonoid(n, gens);
}

Center center_of_valuation(const WeightMatrix& w, const Fan& f) {
    if (w.ambient() != f.ambient()) throw precondition("dimension-mismatch", "weight matrix and fan differ in rank");
    if (!f.complete()) throw precondition("not-complete", "center_of_valuation needs a complete fan");
    std::vector<RaySet> hits;
    for (const auto& c : f.cones()) {
        HRep h = facets_of(f.cone_rays(c), f.ambient());
        bool inside = true;
        for (const auto& e : h.equations)
            if (lex_sign(w.value(e)) != Sign::Zero) {
                inside = false;
                break;
            }
        for (std::size_t i = 0; inside && i < h.inequalities.size(); ++i)
            if (lex_sign(w.value(h.inequalities[i])) != Sign::Positive) inside = false;
        if (inside) hits.push_back(c);
    }
    if (hits.size() != 1)
        throw precondition(hits.empty() ? "no-center" : "tie",
                           hits.empty() ? "W lies on no cone interior (degenerate with respect to the walls)"
                                        : "W lies in the relative interior of several cones");
    ToricMonoid s = stalk(f, hits[0]);
    const auto& st = s.structure();
    for (std::size_t i = 0; i < s.generators().size(); ++i)
        if (!st.unit_generator[i] && lex_sign(w.value(s.generators()[i])) != Sign::Positive)
            throw Error(ErrorKind::Precision, "center-check-failed", "stalk generator of the center is not W-positive");
    return Center{hits[0], s};
}

}  // namespace valuniform
