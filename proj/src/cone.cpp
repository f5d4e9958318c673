#include "valuniform/cone.hpp"

#include "valuniform/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace valuniform {

bool HRep::contains(const IntVec& x) const {
    for (const auto& u : inequalities)
        if (dot(u, x) < 0) return false;
    for (const auto& w : equations)
        if (dot(w, x) != 0) return false;
    return true;
}

bool HRep::contains(const RatVec& x) const {
    for (const auto& u : inequalities)
        if (dot(to_rat(u), x) < 0) return false;
    for (const auto& w : equations)
        if (dot(to_rat(w), x) != 0) return false;
    return true;
}

bool HRep::in_relative_interior(const IntVec& x) const {
    for (const auto& u : inequalities)
        if (dot(u, x) <= 0) return false;
    for (const auto& w : equations)
        if (dot(w, x) != 0) return false;
    return true;
}

namespace {

// Calls fn on every k-subset of {0..n-1}.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            fn(idx);
            return;
        }
        for (std::size_t i = start; i + (k - pos) <= n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

}  // namespace

HRep facets_of(const IntMat& generators, std::size_t ambient) {
    HRep h;
    h.ambient = ambient;
    IntMat gens;
    for (const auto& g : generators) {
        if (g.size() != ambient) throw precondition("dimension-mismatch", "generator length differs from the ambient rank");
        if (!is_zero(g)) gens.push_back(primitive(g));
    }
    h.equations = integer_kernel(gens, ambient);
    const std::size_t k = rank(gens);
    if (k == 0) return h;
    std::set<IntVec> found;
    for_each_subset(gens.size(), k - 1, [&](const std::vector<std::size_t>& subset) {
        IntMat m;
        for (auto i : subset) m.push_back(gens[i]);
        if (rank(m) != k - 1) return;
        for (const auto& w : h.equations) m.push_back(w);
        IntMat ker = integer_kernel(m, ambient);
        if (ker.size() != 1) return;
        IntVec u = primitive(ker[0]);
        bool pos = false, neg = false;
        for (const auto& g : gens) {
            Int s = dot(u, g);
            if (s > 0) pos = true;
            if (s < 0) neg = true;
        }
        if (pos && neg) return;
        if (neg) u = negate(u);
        if (!pos && !neg) return;
        found.insert(u);
    });
    h.inequalities.assign(found.begin(), found.end());
    return h;
}

IntMat rays_of(const HRep& h) {
    const std::size_t n = h.ambient;
    IntMat all = h.inequalities;
    for (const auto& w : h.equations) all.push_back(w);
    if (!integer_kernel(all, n).empty()) throw precondition("not-pointed", "cone contains a line");
    const std::size_t eq_rank = rank(h.equations);
    std::set<IntVec> found;
    if (eq_rank + 1 > n) return {};
    for (std::size_t s = 0; s <= n - 1 && s <= h.inequalities.size(); ++s) {
        for_each_subset(h.inequalities.size(), s, [&](const std::vector<std::size_t>& subset) {
            IntMat m = h.equations;
            for (auto i : subset) m.push_back(h.inequalities[i]);
            if (rank(m) != n - 1) return;
            IntMat ker = integer_kernel(m, n);
            if (ker.size() != 1) return;
            IntVec r = primitive(ker[0]);
            if (h.contains(r))
                found.insert(r);
            else if (h.contains(negate(r)))
                found.insert(negate(r));
        });
    }
    return IntMat(found.begin(), found.end());
}

IntMat extreme_rays(const IntMat& generators, std::size_t ambient) {
    HRep h = facets_of(generators, ambient);
    std::set<IntVec> dirs;
    for (const auto& g : generators)
        if (!is_zero(g)) dirs.insert(primitive(g));
    IntMat gens(dirs.begin(), dirs.end());
    const std::size_t k = rank(gens);
    IntMat out;
    for (const auto& g : gens) {
        IntMat tight;
        for (const auto& u : h.inequalities)
            if (dot(u, g) == 0) tight.push_back(u);
        for (const auto& w : h.equations) tight.push_back(w);
        // g spans a ray iff the tight constraints cut out a line.
        if (ambient - rank(tight) == 1 && k >= 1) out.push_back(g);
    }
    return out;
}

std::vector<std::vector<std::size_t>> triangulate(const IntMat& rays, std::size_t ambient) {
    HRep h = facets_of(rays, ambient);
    std::vector<std::vector<std::size_t>> facet_sets;
    for (const auto& u : h.inequalities) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (dot(u, rays[i]) == 0) s.push_back(i);
        facet_sets.push_back(std::move(s));
    }
    auto rank_of = [&](const std::vector<std::size_t>& idx) {
        IntMat m;
        for (auto i : idx) m.push_back(rays[i]);
        return rank(m);
    };
    std::function<std::vector<std::vector<std::size_t>>(const std::vector<std::size_t>&, std::size_t)> rec =
        [&](const std::vector<std::size_t>& face, std::size_t k) -> std::vector<std::vector<std::size_t>> {
        if (face.size() == k) return {face};
        const std::size_t apex = face.front();
        std::set<std::vector<std::size_t>> seen;
        std::vector<std::vector<std::size_t>> out;
        for (const auto& g : facet_sets) {
            std::vector<std::size_t> sub;
            std::set_intersection(face.begin(), face.end(), g.begin(), g.end(), std::back_inserter(sub));
            if (std::find(sub.begin(), sub.end(), apex) != sub.end()) continue;
            if (sub.empty() && k != 1) continue;
            if (rank_of(sub) != k - 1 || !seen.insert(sub).second) continue;
            for (auto simplex : rec(sub, k - 1)) {
                simplex.push_back(apex);
                std::sort(simplex.begin(), simplex.end());
                out.push_back(std::move(simplex));
            }
        }
        return out;
    };
    std::vector<std::size_t> all(rays.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (rays.empty()) return {};
    return rec(all, rank(rays));
}

IntMat parallelepiped_points(const IntMat& simplex_rays) {
    const std::size_t d = simplex_rays.size();
    IntMat hnf = lattice_basis(simplex_rays, d);
    if (hnf.size() != d) throw precondition("degenerate-simplex", "simplex rays are linearly dependent");
    auto inv = inverse(to_rat(simplex_rays));
    IntVec box(d);
    for (std::size_t i = 0; i < d; ++i) box[i] = hnf[i][i];
    IntMat out;
    IntVec x(d, Int(0));
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == d) {
            RatVec lambda(d, Rat(0));
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k) lambda[k] += Rat(x[j]) * (*inv)[j][k];
            RatVec pt(d, Rat(0));
            for (std::size_t k = 0; k < d; ++k) {
                Rat f = frac_rat(lambda[k]);
                for (std::size_t j = 0; j < d; ++j) pt[j] += f * Rat(simplex_rays[k][j]);
            }
            IntVec ip(d);
            for (std::size_t j = 0; j < d; ++j) ip[j] = pt[j].get_num();
            out.push_back(std::move(ip));
            return;
        }
        for (Int v = 0; v < box[i]; ++v) {
            x[i] = v;
            rec(i + 1);
        }
        x[i] = 0;
    };
    rec(0);
    return out;
}

}  // namespace valuniform
