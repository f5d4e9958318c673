#include "valuniform/toricmonoid.hpp"

#include "valuniform/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace valuniform {

namespace {

IntVec row_times(const IntVec& x, const IntMat& m, std::size_t cols) {
    IntVec out(cols, Int(0));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            for (std::size_t j = 0; j < cols; ++j) out[j] += x[i] * m[i][j];
    return out;
}

IntVec combine(const IntVec& coeffs, const IntMat& rows, std::size_t cols) {
    return row_times(coeffs, rows, cols);
}

// Canonical representative of x + L for L given in echelon (Hermite) form.
IntVec reduce_mod(IntVec x, const IntMat& hnf) {
    for (const auto& row : hnf) {
        std::size_t c = 0;
        while (c < row.size() && row[c] == 0) ++c;
        if (c == row.size()) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), x[c].get_mpz_t(), row[c].get_mpz_t());
        if (q != 0)
            for (std::size_t j = 0; j < x.size(); ++j) x[j] -= q * row[j];
    }
    return x;
}

IntMat identity(std::size_t n) {
    IntMat m(n, IntVec(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

// Nonnegative rational x with sum_j x_j rows[j] = target, via Caratheodory
// over linearly independent subsets.
std::optional<RatVec> nonneg_express(const IntMat& rows, const IntVec& target) {
    const std::size_t n = rows.size();
    std::optional<RatVec> found;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (found) return;
        if (!pick.empty()) {
            IntMat sub;
            for (auto j : pick) sub.push_back(rows[j]);
            if (rank(sub) < sub.size()) return;
            if (auto x = express(sub, target)) {
                if (std::all_of(x->begin(), x->end(), [](const Rat& q) { return q >= 0; })) {
                    RatVec full(n, Rat(0));
                    for (std::size_t k = 0; k < pick.size(); ++k) full[pick[k]] = (*x)[k];
                    found = full;
                    return;
                }
            }
        }
        for (std::size_t j = start; j < n; ++j) {
            pick.push_back(j);
            rec(j + 1);
            pick.pop_back();
        }
    };
    if (is_zero(target)) return RatVec(n, Rat(0));
    rec(0);
    return found;
}

// Integer n with sum_j n_j rows[j] = target, or nullopt.
std::optional<std::vector<Int>> integer_solve(const IntMat& rows, const IntVec& target) {
    if (rows.empty()) return is_zero(target) ? std::optional<std::vector<Int>>(std::vector<Int>{}) : std::nullopt;
    const std::size_t m = rows.size(), k = target.size();
    IntMat a(k, IntVec(m));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j) a[i][j] = rows[j][i];
    auto cr = column_reduce(a, m);
    // h is lower triangular in echelon form: forward substitution
    std::vector<Int> y(m, Int(0));
    IntVec rest = target;
    std::size_t col = 0;
    for (std::size_t i = 0; i < k && col < cr.rank; ++i) {
        if (cr.h[i][col] == 0) {
            if (rest[i] != 0) {
                bool later = false;
                for (std::size_t c = col; c < cr.rank; ++c) later = later || cr.h[i][c] != 0;
                if (!later) return std::nullopt;
            }
            continue;
        }
        if (rest[i] % cr.h[i][col] != 0) return std::nullopt;
        y[col] = rest[i] / cr.h[i][col];
        for (std::size_t r = 0; r < k; ++r) rest[r] -= y[col] * cr.h[r][col];
        ++col;
    }
    if (!is_zero(rest)) return std::nullopt;
    std::vector<Int> out(m, Int(0));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t c = 0; c < cr.rank; ++c) out[j] += cr.v[j][c] * y[c];
    return out;
}

std::size_t state_cap() {
    if (const char* env = std::getenv("VALUNIFORM_MEMBERSHIP_CAP")) {
        long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 2000000;
}

}  // namespace

ToricMonoid::ToricMonoid(std::size_t ambient_rank, IntMat generators)
    : rank_(ambient_rank), gens_(std::move(generators)), cache_(std::make_shared<Cache>()) {
    for (const auto& g : gens_)
        if (g.size() != rank_)
            throw precondition("dimension-mismatch", "monoid generator has wrong length");
}

const MonoidStructure& ToricMonoid::structure() const {
    std::call_once(cache_->once, [this] {
        MonoidStructure& s = cache_->data;
        s.group_basis = lattice_basis(gens_, rank_);
        const std::size_t k = s.group_basis.size();
        for (const auto& g : gens_) s.coords.push_back(*lattice_coords(s.group_basis, g));
        s.cone = facets_of(s.coords, k);
        IntMat unit_coords;
        for (const auto& c : s.coords) {
            bool unit = s.cone.contains(negate(c));
            s.unit_generator.push_back(unit);
            if (unit) unit_coords.push_back(c);
        }
        s.units_basis = lattice_basis(unit_coords, k);
        s.units_hnf = s.units_basis;
        s.positive_functional.assign(k, Int(0));
        for (const auto& u : s.cone.inequalities) s.positive_functional = add(s.positive_functional, u);
        // 0 = g + (-g) with -g a nonnegative combination of unit generators; summing
        // these gives a relation positive on every unit generator
        s.unit_relation.assign(gens_.size(), Int(0));
        RatVec rel(unit_coords.size(), Rat(0));
        for (std::size_t j = 0; j < unit_coords.size(); ++j) {
            auto x = nonneg_express(unit_coords, negate(unit_coords[j]));
            if (!x) throw precondition("internal", "unit generator without inverse in the unit cone");
            rel[j] += 1;
            for (std::size_t i = 0; i < rel.size(); ++i) rel[i] += (*x)[i];
        }
        Int den = 1;
        for (const auto& q : rel) den = lcm(den, Int(q.get_den()));
        for (std::size_t i = 0, j = 0; i < gens_.size(); ++i)
            if (s.unit_generator[i]) s.unit_relation[i] = Int(rel[j++] * den);
    });
    return cache_->data;
}

std::optional<IntVec> ToricMonoid::group_coords(const IntVec& v) const {
    if (v.size() != rank_) throw precondition("dimension-mismatch", "vector has wrong length");
    const auto& s = structure();
    if (s.group_basis.empty()) {
        if (is_zero(v)) return IntVec{};
        return std::nullopt;
    }
    return lattice_coords(s.group_basis, v);
}

IntVec ToricMonoid::ambient_of(const IntVec& c) const {
    return combine(c, structure().group_basis, rank_);
}

Membership membership(const ToricMonoid& p, const IntVec& v) {
    Membership out;
    out.coefficients.assign(p.generators().size(), 0);
    out.bound = 0;
    auto c = p.group_coords(v);
    if (!c) return out;
    const auto& s = p.structure();
    if (!s.cone.contains(*c)) return out;
    const Int budget = dot(s.positive_functional, *c);
    out.bound = budget;

    std::vector<std::size_t> steps;
    std::vector<Int> weight;
    for (std::size_t i = 0; i < s.coords.size(); ++i) {
        if (s.unit_generator[i]) continue;
        steps.push_back(i);
        weight.push_back(dot(s.positive_functional, s.coords[i]));
    }
    const IntVec target = reduce_mod(*c, s.units_hnf);
    struct State {
        IntVec point;
        Int level;
        std::vector<long> coeffs;
    };
    std::map<IntVec, std::size_t> seen;
    std::vector<State> states;
    std::deque<std::size_t> queue;
    IntVec origin(c->size(), Int(0));
    states.push_back({origin, 0, std::vector<long>(p.generators().size(), 0)});
    seen[reduce_mod(origin, s.units_hnf)] = 0;
    queue.push_back(0);
    const std::size_t cap = state_cap();
    while (!queue.empty()) {
        const std::size_t at = queue.front();
        queue.pop_front();
        if (reduce_mod(states[at].point, s.units_hnf) == target && states[at].level == budget) {
            out.inside = true;
            out.coefficients = states[at].coeffs;
            // the remaining unit part as an N-combination of unit generators
            IntMat ugens;
            std::vector<std::size_t> uidx;
            for (std::size_t i = 0; i < s.coords.size(); ++i)
                if (s.unit_generator[i]) {
                    ugens.push_back(s.coords[i]);
                    uidx.push_back(i);
                }
            auto n = integer_solve(ugens, sub(*c, states[at].point));
            if (!n) throw precondition("internal", "unit part outside the unit lattice");
            Int shift = 0;
            for (std::size_t j = 0; j < n->size(); ++j) {
                const Int& r = s.unit_relation[uidx[j]];
                if ((*n)[j] < 0) shift = std::max(shift, Int((-(*n)[j] + r - 1) / r));
            }
            for (std::size_t j = 0; j < n->size(); ++j)
                out.coefficients[uidx[j]] += Int((*n)[j] + shift * s.unit_relation[uidx[j]]).get_si();
            return out;
        }
        for (std::size_t j = 0; j < steps.size(); ++j) {
            Int level = states[at].level + weight[j];
            if (level > budget) continue;
            IntVec next = add(states[at].point, s.coords[steps[j]]);
            IntVec key = reduce_mod(next, s.units_hnf);
            if (seen.count(key)) continue;
            if (states.size() >= cap)
                throw Error(ErrorKind::IterationCap, "membership-cap", "membership search exceeded its state cap");
            State st{std::move(next), level, states[at].coeffs};
            ++st.coeffs[steps[j]];
            seen[key] = states.size();
            states.push_back(std::move(st));
            queue.push_back(states.size() - 1);
        }
    }
    return out;
}

SplitResult units_and_split(const ToricMonoid& p) {
    const auto& s = p.structure();
    const std::size_t k = s.group_basis.size();
    if (!s.units_basis.empty() &&
        lattice_index(s.units_basis, saturated_basis(s.units_basis, k), k) != 1)
        throw precondition("torsion-quotient", "P^gp / P^x has torsion; P does not split off its units");
    ColumnReduction cr = column_reduce(s.units_basis, k);
    const std::size_t r = s.units_basis.empty() ? 0 : cr.rank;
    if (s.units_basis.empty()) {
        cr.v = identity(k);
        cr.v_inverse = identity(k);
    }
    IntMat sharp_gens;
    for (std::size_t i = 0; i < s.coords.size(); ++i) {
        if (s.unit_generator[i]) continue;
        IntVec y = row_times(s.coords[i], cr.v, k);
        sharp_gens.emplace_back(y.begin() + static_cast<long>(r), y.end());
    }
    SplitResult out{{}, ToricMonoid(k - r, sharp_gens), {}};
    for (const auto& u : s.units_basis) out.units.push_back(p.ambient_of(u));
    for (std::size_t j = r; j < k; ++j) out.section.push_back(p.ambient_of(cr.v_inverse[j]));
    return out;
}

IntMat pointed_hilbert_basis(const IntMat& generators, std::size_t d) {
    if (d == 0) return {};
    IntMat rays = extreme_rays(generators, d);
    if (rank(rays) != d) throw precondition("not-full-dimensional", "cone is not full-dimensional");
    HRep h = facets_of(rays, d);
    std::set<IntVec> candidates(rays.begin(), rays.end());
    for (const auto& simplex : triangulate(rays, d)) {
        IntMat srays;
        for (auto i : simplex) srays.push_back(rays[i]);
        for (auto& pt : parallelepiped_points(srays))
            if (!is_zero(pt)) candidates.insert(std::move(pt));
    }
    IntMat out;
    for (const auto& x : candidates) {
        bool reducible = false;
        for (const auto& y : candidates) {
            if (y == x) continue;
            IntVec diff = sub(x, y);
            if (!is_zero(diff) && h.contains(diff)) {
                reducible = true;
                break;
            }
        }
        if (!reducible) out.push_back(x);
    }
    return out;
}

std::pair<IntMat, IntMat> saturated_generators(const IntMat& generators, const IntMat& lattice,
                                               std::size_t ambient) {
    const std::size_t k = lattice.size();
    if (k == 0) return {};
    IntMat coords;
    for (const auto& g : generators) {
        auto c = lattice_coords(lattice, g);
        if (!c) throw precondition("not-in-lattice", "generator outside the saturation lattice");
        coords.push_back(*c);
    }
    HRep h = facets_of(coords, k);
    if (!h.equations.empty())
        throw precondition("not-full-dimensional", "generators do not span the saturation lattice rationally");
    IntMat lineality;
    for (const auto& c : coords)
        if (!is_zero(c) && h.contains(negate(c))) lineality.push_back(c);
    IntMat units = lineality.empty() ? IntMat{} : saturated_basis(lineality, k);
    const std::size_t r = units.size();
    IntMat v = identity(k), vinv = identity(k);
    if (r > 0) {
        ColumnReduction cr = column_reduce(units, k);
        v = cr.v;
        vinv = cr.v_inverse;
    }
    IntMat sharp;
    for (const auto& c : coords) {
        if (h.contains(negate(c))) continue;
        IntVec y = row_times(c, v, k);
        sharp.emplace_back(y.begin() + static_cast<long>(r), y.end());
    }
    IntMat hilbert;
    IntMat complement(vinv.begin() + static_cast<long>(r), vinv.end());
    for (const auto& y : pointed_hilbert_basis(sharp, k - r))
        hilbert.push_back(combine(combine(y, complement, k), lattice, ambient));
    IntMat units_ambient;
    for (const auto& u : units) units_ambient.push_back(combine(u, lattice, ambient));
    std::sort(hilbert.begin(), hilbert.end());
    return {units_ambient, hilbert};
}

Saturation saturate(const ToricMonoid& p, SaturationLattice which) {
    const std::size_t n = p.ambient_rank();
    IntMat lattice = which == SaturationLattice::Grothendieck ? p.structure().group_basis
                                                              : saturated_basis(p.generators(), n);
    auto [units, hilbert] = saturated_generators(p.generators(), lattice, n);
    IntMat gens = hilbert;
    for (const auto& u : units) {
        gens.push_back(u);
        gens.push_back(negate(u));
    }
    bool same = true;
    for (const auto& g : gens)
        if (!membership(p, g).inside) {
            same = false;
            break;
        }
    return Saturation{ToricMonoid(n, gens), units, hilbert, same};
}

bool is_saturated(const ToricMonoid& p) { return saturate(p).input_was_saturated; }

FreenessReport freeness(const ToricMonoid& p) {
    FreenessReport out;
    out.edge_index = 0;
    std::optional<SplitResult> split;
    const ToricMonoid* q = &p;
    if (!p.is_sharp()) {
        split = units_and_split(p);
        q = &split->sharp;
        out.applied_to_sharp_part = true;
    }
    const auto& s = q->structure();
    const std::size_t k = s.group_basis.size();
    out.rank = k;
    IntMat rays = k == 0 ? IntMat{} : extreme_rays(s.coords, k);
    out.extreme_ray_count = rays.size();
    out.simplex_shape = rays.size() == k;
    for (const auto& r : rays) {
        IntVec amb = q->ambient_of(r);
        if (split) amb = combine(amb, split->section, p.ambient_rank());
        out.edge_generators.push_back(std::move(amb));
    }
    if (!out.simplex_shape) return out;
    out.edge_index = k == 0 ? Int(1) : Int(abs(det(rays)));
    out.free = out.edge_index == 1;
    for (const auto& r : rays)
        if (out.free && !membership(*q, q->ambient_of(r)).inside) out.free = false;
    return out;
}

IsogenyWitness isogeny_rank(const ToricMonoid& p, const ToricMonoid& q, const IntMat& map_in) {
    const std::size_t np = p.ambient_rank(), nq = q.ambient_rank();
    IntMat map = map_in;
    if (map.empty()) {
        if (np != nq) throw precondition("dimension-mismatch", "identity map needs equal ambient ranks");
        map = identity(np);
    }
    if (map.size() != np) throw precondition("dimension-mismatch", "map needs one row per ambient basis vector of P");
    for (const auto& row : map)
        if (row.size() != nq) throw precondition("dimension-mismatch", "map row has wrong length");
    auto image = [&](const IntVec& x) { return combine(x, map, nq); };

    IntMat images;
    for (const auto& g : p.generators()) {
        IntVec y = image(g);
        if (!membership(q, y).inside) throw precondition("not-a-morphism", "a generator of P does not map into Q");
        images.push_back(std::move(y));
    }
    IntMat group_images;
    for (const auto& b : p.structure().group_basis) group_images.push_back(image(b));
    if (rank(group_images) != p.group_rank())
        throw precondition("not-injective", "the map is not injective on P^gp");

    IsogenyWitness w;
    w.rank = group_images.empty() && q.group_rank() == 0 ? Int(1)
                                                         : lattice_index(group_images, q.structure().group_basis, nq);
    if (w.rank == 0) throw precondition("infinite-index", "P^gp has infinite index in Q^gp");
    IntMat coords;
    for (const auto& b : lattice_basis(group_images, nq)) coords.push_back(*q.group_coords(b));
    w.invariants = smith_invariants(coords);

    IntMat pu;
    for (const auto& u : p.structure().units_basis) pu.push_back(image(p.ambient_of(u)));
    IntMat qu;
    for (const auto& u : q.structure().units_basis) qu.push_back(q.ambient_of(u));
    w.unit_iso_check = lattice_basis(pu, nq) == lattice_basis(qu, nq);

    bool cones_agree = true;
    if (!images.empty() || !q.generators().empty()) {
        HRep cone_p = facets_of(images, nq);
        for (const auto& g : q.generators())
            if (!cone_p.contains(g)) cones_agree = false;
    }
    w.saturation_check = cones_agree && is_saturated(q);
    return w;
}

IntMat minimal_generators(const ToricMonoid& p) {
    std::set<IntVec> distinct;
    for (const auto& g : p.generators())
        if (!is_zero(g)) distinct.insert(g);
    IntMat all(distinct.begin(), distinct.end());
    IntMat out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        IntMat others;
        for (std::size_t j = 0; j < all.size(); ++j)
            if (j != i) others.push_back(all[j]);
        if (!membership(ToricMonoid(p.ambient_rank(), others), all[i]).inside) out.push_back(all[i]);
    }
    return out;
}

ChartMonoid chart_monoid(std::size_t num_units, const ToricMonoid& mbar) {
    if (!mbar.is_sharp()) throw precondition("not-sharp", "Mbar must be sharp");
    const std::size_t m = mbar.ambient_rank(), n = num_units + m;
    IntMat gens, center;
    for (std::size_t i = 0; i < num_units; ++i) {
        IntVec e(n, Int(0));
        e[i] = 1;
        gens.push_back(e);
        gens.push_back(negate(e));
    }
    for (const auto& g : minimal_generators(mbar)) {
        IntVec lifted(n, Int(0));
        std::copy(g.begin(), g.end(), lifted.begin() + static_cast<long>(num_units));
        gens.push_back(lifted);
        center.push_back(std::move(lifted));
    }
    return ChartMonoid{ToricMonoid(n, gens), center};
}

}  // namespace valuniform
