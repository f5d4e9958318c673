#include "valuniform/uniformizer.hpp"

#include "valuniform/cone.hpp"
#include "valuniform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace valuniform {

namespace {

std::string vec_string(const IntVec& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

// Nonzero points p of the fundamental parallelepiped of `cone`, with
// coordinates p = sum_k (num_k / m) r_k, 0 <= num_k < m = |det|. `adj` is
// m * cone^-1. Small multiplicities get the whole box; beyond that only the
// cyclic subgroups generated by the unit vectors (they generate Z^n modulo
// the ray lattice, so some candidate is always nonzero).
struct Candidate {
    IntVec p;
    std::vector<Int> num;
};

std::vector<Candidate> descent_candidates(const IntMat& cone, const IntMat& adj, const Int& m) {
    const std::size_t n = cone.size();
    constexpr long full_limit = 4096, cyclic_limit = 1024;
    std::vector<Candidate> out;
    auto push = [&](std::vector<Int> num) {
        bool zero = true;
        for (auto& x : num) {
            mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
            zero = zero && x == 0;
        }
        if (zero) return false;
        IntVec p(n, Int(0));
        for (std::size_t k = 0; k < n; ++k)
            if (num[k] != 0)
                for (std::size_t j = 0; j < n; ++j) p[j] += num[k] * cone[k][j];
        for (auto& x : p) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        out.push_back({std::move(p), std::move(num)});
        return true;
    };
    auto coords = [&](const IntVec& x) {
        std::vector<Int> num(n, Int(0));
        for (std::size_t j = 0; j < n; ++j)
            if (x[j] != 0)
                for (std::size_t k = 0; k < n; ++k) num[k] += x[j] * adj[j][k];
        return num;
    };
    if (m <= full_limit) {
        for (const auto& p : parallelepiped_points(cone))
            if (!is_zero(p)) push(coords(p));
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Int> step(adj[i].begin(), adj[i].end()), num(n, Int(0));
        for (long j = 1; j <= cyclic_limit; ++j) {
            for (std::size_t k = 0; k < n; ++k) num[k] += step[k];
            if (!push(num)) break;  // order of e_i reached
        }
    }
    return out;
}

double midpoint(const RatInterval& r) { return Rat((r.lo + r.hi) / 2).get_d(); }

LexValue scaled(const LexValue& v, const Rat& c) {
    LexValue out;
    for (const auto& g : v) out.push_back(g * c);
    return out;
}

}  // namespace

std::size_t iteration_cap() {
    if (const char* env = std::getenv("VALUNIFORM_ITER_CAP")) {
        long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 100000;
}

WeightMatrix::WeightMatrix(std::size_t ambient, std::vector<std::vector<GammaElement>> rows)
    : n_(ambient), rows_(std::move(rows)) {
    if (rows_.empty()) throw precondition("empty-weights", "weight matrix needs at least one row");
    basis_ = rows_[0].empty() ? IrrationalBasis::empty() : rows_[0][0].basis();
    for (const auto& row : rows_) {
        if (row.size() != n_) throw precondition("dimension-mismatch", "weight row has wrong length");
        for (const auto& g : row)
            if (g.basis() != basis_) throw precondition("mixed-basis", "weight entries must share one basis");
    }
    if (!basis_->independent())
        throw precondition("no-independence", "weight injectivity needs a declared independent basis");
    RatMat stacked;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (auto& r : flattened_row(i)) stacked.push_back(std::move(r));
    if (!kernel(stacked, n_).empty())
        throw precondition("not-injective", "weight rows vanish on a nonzero lattice vector");
}

RatMat WeightMatrix::flattened_row(std::size_t i) const {
    const std::size_t b = basis_->size() + 1;
    RatMat out(b, RatVec(n_, Rat(0)));
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t c = 0; c < b; ++c) out[c][j] = rows_[i][j].coords()[c];
    return out;
}

LexValue WeightMatrix::value(const IntVec& lambda) const { return value(to_rat(lambda)); }

LexValue WeightMatrix::value(const RatVec& lambda) const {
    if (lambda.size() != n_) throw precondition("dimension-mismatch", "lattice vector has wrong length");
    LexValue out;
    for (const auto& row : rows_) {
        GammaElement acc = GammaElement::rational(basis_, 0);
        for (std::size_t j = 0; j < n_; ++j)
            if (lambda[j] != 0) acc = acc + row[j] * lambda[j];
        out.push_back(std::move(acc));
    }
    return out;
}

Sign lex_sign(const LexValue& v) {
    for (const auto& g : v) {
        Sign s = gamma_sign(g);
        if (s == Sign::Undecided)
            throw precision_error("sign-undecided", "gamma_sign could not separate " + g.to_string() + " from 0");
        if (s != Sign::Zero) return s;
    }
    return Sign::Zero;
}

int lex_compare(const LexValue& a, const LexValue& b) {
    LexValue d;
    for (std::size_t i = 0; i < a.size(); ++i) d.push_back(a[i] - b[i]);
    Sign s = lex_sign(d);
    return s == Sign::Positive ? 1 : (s == Sign::Negative ? -1 : 0);
}

std::string to_string(VMStatus s) {
    switch (s) {
        case VMStatus::Inside: return "inside";
        case VMStatus::BoundaryUnit: return "boundary-unit";
        case VMStatus::Outside: return "outside";
    }
    return {};
}

VMStatus vm_membership(const IntVec& lambda, const WeightMatrix& w) {
    switch (lex_sign(w.value(lambda))) {
        case Sign::Positive: return VMStatus::Inside;
        case Sign::Zero: return VMStatus::BoundaryUnit;
        default: return VMStatus::Outside;
    }
}

CertificateCheck verify_certificate(const IntMat& set, const WeightMatrix& w, const FreeCoverCertificate& cert) {
    CertificateCheck c;
    const std::size_t n = w.ambient();
    bool shape = cert.basis.size() == n;
    for (const auto& b : cert.basis) shape = shape && b.size() == n;
    if (!shape) return c;
    Int d = det(cert.basis);
    c.det = d == 1 || d == -1;

    c.membership = true;
    c.values = cert.values.size() == n;
    for (std::size_t i = 0; i < n; ++i) {
        LexValue v = w.value(cert.basis[i]);
        if (lex_sign(v) == Sign::Negative) c.membership = false;
        if (c.values && !(cert.values[i] == v)) c.values = false;
    }

    c.coverage = cert.set == set && cert.coordinates.size() == set.size();
    for (std::size_t k = 0; c.coverage && k < set.size(); ++k) {
        const IntVec& coords = cert.coordinates[k];
        if (coords.size() != n || set[k].size() != n) {
            c.coverage = false;
            break;
        }
        IntVec sum(n, Int(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (coords[i] < 0) c.coverage = false;
            sum = add(sum, scale(coords[i], cert.basis[i]));
        }
        if (sum != set[k]) c.coverage = false;
    }
    c.recorded = cert.det == d && cert.det_check == c.det && cert.membership_check == c.membership &&
                 cert.coverage_check == c.coverage;
    return c;
}

FreeCoverCertificate free_cover(const IntMat& set, const WeightMatrix& w, FreeCoverStats* stats) {
    const std::size_t n = w.ambient();
    IntMat gens;
    for (const auto& s : set) {
        if (s.size() != n) throw precondition("dimension-mismatch", "set element " + vec_string(s) + " has wrong length");
        VMStatus st = vm_membership(s, w);
        if (st == VMStatus::Outside)
            throw precondition("not-in-monoid", "set element " + vec_string(s) + " has negative W-lex value");
        if (st == VMStatus::Inside) gens.push_back(s);
    }
    if (rank(gens) < n) {
        for (std::size_t i = 0; i < n; ++i) {
            IntVec e(n, Int(0));
            e[i] = 1;
            gens.push_back(lex_sign(w.value(e)) == Sign::Positive ? e : negate(e));
        }
    }

    // The dual cone contains W; descend to a unimodular subcone containing W.
    const IntMat dual_rays = facets_of(gens, n).inequalities;
    auto dual_values = [&](const IntMat& rays) {
        RatMat inv = *inverse(to_rat(rays));
        std::vector<LexValue> mu;
        for (std::size_t i = 0; i < n; ++i) {
            RatVec b(n);
            for (std::size_t j = 0; j < n; ++j) b[j] = inv[j][i];
            mu.push_back(w.value(b));
        }
        return mu;
    };
    auto contains_w = [&](const std::vector<LexValue>& mu) {
        for (const auto& m : mu)
            if (lex_sign(m) == Sign::Negative) return false;
        return true;
    };

    IntMat cone;
    std::vector<LexValue> mu;
    for (const auto& simplex : triangulate(dual_rays, n)) {
        IntMat rays;
        for (auto i : simplex) rays.push_back(dual_rays[i]);
        auto m = dual_values(rays);
        if (contains_w(m)) {
            cone = rays;
            mu = std::move(m);
            break;
        }
    }
    if (cone.empty()) throw precondition("no-center", "W does not lie in the dual cone of S");

    Int mult = abs(det(cone));
    if (stats) stats->initial_multiplicity = mult;
    const std::size_t cap = iteration_cap();
    std::size_t steps = 0;
    while (mult != 1) {
        if (++steps > cap)
            throw Error(ErrorKind::IterationCap, "iteration-cap",
                        "free_cover exceeded " + std::to_string(cap) + " steps at multiplicity " + mult.get_str());
        // adj = m * cone^-1 with m = |det| > 0
        RatMat inv = *inverse(to_rat(cone));
        IntMat adj(n, IntVec(n));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) adj[j][k] = Rat(inv[j][k] * Rat(mult)).get_num();
        // Ratio test on mu_k / lambda_k with lambda_k = num_k / m: compare
        // mu_a * num_b against mu_b * num_a. Floating midpoints decide clear
        // cases; close calls go to the exact comparison.
        std::vector<std::vector<double>> approx(n);
        for (std::size_t k = 0; k < n; ++k)
            for (const auto& g : mu[k]) approx[k].push_back(midpoint(g.enclose(Rat(1, 1L << 40))));
        auto ratio_less = [&](std::size_t a, const Int& na, std::size_t b, const Int& nb) {
            const double fa = nb.get_d(), fb = na.get_d();
            for (std::size_t r = 0; r < approx[a].size(); ++r) {
                double x = approx[a][r] * fa, y = approx[b][r] * fb;
                double margin = 1e-9 * (std::abs(x) + std::abs(y) + 1);
                if (x < y - margin) return true;
                if (x > y + margin) return false;
                return lex_compare(scaled(mu[a], Rat(nb)), scaled(mu[b], Rat(na))) < 0;
            }
            return false;
        };
        std::optional<std::size_t> best_k;
        IntVec best_p;
        Int best_num;
        for (const auto& [p, num] : descent_candidates(cone, adj, mult)) {
            // Ratio test keeps W inside the replaced cone.
            std::optional<std::size_t> k_here;
            for (std::size_t k = 0; k < n; ++k) {
                if (num[k] == 0) continue;
                if (!k_here || ratio_less(k, num[k], *k_here, num[*k_here])) k_here = k;
            }
            if (!k_here) continue;
            const Int& l = num[*k_here];
            if (!best_k || l < best_num || (l == best_num && lex_less(p, best_p))) {
                best_k = k_here;
                best_p = p;
                best_num = l;
            }
        }
        cone[*best_k] = best_p;
        mu = dual_values(cone);
        mult = abs(det(cone));
    }
    if (stats) stats->steps = steps;

    FreeCoverCertificate cert;
    cert.set = set;
    RatMat inv = *inverse(to_rat(cone));
    for (std::size_t i = 0; i < n; ++i) {
        IntVec b(n);
        for (std::size_t j = 0; j < n; ++j) b[j] = inv[j][i].get_num();
        cert.basis.push_back(std::move(b));
    }
    std::sort(cert.basis.begin(), cert.basis.end(), [](const IntVec& a, const IntVec& b) { return lex_less(b, a); });
    for (const auto& b : cert.basis) cert.values.push_back(w.value(b));
    // Coordinates in the sorted basis.
    RatMat binv = *inverse(to_rat(cert.basis));
    for (const auto& s : set) {
        IntVec c(n, Int(0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) c[i] += s[j] * binv[j][i].get_num();
        cert.coordinates.push_back(std::move(c));
    }
    cert.det = det(cert.basis);
    CertificateCheck check = verify_certificate(set, w, FreeCoverCertificate{cert.set, cert.basis, cert.values,
                                                                               cert.coordinates, cert.det, true, true,
                                                                               true});
    cert.det_check = check.det;
    cert.membership_check = check.membership;
    cert.coverage_check = check.coverage;
    if (!check.ok()) throw Error(ErrorKind::IterationCap, "certificate-failed", "free_cover produced an invalid certificate");
    return cert;
}

std::size_t rational_rank(const std::vector<GammaElement>& values, const std::vector<GammaElement>& base) {
    RatMat all, b;
    for (const auto& g : base) {
        b.push_back(g.coords());
        all.push_back(g.coords());
    }
    for (const auto& g : values) all.push_back(g.coords());
    return rank(all) - rank(b);
}

InvariantReport invariant_report(long n, long E, long F) {
    if (n < 0 || E < 0 || F < 0) throw precondition("invalid-input", "n, E, F must be nonnegative");
    if (E + F > n) throw precondition("invalid-input", "E + F cannot exceed n");
    InvariantReport r;
    r.n = n;
    r.E = E;
    r.F = F;
    r.D = n - E - F;
    r.abhyankar = r.D == 0;
    return r;
}

long defect(long n, long e, long f) {
    if (n < 1 || e < 1 || f < 1) throw precondition("invalid-input", "n, e, f must be positive");
    if (n % (e * f) != 0)
        throw precondition("not-divisible",
                           "e*f does not divide n; the defect is only defined when the valuation extends uniquely");
    return n / (e * f);
}

StarCheck star_check(const std::vector<GammaElement>& be_values, const std::vector<GammaElement>& base,
                     const std::vector<bool>& bf_residue_flags, long n) {
    StarCheck r;
    r.value_rank = rational_rank(be_values, base);
    bool flags = std::all_of(bf_residue_flags.begin(), bf_residue_flags.end(), [](bool b) { return b; });
    const long size = static_cast<long>(be_values.size() + bf_residue_flags.size());
    r.holds = r.value_rank == be_values.size() && flags && size <= n;
    r.abhyankar_basis = r.holds && size == n;
    return r;
}

std::size_t rz_height(const WeightMatrix& w) {
    const std::size_t n = w.ambient();
    // Current common kernel, as rows spanning a subspace of Q^n.
    RatMat kernel_basis;
    for (std::size_t i = 0; i < n; ++i) {
        RatVec e(n, Rat(0));
        e[i] = 1;
        kernel_basis.push_back(e);
    }
    std::size_t h = 0;
    for (std::size_t i = 0; i < w.height() && !kernel_basis.empty(); ++i) {
        RatMat f = w.flattened_row(i);
        // Restriction of the row to the kernel: f * K^T.
        RatMat restricted(f.size(), RatVec(kernel_basis.size(), Rat(0)));
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::size_t b = 0; b < kernel_basis.size(); ++b) restricted[a][b] = dot(f[a], kernel_basis[b]);
        bool nonzero = false;
        for (const auto& row : restricted) nonzero = nonzero || !is_zero(row);
        if (!nonzero) continue;
        ++h;
        RatMat sub = kernel(restricted, kernel_basis.size());
        RatMat next;
        for (const auto& c : sub) {
            RatVec v(n, Rat(0));
            for (std::size_t b = 0; b < kernel_basis.size(); ++b)
                for (std::size_t j = 0; j < n; ++j) v[j] += c[b] * kernel_basis[b][j];
            next.push_back(std::move(v));
        }
        kernel_basis = std::move(next);
    }
    return h;
}

}  // namespace valuniform
