#include "valuniform/linalg.hpp"

#include "valuniform/errors.hpp"

#include <algorithm>
#include <utility>

namespace valuniform {

Rat make_rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat parse_rat(const std::string& raw) {
    std::string text;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        // U+2212 MINUS SIGN
        if (i + 2 < raw.size() && static_cast<unsigned char>(raw[i]) == 0xE2 &&
            static_cast<unsigned char>(raw[i + 1]) == 0x88 &&
            static_cast<unsigned char>(raw[i + 2]) == 0x92) {
            text.push_back('-');
            i += 2;
        } else if (raw[i] != ' ') {
            text.push_back(raw[i]);
        }
    }
    if (text.empty()) throw precondition("bad-rational", "empty rational literal");
    if (text[0] == '+') text.erase(0, 1);
    auto valid = [](const std::string& s, bool allow_sign) {
        if (s.empty()) return false;
        std::size_t i = (allow_sign && s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    auto slash = text.find('/');
    std::string num = text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!valid(num, true) || !valid(den, false))
        throw precondition("bad-rational", "malformed rational '" + raw + "'");
    Int n(num), d(den);
    if (d == 0) throw precondition("bad-rational", "zero denominator in '" + raw + "'");
    return make_rat(n, d);
}

std::string to_string(const Rat& q) { return q.get_str(); }
std::string to_string(const Int& z) { return z.get_str(); }

Int floor_rat(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rat frac_rat(const Rat& q) { return q - Rat(floor_rat(q)); }

IntVec to_int_vec(const std::vector<long long>& v) {
    IntVec out;
    out.reserve(v.size());
    for (long long x : v) out.emplace_back(static_cast<long>(x));
    return out;
}

RatVec to_rat(const IntVec& v) { return RatVec(v.begin(), v.end()); }

RatMat to_rat(const IntMat& m) {
    RatMat out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(to_rat(row));
    return out;
}

Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IntVec add(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

IntVec sub(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

IntVec scale(const Int& c, const IntVec& a) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

IntVec negate(const IntVec& a) { return scale(Int(-1), a); }

bool is_zero(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

bool is_zero(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

IntMat transpose(const IntMat& m) {
    if (m.empty()) return {};
    IntMat t(m[0].size(), IntVec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

RatMat transpose(const RatMat& m) {
    if (m.empty()) return {};
    RatMat t(m[0].size(), RatVec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

Int gcd_of(const IntVec& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

IntVec primitive(const IntVec& v) {
    Int g = gcd_of(v);
    if (g == 0) throw precondition("zero-vector", "zero vector has no primitive direction");
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
    return r;
}

IntVec primitive(const RatVec& v) {
    Int l = 1;
    for (const auto& x : v) l = lcm(l, Int(x.get_den()));
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rat s = v[i] * Rat(l);
        r[i] = s.get_num();
    }
    return primitive(r);
}

bool is_primitive(const IntVec& v) { return gcd_of(v) == 1; }

std::vector<std::size_t> rref(RatMat& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Rat inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(const RatMat& m) {
    RatMat copy = m;
    return rref(copy).size();
}

std::size_t rank(const IntMat& m) { return rank(to_rat(m)); }

RatMat kernel(const RatMat& m, std::size_t cols) {
    RatMat a = m;
    auto pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    RatMat basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        RatVec v(cols, Rat(0));
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

namespace {

// Replace columns a, b of `work`/`v` by a unimodular combination that puts
// gcd(work[row][a], work[row][b]) in column a and zero in column b.
void combine_columns(IntMat& work, IntMat& v, IntMat& v_inv, std::size_t row, std::size_t a,
                     std::size_t b) {
    Int p = work[row][a], q = work[row][b];
    if (q == 0) return;
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    Int pg = p / g, qg = q / g;
    auto apply_cols = [&](IntMat& m) {
        for (auto& r : m) {
            Int ca = r[a], cb = r[b];
            r[a] = s * ca + t * cb;
            r[b] = -qg * ca + pg * cb;
        }
    };
    apply_cols(work);
    apply_cols(v);
    IntVec ra = v_inv[a], rb = v_inv[b];
    for (std::size_t j = 0; j < ra.size(); ++j) {
        v_inv[a][j] = pg * ra[j] + qg * rb[j];
        v_inv[b][j] = -t * ra[j] + s * rb[j];
    }
}

IntMat identity(std::size_t n) {
    IntMat id(n, IntVec(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
}

}  // namespace

ColumnReduction column_reduce(const IntMat& a, std::size_t cols) {
    ColumnReduction out;
    IntMat work = a;
    out.v = identity(cols);
    out.v_inverse = identity(cols);
    std::size_t r = 0;
    for (std::size_t row = 0; row < work.size() && r < cols; ++row) {
        for (std::size_t c = r + 1; c < cols; ++c) combine_columns(work, out.v, out.v_inverse, row, r, c);
        if (work[row][r] == 0) continue;
        if (work[row][r] < 0) {
            for (auto& x : work) x[r] = -x[r];
            for (auto& x : out.v) x[r] = -x[r];
            for (auto& x : out.v_inverse[r]) x = -x;
        }
        ++r;
    }
    out.rank = r;
    out.h.assign(work.size(), IntVec(r));
    for (std::size_t i = 0; i < work.size(); ++i)
        for (std::size_t j = 0; j < r; ++j) out.h[i][j] = work[i][j];
    return out;
}

IntMat integer_kernel(const IntMat& m, std::size_t cols) {
    auto red = column_reduce(m, cols);
    IntMat basis;
    for (std::size_t c = red.rank; c < cols; ++c) {
        IntVec col(cols);
        for (std::size_t i = 0; i < cols; ++i) col[i] = red.v[i][c];
        basis.push_back(std::move(col));
    }
    return basis;
}

IntMat lattice_basis(const IntMat& vectors, std::size_t cols) {
    IntMat work = vectors;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < work.size(); ++c) {
        for (std::size_t i = r + 1; i < work.size(); ++i) {
            Int p = work[r][c], q = work[i][c];
            if (q == 0) continue;
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
            Int pg = p / g, qg = q / g;
            for (std::size_t j = 0; j < cols; ++j) {
                Int x = work[r][j], y = work[i][j];
                work[r][j] = s * x + t * y;
                work[i][j] = -qg * x + pg * y;
            }
        }
        if (work[r][c] == 0) continue;
        if (work[r][c] < 0)
            for (auto& x : work[r]) x = -x;
        // Reduce the entries above the pivot.
        for (std::size_t i = 0; i < r; ++i) {
            Int f;
            mpz_fdiv_q(f.get_mpz_t(), work[i][c].get_mpz_t(), work[r][c].get_mpz_t());
            if (f != 0)
                for (std::size_t j = 0; j < cols; ++j) work[i][j] -= f * work[r][j];
        }
        ++r;
    }
    work.resize(r);
    return work;
}

IntMat saturated_basis(const IntMat& vectors, std::size_t cols) {
    IntMat perp = integer_kernel(vectors, cols);
    return lattice_basis(integer_kernel(perp, cols), cols);
}

std::vector<Int> smith_invariants(const IntMat& m) {
    IntMat a = m;
    std::vector<Int> diag;
    if (a.empty()) return diag;
    std::size_t rows = a.size(), cols = a[0].size();
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        std::size_t pr = rows, pc = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
                    pr = i;
                    pc = j;
                }
        if (pr == rows) break;
        std::swap(a[t], a[pr]);
        for (auto& row : a) std::swap(row[t], row[pc]);
        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
            Int f;
            mpz_fdiv_q(f.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
            for (std::size_t j = t; j < cols; ++j) a[i][j] -= f * a[t][j];
            if (a[i][t] != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            Int f;
            mpz_fdiv_q(f.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
            for (std::size_t i = t; i < rows; ++i) a[i][j] -= f * a[i][t];
            if (a[t][j] != 0) clean = false;
        }
        if (!clean) continue;
        // Divisibility condition on the trailing block.
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
                    divides = false;
                    break;
                }
        if (!divides) continue;
        diag.push_back(abs(a[t][t]));
        ++t;
    }
    return diag;
}

std::optional<RatVec> express(const RatMat& vectors, const RatVec& target) {
    std::size_t k = vectors.size(), n = target.size();
    RatMat aug(n, RatVec(k + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug[i][j] = vectors[j][i];
        aug[i][k] = target[i];
    }
    auto pivots = rref(aug);
    RatVec c(k, Rat(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == k) return std::nullopt;
        c[pivots[i]] = aug[i][k];
    }
    return c;
}

std::optional<RatVec> express(const IntMat& vectors, const IntVec& target) {
    return express(to_rat(vectors), to_rat(target));
}

std::optional<RatMat> inverse(const RatMat& m) {
    std::size_t n = m.size();
    RatMat aug(n, RatVec(2 * n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
    RatMat inv(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

Int det(const IntMat& m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    IntMat a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

Rat det(const RatMat& m) {
    std::size_t n = m.size();
    RatMat a = m;
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            Rat f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return d;
}

std::optional<IntVec> lattice_coords(const IntMat& basis, const IntVec& v) {
    auto c = express(basis, v);
    if (!c) return std::nullopt;
    IntVec out(c->size());
    for (std::size_t i = 0; i < c->size(); ++i) {
        if ((*c)[i].get_den() != 1) return std::nullopt;
        out[i] = (*c)[i].get_num();
    }
    return out;
}

Int lattice_index(const IntMat& sub, const IntMat& super, std::size_t cols) {
    IntMat sb = lattice_basis(sub, cols), pb = lattice_basis(super, cols);
    if (sb.size() != pb.size()) return 0;
    IntMat coords;
    for (const auto& v : sb) {
        auto c = lattice_coords(pb, v);
        if (!c) throw precondition("not-a-sublattice", "lattice_index: sub is not contained in super");
        coords.push_back(*c);
    }
    if (coords.empty()) return 1;
    return abs(det(coords));
}

Int multiplicity(const IntMat& rows) {
    if (rows.empty()) return 1;
    std::size_t cols = rows[0].size();
    return lattice_index(rows, saturated_basis(rows, cols), cols);
}

bool lex_less(const IntVec& a, const IntVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace valuniform
