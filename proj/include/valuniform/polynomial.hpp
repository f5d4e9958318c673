#pragma once

// Dense univariate polynomials over any commutative ring type R that offers
// +, -, *, unary -, is_zero(), zero(), one() and from_int(long) (the latter
// three are "like this element", which carries the base prime or field).

#include "valuniform/errors.hpp"
#include "valuniform/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace valuniform {

template <class R>
class Polynomial {
public:
    // Coefficients a_0, a_1, ..., a_d; trailing zeros are trimmed.
    Polynomial(std::vector<R> coeffs, R prototype) : coeffs_(std::move(coeffs)), proto_(std::move(prototype)) {
        trim();
    }

    // -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const std::vector<R>& coeffs() const { return coeffs_; }
    const R& operator[](std::size_t i) const { return coeffs_[i]; }
    const R& leading() const { return coeffs_.back(); }
    const R& prototype() const { return proto_; }
    bool is_zero() const { return coeffs_.empty(); }

    Polynomial zero() const { return Polynomial({}, proto_); }
    Polynomial one() const { return Polynomial({proto_.one()}, proto_); }
    Polynomial from_int(long n) const { return Polynomial({proto_.from_int(n)}, proto_); }
    static Polynomial constant(const R& c) { return Polynomial({c}, c); }
    // The polynomial x.
    Polynomial variable() const { return Polynomial({proto_.zero(), proto_.one()}, proto_); }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<R> c(std::max(coeffs_.size(), o.coeffs_.size()), proto_.zero());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] = coeffs_[i];
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] = c[i] + o.coeffs_[i];
        return Polynomial(std::move(c), proto_);
    }
    Polynomial operator-() const {
        std::vector<R> c;
        c.reserve(coeffs_.size());
        for (const auto& x : coeffs_) c.push_back(-x);
        return Polynomial(std::move(c), proto_);
    }
    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
    Polynomial operator*(const Polynomial& o) const {
        if (is_zero() || o.is_zero()) return zero();
        std::vector<R> c(coeffs_.size() + o.coeffs_.size() - 1, proto_.zero());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] = c[i + j] + coeffs_[i] * o.coeffs_[j];
        }
        return Polynomial(std::move(c), proto_);
    }
    Polynomial operator*(const R& s) const {
        std::vector<R> c;
        for (const auto& x : coeffs_) c.push_back(x * s);
        return Polynomial(std::move(c), proto_);
    }

    R evaluate(const R& x) const {
        R acc = proto_.zero();
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Polynomial derivative() const {
        std::vector<R> c;
        for (std::size_t i = 1; i < coeffs_.size(); ++i) c.push_back(coeffs_[i] * proto_.from_int(static_cast<long>(i)));
        return Polynomial(std::move(c), proto_);
    }

    // f(x + c).
    Polynomial shift(const R& c) const {
        Polynomial acc = zero();
        Polynomial lin({c, proto_.one()}, proto_);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + Polynomial({*it}, proto_);
        return acc;
    }

    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<R> coeffs_;
    R proto_;
};

// Division-free determinant by cofactor expansion over column subsets
// (exact over any commutative ring; fine up to ~14x14).
template <class R>
R determinant(const std::vector<std::vector<R>>& m, const R& prototype) {
    const std::size_t n = m.size();
    if (n == 0) return prototype.one();
    if (n > 20) throw precondition("matrix-too-large", "determinant: matrix larger than 20x20");
    std::vector<R> minors(std::size_t{1} << n, prototype.zero());
    std::vector<bool> known(std::size_t{1} << n, false);
    minors[0] = prototype.one();
    known[0] = true;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const std::size_t row = static_cast<std::size_t>(__builtin_popcount(mask)) - 1;
        R acc = prototype.zero();
        std::size_t pos = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            const std::uint32_t rest = mask & ~(1u << j);
            if (!m[row][j].is_zero() && !minors[rest].is_zero()) {
                R term = m[row][j] * minors[rest];
                acc = ((row + pos) % 2 == 0) ? acc + term : acc - term;
            }
            ++pos;
        }
        minors[mask] = acc;
    }
    return minors[(1u << n) - 1];
}

// Sylvester-matrix resultant: Res(f, g) = lc(f)^deg(g) * prod g(alpha_i).
template <class R>
R resultant(const Polynomial<R>& f, const Polynomial<R>& g) {
    if (f.is_zero() || g.is_zero()) return f.prototype().zero();
    const std::size_t m = static_cast<std::size_t>(f.degree()), n = static_cast<std::size_t>(g.degree());
    const std::size_t size = m + n;
    if (size == 0) return f.prototype().one();
    std::vector<std::vector<R>> syl(size, std::vector<R>(size, f.prototype().zero()));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k <= m; ++k) syl[r][r + k] = f[m - k];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t k = 0; k <= n; ++k) syl[n + r][r + k] = g[n - k];
    return determinant(syl, f.prototype());
}

// D_f(z) = Res_x(f(x), f(x + z)) / z^d, whose roots are the differences
// alpha_j - alpha_i (i != j) of the roots of f.
template <class R>
Polynomial<R> difference_polynomial(const Polynomial<R>& f) {
    using PolyZ = Polynomial<R>;
    const R& proto = f.prototype();
    const PolyZ pz_proto = PolyZ::constant(proto.one());
    const std::size_t d = static_cast<std::size_t>(f.degree());
    // f as a polynomial in x with coefficients in R[z].
    std::vector<PolyZ> fx;
    for (const auto& a : f.coeffs()) fx.push_back(PolyZ({a}, proto));
    // f(x + z) = sum_j x^j sum_{k>=j} a_k C(k, j) z^(k-j)
    std::vector<PolyZ> gx;
    for (std::size_t j = 0; j <= d; ++j) {
        std::vector<R> zc(d - j + 1, proto.zero());
        for (std::size_t k = j; k <= d; ++k) {
            Int binom;
            mpz_bin_uiui(binom.get_mpz_t(), k, j);
            zc[k - j] = f[k] * proto.from_int(binom.get_si());
        }
        gx.push_back(PolyZ(std::move(zc), proto));
    }
    Polynomial<PolyZ> F(std::move(fx), pz_proto);
    Polynomial<PolyZ> G(std::move(gx), pz_proto);
    PolyZ res = resultant(F, G);
    std::vector<R> c = res.coeffs();
    if (c.size() <= d) throw precondition("degenerate-resultant", "difference resultant has degree below d");
    for (std::size_t i = 0; i < d; ++i)
        if (c[i].valuation().is_finite())
            throw precondition("degenerate-resultant", "difference resultant is not divisible by z^d");
    return Polynomial<R>(std::vector<R>(c.begin() + static_cast<long>(d), c.end()), proto);
}

}  // namespace valuniform
