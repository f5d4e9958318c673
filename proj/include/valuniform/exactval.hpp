#pragma once

// Exact scalars with computable valuations, and elements of ordered value
// groups written over a declared basis of irrationals. All valuations are
// additive: v(p) = 1 for the p-adic valuation, v(t) = 1 for series.

#include "valuniform/linalg.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace valuniform {

// A valuation value: a rational, +infinity (the zero element), or only a lower
// bound (every known term of a truncated series vanished).
class Valuation {
public:
    enum class Kind { Finite, Infinite, AtLeast };

    static Valuation finite(Rat v) { return Valuation(Kind::Finite, std::move(v)); }
    static Valuation infinity() { return Valuation(Kind::Infinite, Rat(0)); }
    static Valuation at_least(Rat bound) { return Valuation(Kind::AtLeast, std::move(bound)); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_infinite() const { return kind_ == Kind::Infinite; }
    bool is_bound() const { return kind_ == Kind::AtLeast; }
    // The valuation when finite, the lower bound when AtLeast.
    const Rat& value() const { return value_; }

    std::string to_string() const;
    bool operator==(const Valuation& o) const { return kind_ == o.kind_ && (kind_ == Kind::Infinite || value_ == o.value_); }

private:
    Valuation(Kind k, Rat v) : kind_(k), value_(std::move(v)) {}
    Kind kind_;
    Rat value_;
};

bool is_prime(const Int& n);
// Exponent of p in the nonzero integer n.
long padic_order(const Int& n, const Int& p);

/// A rational number together with the prime defining its valuation.
class PAdicRational {
public:
    PAdicRational(Rat value, Int prime);

    const Rat& value() const { return value_; }
    const Int& prime() const { return prime_; }

    Valuation valuation() const;
    bool is_zero() const { return value_ == 0; }

    PAdicRational zero() const { return PAdicRational(Rat(0), prime_, Unchecked{}); }
    PAdicRational one() const { return PAdicRational(Rat(1), prime_, Unchecked{}); }
    PAdicRational from_int(long n) const { return PAdicRational(Rat(n), prime_, Unchecked{}); }

    PAdicRational operator+(const PAdicRational& o) const;
    PAdicRational operator-(const PAdicRational& o) const;
    PAdicRational operator*(const PAdicRational& o) const;
    PAdicRational operator/(const PAdicRational& o) const;
    PAdicRational operator-() const { return PAdicRational(-value_, prime_, Unchecked{}); }
    bool operator==(const PAdicRational& o) const { return value_ == o.value_ && prime_ == o.prime_; }

    std::string to_string() const { return value_.get_str(); }

private:
    struct Unchecked {};
    PAdicRational(Rat value, Int prime, Unchecked) : value_(std::move(value)), prime_(std::move(prime)) {}
    void check_same(const PAdicRational& o) const;

    Rat value_;
    Int prime_;
};

/// Element of F_p((t^(1/N))): finitely many known terms plus an optional
/// truncation order O (terms of exponent >= O are unknown). Without a
/// truncation order the element is exact (a finite sum).
class TruncatedPuiseux {
public:
    using Terms = std::map<Rat, unsigned long>;

    // `ramification_cap` N: every exponent must have denominator dividing N.
    TruncatedPuiseux(unsigned long prime, Int ramification_cap, const std::map<Rat, long>& terms,
                     std::optional<Rat> truncation = std::nullopt);

    static TruncatedPuiseux monomial(unsigned long prime, Int cap, long coefficient, Rat exponent);

    unsigned long prime() const { return prime_; }
    const Int& ramification_cap() const { return cap_; }
    const Terms& terms() const { return terms_; }
    const std::optional<Rat>& truncation() const { return truncation_; }
    bool is_exact() const { return !truncation_.has_value(); }

    // Least stored exponent; AtLeast(O) when nothing is stored; Infinite for exact zero.
    Valuation valuation() const;
    bool is_zero() const { return terms_.empty() && is_exact(); }

    TruncatedPuiseux zero() const { return TruncatedPuiseux(prime_, cap_, Terms{}, std::nullopt); }
    TruncatedPuiseux one() const { return from_int(1); }
    TruncatedPuiseux from_int(long n) const;
    // Same element declared over F_p((t^(1/new_cap))); new_cap must be a multiple.
    TruncatedPuiseux with_cap(const Int& new_cap) const;

    TruncatedPuiseux operator+(const TruncatedPuiseux& o) const;
    TruncatedPuiseux operator-(const TruncatedPuiseux& o) const;
    TruncatedPuiseux operator*(const TruncatedPuiseux& o) const;
    TruncatedPuiseux operator-() const;
    bool operator==(const TruncatedPuiseux& o) const;

    // 1/x known up to exponent v(1/x) + relative_precision (or the precision the
    // input supports, whichever is smaller). Errors on zero or below-truncation input.
    TruncatedPuiseux inverse(const Rat& relative_precision) const;
    // x^(1/p): exponents divided by p; errors if that exceeds the ramification cap.
    TruncatedPuiseux pth_root() const;

    std::string to_string() const;

private:
    TruncatedPuiseux(unsigned long prime, Int cap, Terms terms, std::optional<Rat> truncation);
    void check_same(const TruncatedPuiseux& o) const;
    void normalize();

    unsigned long prime_;
    Int cap_;
    Terms terms_;
    std::optional<Rat> truncation_;
};

struct RatInterval {
    Rat lo;
    Rat hi;
    Rat width() const { return hi - lo; }
    bool contains(const Rat& q) const { return lo <= q && q <= hi; }
};

// Given eps > 0, returns an interval of width <= eps containing the number.
using IntervalOracle = std::function<RatInterval(const Rat& eps)>;

IntervalOracle sqrt_oracle(const Int& n);
IntervalOracle golden_ratio_oracle();
IntervalOracle root_oracle(const Int& n, unsigned long k);

/// Named irrationals theta_1..theta_m with interval oracles and a declaration
/// that {1, theta_1, ..., theta_m} is Q-linearly independent.
class IrrationalBasis {
public:
    // Runs the consistency spot-check: oracles must nest and each theta must
    // be separated from every rational with denominator <= denominator_bound.
    IrrationalBasis(std::vector<std::string> symbols, std::vector<IntervalOracle> oracles, bool independent,
                    unsigned denominator_bound = 16);

    // Builtin names: "sqrtN" (N not a square), "cbrtN", "phi" / "golden".
    static std::shared_ptr<const IrrationalBasis> from_names(const std::vector<std::string>& names,
                                                             bool independent = true);
    static std::shared_ptr<const IrrationalBasis> empty();

    std::size_t size() const { return symbols_.size(); }
    const std::vector<std::string>& symbols() const { return symbols_; }
    bool independent() const { return independent_; }
    RatInterval enclose(std::size_t i, const Rat& eps) const { return oracles_.at(i)(eps); }

private:
    std::vector<std::string> symbols_;
    std::vector<IntervalOracle> oracles_;
    bool independent_;
};

using BasisPtr = std::shared_ptr<const IrrationalBasis>;

enum class Sign { Negative, Zero, Positive, Undecided };
std::string to_string(Sign s);

/// q_0 + sum_i q_i theta_i over a shared IrrationalBasis.
class GammaElement {
public:
    GammaElement(BasisPtr basis, RatVec coords);
    static GammaElement rational(BasisPtr basis, const Rat& q);

    const BasisPtr& basis() const { return basis_; }
    const RatVec& coords() const { return coords_; }
    bool is_zero() const { return valuniform::is_zero(coords_); }

    GammaElement operator+(const GammaElement& o) const;
    GammaElement operator-(const GammaElement& o) const;
    GammaElement operator-() const;
    GammaElement operator*(const Rat& c) const;
    bool operator==(const GammaElement& o) const { return basis_ == o.basis_ && coords_ == o.coords_; }

    // Interval enclosure where each irrational is known to within eps.
    RatInterval enclose(const Rat& eps) const;
    std::string to_string() const;

private:
    void check_same(const GammaElement& o) const;
    BasisPtr basis_;
    RatVec coords_;
};

// Default stopping width for sign refinement: VALUNIFORM_PRECISION
// (a rational such as "1/1000000") or 2^-256.
Rat default_max_precision();

// Sign of g by interval refinement. Undecided only when intervals of width
// max_precision still straddle zero, which contradicts the independence
// declaration. Throws if the basis has no independence declaration.
Sign gamma_sign(const GammaElement& g, const Rat& max_precision = default_max_precision());

}  // namespace valuniform
