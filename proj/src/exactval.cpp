#include "valuniform/exactval.hpp"

#include "valuniform/errors.hpp"

#include <cstdlib>
#include <sstream>

namespace valuniform {

std::string Valuation::to_string() const {
    switch (kind_) {
        case Kind::Finite: return value_.get_str();
        case Kind::Infinite: return "+inf";
        case Kind::AtLeast: return ">=" + value_.get_str();
    }
    return {};
}

bool is_prime(const Int& n) {
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

long padic_order(const Int& n, const Int& p) {
    if (n == 0) throw precondition("zero", "padic_order of zero");
    Int m = abs(n);
    long k = 0;
    while (m % p == 0) {
        m /= p;
        ++k;
    }
    return k;
}

// ---------------------------------------------------------------- PAdicRational

PAdicRational::PAdicRational(Rat value, Int prime) : value_(std::move(value)), prime_(std::move(prime)) {
    value_.canonicalize();
    if (!is_prime(prime_)) throw precondition("not-prime", prime_.get_str() + " is not prime");
}

Valuation PAdicRational::valuation() const {
    if (value_ == 0) return Valuation::infinity();
    return Valuation::finite(Rat(padic_order(value_.get_num(), prime_) - padic_order(value_.get_den(), prime_)));
}

void PAdicRational::check_same(const PAdicRational& o) const {
    if (prime_ != o.prime_) throw precondition("mixed-base", "p-adic scalars over different primes");
}

PAdicRational PAdicRational::operator+(const PAdicRational& o) const {
    check_same(o);
    return PAdicRational(value_ + o.value_, prime_, Unchecked{});
}

PAdicRational PAdicRational::operator-(const PAdicRational& o) const {
    check_same(o);
    return PAdicRational(value_ - o.value_, prime_, Unchecked{});
}

PAdicRational PAdicRational::operator*(const PAdicRational& o) const {
    check_same(o);
    return PAdicRational(value_ * o.value_, prime_, Unchecked{});
}

PAdicRational PAdicRational::operator/(const PAdicRational& o) const {
    check_same(o);
    if (o.value_ == 0) throw precondition("division-by-zero", "division by zero");
    return PAdicRational(value_ / o.value_, prime_, Unchecked{});
}

// ------------------------------------------------------------- TruncatedPuiseux

namespace {

unsigned long mod_p(long c, unsigned long p) {
    long r = c % static_cast<long>(p);
    if (r < 0) r += static_cast<long>(p);
    return static_cast<unsigned long>(r);
}

unsigned long inv_mod(unsigned long a, unsigned long p) {
    Int r;
    Int aa(a), pp(p);
    mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), pp.get_mpz_t());
    return r.get_ui();
}

std::optional<Rat> min_trunc(const std::optional<Rat>& a, const std::optional<Rat>& b) {
    if (!a) return b;
    if (!b) return a;
    return *a < *b ? a : b;
}

}  // namespace

TruncatedPuiseux::TruncatedPuiseux(unsigned long prime, Int cap, const std::map<Rat, long>& terms,
                                   std::optional<Rat> truncation)
    : prime_(prime), cap_(std::move(cap)), truncation_(std::move(truncation)) {
    if (!is_prime(Int(prime_))) throw precondition("not-prime", std::to_string(prime_) + " is not prime");
    if (cap_ <= 0) throw precondition("ramification-cap", "ramification cap must be positive");
    for (const auto& [e, c] : terms) {
        unsigned long r = mod_p(c, prime_);
        if (r != 0) terms_[e] = r;
    }
    normalize();
}

TruncatedPuiseux::TruncatedPuiseux(unsigned long prime, Int cap, Terms terms, std::optional<Rat> truncation)
    : prime_(prime), cap_(std::move(cap)), terms_(std::move(terms)), truncation_(std::move(truncation)) {
    normalize();
}

void TruncatedPuiseux::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (cap_ % Int(it->first.get_den()) != 0)
            throw precondition("ramification-cap", "exponent " + it->first.get_str() +
                                                       " exceeds ramification cap " + cap_.get_str());
        if (it->second % prime_ == 0 || (truncation_ && it->first >= *truncation_))
            it = terms_.erase(it);
        else {
            it->second %= prime_;
            ++it;
        }
    }
}

TruncatedPuiseux TruncatedPuiseux::monomial(unsigned long prime, Int cap, long coefficient, Rat exponent) {
    return TruncatedPuiseux(prime, std::move(cap), std::map<Rat, long>{{std::move(exponent), coefficient}});
}

TruncatedPuiseux TruncatedPuiseux::from_int(long n) const {
    Terms t;
    unsigned long c = mod_p(n, prime_);
    if (c != 0) t[Rat(0)] = c;
    return TruncatedPuiseux(prime_, cap_, std::move(t), std::nullopt);
}

TruncatedPuiseux TruncatedPuiseux::with_cap(const Int& new_cap) const {
    if (new_cap <= 0 || new_cap % cap_ != 0)
        throw precondition("ramification-cap", "new cap must be a multiple of " + cap_.get_str());
    return TruncatedPuiseux(prime_, new_cap, terms_, truncation_);
}

Valuation TruncatedPuiseux::valuation() const {
    if (!terms_.empty()) return Valuation::finite(terms_.begin()->first);
    if (truncation_) return Valuation::at_least(*truncation_);
    return Valuation::infinity();
}

void TruncatedPuiseux::check_same(const TruncatedPuiseux& o) const {
    if (prime_ != o.prime_ || cap_ != o.cap_)
        throw precondition("mixed-base", "series over different ground fields or ramification caps");
}

TruncatedPuiseux TruncatedPuiseux::operator+(const TruncatedPuiseux& o) const {
    check_same(o);
    Terms t = terms_;
    for (const auto& [e, c] : o.terms_) t[e] = (t[e] + c) % prime_;
    return TruncatedPuiseux(prime_, cap_, std::move(t), min_trunc(truncation_, o.truncation_));
}

TruncatedPuiseux TruncatedPuiseux::operator-() const {
    Terms t;
    for (const auto& [e, c] : terms_) t[e] = prime_ - c;
    return TruncatedPuiseux(prime_, cap_, std::move(t), truncation_);
}

TruncatedPuiseux TruncatedPuiseux::operator-(const TruncatedPuiseux& o) const { return *this + (-o); }

TruncatedPuiseux TruncatedPuiseux::operator*(const TruncatedPuiseux& o) const {
    check_same(o);
    if (is_zero() || o.is_zero()) return zero();
    auto low = [](const TruncatedPuiseux& x) { return x.terms_.empty() ? *x.truncation_ : x.terms_.begin()->first; };
    std::optional<Rat> trunc;
    if (truncation_) trunc = *truncation_ + low(o);
    if (o.truncation_) trunc = min_trunc(trunc, *o.truncation_ + low(*this));
    Terms t;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Rat e = e1 + e2;
            if (trunc && e >= *trunc) continue;
            t[e] = (t[e] + c1 * c2) % prime_;
        }
    return TruncatedPuiseux(prime_, cap_, std::move(t), trunc);
}

bool TruncatedPuiseux::operator==(const TruncatedPuiseux& o) const {
    return prime_ == o.prime_ && cap_ == o.cap_ && terms_ == o.terms_ && truncation_ == o.truncation_;
}

TruncatedPuiseux TruncatedPuiseux::inverse(const Rat& relative_precision) const {
    if (is_zero()) throw precondition("division-by-zero", "inverse of zero series");
    if (terms_.empty())
        throw precision_error("below-truncation", "inverse of a series known only to be O(t^" +
                                                      truncation_->get_str() + ")");
    const Rat v = terms_.begin()->first;
    const unsigned long cinv = inv_mod(terms_.begin()->second, prime_);
    // this = c t^v (1 + u) with v(u) > 0
    Terms unit;
    for (const auto& [e, c] : terms_) unit[e - v] = (c * cinv) % prime_;
    unit.erase(Rat(0));
    Terms u;
    for (const auto& [e, c] : unit) u[e] = prime_ - c;  // -u
    std::optional<Rat> rel_trunc;
    if (truncation_) rel_trunc = *truncation_ - v;
    if (u.empty() && !rel_trunc) {
        Terms t{{-v, cinv}};
        return TruncatedPuiseux(prime_, cap_, std::move(t), std::nullopt);
    }
    Rat bound = relative_precision;
    if (rel_trunc && *rel_trunc < bound) bound = *rel_trunc;
    Terms sum{{Rat(0), 1}};
    Terms power{{Rat(0), 1}};
    while (!power.empty()) {
        Terms next;
        for (const auto& [e1, c1] : power)
            for (const auto& [e2, c2] : u) {
                Rat e = e1 + e2;
                if (e >= bound) continue;
                next[e] = (next[e] + c1 * c2) % prime_;
            }
        for (auto it = next.begin(); it != next.end();)
            it = it->second == 0 ? next.erase(it) : std::next(it);
        for (const auto& [e, c] : next) sum[e] = (sum[e] + c) % prime_;
        power = std::move(next);
    }
    Terms result;
    for (const auto& [e, c] : sum)
        if (c % prime_ != 0) result[e - v] = (c * cinv) % prime_;
    return TruncatedPuiseux(prime_, cap_, std::move(result), bound - v);
}

TruncatedPuiseux TruncatedPuiseux::pth_root() const {
    Terms t;
    Rat p(static_cast<unsigned long>(prime_));
    for (const auto& [e, c] : terms_) t[e / p] = c;  // Frobenius fixes F_p
    std::optional<Rat> trunc;
    if (truncation_) trunc = *truncation_ / p;
    return TruncatedPuiseux(prime_, cap_, std::move(t), trunc);
}

std::string TruncatedPuiseux::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        if (e != 0) os << "*t^(" << e.get_str() << ")";
    }
    if (truncation_) {
        if (!first) os << " + ";
        os << "O(t^(" << truncation_->get_str() << "))";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

// ------------------------------------------------------------------- oracles

namespace {

// Smallest k with 2^-k <= eps.
unsigned long dyadic_level(const Rat& eps) {
    if (eps <= 0) throw precondition("bad-precision", "oracle precision must be positive");
    unsigned long k = 0;
    Int num = eps.get_num(), den = eps.get_den();
    Int pow = 1;
    while (pow * num < den) {
        pow <<= 1;
        ++k;
    }
    return k;
}

Int pow2(unsigned long k) {
    Int r = 1;
    r <<= k;
    return r;
}

}  // namespace

IntervalOracle root_oracle(const Int& n, unsigned long k) {
    if (n <= 0 || k < 2) throw precondition("bad-oracle", "root oracle needs n > 0 and k >= 2");
    return [n, k](const Rat& eps) {
        unsigned long level = dyadic_level(eps);
        Int scaled = n;
        scaled <<= level * k;
        Int a;
        mpz_root(a.get_mpz_t(), scaled.get_mpz_t(), k);
        Int d = pow2(level);
        return RatInterval{make_rat(a, d), make_rat(a + 1, d)};
    };
}

IntervalOracle sqrt_oracle(const Int& n) { return root_oracle(n, 2); }

IntervalOracle golden_ratio_oracle() {
    auto s = sqrt_oracle(Int(5));
    return [s](const Rat& eps) {
        RatInterval r = s(eps);
        return RatInterval{(1 + r.lo) / 2, (1 + r.hi) / 2};
    };
}

// --------------------------------------------------------------- IrrationalBasis

IrrationalBasis::IrrationalBasis(std::vector<std::string> symbols, std::vector<IntervalOracle> oracles,
                                 bool independent, unsigned denominator_bound)
    : symbols_(std::move(symbols)), oracles_(std::move(oracles)), independent_(independent) {
    if (symbols_.size() != oracles_.size())
        throw precondition("bad-basis", "one oracle per symbol required");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        RatInterval prev = oracles_[i](Rat(1));
        for (unsigned long k : {8ul, 16ul, 32ul}) {
            RatInterval cur = oracles_[i](make_rat(1, pow2(k)));
            if (cur.lo < prev.lo || cur.hi > prev.hi || cur.width() > make_rat(1, pow2(k)))
                throw precondition("inconsistent-oracle", "oracle for " + symbols_[i] + " is not nested");
            prev = cur;
        }
        for (unsigned q = 1; q <= denominator_bound; ++q) {
            bool separated = false;
            for (unsigned long k = 4; k <= 512 && !separated; k += 4) {
                RatInterval r = oracles_[i](make_rat(1, pow2(k)));
                Int lo_q;
                Rat ql = r.lo * Rat(q), qh = r.hi * Rat(q);
                // some integer a with ql <= a <= qh ?
                Int ceil_lo = -floor_rat(-ql);
                separated = ceil_lo > floor_rat(qh);
            }
            if (!separated)
                throw precondition("inconsistent-oracle",
                                   symbols_[i] + " is not separated from rationals with denominator " +
                                       std::to_string(q));
        }
    }
}

std::shared_ptr<const IrrationalBasis> IrrationalBasis::from_names(const std::vector<std::string>& names,
                                                                   bool independent) {
    std::vector<IntervalOracle> oracles;
    for (const auto& name : names) {
        auto number = [&](std::size_t prefix) {
            std::string digits = name.substr(prefix);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw precondition("unknown-irrational", "unknown irrational '" + name + "'");
            return Int(digits);
        };
        if (name == "phi" || name == "golden")
            oracles.push_back(golden_ratio_oracle());
        else if (name.rfind("sqrt", 0) == 0)
            oracles.push_back(sqrt_oracle(number(4)));
        else if (name.rfind("cbrt", 0) == 0)
            oracles.push_back(root_oracle(number(4), 3));
        else
            throw precondition("unknown-irrational", "unknown irrational '" + name + "'");
    }
    return std::make_shared<const IrrationalBasis>(names, std::move(oracles), independent);
}

std::shared_ptr<const IrrationalBasis> IrrationalBasis::empty() {
    static const auto basis = std::make_shared<const IrrationalBasis>(
        std::vector<std::string>{}, std::vector<IntervalOracle>{}, true);
    return basis;
}

std::string to_string(Sign s) {
    switch (s) {
        case Sign::Negative: return "negative";
        case Sign::Zero: return "zero";
        case Sign::Positive: return "positive";
        case Sign::Undecided: return "undecided";
    }
    return {};
}

// ----------------------------------------------------------------- GammaElement

GammaElement::GammaElement(BasisPtr basis, RatVec coords) : basis_(std::move(basis)), coords_(std::move(coords)) {
    if (!basis_) throw precondition("bad-gamma", "missing irrational basis");
    if (coords_.size() != basis_->size() + 1)
        throw precondition("bad-gamma", "gamma element needs " + std::to_string(basis_->size() + 1) + " coordinates");
}

GammaElement GammaElement::rational(BasisPtr basis, const Rat& q) {
    RatVec c(basis->size() + 1, Rat(0));
    c[0] = q;
    return GammaElement(std::move(basis), std::move(c));
}

void GammaElement::check_same(const GammaElement& o) const {
    if (basis_ != o.basis_) throw precondition("mixed-basis", "gamma elements over different irrational bases");
}

GammaElement GammaElement::operator+(const GammaElement& o) const {
    check_same(o);
    RatVec c = coords_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coords_[i];
    return GammaElement(basis_, std::move(c));
}

GammaElement GammaElement::operator-(const GammaElement& o) const { return *this + (-o); }

GammaElement GammaElement::operator-() const { return *this * Rat(-1); }

GammaElement GammaElement::operator*(const Rat& k) const {
    RatVec c = coords_;
    for (auto& x : c) x *= k;
    return GammaElement(basis_, std::move(c));
}

RatInterval GammaElement::enclose(const Rat& eps) const {
    RatInterval r{coords_[0], coords_[0]};
    for (std::size_t i = 1; i < coords_.size(); ++i) {
        const Rat& q = coords_[i];
        if (q == 0) continue;
        RatInterval t = basis_->enclose(i - 1, eps);
        if (q > 0) {
            r.lo += q * t.lo;
            r.hi += q * t.hi;
        } else {
            r.lo += q * t.hi;
            r.hi += q * t.lo;
        }
    }
    return r;
}

std::string GammaElement::to_string() const {
    std::ostringstream os;
    os << coords_[0].get_str();
    for (std::size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) os << " + " << coords_[i].get_str() << "*" << basis_->symbols()[i - 1];
    return os.str();
}

Rat default_max_precision() {
    static const Rat value = [] {
        if (const char* env = std::getenv("VALUNIFORM_PRECISION")) {
            Rat r = parse_rat(env);
            if (r > 0) return r;
        }
        return make_rat(1, pow2(256));
    }();
    return value;
}

Sign gamma_sign(const GammaElement& g, const Rat& max_precision) {
    if (!g.basis()->independent())
        throw precondition("no-independence", "sign decisions need a declared Q-linearly independent basis");
    const RatVec& c = g.coords();
    Rat weight = 0;
    for (std::size_t i = 1; i < c.size(); ++i) weight += abs(c[i]);
    if (weight == 0) return c[0] > 0 ? Sign::Positive : (c[0] < 0 ? Sign::Negative : Sign::Zero);
    for (unsigned long k = 4;; k += 8) {
        Rat total = make_rat(1, pow2(k));
        RatInterval r = g.enclose(total / weight);
        if (r.lo > 0) return Sign::Positive;
        if (r.hi < 0) return Sign::Negative;
        if (total <= max_precision) return Sign::Undecided;
    }
}

}  // namespace valuniform
