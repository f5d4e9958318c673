#pragma once

// JSON encodings. Rationals are "num/den" strings (integers without the
// slash), valuations are additive, objects have sorted keys.

#include "valuniform/exactval.hpp"
#include "valuniform/fanlab.hpp"
#include "valuniform/linalg.hpp"
#include "valuniform/newton.hpp"
#include "valuniform/toricmonoid.hpp"
#include "valuniform/uniformizer.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace valuniform {

using json = nlohmann::json;

Rat rat_from_json(const json& j);
json to_json(const Rat& q);
json to_json(const Valuation& v);
IntVec intvec_from_json(const json& j);
IntMat intmat_from_json(const json& j);
json to_json(const IntVec& v);
json to_json(const IntMat& m);

// "c0,c1,...,cd" with a_0 first.
std::vector<Rat> parse_rational_list(const std::string& text);

// Series text: "-t^-1 + 2*t^(1/2) + 1 + O(t^3)", or the list form
// [[exponent, coefficient], ...]. Coefficients are integers reduced mod p.
struct SeriesTerms {
    std::map<Rat, long> terms;
    std::optional<Rat> truncation;
    Int min_cap() const;  // lcm of exponent denominators
};
SeriesTerms parse_series_terms(const std::string& text);
SeriesTerms series_terms_from_json(const json& j);
// Splits "a, b, c" at top-level commas.
std::vector<std::string> split_top_level(const std::string& text, char sep);
SeriesPoly make_series_poly(const std::vector<SeriesTerms>& coeffs, unsigned long prime, Int cap);
json to_json(const TruncatedPuiseux& x);

// Gamma elements: {"basis": [names], "coords": [q0, q1, ...]}; inside a
// weight file entries may also be rationals, coordinate arrays, or
// expressions such as "1 - 2*sqrt2".
GammaElement gamma_from_json(const json& j, const BasisPtr& basis);
GammaElement parse_gamma_expr(const std::string& text, const BasisPtr& basis);
json to_json(const GammaElement& g);
json to_json(const LexValue& v);

WeightMatrix weights_from_json(const json& j);
json to_json(const WeightMatrix& w);

ToricMonoid monoid_from_json(const json& j);
json to_json(const ToricMonoid& m);

Fan fan_from_json(const json& j);
json to_json(const Fan& f);  // maximal cones only

json certificate_to_json(const FreeCoverCertificate& c, const WeightMatrix& w);
FreeCoverCertificate certificate_from_json(const json& j, const BasisPtr& basis);

// Reads a file, or parses the argument itself when it starts with '{' or '['.
json load_json_arg(const std::string& arg);

}  // namespace valuniform
