#include "valuniform/json_io.hpp"

#include "valuniform/errors.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

namespace valuniform {

namespace {

std::string normalize(const std::string& raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (i + 2 < raw.size() && static_cast<unsigned char>(raw[i]) == 0xE2 &&
            static_cast<unsigned char>(raw[i + 1]) == 0x88 && static_cast<unsigned char>(raw[i + 2]) == 0x92) {
            out.push_back('-');
            i += 2;
        } else if (!std::isspace(static_cast<unsigned char>(raw[i]))) {
            out.push_back(raw[i]);
        }
    }
    return out;
}

// Splits a normalized expression into signed terms at top-level + and -.
std::vector<std::string> signed_terms(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        bool split = depth == 0 && (c == '+' || c == '-') && i > 0 && s[i - 1] != '^' && s[i - 1] != '*' &&
                     s[i - 1] != '/';
        if (split) {
            out.push_back(cur);
            cur.clear();
        }
        cur.push_back(c);
    }
    if (depth != 0) throw precondition("bad-expression", "unbalanced parentheses in '" + s + "'");
    out.push_back(cur);
    return out;
}

std::string strip_parens(std::string s) {
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') return s.substr(1, s.size() - 2);
    return s;
}

long coefficient_from(const std::string& raw) {
    std::string c = raw;
    if (!c.empty() && c.back() == '*') c.pop_back();
    if (c.empty() || c == "+") return 1;
    if (c == "-") return -1;
    Rat q = parse_rat(c);
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw precondition("bad-series", "series coefficients must be machine integers, got '" + raw + "'");
    return q.get_num().get_si();
}

}  // namespace

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(Int(j.dump()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw precondition("bad-rational", "expected an integer or a \"num/den\" string, got " + j.dump());
}

json to_json(const Rat& q) { return q.get_str(); }

json to_json(const Valuation& v) { return v.to_string(); }

IntVec intvec_from_json(const json& j) {
    if (!j.is_array()) throw precondition("bad-vector", "expected an array of integers, got " + j.dump());
    IntVec out;
    for (const auto& x : j) {
        Rat q = rat_from_json(x);
        if (q.get_den() != 1) throw precondition("bad-vector", "expected integer entries, got " + j.dump());
        out.push_back(q.get_num());
    }
    return out;
}

IntMat intmat_from_json(const json& j) {
    if (!j.is_array()) throw precondition("bad-matrix", "expected an array of integer vectors");
    IntMat out;
    for (const auto& r : j) out.push_back(intvec_from_json(r));
    return out;
}

json to_json(const IntVec& v) {
    json out = json::array();
    for (const auto& x : v) {
        if (x.fits_slong_p())
            out.push_back(x.get_si());
        else
            out.push_back(x.get_str());
    }
    return out;
}

json to_json(const IntMat& m) {
    json out = json::array();
    for (const auto& r : m) out.push_back(to_json(r));
    return out;
}

std::vector<std::string> split_top_level(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Rat> parse_rational_list(const std::string& text) {
    std::vector<Rat> out;
    for (const auto& part : split_top_level(text, ',')) out.push_back(parse_rat(part));
    return out;
}

Int SeriesTerms::min_cap() const {
    Int cap = 1;
    for (const auto& [e, c] : terms) cap = lcm(cap, Int(e.get_den()));
    if (truncation) cap = lcm(cap, Int(truncation->get_den()));
    return cap;
}

SeriesTerms parse_series_terms(const std::string& raw) {
    const std::string s = normalize(raw);
    if (s.empty()) throw precondition("bad-series", "empty series expression");
    SeriesTerms out;
    for (std::string term : signed_terms(s)) {
        bool negative = false;
        if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
            negative = term[0] == '-';
            term.erase(0, 1);
        }
        if (term.rfind("O(", 0) == 0 && term.back() == ')') {
            std::string inner = term.substr(2, term.size() - 3);
            if (inner.rfind("t^", 0) != 0) throw precondition("bad-series", "expected O(t^e) in '" + raw + "'");
            out.truncation = parse_rat(strip_parens(inner.substr(2)));
            continue;
        }
        auto tpos = term.find('t');
        long coef;
        Rat exponent = 0;
        if (tpos == std::string::npos) {
            coef = coefficient_from(term);
        } else {
            coef = coefficient_from(term.substr(0, tpos));
            std::string rest = term.substr(tpos + 1);
            if (rest.empty())
                exponent = 1;
            else if (rest[0] == '^')
                exponent = parse_rat(strip_parens(rest.substr(1)));
            else
                throw precondition("bad-series", "unexpected text after t in '" + raw + "'");
        }
        out.terms[exponent] += negative ? -coef : coef;
    }
    return out;
}

SeriesTerms series_terms_from_json(const json& j) {
    if (j.is_string()) return parse_series_terms(j.get<std::string>());
    if (j.is_number_integer()) return parse_series_terms(j.dump());
    if (j.is_object()) {
        SeriesTerms out = series_terms_from_json(j.at("terms"));
        if (j.contains("truncation") && !j.at("truncation").is_null()) out.truncation = rat_from_json(j.at("truncation"));
        return out;
    }
    if (!j.is_array()) throw precondition("bad-series", "series must be a string or [[exponent, coefficient], ...]");
    SeriesTerms out;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2)
            throw precondition("bad-series", "series terms are [exponent, coefficient] pairs");
        Rat c = rat_from_json(pair[1]);
        if (c.get_den() != 1 || !c.get_num().fits_slong_p())
            throw precondition("bad-series", "series coefficients must be machine integers");
        out.terms[rat_from_json(pair[0])] += c.get_num().get_si();
    }
    return out;
}

SeriesPoly make_series_poly(const std::vector<SeriesTerms>& coeffs, unsigned long prime, Int cap) {
    if (!is_prime(Int(prime))) throw precondition("bad-prime", "series characteristic must be prime");
    for (const auto& c : coeffs) cap = lcm(cap, c.min_cap());
    std::vector<TruncatedPuiseux> cs;
    for (const auto& c : coeffs) cs.emplace_back(prime, cap, c.terms, c.truncation);
    if (cs.empty()) throw precondition("bad-polynomial", "empty coefficient list");
    return SeriesPoly(cs, cs[0].zero());
}

json to_json(const TruncatedPuiseux& x) {
    json terms = json::array();
    for (const auto& [e, c] : x.terms()) terms.push_back(json::array({e.get_str(), c}));
    json out = {{"terms", terms}, {"text", x.to_string()}};
    out["truncation"] = x.truncation() ? json(x.truncation()->get_str()) : json(nullptr);
    return out;
}

GammaElement parse_gamma_expr(const std::string& raw, const BasisPtr& basis) {
    const std::string s = normalize(raw);
    if (s.empty()) throw precondition("bad-gamma", "empty gamma expression");
    RatVec coords(basis->size() + 1, Rat(0));
    const auto& symbols = basis->symbols();
    for (std::string term : signed_terms(s)) {
        Rat sign = 1;
        if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
            if (term[0] == '-') sign = -1;
            term.erase(0, 1);
        }
        std::string number = term, symbol;
        auto star = term.find('*');
        if (star != std::string::npos) {
            number = term.substr(0, star);
            symbol = term.substr(star + 1);
        } else if (!term.empty() && std::isalpha(static_cast<unsigned char>(term[0]))) {
            number = "1";
            symbol = term;
        }
        Rat q = sign * parse_rat(strip_parens(number));
        if (symbol.empty()) {
            coords[0] += q;
            continue;
        }
        auto it = std::find(symbols.begin(), symbols.end(), symbol);
        if (it == symbols.end()) throw precondition("bad-gamma", "unknown irrational '" + symbol + "'");
        coords[static_cast<std::size_t>(it - symbols.begin()) + 1] += q;
    }
    return GammaElement(basis, coords);
}

GammaElement gamma_from_json(const json& j, const BasisPtr& basis) {
    if (j.is_number_integer() || j.is_string()) return parse_gamma_expr(j.is_string() ? j.get<std::string>() : j.dump(), basis);
    if (j.is_array()) {
        RatVec coords;
        for (const auto& x : j) coords.push_back(rat_from_json(x));
        return GammaElement(basis, coords);
    }
    if (j.is_object()) {
        std::vector<std::string> names = j.at("basis").get<std::vector<std::string>>();
        if (names != basis->symbols()) throw precondition("mixed-basis", "gamma element uses a different basis");
        return gamma_from_json(j.at("coords"), basis);
    }
    throw precondition("bad-gamma", "unrecognized gamma element " + j.dump());
}

json to_json(const GammaElement& g) {
    json coords = json::array();
    for (const auto& q : g.coords()) coords.push_back(q.get_str());
    return {{"basis", g.basis()->symbols()}, {"coords", coords}};
}

json to_json(const LexValue& v) {
    json out = json::array();
    for (const auto& g : v) out.push_back(to_json(g));
    return out;
}

WeightMatrix weights_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows")) throw precondition("bad-weights", "weights need a \"rows\" array");
    std::vector<std::string> names;
    if (j.contains("basis")) names = j.at("basis").get<std::vector<std::string>>();
    bool independent = j.value("independent", true);
    BasisPtr basis = names.empty() && independent ? IrrationalBasis::empty() : IrrationalBasis::from_names(names, independent);
    const json& rows = j.at("rows");
    if (!rows.is_array() || rows.empty()) throw precondition("bad-weights", "weights need at least one row");
    std::vector<std::vector<GammaElement>> out;
    for (const auto& row : rows) {
        if (!row.is_array()) throw precondition("bad-weights", "each weight row must be an array");
        std::vector<GammaElement> r;
        for (const auto& e : row) r.push_back(gamma_from_json(e, basis));
        out.push_back(std::move(r));
    }
    std::size_t n = out[0].size();
    if (j.contains("rank") && j.at("rank").get<std::size_t>() != n)
        throw precondition("dimension-mismatch", "weight rows do not match the declared rank");
    return WeightMatrix(n, std::move(out));
}

json to_json(const WeightMatrix& w) {
    json rows = json::array();
    for (const auto& row : w.rows()) {
        json r = json::array();
        for (const auto& g : row) {
            json coords = json::array();
            for (const auto& q : g.coords()) coords.push_back(q.get_str());
            r.push_back(coords);
        }
        rows.push_back(r);
    }
    return {{"basis", w.basis()->symbols()}, {"independent", w.basis()->independent()}, {"rows", rows}};
}

ToricMonoid monoid_from_json(const json& j) {
    if (!j.is_object() || !j.contains("generators"))
        throw precondition("bad-monoid", "monoid needs {rank, generators}");
    IntMat gens = intmat_from_json(j.at("generators"));
    std::size_t rank;
    if (j.contains("rank"))
        rank = j.at("rank").get<std::size_t>();
    else if (!gens.empty())
        rank = gens[0].size();
    else
        throw precondition("bad-monoid", "empty monoid needs an explicit rank");
    return ToricMonoid(rank, gens);
}

json to_json(const ToricMonoid& m) {
    return {{"rank", m.ambient_rank()}, {"generators", to_json(m.generators())}};
}

Fan fan_from_json(const json& j) {
    if (!j.is_object() || !j.contains("cones")) throw precondition("bad-fan", "fan needs {ambient_rank, cones}");
    std::vector<IntMat> cones;
    for (const auto& c : j.at("cones")) {
        if (c.is_object())
            cones.push_back(intmat_from_json(c.at("rays")));
        else
            cones.push_back(intmat_from_json(c));
    }
    std::size_t n;
    if (j.contains("ambient_rank"))
        n = j.at("ambient_rank").get<std::size_t>();
    else
        throw precondition("bad-fan", "fan needs ambient_rank");
    return Fan(n, cones);
}

json to_json(const Fan& f) {
    json cones = json::array();
    for (const auto& c : f.maximal_cones()) cones.push_back({{"rays", to_json(f.cone_rays(c))}});
    return {{"ambient_rank", f.ambient()}, {"cones", cones}};
}

namespace {
std::string flag(bool b) { return b ? "passed" : "failed"; }
bool unflag(const json& j) {
    std::string s = j.get<std::string>();
    if (s == "passed") return true;
    if (s == "failed") return false;
    throw precondition("bad-certificate", "check values must be \"passed\" or \"failed\"");
}
}  // namespace

json certificate_to_json(const FreeCoverCertificate& c, const WeightMatrix& w) {
    json values = json::array();
    for (const auto& v : c.values) values.push_back(to_json(v));
    return {{"kind", "free_cover"},
            {"input", {{"weights", to_json(w)}, {"set", to_json(c.set)}}},
            {"basis", to_json(c.basis)},
            {"values", values},
            {"coordinates", to_json(c.coordinates)},
            {"det", c.det.get_str()},
            {"checks", {{"det", flag(c.det_check)}, {"membership", flag(c.membership_check)},
                        {"coverage", flag(c.coverage_check)}}}};
}

FreeCoverCertificate certificate_from_json(const json& j, const BasisPtr& basis) {
    FreeCoverCertificate c;
    c.set = intmat_from_json(j.at("input").at("set"));
    c.basis = intmat_from_json(j.at("basis"));
    c.coordinates = intmat_from_json(j.at("coordinates"));
    for (const auto& v : j.at("values")) {
        LexValue lv;
        for (const auto& g : v) lv.push_back(gamma_from_json(g, basis));
        c.values.push_back(std::move(lv));
    }
    Rat d = rat_from_json(j.at("det"));
    if (d.get_den() != 1) throw precondition("bad-certificate", "det must be an integer");
    c.det = d.get_num();
    const json& checks = j.at("checks");
    c.det_check = unflag(checks.at("det"));
    c.membership_check = unflag(checks.at("membership"));
    c.coverage_check = unflag(checks.at("coverage"));
    return c;
}

json load_json_arg(const std::string& arg) {
    std::string text;
    std::size_t first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
        text = arg;
    } else {
        std::ifstream in(arg);
        if (!in) throw precondition("missing-file", "cannot read '" + arg + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw precondition("bad-json", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace valuniform
