#include "valuniform/cli.hpp"

#include "valuniform/errors.hpp"
#include "valuniform/krasner.hpp"
#include "valuniform/newton.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <mutex>
#include <thread>

namespace valuniform {

namespace {

// ------------------------------------------------------------------ helpers

// Valuations are additive; "absolute" display shows base^(-v) instead.
struct ValFmt {
    bool absolute = false;
    std::string base;

    json operator()(const Rat& v) const {
        if (!absolute) return v.get_str();
        if (v == 0) return "1";
        return base + "^(" + Rat(-v).get_str() + ")";
    }
    json operator()(const std::optional<Rat>& v) const { return v ? (*this)(*v) : json(nullptr); }
};

ValFmt fmt_from(const json& p) {
    ValFmt f;
    if (p.contains("display")) {
        const json& d = p.at("display");
        f.absolute = d.value("mode", std::string("additive")) == "absolute";
        if (d.contains("base")) f.base = d.at("base").is_string() ? d.at("base").get<std::string>() : d.at("base").dump();
        if (f.absolute && f.base.empty()) f.base = p.contains("prime") ? p.at("prime").dump() : "p";
    }
    return f;
}

std::string op_of(const json& p, const std::string& fallback) { return p.value("op", fallback); }

json multiset_json(const std::map<Rat, long>& m, const ValFmt& fmt) {
    json out = json::array();
    for (const auto& [v, k] : m) out.push_back({{"valuation", fmt(v)}, {"multiplicity", k}});
    return out;
}


// Coefficient lists: "c0,c1,..." or a JSON array.
std::vector<json> coefficient_items(const json& poly) {
    std::vector<json> items;
    if (poly.is_string()) {
        for (const auto& part : split_top_level(poly.get<std::string>(), ',')) items.emplace_back(part);
    } else if (poly.is_array()) {
        for (const auto& c : poly) items.push_back(c);
    } else {
        throw precondition("bad-polynomial", "poly must be a comma-separated string or an array");
    }
    if (items.empty()) throw precondition("bad-polynomial", "empty coefficient list");
    return items;
}

Int prime_of(const json& p) {
    if (!p.contains("prime")) throw precondition("missing-prime", "a prime is required");
    Rat q = rat_from_json(p.at("prime"));
    if (q.get_den() != 1 || !is_prime(q.get_num())) throw precondition("bad-prime", "prime must be a prime number");
    return q.get_num();
}

QPoly qpoly_of(const json& p) {
    std::vector<Rat> cs;
    for (const auto& c : coefficient_items(p.at("poly"))) cs.push_back(rat_from_json(c));
    return make_qpoly(cs, prime_of(p));
}

SeriesPoly series_poly_of(const json& p) {
    std::vector<SeriesTerms> cs;
    for (const auto& c : coefficient_items(p.at("poly"))) cs.push_back(series_terms_from_json(c));
    Int prime = prime_of(p);
    if (!prime.fits_ulong_p()) throw precondition("bad-prime", "series characteristic too large");
    Int cap = p.contains("cap") ? Int(rat_from_json(p.at("cap")).get_num()) : Int(1);
    if (cap < 1) throw precondition("bad-cap", "ramification cap must be positive");
    return make_series_poly(cs, prime.get_ui(), cap);
}

bool is_series(const json& p) { return p.value("series", false); }

template <class F>
json with_poly(const json& p, F&& fn) {
    if (!p.contains("poly")) throw precondition("missing-poly", "a polynomial is required");
    if (is_series(p)) return fn(series_poly_of(p));
    return fn(qpoly_of(p));
}

PAdicRational scalar_like(const QPoly& f, const json& x) { return PAdicRational(rat_from_json(x), f.prototype().prime()); }

TruncatedPuiseux scalar_like(const SeriesPoly& f, const json& x) {
    SeriesTerms t = series_terms_from_json(x);
    Int cap = lcm(f.prototype().ramification_cap(), t.min_cap());
    if (cap != f.prototype().ramification_cap())
        throw precondition("bad-scalar", "x needs a larger ramification than the polynomial's base");
    return TruncatedPuiseux(f.prototype().prime(), cap, t.terms, t.truncation);
}

Irreducibility claim_of(const json& p) {
    return p.value("assert_irreducible", false) ? Irreducibility::Asserted : Irreducibility::Unchecked;
}

// ------------------------------------------------------------------ newton

json newton_json(const NewtonPolygon& np, const ValFmt& fmt) {
    json vertices = json::array();
    for (const auto& [i, v] : np.vertices) vertices.push_back(json::array({i, v.get_str()}));
    json slopes = json::array();
    for (const auto& s : np.segments) slopes.push_back({{"slope", s.slope.get_str()}, {"length", s.length}});
    return {{"vertices", vertices},
            {"slopes", slopes},
            {"root_valuations", multiset_json(np.root_valuations(), fmt)},
            {"zero_order", np.zero_order},
            {"certified_precision", fmt(np.certified_precision)}};
}

json distances_json(const DistanceMultiset& d, const ValFmt& fmt) {
    return {{"entries", multiset_json(d.entries, fmt)},
            {"total", d.total()},
            {"certified_precision", fmt(d.certified_precision)}};
}

json exec_newton(const json& p) {
    const ValFmt fmt = fmt_from(p);
    const std::string op = op_of(p, "polygon");
    return with_poly(p, [&](const auto& f) -> json {
        if (op == "polygon") return newton_json(newton_polygon(f), fmt);
        if (op == "distances") return distances_json(pairwise_root_distances(f), fmt);
        if (op == "derivative") return {{"derivative_valuation", fmt(derivative_valuation_at_root(f, claim_of(p)))}};
        throw precondition("bad-op", "newton op must be polygon, distances or derivative");
    });
}

// ------------------------------------------------------------------ krasner

json exec_krasner(const json& p) {
    const ValFmt fmt = fmt_from(p);
    const std::string op = op_of(p, "data");
    if (op == "probe") {
        if (!is_series(p)) throw precondition("bad-op", "probe works over F_p((t)); pass a series polynomial");
        SeriesPoly f = series_poly_of(p);
        unsigned max_m = p.value("max_m", 3u), depth = p.value("depth", 8u);
        ProbeResult r = distance_to_field_probe(f, max_m, depth);
        json levels = json::array();
        for (const auto& l : r.levels) {
            json traj = json::array();
            for (const auto& v : l.trajectory) traj.push_back(fmt(v));
            levels.push_back({{"m", l.m},
                              {"best_valuation", fmt(l.best_valuation)},
                              {"trajectory", traj},
                              {"best_candidate", to_json(l.best_candidate)}});
        }
        return {{"levels", levels}, {"max_dist", fmt(r.max_dist)}};
    }
    return with_poly(p, [&](const auto& f) -> json {
        if (op == "critical") {
            // Only the distance multiset is needed.
            json radii = json::array();
            for (const auto& r : critical_radii(pairwise_root_distances(f))) radii.push_back(fmt(r));
            return {{"critical_radii", radii}};
        }
        auto data = krasner_data(f, claim_of(p));
        if (op == "data") {
            json out = {{"degree", f.degree()},
                        {"r_f", fmt(data.r_f)},
                        {"max_dist", fmt(data.max_dist)},
                        {"R_f", fmt(data.R_f)},
                        {"derivative_valuation", fmt(data.derivative_valuation)},
                        {"distances", distances_json(data.distances, fmt)}};
            if (p.contains("x")) {
                auto res = krasner_embed_test(data, scalar_like(f, p.at("x")));
                out["embed"] = {{"verdict", to_string(res.verdict)},
                                {"value", res.value.is_finite() ? fmt(res.value.value()) : to_json(res.value)},
                                {"threshold", fmt(res.threshold)}};
            }
            return out;
        }
        if (op == "classify") {
            if (!p.contains("radius")) throw precondition("missing-radius", "classify needs a radius");
            auto c = disc_classify(data, rat_from_json(p.at("radius")));
            return {{"radius", fmt(c.radius)},
                    {"verdict", to_string(c.verdict)},
                    {"splitting_field_degree", c.splitting_field_degree},
                    {"split_threshold", fmt(c.split_threshold)},
                    {"k_threshold", fmt(c.k_threshold)}};
        }
        throw precondition("bad-op", "krasner op must be data, classify, critical or probe");
    });
}

// ------------------------------------------------------------------ monoid

SaturationLattice lattice_of(const json& p) {
    std::string l = p.value("lattice", std::string("group"));
    if (l == "group") return SaturationLattice::Grothendieck;
    if (l == "ambient") return SaturationLattice::Ambient;
    throw precondition("bad-lattice", "lattice must be \"group\" or \"ambient\"");
}

json exec_monoid(const json& p) {
    const std::string op = op_of(p, "saturate");
    if (!p.contains("monoid")) throw precondition("missing-monoid", "a monoid is required");
    ToricMonoid m = monoid_from_json(p.at("monoid"));
    if (op == "saturate") {
        Saturation s = saturate(m, lattice_of(p));
        return {{"monoid", to_json(s.monoid)},
                {"units", to_json(s.units)},
                {"hilbert_basis", to_json(s.hilbert_basis)},
                {"input_was_saturated", s.input_was_saturated}};
    }
    if (op == "split") {
        SplitResult s = units_and_split(m);
        return {{"units", to_json(s.units)}, {"sharp", to_json(s.sharp)}, {"section", to_json(s.section)}};
    }
    if (op == "free") {
        FreenessReport r = freeness(m);
        return {{"simplex_shape", r.simplex_shape},
                {"free", r.free},
                {"rank", r.rank},
                {"extreme_ray_count", r.extreme_ray_count},
                {"edge_generators", to_json(r.edge_generators)},
                {"edge_index", r.edge_index.get_str()},
                {"applied_to_sharp_part", r.applied_to_sharp_part}};
    }
    if (op == "isogeny") {
        if (!p.contains("target")) throw precondition("missing-target", "isogeny needs a target monoid");
        ToricMonoid q = monoid_from_json(p.at("target"));
        IntMat map = p.contains("map") ? intmat_from_json(p.at("map")) : IntMat{};
        IsogenyWitness w = isogeny_rank(m, q, map);
        json inv = json::array();
        for (const auto& x : w.invariants) inv.push_back(x.get_str());
        return {{"rank", w.rank.get_str()},
                {"invariants", inv},
                {"unit_iso_check", w.unit_iso_check},
                {"saturation_check", w.saturation_check},
                {"isogeny", w.valid()}};
    }
    if (op == "chart") {
        std::size_t units = p.value("units", std::size_t{0});
        ChartMonoid c = chart_monoid(units, m);
        return {{"monoid", to_json(c.monoid)}, {"center_ideal", to_json(c.center_ideal)}};
    }
    if (op == "member") {
        Membership r = membership(m, intvec_from_json(p.at("vector")));
        return {{"inside", r.inside}, {"coefficients", r.coefficients}, {"bound", r.bound.get_str()}};
    }
    throw precondition("bad-op", "monoid op must be saturate, split, free, isogeny, chart or member");
}

// ------------------------------------------------------------------ fan

RaySet cone_in(const Fan& f, const json& rays) {
    auto c = f.find(intmat_from_json(rays));
    if (!c) throw precondition("not-a-cone", "the given rays do not span a cone of the fan");
    return *c;
}

json exec_fan(const json& p) {
    const std::string op = op_of(p, "check");
    if (!p.contains("fan")) throw precondition("missing-fan", "a fan is required");
    Fan f = fan_from_json(p.at("fan"));
    if (op == "check") {
        RegularityReport r = is_regular(f);
        json out = {{"valid", true},
                    {"complete", f.complete()},
                    {"regular", r.regular},
                    {"maximal_cones", f.maximal_cones().size()},
                    {"fan", to_json(f)}};
        if (!r.regular) {
            out["offending"] = to_json(f.cone_rays(*r.offending));
            out["reason"] = r.reason;
        }
        return out;
    }
    if (op == "refine") {
        Refinement r = regular_refine(f);
        json steps = json::array();
        Fan cur = f;
        for (const auto& s : r.steps) {
            steps.push_back({{"cone", to_json(cur.cone_rays(s.cone))}, {"ray", to_json(s.ray)}});
            cur = stellar_subdivide(cur, s.cone, s.ray);
        }
        const bool reg = is_regular(r.fan).regular, ref = refines(r.fan, f), sup = covers_support(r.fan, f);
        return {{"kind", "regular_refinement"},
                {"input", to_json(f)},
                {"output", to_json(r.fan)},
                {"steps", steps},
                {"maximal_cones", r.fan.maximal_cones().size()},
                {"checks", {{"regular", reg ? "passed" : "failed"},
                            {"refines", ref ? "passed" : "failed"},
                            {"support", sup ? "passed" : "failed"}}}};
    }
    if (op == "subdivide") {
        Fan g = stellar_subdivide(f, cone_in(f, p.at("cone")), intvec_from_json(p.at("ray")));
        return {{"fan", to_json(g)}, {"regular", is_regular(g).regular}};
    }
    if (op == "stalk") {
        RaySet c = p.contains("cone") ? cone_in(f, p.at("cone")) : RaySet{};
        ToricMonoid s = stalk(f, c);
        const auto& st = s.structure();
        IntMat units, hilbert;
        for (std::size_t i = 0; i < s.generators().size(); ++i)
            (st.unit_generator[i] ? units : hilbert).push_back(s.generators()[i]);
        return {{"monoid", to_json(s)}, {"hilbert_basis", to_json(hilbert)}, {"unit_generators", to_json(units)}};
    }
    if (op == "center") {
        if (!p.contains("weights")) throw precondition("missing-weights", "center needs weights");
        WeightMatrix w = weights_from_json(p.at("weights"));
        Center c = center_of_valuation(w, f);
        return {{"cone", to_json(f.cone_rays(c.cone))}, {"stalk", to_json(c.stalk)}};
    }
    throw precondition("bad-op", "fan op must be check, refine, subdivide, stalk or center");
}

// ------------------------------------------------------------------ uniformize / invariants

json exec_uniformize(const json& p) {
    if (!p.contains("weights") || !p.contains("set"))
        throw precondition("missing-input", "uniformize needs weights and set");
    WeightMatrix w = weights_from_json(p.at("weights"));
    const json& sj = p.at("set").is_object() ? p.at("set").at("set") : p.at("set");
    FreeCoverCertificate c = free_cover(intmat_from_json(sj), w);
    return certificate_to_json(c, w);
}

long long_of(const json& p, const char* key) {
    Rat q = rat_from_json(p.at(key));
    if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw precondition("invalid-input", std::string(key) + " must be an integer");
    return q.get_num().get_si();
}

json exec_invariants(const json& p) {
    json out = json::object();
    if (p.contains("E") || p.contains("F")) {
        InvariantReport r = invariant_report(long_of(p, "n"), long_of(p, "E"), long_of(p, "F"));
        out["report"] = {{"n", r.n}, {"E", r.E}, {"F", r.F}, {"D", r.D}, {"abhyankar", r.abhyankar},
                         {"F_status", "declared"}};
    }
    if (p.contains("e") || p.contains("f")) out["defect"] = defect(long_of(p, "n"), long_of(p, "e"), long_of(p, "f"));
    if (p.contains("values")) {
        std::vector<std::string> names = p.value("basis", std::vector<std::string>{});
        BasisPtr basis = names.empty() ? IrrationalBasis::empty() : IrrationalBasis::from_names(names);
        std::vector<GammaElement> values, base;
        for (const auto& v : p.at("values")) values.push_back(gamma_from_json(v, basis));
        if (p.contains("base"))
            for (const auto& v : p.at("base")) base.push_back(gamma_from_json(v, basis));
        out["rational_rank"] = rational_rank(values, base);
        if (p.contains("n")) {
            std::vector<bool> flags = p.value("residues", std::vector<bool>{});
            StarCheck s = star_check(values, base, flags, long_of(p, "n"));
            out["star"] = {{"holds", s.holds}, {"abhyankar_basis", s.abhyankar_basis},
                           {"value_rank", s.value_rank}, {"residues", "declared"}};
        }
    }
    if (p.contains("weights")) out["rz_height"] = rz_height(weights_from_json(p.at("weights")));
    if (out.empty()) throw precondition("invalid-input", "invariants needs (n,E,F), (n,e,f), values or weights");
    return out;
}

}  // namespace

json execute(const std::string& kind, const json& payload) {
    if (!payload.is_object()) throw precondition("bad-payload", "payload must be a JSON object");
    if (kind == "newton") return exec_newton(payload);
    if (kind == "krasner") return exec_krasner(payload);
    if (kind == "monoid") return exec_monoid(payload);
    if (kind == "fan") return exec_fan(payload);
    if (kind == "uniformize") return exec_uniformize(payload);
    if (kind == "invariants") return exec_invariants(payload);
    throw precondition("bad-kind", "unknown problem kind '" + kind + "'");
}

// ------------------------------------------------------------------ verify

namespace {

std::string flag(bool b) { return b ? "passed" : "failed"; }

json verify_free_cover(const json& j) {
    WeightMatrix w = weights_from_json(j.at("input").at("weights"));
    IntMat set = intmat_from_json(j.at("input").at("set"));
    FreeCoverCertificate cert = certificate_from_json(j, w.basis());
    CertificateCheck c = verify_certificate(set, w, cert);
    const bool canonical = certificate_to_json(cert, w) == j;
    json checks = {{"det", flag(c.det)},           {"membership", flag(c.membership)},
                   {"coverage", flag(c.coverage)}, {"values", flag(c.values)},
                   {"recorded", flag(c.recorded)}, {"canonical", flag(canonical)}};
    return {{"kind", "free_cover"}, {"checks", checks}, {"valid", c.ok() && canonical}};
}

json verify_refinement(const json& j) {
    Fan input = fan_from_json(j.at("input"));
    Fan output = fan_from_json(j.at("output"));
    const bool reg = is_regular(output).regular, ref = refines(output, input), sup = covers_support(output, input);
    // Replay the recorded subdivisions from the input.
    bool replay = true;
    json steps = json::array();
    Fan cur = input;
    try {
        for (const auto& s : j.at("steps")) {
            auto cone = cur.find(intmat_from_json(s.at("cone")));
            if (!cone) {
                replay = false;
                break;
            }
            IntVec ray = intvec_from_json(s.at("ray"));
            steps.push_back({{"cone", to_json(cur.cone_rays(*cone))}, {"ray", to_json(ray)}});
            cur = stellar_subdivide(cur, *cone, ray);
        }
    } catch (const Error&) {
        replay = false;
    }
    replay = replay && to_json(cur) == to_json(output);
    json rebuilt = {{"kind", "regular_refinement"},
                    {"input", to_json(input)},
                    {"output", to_json(output)},
                    {"steps", steps},
                    {"maximal_cones", output.maximal_cones().size()},
                    {"checks", {{"regular", flag(reg)}, {"refines", flag(ref)}, {"support", flag(sup)}}}};
    const bool canonical = rebuilt == j;
    json checks = {{"regular", flag(reg)},   {"refines", flag(ref)},         {"support", flag(sup)},
                   {"replay", flag(replay)}, {"canonical", flag(canonical)}};
    return {{"kind", "regular_refinement"}, {"checks", checks}, {"valid", reg && ref && sup && replay && canonical}};
}

}  // namespace

json verify_certificate_json(const json& j) {
    std::string kind = j.is_object() && j.contains("kind") && j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    try {
        if (kind == "free_cover") return verify_free_cover(j);
        if (kind == "regular_refinement") return verify_refinement(j);
        return {{"kind", kind}, {"checks", {{"kind", "failed"}}}, {"valid", false}};
    } catch (const std::exception& e) {
        return {{"kind", kind}, {"checks", {{"parse", "failed"}}}, {"valid", false}, {"message", e.what()}};
    }
}

json error_json(const std::exception& e) {
    std::string kind = "precondition", code = "bad-input";
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        code = err->code();
        switch (err->kind()) {
            case ErrorKind::Precondition: kind = "precondition"; break;
            case ErrorKind::Precision: kind = "precision"; break;
            case ErrorKind::IterationCap: kind = "iteration-cap"; break;
        }
    }
    json out = {{"error", {{"kind", kind}, {"code", code}, {"message", e.what()}}}};
    if (const auto* cap = dynamic_cast<const RefinementCapError*>(&e)) out["error"]["partial_fan"] = to_json(cap->partial());
    return out;
}

int exit_code_for(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) return err->kind() == ErrorKind::Precondition ? 2 : 3;
    return 2;
}

// ------------------------------------------------------------------ corpus

namespace {

bool matches(const json& expected, const json& actual) {
    if (expected.is_object()) {
        if (!actual.is_object()) return false;
        for (const auto& [k, v] : expected.items())
            if (!actual.contains(k) || !matches(v, actual.at(k))) return false;
        return true;
    }
    return expected == actual;
}

struct FixtureOutcome {
    std::string name;
    std::string description;
    bool passed = false;
    std::string detail;
};

FixtureOutcome run_fixture(const std::filesystem::path& path) {
    FixtureOutcome o;
    o.name = path.filename().string();
    json fixture;
    try {
        fixture = load_json_arg(path.string());
        const json meta = fixture.value("meta", json::object());
        o.description = meta.value("description", std::string());
        json result;
        try {
            result = execute(fixture.at("kind").get<std::string>(), fixture.at("payload"));
        } catch (const std::exception& e) {
            result = error_json(e);
        }
        if (!meta.contains("expected")) {
            o.passed = !result.contains("error");
            if (!o.passed) o.detail = result.dump();
        } else {
            o.passed = matches(meta.at("expected"), result);
            if (!o.passed) o.detail = "got " + result.dump();
        }
    } catch (const std::exception& e) {
        o.detail = std::string("malformed fixture: ") + e.what();
    }
    return o;
}

}  // namespace

int run_corpus(const std::string& dir, unsigned jobs, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        out << error_json(precondition("missing-fixtures", "fixture directory '" + dir + "' not found")).dump(2) << "\n";
        return 2;
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        err << "warning: no fixtures in " << dir << "\n";
        out << "0 fixtures\n";
        return 0;
    }
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<FixtureOutcome> outcomes(files.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, files.size()); ++t)
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < files.size(); i = next++) outcomes[i] = run_fixture(files[i]);
        });
    for (auto& w : workers) w.join();
    std::size_t passed = 0;
    for (const auto& o : outcomes) {
        out << (o.passed ? "PASS  " : "FAIL  ") << o.name;
        if (!o.description.empty()) out << "  " << o.description;
        out << "\n";
        if (!o.passed) out << "      " << o.detail << "\n";
        passed += o.passed;
    }
    out << outcomes.size() << " fixtures, " << passed << " passed, " << outcomes.size() - passed << " failed\n";
    return passed == outcomes.size() ? 0 : 1;
}

// ------------------------------------------------------------------ run

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"valuniform: valuations, Newton polygons, Krasner discs, toric monoids, fans, free covers"};
    app.require_subcommand(1);

    // Shared option storage.
    std::string prime, poly, cap, display = "additive", base, radius, x, input, target, map, weights, set, cone, ray,
                                  vector_arg, certificate, values, lattice = "group", dir = "fixtures", problem;
    bool series = false, irreducible = false;
    unsigned depth = 8, max_m = 3, jobs = 0;
    std::size_t units = 0;
    std::optional<long> n, E, F, e, f;

    auto poly_options = [&](CLI::App* s) {
        s->add_option("--prime", prime, "prime p (base field Q with v_p, or F_p((t)) with --series)")->required();
        s->add_option("--poly", poly, "coefficients a_0,...,a_d")->required();
        s->add_flag("--series", series, "coefficients are series in t over F_p");
        s->add_option("--cap", cap, "ramification cap N for series exponents");
        s->add_option("--display", display, "additive (default) or absolute");
        s->add_option("--base", base, "base of the absolute value in --display absolute");
        s->add_flag("--assert-irreducible", irreducible, "assert f irreducible over the henselian base");
    };

    auto* newton = app.add_subcommand("newton", "Newton polygon and root valuations");
    poly_options(newton);
    auto* distances = app.add_subcommand("distances", "pairwise root-distance multiset");
    poly_options(distances);

    auto* krasner = app.add_subcommand("krasner", "Krasner radii, disc classification, probe");
    krasner->require_subcommand(1);
    std::map<std::string, CLI::App*> ksubs;
    for (const char* name : {"data", "classify", "critical", "probe"}) {
        auto* s = krasner->add_subcommand(name);
        poly_options(s);
        ksubs[name] = s;
    }
    ksubs["data"]->add_option("--x", x, "embed test point");
    ksubs["classify"]->add_option("--radius", radius, "radius as a valuation num/den")->required();
    ksubs["probe"]->add_option("--depth", depth, "expansion depth");
    ksubs["probe"]->add_option("--max-m", max_m, "largest ramification exponent m");

    auto* monoid = app.add_subcommand("monoid", "toric monoids");
    monoid->require_subcommand(1);
    std::map<std::string, CLI::App*> msubs;
    for (const char* name : {"saturate", "split", "free", "isogeny", "chart", "member"}) {
        auto* s = monoid->add_subcommand(name);
        s->add_option("--input", input, "monoid JSON file or inline JSON")->required();
        msubs[name] = s;
    }
    msubs["saturate"]->add_option("--lattice", lattice, "group (default) or ambient");
    msubs["isogeny"]->add_option("--target", target, "target monoid")->required();
    msubs["isogeny"]->add_option("--map", map, "matrix: row i is the image of e_i");
    msubs["chart"]->add_option("--units", units, "number of unit coordinates");
    msubs["member"]->add_option("--vector", vector_arg, "vector as JSON array")->required();

    auto* fan = app.add_subcommand("fan", "fans");
    fan->require_subcommand(1);
    std::map<std::string, CLI::App*> fsubs;
    for (const char* name : {"check", "refine", "subdivide", "stalk", "center"}) {
        auto* s = fan->add_subcommand(name);
        s->add_option("--input", input, "fan JSON file or inline JSON")->required();
        fsubs[name] = s;
    }
    fsubs["subdivide"]->add_option("--cone", cone, "rays of the cone as JSON")->required();
    fsubs["subdivide"]->add_option("--ray", ray, "subdivision ray as JSON")->required();
    fsubs["stalk"]->add_option("--cone", cone, "rays of the cone as JSON (default: the zero cone)");
    fsubs["center"]->add_option("--weights", weights, "weight matrix JSON")->required();

    auto* uniformize = app.add_subcommand("uniformize", "free cover certificate");
    uniformize->add_option("--weights", weights, "weight matrix JSON")->required();
    uniformize->add_option("--set", set, "set JSON (array of vectors)")->required();

    auto* invariants = app.add_subcommand("invariants", "E/F/D, defect, rational rank, condition (*)");
    invariants->add_option("--n", n);
    invariants->add_option("--E", E);
    invariants->add_option("--F", F);
    invariants->add_option("--e", e);
    invariants->add_option("--f", f);
    invariants->add_option("--values", values, "JSON {basis, values, base, residues}");
    invariants->add_option("--weights", weights, "weight matrix JSON (for the height)");

    auto* verify = app.add_subcommand("verify", "re-verify a certificate");
    verify->add_option("--certificate", certificate)->required();

    auto* corpus = app.add_subcommand("corpus", "run the fixture corpus");
    corpus->add_option("--dir", dir, "fixture directory");
    corpus->add_option("--jobs", jobs, "worker threads (0 = hardware)");

    auto* prob = app.add_subcommand("problem", "run a problem file {kind, payload, meta}");
    prob->add_option("--file", problem)->required();

    std::vector<std::string> argv_store = args;
    if (argv_store.empty()) argv_store.push_back("valuniform");
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& pe) {
        out << error_json(precondition("bad-arguments", pe.what())).dump(2) << "\n";
        return 2;
    }

    auto poly_payload = [&]() {
        json p = {{"prime", prime}, {"poly", poly}, {"series", series}, {"assert_irreducible", irreducible}};
        if (!cap.empty()) p["cap"] = cap;
        if (display != "additive") p["display"] = {{"mode", display}, {"base", base.empty() ? prime : base}};
        return p;
    };

    try {
        json result;
        if (newton->parsed()) {
            result = execute("newton", poly_payload());
        } else if (distances->parsed()) {
            json p = poly_payload();
            p["op"] = "distances";
            result = execute("newton", p);
        } else if (krasner->parsed()) {
            json p = poly_payload();
            for (const auto& [name, s] : ksubs)
                if (s->parsed()) p["op"] = name;
            if (!x.empty()) p["x"] = x;
            if (!radius.empty()) p["radius"] = radius;
            p["depth"] = depth;
            p["max_m"] = max_m;
            result = execute("krasner", p);
        } else if (monoid->parsed()) {
            json p = {{"monoid", load_json_arg(input)}, {"lattice", lattice}, {"units", units}};
            for (const auto& [name, s] : msubs)
                if (s->parsed()) p["op"] = name;
            if (!target.empty()) p["target"] = load_json_arg(target);
            if (!map.empty()) p["map"] = load_json_arg(map);
            if (!vector_arg.empty()) p["vector"] = load_json_arg(vector_arg);
            result = execute("monoid", p);
        } else if (fan->parsed()) {
            json p = {{"fan", load_json_arg(input)}};
            for (const auto& [name, s] : fsubs)
                if (s->parsed()) p["op"] = name;
            if (!cone.empty()) p["cone"] = load_json_arg(cone);
            if (!ray.empty()) p["ray"] = load_json_arg(ray);
            if (!weights.empty()) p["weights"] = load_json_arg(weights);
            result = execute("fan", p);
        } else if (uniformize->parsed()) {
            result = execute("uniformize", {{"weights", load_json_arg(weights)}, {"set", load_json_arg(set)}});
        } else if (invariants->parsed()) {
            json p = values.empty() ? json::object() : load_json_arg(values);
            if (n) p["n"] = *n;
            if (E) p["E"] = *E;
            if (F) p["F"] = *F;
            if (e) p["e"] = *e;
            if (f) p["f"] = *f;
            if (!weights.empty()) p["weights"] = load_json_arg(weights);
            result = execute("invariants", p);
        } else if (verify->parsed()) {
            result = verify_certificate_json(load_json_arg(certificate));
            out << result.dump(2) << "\n";
            return result.at("valid").get<bool>() ? 0 : 2;
        } else if (corpus->parsed()) {
            return run_corpus(dir, jobs, out, err);
        } else if (prob->parsed()) {
            json file = load_json_arg(problem);
            result = execute(file.at("kind").get<std::string>(), file.at("payload"));
        }
        out << result.dump(2) << "\n";
        return 0;
    } catch (const std::exception& ex) {
        out << error_json(ex).dump(2) << "\n";
        return exit_code_for(ex);
    }
}

}  // namespace valuniform
