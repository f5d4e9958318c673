// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "generators.hpp"
#include "oracles.hpp"
#include "valuniform/cli.hpp"
#include "valuniform/fanlab.hpp"
#include "valuniform/json_io.hpp"
#include "valuniform/krasner.hpp"
#include "valuniform/toricmonoid.hpp"
#include "valuniform/uniformizer.hpp"

#include <chrono>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace valuniform;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
    std::cout << (o.ok ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << o.detail << std::endl;
    if (!o.ok) ++failures;
}

template <class F>
Outcome guarded(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

long long vp_ll(long long x, long long p) {
    long long v = 0;
    x = std::llabs(x);
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

IntMat to_mat(const std::vector<oracle::Vec>& rows) {
    IntMat m;
    for (const auto& r : rows) m.push_back(to_int_vec(r));
    return m;
}

std::vector<oracle::Vec> to_vecs(const IntMat& m) {
    std::vector<oracle::Vec> out;
    for (const auto& r : m) {
        oracle::Vec v;
        for (const auto& x : r) v.push_back(x.get_si());
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

json cli(std::vector<std::string> args, int* code = nullptr) {
    std::ostringstream out, err;
    args.insert(args.begin(), "valuniform");
    int c = run(args, out, err);
    if (code) *code = c;
    return json::parse(out.str());
}

// 1. Random free covers verify independently, each within a second.
Outcome free_cover_suite() {
    std::mt19937 rng(20240601);
    int good = 0;
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 1 + static_cast<std::size_t>(i % 4);
        std::size_t h = n == 1 ? 1 : 1 + static_cast<std::size_t>((i / 4) % 2);
        auto inst = gen::random_instance(rng, n, h, 1 + static_cast<std::size_t>(rng() % 8));
        auto t0 = Clock::now();
        auto cert = free_cover(inst.set, inst.w);
        double t = since(t0);
        worst = std::max(worst, t);
        if (t < 1.0 && gen::certificate_holds(inst, cert) && verify_certificate(inst.set, inst.w, cert).ok()) ++good;
    }
    return {good == 200, std::to_string(good) + "/200 certificates verified, slowest " + fmt(worst) + "s"};
}

// 2. Krasner data of x^2 - 2 and the embedding examples.
Outcome krasner_exactness() {
    // roots +-sqrt2: v(alpha_1 - alpha_2) = v(2 sqrt2) = 3/2 = v(f'(alpha_1))
    auto k = krasner_data(make_qpoly({Rat(-2), 0, 1}, 2));
    bool triple = k.r_f == Rat(3, 2) && k.max_dist == Rat(3, 2) && k.R_f == 3;
    Rat absolute = Rat(1, 8);
    bool abs_ok = absolute == Rat(1, 1 << 3);
    auto k7 = krasner_data(make_qpoly({Rat(-2), 0, 1}, 7), Irreducibility::Asserted);
    bool embeds = krasner_embed_test(k7, PAdicRational(Rat(3), 7)).verdict == EmbedVerdict::Embeds;

    // |x^2 - 2|_2 < 1/8 iff v_2(a^2 - 2 b^2) - 2 v_2(b) > 3
    long long hits = 0, checked = 0, mismatches = 0;
    for (long long a = -1000; a <= 1000; ++a)
        for (long long b = 1; b <= 1000; ++b) {
            if (std::gcd(a, b) != 1) continue;
            ++checked;
            long long num = a * a - 2 * b * b;
            long long v = vp_ll(num, 2) - 2 * vp_ll(b, 2);
            if (v > 3) ++hits;
            if (b <= 40 && std::llabs(a) <= 40) {
                auto e = krasner_embed_test(k, PAdicRational(make_rat(static_cast<long>(a), static_cast<long>(b)), 2));
                if (e.value.value() != Rat(static_cast<long>(v)) || e.verdict != EmbedVerdict::Inconclusive) ++mismatches;
            }
        }
    bool ok = triple && abs_ok && embeds && hits == 0 && mismatches == 0;
    return {ok, "triple (" + to_string(k.r_f) + ", " + to_string(k.max_dist) + ", " + to_string(k.R_f) +
                    "), p=7 x=3 " + (embeds ? "embeds" : "inconclusive") + ", " + std::to_string(checked) +
                    " rationals searched, " + std::to_string(hits) + " closer than 1/8"};
}

// 3. Probe on x^p - x - 1/t.
Outcome probe_identity() {
    bool ok = true;
    std::string detail;
    for (unsigned long p : {2UL, 3UL}) {
        TruncatedPuiseux proto(p, 1, {});
        std::vector<TruncatedPuiseux> c(p + 1, proto.zero());
        c[0] = TruncatedPuiseux(p, 1, {{Rat(-1), -1}});
        c[1] = TruncatedPuiseux(p, 1, {{Rat(0), -1}});
        c[p] = proto.one();
        auto res = distance_to_field_probe(SeriesPoly(c, proto), 5, 16);
        Rat expect(1);
        for (unsigned m = 0; m <= 5; ++m) {
            expect /= Rat(p);
            if (res.levels.size() <= m || res.levels[m].best_valuation != -expect) ok = false;
        }
        ok = ok && res.max_dist == 0 && res.levels[0].best_valuation < 0;
        detail += "p=" + std::to_string(p) + ": ";
        for (const auto& l : res.levels) detail += to_string(l.best_valuation) + " ";
    }
    return {ok, detail + "(max distance 0)"};
}

// 4. Hilbert bases against box enumeration.
Outcome hilbert_oracle() {
    std::mt19937 rng(4242);
    auto t0 = Clock::now();
    int good = 0;
    for (int i = 0; i < 100; ++i) {
        std::size_t d = i % 2 ? 3 : 2;
        auto gens = oracle::random_cone(rng, d, 20);
        auto sat = saturate(ToricMonoid(d, to_mat(gens)), SaturationLattice::Ambient);
        if (to_vecs(sat.hilbert_basis) == oracle::hilbert_basis(gens) && sat.units.empty()) ++good;
    }
    double t = since(t0);
    return {good == 100 && t < 60, std::to_string(good) + "/100 cones match, " + fmt(t) + "s"};
}

bool unimodular(const Fan& f) {
    for (const auto& c : f.maximal_cones()) {
        auto rays = to_vecs(f.cone_rays(c));
        if (rays.size() != f.ambient() || std::llabs(oracle::det_any(rays)) != 1) return false;
    }
    return true;
}

// 5. Regular refinement.
Outcome refinement() {
    bool ok = true;
    std::string counts;
    for (long long k = 2; k <= 10; ++k) {
        Fan f(2, {to_mat({{1, 0}, {1, k}})});
        auto r = regular_refine(f);
        std::size_t got = r.fan.maximal_cones().size();
        counts += std::to_string(got) + (k < 10 ? "," : "");
        ok = ok && got == static_cast<std::size_t>(k) && unimodular(r.fan);
    }
    std::mt19937 rng(77);
    int good = 0;
    for (int i = 0; i < 50; ++i) {
        auto gens = oracle::random_cone(rng, 3, 20);
        IntMat g = to_mat(gens);
        Fan f(3, {g});
        if (i % 2) {
            IntVec inner(3, Int(0));
            for (const auto& v : g) inner = add(inner, v);
            f = stellar_subdivide(f, f.maximal_cones()[0], primitive(inner));
        }
        auto r = regular_refine(f);
        bool support = covers_support(r.fan, f);
        // independent: all rays inside the input support
        for (const auto& ray : r.fan.rays()) {
            oracle::Vec v;
            for (const auto& x : ray) v.push_back(x.get_si());
            support = support && oracle::in_cone(gens, v);
        }
        if (is_regular(r.fan).regular && unimodular(r.fan) && refines(r.fan, f) && support) ++good;
    }
    ok = ok && good == 50;
    return {ok, "k=2..10 gives " + counts + " cones; " + std::to_string(good) + "/50 random rank-3 fans"};
}

// 6. Root valuations of products of linear factors.
Outcome newton_oracle() {
    std::mt19937 rng(606);
    std::uniform_int_distribution<long> num(-30, 30), den(1, 9), ex(-3, 3);
    int good = 0;
    const long primes[] = {2, 3, 5};
    for (int i = 0; i < 50; ++i) {
        long p = primes[i % 3];
        int d = 1 + static_cast<int>(rng() % 6);
        std::vector<Rat> roots;
        std::map<Rat, long> expect;
        while (static_cast<int>(roots.size()) < d) {
            long a = num(rng), b = den(rng), e = ex(rng);
            if (a == 0) continue;
            Rat r = make_rat(a, b);
            for (long t = 0; t < e; ++t) r *= p;
            for (long t = 0; t < -e; ++t) r /= p;
            if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
            roots.push_back(r);
            long long n = r.get_num().get_si(), q = r.get_den().get_si();
            expect[Rat(static_cast<long>(vp_ll(n, p) - vp_ll(q, p)))] += 1;
        }
        QPoly f = make_qpoly({Rat(1)}, p);
        for (const auto& r : roots) f = f * make_qpoly({-r, Rat(1)}, p);
        if (newton_polygon(f).root_valuations() == expect) ++good;
    }
    return {good == 50, std::to_string(good) + "/50 polynomials"};
}

// 7. Invariant identities.
Outcome invariants() {
    std::mt19937 rng(7);
    int good = 0;
    for (int i = 0; i < 500; ++i) {
        long n = static_cast<long>(rng() % 12);
        long E = n ? static_cast<long>(rng() % (n + 1)) : 0;
        long F = static_cast<long>(rng() % (n - E + 1));
        auto r = invariant_report(n, E, F);
        if (r.E + r.F + r.D == n && r.abhyankar == (r.D == 0)) ++good;
    }
    int defect_good = 0, defect_total = 0;
    for (long n = 1; n <= 60; ++n)
        for (long e = 1; e <= 8; ++e)
            for (long f = 1; f <= 8; ++f) {
                ++defect_total;
                bool threw = false;
                long d = 0;
                try {
                    d = defect(n, e, f);
                } catch (const Error&) {
                    threw = true;
                }
                bool divides = n % (e * f) == 0;
                if (threw != divides && (threw || d * e * f == n)) ++defect_good;
            }
    return {good == 500 && defect_good == defect_total,
            std::to_string(good) + "/500 tuples, defect divisibility " + std::to_string(defect_good) + "/" +
                std::to_string(defect_total)};
}

// Every leaf of a JSON document, as a pointer.
void leaves(const json& j, const json::json_pointer& at, std::vector<json::json_pointer>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) leaves(it.value(), at / it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) leaves(j[i], at / i, out);
        if (j.empty()) out.push_back(at);
    } else {
        out.push_back(at);
    }
}

json mutate(json leaf, std::mt19937& rng) {
    if (leaf.is_boolean()) return !leaf.get<bool>();
    if (leaf.is_number_integer()) return leaf.get<long long>() + (rng() % 2 ? 1 : -1);
    if (leaf.is_string()) {
        std::string s = leaf.get<std::string>();
        if (s == "passed") return "failed";
        if (s == "failed") return "passed";
        try {
            return to_string(parse_rat(s) + 1);
        } catch (const std::exception&) {
            return s + "x";
        }
    }
    if (leaf.is_array()) return json::array({0});
    return 1;
}

// 8. Certificate round trip and tamper detection.
Outcome round_trip() {
    std::mt19937 rng(8);
    std::vector<json> certs;
    for (int i = 0; i < 12; ++i) {
        std::size_t n = 2 + static_cast<std::size_t>(i % 3);
        auto inst = gen::random_instance(rng, n, 1 + static_cast<std::size_t>(i % 2), 3 + rng() % 5);
        int code = 0;
        json c = cli({"uniformize", "--weights", to_json(inst.w).dump(), "--set", to_json(inst.set).dump()}, &code);
        if (code == 0) certs.push_back(c);
    }
    for (long long k : {3LL, 5LL, 7LL}) {
        int code = 0;
        json c = cli({"fan", "refine", "--input",
                      R"({"ambient_rank":2,"cones":[{"rays":[[1,0],[1,)" + std::to_string(k) + "]]}]}"},
                     &code);
        if (code == 0) certs.push_back(c);
    }
    {
        int code = 0;
        json c = cli({"fan", "refine", "--input", R"({"ambient_rank":3,"cones":[{"rays":[[1,0,0],[0,1,0],[1,1,3]]}]})"},
                     &code);
        if (code == 0) certs.push_back(c);
    }
    int verified = 0;
    for (const auto& c : certs)
        if (verify_certificate_json(c).value("valid", false)) ++verified;

    int detected = 0, total = 0;
    std::string missed;
    while (total < 1000) {
        const json& base = certs[rng() % certs.size()];
        std::vector<json::json_pointer> ptrs;
        leaves(base, json::json_pointer(), ptrs);
        auto ptr = ptrs[rng() % ptrs.size()];
        json bad = base;
        if (rng() % 8 == 0 && !ptr.empty()) {
            // drop the field instead of editing it
            auto parent = ptr.parent_pointer();
            if (bad.at(parent).is_object()) bad.at(parent).erase(ptr.back());
            else bad.at(parent).erase(static_cast<std::size_t>(std::stoul(ptr.back())));
        } else {
            bad.at(ptr) = mutate(bad.at(ptr), rng);
        }
        if (bad == base) continue;
        ++total;
        if (!verify_certificate_json(bad).value("valid", false)) ++detected;
        else if (missed.empty()) missed = " (first miss at " + ptr.to_string() + ")";
    }
    bool ok = verified == static_cast<int>(certs.size()) && certs.size() == 16 && detected == total;
    return {ok, std::to_string(verified) + "/" + std::to_string(certs.size()) + " certificates re-verify, " +
                    std::to_string(detected) + "/" + std::to_string(total) + " mutations detected" + missed};
}

}  // namespace

int main() {
    report(1, "free-cover suite", guarded(free_cover_suite));
    report(2, "Krasner exactness", guarded(krasner_exactness));
    report(3, "ramified probe identity", guarded(probe_identity));
    report(4, "Hilbert basis oracle", guarded(hilbert_oracle));
    report(5, "regular refinement", guarded(refinement));
    report(6, "Newton polygon oracle", guarded(newton_oracle));
    report(7, "invariant identities", guarded(invariants));
    report(8, "certificate round trip", guarded(round_trip));
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
    return failures ? 1 : 0;
}
