#include "doctest.h"

#include "oracles.hpp"
#include "valuniform/errors.hpp"
#include "valuniform/fanlab.hpp"
#include "valuniform/json_io.hpp"

#include <cmath>

using namespace valuniform;

namespace {

IntMat mat(std::initializer_list<std::vector<long long>> rows) {
    IntMat m;
    for (const auto& r : rows) m.push_back(to_int_vec(r));
    return m;
}

oracle::Vec small(const IntVec& v) {
    oracle::Vec out;
    for (const auto& x : v) out.push_back(x.get_si());
    return out;
}

std::vector<oracle::Vec> small(const IntMat& m) {
    std::vector<oracle::Vec> out;
    for (const auto& r : m) out.push_back(small(r));
    std::sort(out.begin(), out.end());
    return out;
}

// Every maximal cone is simplicial with determinant +-1.
bool unimodular(const Fan& f) {
    for (const auto& c : f.maximal_cones()) {
        auto rays = small(f.cone_rays(c));
        if (rays.size() != f.ambient()) return false;
        if (std::llabs(oracle::det(rays)) != 1) return false;
    }
    return true;
}

// Random points of cone(gens) all lie in some maximal cone of f, and every ray
// of f lies in cone(gens).
bool same_support(const Fan& f, const std::vector<oracle::Vec>& gens, std::mt19937& rng) {
    for (const auto& r : f.rays())
        if (!oracle::in_cone(gens, small(r))) return false;
    std::uniform_int_distribution<int> coef(0, 7);
    for (int t = 0; t < 60; ++t) {
        oracle::Vec x(gens[0].size(), 0);
        for (const auto& g : gens) {
            long long c = coef(rng);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += c * g[i];
        }
        bool hit = false;
        for (const auto& c : f.maximal_cones()) hit = hit || oracle::in_cone(small(f.cone_rays(c)), x);
        if (!hit) return false;
    }
    return true;
}

// Angle-sorted fan in the plane from random primitive rays.
std::pair<Fan, std::vector<std::pair<double, IntMat>>> random_complete_fan(std::mt19937& rng) {
    std::uniform_int_distribution<int> c(-4, 4);
    for (;;) {
        std::vector<std::pair<double, oracle::Vec>> rays;
        for (int k = 0; k < 6; ++k) {
            long long a = c(rng), b = c(rng);
            if ((a == 0 && b == 0) || std::gcd(a, b) != 1) continue;
            double ang = std::atan2(double(b), double(a));
            bool dup = false;
            for (const auto& r : rays) dup = dup || std::abs(r.first - ang) < 1e-12;
            if (!dup) rays.push_back({ang, {a, b}});
        }
        if (rays.size() < 3) continue;
        std::sort(rays.begin(), rays.end());
        bool ok = true;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            double gap = (i + 1 < rays.size() ? rays[i + 1].first : rays[0].first + 2 * M_PI) - rays[i].first;
            ok = ok && gap < M_PI - 1e-9;
        }
        if (!ok) continue;
        std::vector<IntMat> cones;
        std::vector<std::pair<double, IntMat>> tagged;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            const auto& next = rays[(i + 1) % rays.size()].second;
            IntMat m{to_int_vec(rays[i].second), to_int_vec(next)};
            cones.push_back(m);
            tagged.push_back({rays[i].first, m});
        }
        return {Fan(2, cones), tagged};
    }
}

}  // namespace

TEST_CASE("regularity reports") {
    CHECK(is_regular(Fan(2, {mat({{1, 0}, {0, 1}})})).regular);
    auto a1 = is_regular(Fan(2, {mat({{1, 0}, {1, 2}})}));
    CHECK_FALSE(a1.regular);
    CHECK(a1.reason == "multiplicity 2");
    auto sq = is_regular(Fan(3, {mat({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}})}));
    CHECK_FALSE(sq.regular);
    CHECK(sq.reason == "non-simplicial");
}

TEST_CASE("invalid fans are rejected") {
    CHECK_THROWS_AS(Fan(2, {mat({{1, 0}, {1, 2}}), mat({{1, 1}, {0, 1}})}), Error);
    CHECK_THROWS_AS(Fan(2, {mat({{1, 0}, {-1, 0}})}), Error);  // not pointed
    CHECK_NOTHROW(Fan(2, {mat({{1, 0}, {1, 1}}), mat({{1, 1}, {0, 1}})}));
}

TEST_CASE("stellar subdivision") {
    Fan a1(2, {mat({{1, 0}, {1, 2}})});
    auto sub = stellar_subdivide(a1, *a1.find(mat({{1, 0}, {1, 2}})), to_int_vec({1, 1}));
    CHECK(sub.maximal_cones().size() == 2);
    CHECK(is_regular(sub).regular);
    CHECK(refines(sub, a1));

    Fan square(3, {mat({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}})});
    auto sigma = *square.find(mat({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
    auto s4 = stellar_subdivide(square, sigma, to_int_vec({1, 1, 2}));
    CHECK(s4.maximal_cones().size() == 4);
    CHECK(refines(s4, square));
    CHECK(covers_support(s4, square));
    CHECK_THROWS_AS(stellar_subdivide(square, sigma, to_int_vec({1, 0, 2})), Error);
    CHECK_THROWS_AS(stellar_subdivide(square, sigma, to_int_vec({3, 0, 1})), Error);

    // subdividing a face subdivides every cone containing it
    Fan two(2, {mat({{1, 0}, {1, 1}}), mat({{1, 1}, {0, 1}})});
    auto ray = *two.find(mat({{1, 1}}));
    auto same = stellar_subdivide(two, ray, to_int_vec({2, 2}));
    CHECK(same.maximal_cones().size() == 2);
}

TEST_CASE("refining cone((1,0),(1,k))") {
    std::mt19937 rng(1);
    for (long long k = 2; k <= 10; ++k) {
        Fan f(2, {mat({{1, 0}, {1, k}})});
        auto r = regular_refine(f);
        CHECK(r.fan.maximal_cones().size() == static_cast<std::size_t>(k));
        CHECK(unimodular(r.fan));
        CHECK(is_regular(r.fan).regular);
        CHECK(refines(r.fan, f));
        CHECK(covers_support(r.fan, f));
        CHECK(same_support(r.fan, {{1, 0}, {1, k}}, rng));
    }
}

TEST_CASE("refining random rank-3 fans") {
    std::mt19937 rng(21);
    for (int i = 0; i < 15; ++i) {
        auto gens = oracle::random_cone(rng, 3, 15);
        IntMat g;
        for (const auto& v : gens) g.push_back(to_int_vec(v));
        Fan f(3, {g});
        if (i % 2) {
            // split it once first so the input has several cones
            IntVec inner(3, Int(0));
            for (const auto& v : g) inner = add(inner, v);
            f = stellar_subdivide(f, f.maximal_cones()[0], primitive(inner));
        }
        auto r = regular_refine(f);
        CHECK(unimodular(r.fan));
        CHECK(is_regular(r.fan).regular);
        CHECK(refines(r.fan, f));
        CHECK(covers_support(r.fan, f));
        CHECK(same_support(r.fan, gens, rng));
        // replaying the steps reproduces the result
        Fan replay = f;
        for (const auto& s : r.steps) replay = stellar_subdivide(replay, s.cone, s.ray);
        CHECK(to_json(replay) == to_json(r.fan));
    }
}

TEST_CASE("stalks") {
    Fan a1(2, {mat({{1, 0}, {1, 2}})});
    auto sigma = *a1.find(mat({{1, 0}, {1, 2}}));
    auto st = stalk(a1, sigma);
    auto dual = oracle::hilbert_basis({{0, 1}, {2, -1}});
    CHECK(small(minimal_generators(st)) == dual);
    CHECK(small(minimal_generators(st)) == std::vector<oracle::Vec>{{0, 1}, {1, 0}, {2, -1}});

    // {0} has stalk Z^2; a ray has Z x N
    auto zero = stalk(a1, RaySet{});
    CHECK(units_and_split(zero).units.size() == 2);
    auto ray = stalk(a1, *a1.find(mat({{1, 0}})));
    CHECK(units_and_split(ray).units.size() == 1);

    // contravariance: faces have larger stalks
    std::mt19937 rng(8);
    for (int i = 0; i < 10; ++i) {
        auto gens = oracle::random_cone(rng, 3, 10);
        IntMat g;
        for (const auto& v : gens) g.push_back(to_int_vec(v));
        Fan f(3, {g});
        for (const auto& big : f.cones())
            for (const auto& face : f.cones()) {
                if (!std::includes(big.begin(), big.end(), face.begin(), face.end())) continue;
                auto sb = stalk(f, big), sf = stalk(f, face);
                for (const auto& gen : sb.generators()) CHECK(membership(sf, gen).inside);
            }
    }
}

TEST_CASE("center of a valuation") {
    json quad = json::parse(R"({"ambient_rank": 2, "cones": [{"rays": [[1, 0], [0, 1]]}, {"rays": [[0, 1], [-1, 0]]},
                                {"rays": [[-1, 0], [0, -1]]}, {"rays": [[0, -1], [1, 0]]}]})");
    Fan f = fan_from_json(quad);
    auto c = center_of_valuation(weights_from_json(json::parse(R"({"rows": [["0", "1"], ["-1", "0"]]})")), f);
    CHECK(small(f.cone_rays(c.cone)) == std::vector<oracle::Vec>{{-1, 0}, {0, 1}});
    auto c2 = center_of_valuation(weights_from_json(json::parse(R"({"basis": ["sqrt2"], "rows": [["1", "sqrt2"]]})")), f);
    CHECK(small(f.cone_rays(c2.cone)) == std::vector<oracle::Vec>{{0, 1}, {1, 0}});

    // a weight on a ray of the fan is centered on that ray
    auto c3 = center_of_valuation(weights_from_json(json::parse(R"({"rows": [["1", "0"], ["0", "1"]]})")), f);
    CHECK(small(f.cone_rays(c3.cone)) == std::vector<oracle::Vec>{{0, 1}, {1, 0}});

    CHECK_THROWS_AS(center_of_valuation(weights_from_json(json::parse(R"({"rows": [["-1", "0"], ["0", "1"]]})")),
                                        Fan(2, {mat({{1, 0}, {0, 1}})})),
                    Error);

    // random complete plane fans against floating-point angles
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> co(-5, 5);
    for (int i = 0; i < 20; ++i) {
        auto [fan, tagged] = random_complete_fan(rng);
        long long a = co(rng), b = co(rng), cc = co(rng), d = co(rng);
        if (a * d - b * cc == 0) continue;  // Q-dependent entries: not injective
        double x = a + b * std::sqrt(2.0), y = cc + d * std::sqrt(2.0);
        auto expr = [](long long r, long long q) {
            return std::to_string(r) + (q < 0 ? "-" : "+") + std::to_string(std::llabs(q)) + "*sqrt2";
        };
        json row = json::array({expr(a, b), expr(cc, d)});
        auto w = weights_from_json(json{{"basis", {"sqrt2"}}, {"rows", json::array({row})}});
        auto center = center_of_valuation(w, fan);
        double ang = std::atan2(y, x);
        // the 2-dimensional cone whose rays bracket the angle
        oracle::Vec expect_a, expect_b;
        for (const auto& [start, m] : tagged) {
            auto r0 = small(m[0]), r1 = small(m[1]);
            double a0 = std::atan2(double(r0[1]), double(r0[0])), a1 = std::atan2(double(r1[1]), double(r1[0]));
            double span = std::fmod(a1 - a0 + 4 * M_PI, 2 * M_PI), off = std::fmod(ang - a0 + 4 * M_PI, 2 * M_PI);
            if (off < span) expect_a = r0, expect_b = r1;
        }
        auto got = small(fan.cone_rays(center.cone));
        std::vector<oracle::Vec> expect{expect_a, expect_b};
        std::sort(expect.begin(), expect.end());
        CHECK(got == expect);
        for (const auto& g : minimal_generators(center.stalk)) CHECK(lex_sign(w.value(g)) != Sign::Negative);
    }
}
