#include "doctest.h"

#include "generators.hpp"
#include "valuniform/json_io.hpp"

#include <chrono>

using namespace valuniform;

namespace {

IntMat mat(std::initializer_list<std::vector<long long>> rows) {
    IntMat m;
    for (const auto& r : rows) m.push_back(to_int_vec(r));
    return m;
}

WeightMatrix weights(const char* text) { return weights_from_json(json::parse(text)); }

// Number of rows whose flattened components raise the rank of the stack so far.
std::size_t height_oracle(const WeightMatrix& w) {
    std::vector<std::vector<mpq_class>> stack;
    std::size_t rank_so_far = 0, h = 0;
    for (std::size_t i = 0; i < w.height(); ++i) {
        for (const auto& r : w.flattened_row(i)) stack.push_back(r);
        // plain Gaussian elimination on a copy
        auto m = stack;
        std::size_t rk = 0;
        for (std::size_t col = 0; col < w.ambient() && rk < m.size(); ++col) {
            std::size_t piv = rk;
            while (piv < m.size() && m[piv][col] == 0) ++piv;
            if (piv == m.size()) continue;
            std::swap(m[piv], m[rk]);
            for (std::size_t r = 0; r < m.size(); ++r)
                if (r != rk && m[r][col] != 0) {
                    mpq_class f = m[r][col] / m[rk][col];
                    for (std::size_t c = 0; c < w.ambient(); ++c) m[r][c] -= f * m[rk][c];
                }
            ++rk;
        }
        if (rk > rank_so_far) ++h;
        rank_so_far = rk;
    }
    return h;
}

}  // namespace

TEST_CASE("free covers from the worked examples") {
    auto w = weights(R"({"rows": [["0", "1"], ["1", "0"]]})");
    auto cert = free_cover(mat({{0, 1}, {5, 0}, {-3, 1}}), w);
    CHECK(cert.basis == mat({{1, 0}, {-3, 1}}));
    CHECK(cert.coordinates == mat({{3, 1}, {5, 0}, {0, 1}}));
    CHECK(verify_certificate(mat({{0, 1}, {5, 0}, {-3, 1}}), w, cert).ok());

    auto w2 = weights(R"({"basis": ["sqrt2"], "rows": [["1", "sqrt2"]]})");
    auto c2 = free_cover(mat({{1, 0}, {0, 1}, {-1, 2}}), w2);
    CHECK(c2.basis == mat({{1, 0}, {-1, 1}}));
    CHECK(c2.coordinates == mat({{1, 0}, {1, 1}, {1, 2}}));
    CHECK(c2.det_check);
    CHECK(c2.membership_check);
    CHECK(c2.coverage_check);

    // rank one: the generator of the positive half
    auto w1 = weights(R"({"rows": [["1"]]})");
    auto c1 = free_cover(mat({{3}, {5}}), w1);
    CHECK(c1.basis == mat({{1}}));
    CHECK(c1.coordinates == mat({{3}, {5}}));
}

TEST_CASE("free cover rejects sets outside the monoid") {
    auto w = weights(R"({"basis": ["sqrt2"], "rows": [["1", "sqrt2"]]})");
    try {
        free_cover(mat({{1, 0}, {-2, 1}}), w);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("-2") != std::string::npos);
    }
}

TEST_CASE("random free covers pass independent checks") {
    std::mt19937 rng(99);
    for (int i = 0; i < 60; ++i) {
        std::size_t n = 1 + static_cast<std::size_t>(i % 4);
        std::size_t h = 1 + static_cast<std::size_t>((i / 4) % 2);
        if (n == 1) h = 1;
        auto inst = gen::random_instance(rng, n, h, 1 + static_cast<std::size_t>(rng() % 8));
        auto t0 = std::chrono::steady_clock::now();
        auto cert = free_cover(inst.set, inst.w);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(secs < 1.0);
        CHECK(gen::certificate_holds(inst, cert));
        CHECK(verify_certificate(inst.set, inst.w, cert).ok());
        // deterministic
        auto again = free_cover(inst.set, inst.w);
        CHECK(again.basis == cert.basis);
        CHECK(again.coordinates == cert.coordinates);
        // a subset is covered by the same basis
        IntMat part(inst.set.begin(), inst.set.begin() + static_cast<long>((inst.set.size() + 1) / 2));
        auto sub = free_cover(part, inst.w);
        CHECK(gen::certificate_holds({inst.w, inst.approx, part}, sub));
    }
}

TEST_CASE("lex signs agree with floating point") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> e(-6, 6);
    for (int i = 0; i < 40; ++i) {
        auto inst = gen::random_instance(rng, 3, 1 + static_cast<std::size_t>(i % 2), 1);
        for (int t = 0; t < 25; ++t) {
            IntVec v = to_int_vec({e(rng), e(rng), e(rng)});
            int expect = gen::approx_sign(inst.approx, v);
            Sign s = lex_sign(inst.w.value(v));
            CHECK((s == Sign::Positive ? 1 : s == Sign::Negative ? -1 : 0) == expect);
            auto status = vm_membership(v, inst.w);
            CHECK((status == VMStatus::Outside) == (expect < 0));
            CHECK((status == VMStatus::BoundaryUnit) == is_zero(v));
        }
    }
}

TEST_CASE("tampered certificates fail verification") {
    auto w = weights(R"({"rows": [["0", "1"], ["1", "0"]]})");
    IntMat s = mat({{0, 1}, {5, 0}, {-3, 1}});
    auto cert = free_cover(s, w);
    auto bad = cert;
    bad.coordinates[0][0] += 1;
    CHECK_FALSE(verify_certificate(s, w, bad).ok());
    bad = cert;
    bad.basis[1] = to_int_vec({-3, 2});
    CHECK_FALSE(verify_certificate(s, w, bad).ok());
    bad = cert;
    bad.det = 2;
    CHECK_FALSE(verify_certificate(s, w, bad).ok());
    bad = cert;
    bad.coverage_check = false;
    CHECK_FALSE(verify_certificate(s, w, bad).ok());
    // a basis vector of negative weight
    bad = cert;
    bad.basis = mat({{-1, 0}, {3, 1}});
    bad.coordinates = mat({{3, 1}, {-5, 0}, {0, 1}});
    CHECK_FALSE(verify_certificate(s, w, bad).ok());
}

TEST_CASE("invariant identities") {
    for (long n = 0; n <= 8; ++n)
        for (long E = 0; E <= n; ++E)
            for (long F = 0; E + F <= n; ++F) {
                auto r = invariant_report(n, E, F);
                CHECK(r.E + r.F + r.D == n);
                CHECK(r.abhyankar == (r.D == 0));
            }
    CHECK_THROWS_AS(invariant_report(2, 2, 1), Error);
    auto imm = invariant_report(1, 0, 0);
    CHECK(imm.D == 1);
    CHECK_FALSE(imm.abhyankar);

    for (long n = 1; n <= 30; ++n)
        for (long e = 1; e <= 6; ++e)
            for (long f = 1; f <= 6; ++f) {
                if (n % (e * f) == 0) CHECK(defect(n, e, f) == n / (e * f));
                else CHECK_THROWS_AS(defect(n, e, f), Error);
            }
}

TEST_CASE("rational rank and the Abhyankar condition") {
    auto b = IrrationalBasis::from_names({"sqrt2"});
    auto g = [&](long a, long c) { return GammaElement(b, RatVec{Rat(a), Rat(c)}); };
    CHECK(rational_rank({g(1, 0), g(0, 1), g(1, 1)}, {}) == 2);
    CHECK(rational_rank({GammaElement(b, RatVec{Rat(2, 3), 0}), GammaElement(b, RatVec{Rat(4, 5), 0})}, {g(1, 0)}) == 0);
    CHECK(rational_rank({g(3, 2)}, {g(1, 0)}) == 1);

    auto st = star_check({g(1, 0), g(0, 1)}, {}, {}, 2);
    CHECK(st.holds);
    CHECK(st.abhyankar_basis);
    auto partial = star_check({g(1, 0)}, {}, {true}, 3);
    CHECK(partial.holds);
    CHECK_FALSE(partial.abhyankar_basis);
    CHECK_FALSE(star_check({g(1, 0), g(2, 0)}, {}, {}, 2).holds);
}

TEST_CASE("heights") {
    CHECK(rz_height(weights(R"({"basis": ["sqrt2"], "rows": [["1", "sqrt2"], ["2", "2*sqrt2"]]})")) == 1);
    CHECK(rz_height(weights(R"({"rows": [["0", "1"], ["1", "0"]]})")) == 2);
    CHECK(rz_height(weights(R"({"rows": [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"], ["0", "0", "1"]]})")) == 3);

    // agrees with an incremental rank count, and is unchanged by a
    // unimodular change of coordinates
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> u(-2, 2);
    for (int i = 0; i < 30; ++i) {
        auto inst = gen::random_instance(rng, 3, 1 + static_cast<std::size_t>(i % 2), 1);
        CHECK(rz_height(inst.w) == height_oracle(inst.w));
        // U = elementary column operations
        std::vector<std::vector<GammaElement>> rows = inst.w.rows();
        for (int k = 0; k < 4; ++k) {
            std::size_t a = rng() % 3, bcol = (a + 1 + rng() % 2) % 3;
            long m = u(rng);
            for (auto& r : rows) r[bcol] = r[bcol] + r[a] * Rat(m);
        }
        CHECK(rz_height(WeightMatrix(3, rows)) == rz_height(inst.w));
    }
}

TEST_CASE("weights must be injective and declared independent") {
    CHECK_THROWS_AS(weights(R"({"rows": [["1", "1"]]})"), Error);
    CHECK_THROWS_AS(weights(R"({"basis": ["sqrt2"], "independent": false, "rows": [["1", "sqrt2"]]})"), Error);
    CHECK_NOTHROW(weights(R"({"basis": ["sqrt2"], "rows": [["1", "sqrt2"]]})"));
}
