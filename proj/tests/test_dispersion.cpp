#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gkdv/dispersion.hpp"

using namespace gkdv;
using Catch::Approx;

TEST_CASE("h_n exact values", "[dispersion]") {
    REQUIRE(h_n(FrequencyTuple{1, 2}) == 18);
    REQUIRE(h_n(FrequencyTuple{1, 2, 3}) == 180);
    REQUIRE(h_n(FrequencyTuple{1, -1, 2}) == 0);
    REQUIRE(h_n(FrequencyTuple{5, -1, -1, -1}) == -114);
    // n=2 closed form 3 k k1 k2
    REQUIRE(h_n(FrequencyTuple{7, -3}) == 3 * 4 * 7 * (-3));
}

TEST_CASE("telescoped identity h_n == h_n_telescoped", "[dispersion]") {
    REQUIRE(h_n_telescoped(FrequencyTuple{1, 2, 3}) == 180);
    REQUIRE(h_n_telescoped(FrequencyTuple{5, -1, -1, -1}) == -114);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> nd(2, 8), kd(-1000, 1000);
    for (int trial = 0; trial < 20000; ++trial) {
        int n = nd(rng);
        std::vector<int> k(static_cast<size_t>(n));
        for (auto& x : k) {
            do { x = kd(rng); } while (x == 0);
        }
        FrequencyTuple t(k);
        REQUIRE(h_n(t) == h_n_telescoped(t));
    }
}

TEST_CASE("classify: pinned examples", "[dispersion]") {
    ComparabilityConstants c;  // defaults c_A=1, c_C=1/(2n), c_D=1/4
    auto r1 = classify(FrequencyTuple{100, 1, 1, 1}, c);
    REQUIRE(r1.Hn == 92724);
    REQUIRE(r1.holds[int(Case::A)]);

    auto r2 = classify(FrequencyTuple{5, 2, -2}, c);
    REQUIRE(r2.holds[int(Case::B)]);

    ComparabilityConstants c3;
    c3.c_C = 1.0 / 3.0;
    auto r3 = classify(FrequencyTuple{3, 3, 3}, c3);
    REQUIRE(r3.holds[int(Case::C)]);

    REQUIRE_THROWS_AS(classify(FrequencyTuple{1, -1}, c), std::invalid_argument);
}

TEST_CASE("classify is permutation invariant", "[dispersion]") {
    ComparabilityConstants c;
    std::vector<int> k{9, -2, 5, -1};
    std::sort(k.begin(), k.end());
    std::array<bool, 4> first{};
    bool have = false;
    do {
        auto rep = classify(FrequencyTuple(k), c);
        if (!have) {
            first = rep.holds;
            have = true;
        }
        REQUIRE(rep.holds == first);
    } while (std::next_permutation(k.begin(), k.end()));
}

TEST_CASE("verify_cases: shipped defaults cover the acceptance boxes", "[dispersion]") {
    ComparabilityConstants c;

    auto r2 = verify_cases(2, 50, c);
    REQUIRE(r2.violations == 0);
    REQUIRE(r2.total == 9900);
    REQUIRE(r2.kzero == 100);
    REQUIRE(r2.case_counts[int(Case::A)] == 9900);
    REQUIRE(r2.case_counts[int(Case::B)] == 0);  // no quadratic resonance
    REQUIRE(r2.sharp_c_A == Approx(1.5).margin(1e-12));

    auto r3 = verify_cases(3, 30, c);
    REQUIRE(r3.violations == 0);
    REQUIRE(r3.total == 213390);
    REQUIRE(r3.kzero == 2610);
    REQUIRE(r3.case_counts[int(Case::A)] == 199704);
    REQUIRE(r3.case_counts[int(Case::B)] == 10620);
    REQUIRE(r3.case_counts[int(Case::C)] == 154722);
    REQUIRE(r3.sharp_c_A == Approx(2.53125).margin(1e-12));
    REQUIRE(r3.sharp_c_C == Approx(0.75).margin(1e-12));

    auto r4 = verify_cases(4, 12, c);
    REQUIRE(r4.violations == 0);
    REQUIRE(r4.total == 323080);
    REQUIRE(r4.case_counts[int(Case::D)] == 237208);
    REQUIRE(r4.sharp_c_A == Approx(2.46).margin(1e-9));
}

TEST_CASE("verify_cases: c_A = 3 is not attainable at K = 50", "[dispersion]") {
    // The sharp constant for n=2 at K=50 is 3*(1 - 1/50) < 3; the extremal
    // tuples pair +-K with a unit frequency.
    ComparabilityConstants c;
    c.c_A = 3.0;
    auto r = verify_cases(2, 50, c);
    REQUIRE(r.violations == 388);
    bool found = false;
    for (const auto& t : r.first_violations)
        if (t.k == std::vector<int>{-50, 1}) found = true;
    REQUIRE(found);
}

TEST_CASE("symbol_ratio_sup: pinned example values", "[dispersion]") {
    // sigma = ik on case-A pairs, s0 = s1 = s2 = 0.6, with dispersion weight.
    SymbolFn ik = [](std::span<const int> k) {
        long long s = 0;
        for (int x : k) s += x;
        return cx(0.0, double(s));
    };
    DomainFn caseA = [](std::span<const int> k) {
        FrequencyTuple t(std::vector<int>{k.begin(), k.end()});
        auto m = kmax_of(t);
        return std::abs(double(h_n(t))) >= double(m[0]) * double(m[0]);
    };
    auto r = symbol_ratio_sup(2, ik, caseA, 0.6, 0.6, 0.6, 0.0, 50, RatioMode::with_dispersion);
    REQUIRE_FALSE(r.empty_domain);
    REQUIRE(r.sup == Approx(1.229129273203897).margin(1e-12));  // attained at (-1,-1)

    // Trivial symbol, trivial weights, no dispersion: sup = 1.
    SymbolFn one = [](std::span<const int>) { return cx(1.0, 0.0); };
    DomainFn all = [](std::span<const int>) { return true; };
    auto r1 = symbol_ratio_sup(2, one, all, 0.0, 0.0, 0.0, 0.0, 8, RatioMode::without_dispersion);
    REQUIRE(r1.sup == Approx(1.0).margin(1e-14));

    // Empty domain flag.
    DomainFn none = [](std::span<const int>) { return false; };
    auto r2 = symbol_ratio_sup(2, one, none, 0.0, 0.0, 0.0, 0.0, 4, RatioMode::without_dispersion);
    REQUIRE(r2.empty_domain);
    REQUIRE(r2.sup == 0.0);
}

TEST_CASE("symbol_ratio_sup detects the gamma <= 1 failure boundary", "[dispersion]") {
    // Composite high-low symbol ik (k1+k2)/H_2(k1,k2) on the nested-dominance
    // domain; with weight |k|^gamma / <H_3>^{1/2} the sup grows with K at
    // gamma = 1.2.
    SymbolFn sym = [](std::span<const int> k) {
        long long kk = k[0] + k[1] + k[2];
        long long H2 = 3ll * (k[0] + k[1]) * k[0] * k[1];
        return cx(0.0, double(kk) * double(k[0] + k[1]) / double(H2));
    };
    DomainFn dom = [](std::span<const int> k) {
        if (k[0] + k[1] == 0) return false;
        if (std::abs(k[0]) < 4.0 * std::abs(k[1])) return false;
        if (std::abs(k[0] + k[1]) < 4.0 * std::abs(k[2])) return false;
        return true;
    };
    double prev = 0.0;
    for (int K : {16, 32, 64}) {
        auto r = symbol_ratio_sup(3, sym, dom, 1.2, 0.0, 0.0, 0.0, K, RatioMode::with_dispersion);
        REQUIRE(r.sup > prev);
        prev = r.sup;
    }
}
