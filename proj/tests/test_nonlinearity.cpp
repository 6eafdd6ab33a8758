#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gkdv/nonlinearity.hpp"

using namespace gkdv;
using Catch::Approx;

namespace {

SpectralField cosx() { return from_modes({{1, cx(0.5, 0.0)}}); }

double rel_diff(const SpectralField& a, const SpectralField& b) {
    double n = sobolev_norm(a - b, {0.0});
    double s = std::max(sobolev_norm(a, {0.0}), sobolev_norm(b, {0.0}));
    return s > 0 ? n / s : n;
}

MultilinearSpec derivative_spec(int n) {
    return {n,
            [](std::span<const int> k) {
                long long s = 0;
                for (int x : k) s += x;
                return cx(0.0, double(s));
            },
            [](std::span<const int>) { return true; }, true};
}

// Symmetrized normal-form-type spec: symbol k/H_n on the multiset domain
// "dominant entry separated by C_hl and the rest not summing to zero".
MultilinearSpec nf_symmetric_spec(int n, double C_hl) {
    return {n,
            [](std::span<const int> k) {
                long long s = 0, cubes = 0;
                for (int x : k) {
                    s += x;
                    cubes += 1ll * x * x * x;
                }
                long long H = s * s * s - cubes;
                return cx(double(s) / double(H), 0.0);
            },
            [C_hl](std::span<const int> k) {
                long long s = 0, cubes = 0;
                int imax = 0;
                for (int j = 0; j < int(k.size()); ++j) {
                    s += k[size_t(j)];
                    cubes += 1ll * k[size_t(j)] * k[size_t(j)] * k[size_t(j)];
                    if (std::abs(k[size_t(j)]) > std::abs(k[size_t(imax)])) imax = j;
                }
                long long second = 0;
                for (int j = 0; j < int(k.size()); ++j)
                    if (j != imax) second = std::max(second, (long long)std::abs(k[size_t(j)]));
                if (std::abs(double(k[size_t(imax)])) < C_hl * double(second)) return false;
                if (s - k[size_t(imax)] == 0) return false;
                return s * s * s - cubes != 0;
            },
            true};
}

}  // namespace

TEST_CASE("dxP calculus identities", "[nonlinearity]") {
    auto u = cosx();
    auto d2 = dxP(u, PolyNonlinearity::monomial(1.0, 2), 4);
    // d/dx cos^2 x = -sin 2x: c_2 = i/2
    REQUIRE(std::abs(d2.coef(2) - cx(0.0, 0.5)) < 1e-15);
    REQUIRE(std::abs(d2.coef(1)) < 1e-15);

    auto d3 = dxP(u, PolyNonlinearity::monomial(1.0, 3), 4);
    auto p3 = power(u, 3);
    REQUIRE(std::abs(d3.coef(1) - cx(0.0, 1.0) * p3.coef(1)) < 1e-15);
    REQUIRE(std::abs(d3.coef(3) - cx(0.0, 3.0) * p3.coef(3)) < 1e-15);

    auto z = dxP(u, PolyNonlinearity({{0.0, 2}, {0.0, 4}}), 4);
    REQUIRE(z.is_zero());
}

TEST_CASE("resonant R^1: uniform-transport coefficient", "[nonlinearity]") {
    auto u = cosx();
    // P = u^3: (u^2)_0 = 1/2, so R^1_1 = i (1/2) * 3 * (1/2) = 0.75 i.
    auto r1 = resonant_r1(u, PolyNonlinearity::monomial(1.0, 3));
    REQUIRE(std::abs(r1.coef(1) - cx(0.0, 0.75)) < 1e-15);

    // quadratic nonlinearity has no resonance: (u^1)_0 = 0
    auto rq = resonant_r1(u, PolyNonlinearity::monomial(1.0, 2));
    REQUIRE(rq.is_zero());
}

TEST_CASE("resonant enumeration: hand-counted sets at n=3, k=1, K=2", "[nonlinearity]") {
    auto sets = enumerate_resonant(1, 3, 2);
    REQUIRE(sets.R_k.size() == 9);  // 6 perms of (1,2,-2) + 3 perms of (1,1,-1)
    for (auto& l : sets.R_k_l) REQUIRE(l.size() == 4);
    bool found = false;
    for (auto& t : sets.R_k)
        if (t == std::vector<int>{1, 2, -2}) found = true;
    REQUIRE(found);

    // n = 2: the partner frequency of a resonant slot would be 0
    auto empty = enumerate_resonant(3, 2, 10);
    REQUIRE(empty.R_k.empty());
}

TEST_CASE("inclusion-exclusion residual vanishes", "[nonlinearity]") {
    REQUIRE(inclusion_exclusion_residual(1, 3, 3) == 0);
    REQUIRE(inclusion_exclusion_residual(2, 4, 3) == 0);
    REQUIRE(inclusion_exclusion_residual(1, 3, 2) == 0);
    REQUIRE(inclusion_exclusion_residual(5, 2, 10) == 0);
    for (int k : {1, 2, 4})
        for (int n : {3, 4, 5}) REQUIRE(inclusion_exclusion_residual(k, n, 4) == 0);
}

TEST_CASE("resonant R^2 hand value and homogeneity", "[nonlinearity]") {
    auto u = cosx();
    auto P3 = PolyNonlinearity::monomial(1.0, 3);
    auto r2 = resonant_r2(u, P3);
    // direct R_1 sum = 3 i (1/2)^3 = 3i/8; R^1_1 = 3i/4; R^2_1 = -3i/8.
    REQUIRE(std::abs(r2.coef(1) - cx(0.0, -0.375)) < 1e-14);

    REQUIRE(resonant_r2(cosx(), PolyNonlinearity::monomial(2.0, 2)).is_zero());

    auto v = random_sobolev({1.0}, 6, 17);
    auto a = resonant_r2(2.0 * v, P3);
    auto b = 8.0 * resonant_r2(v, P3);
    REQUIRE(rel_diff(a, b) < 1e-13);
}

TEST_CASE("partition identity dxP = R1 + R2 + sum HL + HH", "[nonlinearity]") {
    struct CasePoly {
        PolyNonlinearity P;
        int N;
    };
    std::vector<CasePoly> cases = {
        {PolyNonlinearity::monomial(1.0, 2), 16},
        {PolyNonlinearity::monomial(1.0, 3), 12},
        {PolyNonlinearity::monomial(-0.75, 4), 8},
        {PolyNonlinearity({{1.0, 3}, {0.5, 4}}), 8},
    };
    for (auto& tc : cases) {
        auto u = random_sobolev({1.0}, tc.N, 5);
        int cutoff = tc.N * tc.P.max_degree();
        auto split = split_nr(u, tc.P, 4.0, cutoff);
        auto total = resonant_r1(u, tc.P) + resonant_r2(u, tc.P, cutoff) + split.hh;
        for (size_t j = 0; j < split.hl.size(); ++j) {
            const auto& m = tc.P.monomials()[j];
            total = total + (m.coeff * m.degree) * split.hl[j];
        }
        auto want = dxP(u, tc.P, cutoff);
        REQUIRE(rel_diff(total, want) < 1e-12);
        REQUIRE(split.hh.hermitian_error() < 1e-12);
    }
}

TEST_CASE("split_nr: no separated pair for a single harmonic", "[nonlinearity]") {
    auto u = cosx();
    auto P2 = PolyNonlinearity::monomial(1.0, 2);
    auto split = split_nr(u, P2, 4.0, 2);
    REQUIRE(split.hl[0].is_zero());
    auto nr = dxP(u, P2, 2) - resonant_r1(u, P2) - resonant_r2(u, P2, 2);
    REQUIRE(rel_diff(split.hh, nr) < 1e-14);
}

TEST_CASE("multilinear_apply against the dxP oracle", "[nonlinearity]") {
    auto u = random_sobolev({1.0}, 10, 23);
    auto spec = derivative_spec(3);
    auto got = multilinear_apply(spec, {u, u, u}, 30);
    auto want = dxP(u, PolyNonlinearity::monomial(1.0, 3), 30);
    REQUIRE(rel_diff(got, want) < 1e-13);

    // sigma == 1, n = 2: plain product on nonzero modes
    MultilinearSpec prod{2, [](std::span<const int>) { return cx(1.0, 0.0); },
                         [](std::span<const int>) { return true; }, true};
    auto v = random_sobolev({1.0}, 10, 24);
    auto uv = multilinear_apply(prod, {u, v}, 20);
    PaddedField byconv = detail::convolve(u.padded(10), v.padded(10), 20);
    for (int k = -20; k <= 20; ++k)
        if (k) REQUIRE(std::abs(uv.coef(k) - byconv.coef(k)) < 1e-14);

    MultilinearSpec empty{2, [](std::span<const int>) { return cx(1.0, 0.0); },
                          [](std::span<const int>) { return false; }, true};
    REQUIRE(multilinear_apply(empty, {u, v}, 20).is_zero());

    // linearity in a slot
    auto w = random_sobolev({1.0}, 10, 25);
    auto lhs = multilinear_apply(prod, {u, axpy(2.0, v, w)}, 20);
    auto rhs = axpy(2.0, multilinear_apply(prod, {u, v}, 20), multilinear_apply(prod, {u, w}, 20));
    REQUIRE(rel_diff(lhs, rhs) < 1e-13);
}

TEST_CASE("polarization identity: C_n = n!", "[nonlinearity]") {
    auto v1 = random_sobolev({1.0}, 6, 31);
    auto v2 = random_sobolev({1.0}, 6, 32);
    auto v3 = random_sobolev({1.0}, 6, 33);
    auto v4 = random_sobolev({1.0}, 6, 34);

    {
        auto spec = derivative_spec(2);
        double res = polarize_check(spec, {v1, v2});
        double scale = sobolev_norm(multilinear_apply(spec, {v1, v2}, 12), {0.0});
        REQUIRE(res < 1e-12 * std::max(1.0, scale));
    }
    {
        auto spec = derivative_spec(3);
        double res = polarize_check(spec, {v1, v2, v3});
        double scale = 6.0 * sobolev_norm(multilinear_apply(spec, {v1, v2, v3}, 18), {0.0});
        REQUIRE(res < 1e-12 * std::max(1.0, scale));
    }
    {
        auto spec = nf_symmetric_spec(4, 4.0);
        double res = polarize_check(spec, {v1, v2, v3, v4});
        double scale = 24.0 * sobolev_norm(multilinear_apply(spec, {v1, v2, v3, v4}, 24), {0.0});
        REQUIRE(res < 1e-12 * std::max(1.0, scale));
    }
    // asymmetric specs are rejected
    MultilinearSpec claimed_sym{2, [](std::span<const int> k) { return cx(double(k[0]), 0.0); },
                                [](std::span<const int>) { return true; }, true};
    REQUIRE_THROWS_AS(polarize_check(claimed_sym, {v1, v2}), std::invalid_argument);
    MultilinearSpec declared_asym = derivative_spec(2);
    declared_asym.symmetric = false;
    REQUIRE_THROWS_AS(polarize_check(declared_asym, {v1, v2}), std::invalid_argument);
}

TEST_CASE("all nonlinearity outputs are Hermitian and mean-zero", "[nonlinearity]") {
    auto u = random_sobolev({0.8}, 8, 77);
    PolyNonlinearity P({{1.0, 2}, {-0.3, 3}});
    for (const auto& f : {dxP(u, P, 24), resonant_r1(u, P), resonant_r2(u, P, 24)}) {
        REQUIRE(f.hermitian_error() < 1e-12);
        REQUIRE(f.coef(0) == cx{});
    }
}
