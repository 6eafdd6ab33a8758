#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "gkdv/gauge.hpp"
#include "gkdv/solver.hpp"

using namespace gkdv;
using Catch::Approx;

namespace {
SpectralField cosx() { return from_modes({{1, cx(0.5, 0.0)}}); }
}

TEST_CASE("mean_power trig values", "[gauge]") {
    REQUIRE(mean_power(cosx(), 2) == Approx(std::numbers::pi).epsilon(1e-14));
    REQUIRE(mean_power(cosx(), 3) == Approx(0.0).margin(1e-14));
    REQUIRE(mean_power(random_sobolev({1.0}, 16, 2), 1) == 0.0);
    // translation invariance of means, all degrees in a generic P
    auto u = random_sobolev({1.0}, 12, 8);
    for (int p : {2, 3, 4})
        REQUIRE(mean_power(translate(u, 0.9), p) == Approx(mean_power(u, p)).margin(1e-12));
}

TEST_CASE("gauge_forward: phase basics", "[gauge]") {
    auto P = PolyNonlinearity::monomial(1.0, 3);
    SolverConfig cfg;
    cfg.N = 8;
    cfg.dt = 1e-3;
    cfg.T = 0.2;
    cfg.sample_every = 10;
    cfg.P = P;
    auto f = 0.4 * random_sobolev({1.0}, 8, 3);
    auto traj = simulate(f, cfg);
    auto g = gauge_forward(traj, P);

    // t = 0 slice identical
    for (int k = 1; k <= 8; ++k) REQUIRE(g.states[0].coef(k) == traj.states[0].coef(k));
    REQUIRE(g.phase[0] == 0.0);
    REQUIRE(g.phase.back() > 0.0);  // mKdV rate = 3 (u^2)_0 > 0

    // norm equality at every sample and every s
    for (std::size_t i = 0; i < traj.size(); ++i)
        for (double s : {0.0, 0.7, 1.0, 2.0})
            REQUIRE(sobolev_norm(g.states[i], {s}) ==
                    Approx(sobolev_norm(traj.states[i], {s})).epsilon(1e-13));

    // moduli preserved mode by mode
    for (std::size_t i = 0; i < traj.size(); ++i)
        for (int k = 1; k <= 8; ++k)
            REQUIRE(std::abs(g.states[i].coef(k)) ==
                    Approx(std::abs(traj.states[i].coef(k))).margin(1e-15));
}

TEST_CASE("quadratic P has an identity gauge", "[gauge]") {
    auto P = PolyNonlinearity::monomial(1.0, 2);
    SolverConfig cfg;
    cfg.N = 8;
    cfg.dt = 1e-3;
    cfg.T = 0.1;
    cfg.sample_every = 20;
    cfg.P = P;
    auto traj = simulate(0.3 * random_sobolev({1.0}, 8, 5), cfg);
    auto g = gauge_forward(traj, P);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        REQUIRE(g.phase[i] == 0.0);
        for (int k = 1; k <= 8; ++k) REQUIRE(g.states[i].coef(k) == traj.states[i].coef(k));
    }
}

TEST_CASE("gauge round trip on an mKdV trajectory", "[gauge]") {
    auto P = PolyNonlinearity::monomial(1.0, 3);
    SolverConfig cfg;
    cfg.N = 16;
    cfg.dt = 1e-4;
    cfg.T = 0.5;
    cfg.sample_every = 100;
    cfg.P = P;
    auto f = random_sobolev({1.0}, 16, 7);
    auto traj = simulate(f, cfg);
    auto round = gauge_inverse(gauge_forward(traj, P), P);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i)
        worst = std::max(worst, sobolev_norm(round.states[i] - traj.states[i], {1.0}));
    REQUIRE(worst <= 1e-9);
}

TEST_CASE("gauge degenerate cases", "[gauge]") {
    auto P = PolyNonlinearity::monomial(1.0, 3);
    Trajectory single;
    single.times = {0.0};
    single.states = {cosx()};
    single.phase = {0.0};
    single.mass = {1.0};
    single.hamiltonian = {1.0};
    single.mean_pows = {{mean_power(cosx(), 2)}};
    auto g = gauge_forward(single, P);
    REQUIRE(g.phase[0] == 0.0);
    REQUIRE(g.states[0].coef(1) == cosx().coef(1));

    Trajectory bad = single;
    bad.times = {0.0};
    bad.states = {cosx(), cosx()};
    REQUIRE_THROWS_AS(gauge_forward(bad, P), std::invalid_argument);
}
