#ifndef GKDV_SOLVER_HPP
#define GKDV_SOLVER_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkdv/fft.hpp"
#include "gkdv/field.hpp"
#include "gkdv/gauge.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/poly.hpp"

namespace gkdv {

enum class Equation { original, gauged };

struct SolverConfig {
    int N = 32;
    double dt = 1e-3;
    double T = 1.0;
    int sample_every = 1;
    Equation equation = Equation::original;
    PolyNonlinearity P = PolyNonlinearity::monomial(1.0, 3);
    int cutoff = -1;  // nonlinearity truncation; default N
    double blowup_factor = 1e6;

    void validate() const {
        if (N < 1) throw std::invalid_argument("SolverConfig: N >= 1");
        if (!(dt > 0)) throw std::invalid_argument("SolverConfig: dt > 0");
        if (!(T > 0)) throw std::invalid_argument("SolverConfig: T > 0");
        if (sample_every < 1) throw std::invalid_argument("SolverConfig: sample_every >= 1");
    }
};

struct InvariantTriple {
    double mean = 0.0;  // structurally zero
    double mass = 0.0;
    double hamiltonian = 0.0;
};

struct blowup_error : std::runtime_error {
    double last_good_time;
    explicit blowup_error(double t)
        : std::runtime_error("blow-up guard tripped at t = " + std::to_string(t)), last_good_time(t) {}
};

/// Mass I[u] = Int u^2 and Hamiltonian H[u] = Int (1/2) u_x^2 + G(u) with
/// G' = P, G(0) = 0; both computed spectrally (exact for trig polynomials).
inline InvariantTriple invariants(const SpectralField& u, const PolyNonlinearity& P) {
    InvariantTriple out;
    double mass = 0.0, quad = 0.0;
    for (int k = -u.cutoff(); k <= u.cutoff(); ++k) {
        if (!k) continue;
        double a2 = std::norm(u.coef(k));
        mass += a2;
        quad += double(k) * double(k) * a2;
    }
    double g0 = 0.0;
    for (const auto& m : P.monomials())
        if (m.coeff != 0.0) g0 += m.coeff / (m.degree + 1.0) * zero_mode_power(u, m.degree + 1);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    out.mass = two_pi * mass;
    out.hamiltonian = two_pi * (0.5 * quad + g0);
    return out;
}

namespace detail {

// IFRK4 stepper working on raw [-N..N] tables; linear phase exact.
class Stepper {
  public:
    Stepper(const SolverConfig& cfg) : cfg_(cfg), eng_(cfg.N, std::max(1, cfg.P.max_degree())) {
        if (cfg.cutoff >= 0 && cfg.cutoff < cfg.N)
            throw std::invalid_argument("SolverConfig: cutoff >= N required");
    }

    int state_cutoff() const { return cfg_.N; }

    /// RHS in mode space: ik (P(u))_k, minus R^1 for the gauged equation.
    std::vector<cx> rhs(const SpectralField& u) const {
        std::vector<cx> out = eng_.dxP_raw(u, cfg_.P, cfg_.N);
        if (cfg_.equation == Equation::gauged && !cfg_.P.is_zero()) {
            double rate = 0.0;
            for (const auto& m : cfg_.P.monomials()) {
                if (m.coeff == 0.0) continue;
                rate += m.degree == 2 ? 0.0
                                      : m.coeff * m.degree * eng_.zero_mode_of_pow(u, m.degree - 1);
            }
            for (int k = -cfg_.N; k <= cfg_.N; ++k)
                if (k) out[size_t(k + cfg_.N)] -= cx(0.0, double(k)) * u.coef(k) * rate;
        }
        return out;
    }

    SpectralField step(const SpectralField& u, double h) const {
        int N = cfg_.N;
        auto phase = [&](const std::vector<cx>& a, double t) {
            std::vector<cx> r(a.size());
            for (int k = -N; k <= N; ++k)
                r[size_t(k + N)] = a[size_t(k + N)] * std::polar(1.0, double(k) * double(k) * double(k) * t);
            return r;
        };
        auto to_field = [&](const std::vector<cx>& a) { return SpectralField::from_raw(a, N, 1e-9); };
        auto table = [&](const SpectralField& f) {
            std::vector<cx> r(2 * static_cast<size_t>(N) + 1, cx{});
            for (int k = -N; k <= N; ++k)
                if (k) r[size_t(k + N)] = f.coef(k);
            return r;
        };

        std::vector<cx> u0 = table(u);
        std::vector<cx> n1 = rhs(u);

        std::vector<cx> a1(u0.size());
        for (std::size_t i = 0; i < u0.size(); ++i) a1[i] = u0[i] + 0.5 * h * n1[i];
        std::vector<cx> n2 = rhs(to_field(phase(a1, 0.5 * h)));

        std::vector<cx> eu = phase(u0, 0.5 * h);
        std::vector<cx> a2(u0.size());
        for (std::size_t i = 0; i < u0.size(); ++i) a2[i] = eu[i] + 0.5 * h * n2[i];
        std::vector<cx> n3 = rhs(to_field(a2));

        std::vector<cx> e2u = phase(u0, h);
        std::vector<cx> en3 = phase(n3, 0.5 * h);
        std::vector<cx> a3(u0.size());
        for (std::size_t i = 0; i < u0.size(); ++i) a3[i] = e2u[i] + h * en3[i];
        std::vector<cx> n4 = rhs(to_field(a3));

        std::vector<cx> en1 = phase(n1, h);
        std::vector<cx> en2 = phase(n2, 0.5 * h);
        std::vector<cx> out(u0.size());
        for (std::size_t i = 0; i < u0.size(); ++i)
            out[i] = e2u[i] + h / 6.0 * (en1[i] + 2.0 * en2[i] + 2.0 * en3[i] + n4[i]);
        return to_field(out);
    }

  private:
    SolverConfig cfg_;
    ProductEngine eng_;
};

}  // namespace detail

/// One IFRK4 step of u_t + u_xxx = dxP(u) truncated to |k| <= cutoff.
inline SpectralField step(const SpectralField& u, double dt, const PolyNonlinearity& P, int cutoff) {
    SolverConfig cfg;
    cfg.N = cutoff;
    cfg.dt = dt;
    cfg.P = P;
    detail::Stepper st(cfg);
    return st.step(truncated(u, cutoff), dt);
}

/// Integrate from f and sample every sample_every steps (plus t = 0 and the
/// final time), recording invariants, mean powers and H^s norms.
inline Trajectory simulate(const SpectralField& f, const SolverConfig& cfg,
                           std::vector<double> s_list = {0.0, 1.0}) {
    cfg.validate();
    detail::Stepper st(cfg);
    SpectralField u = truncated(f, cfg.N);

    long long steps = std::llround(cfg.T / cfg.dt);
    if (steps < 1) throw std::invalid_argument("simulate: T < dt");

    Trajectory traj;
    traj.s_list = s_list;
    auto h1_fast = [&](const SpectralField& v) {
        double acc = 0.0;
        for (int k = 1; k <= v.cutoff(); ++k) acc += (1.0 + double(k) * double(k)) * std::norm(v.coef(k));
        return std::sqrt(2.0 * acc);
    };
    double guard = cfg.blowup_factor * std::max(h1_fast(u), 1e-300);

    auto record = [&](double t, const SpectralField& v) {
        traj.times.push_back(t);
        traj.states.push_back(v);
        auto inv = invariants(v, cfg.P);
        traj.mass.push_back(inv.mass);
        traj.hamiltonian.push_back(inv.hamiltonian);
        std::vector<double> mp;
        for (const auto& m : cfg.P.monomials()) mp.push_back(mean_power(v, m.degree - 1));
        traj.mean_pows.push_back(std::move(mp));
        std::vector<double> hs;
        for (double s : s_list) hs.push_back(sobolev_norm(v, {s}));
        traj.hs_norms.push_back(std::move(hs));
        traj.phase.push_back(0.0);
    };
    record(0.0, u);

    for (long long i = 1; i <= steps; ++i) {
        try {
            u = st.step(u, cfg.dt);
        } catch (const std::invalid_argument&) {
            // a stage went non-finite before the post-step guard could see it
            throw blowup_error(double(i - 1) * cfg.dt);
        }
        double h1 = h1_fast(u);
        if (!std::isfinite(h1) || h1 > guard) throw blowup_error(double(i - 1) * cfg.dt);
        if (i % cfg.sample_every == 0 || i == steps) record(double(i) * cfg.dt, u);
    }

    // For gauged runs the recorded phase is the accumulated Phi of the gauged
    // solution itself (used by gauge_inverse to reconstruct u).
    if (cfg.equation == Equation::gauged)
        traj.phase = detail::phase_integral(traj, cfg.P);
    return traj;
}

}  // namespace gkdv

#endif
