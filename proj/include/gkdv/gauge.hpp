#ifndef GKDV_GAUGE_HPP
#define GKDV_GAUGE_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gkdv/field.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/poly.hpp"

namespace gkdv {

/// Spatial mean Int_T u^p dx = 2 pi (u^p)_0.
inline double mean_power(const SpectralField& u, int p) {
    return 2.0 * std::numbers::pi * zero_mode_power(u, p);
}

// Time-ordered samples of a run: states, accumulated gauge phase and per-time
// diagnostics. mean_pows[i][j] stores mean_power(u(t_i), d_j - 1) for the j-th
// monomial of the driving nonlinearity.
struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
    std::vector<double> phase;
    std::vector<double> mass;
    std::vector<double> hamiltonian;
    std::vector<std::vector<double>> mean_pows;
    std::vector<double> s_list;
    std::vector<std::vector<double>> hs_norms;  // per time, per s in s_list

    std::size_t size() const { return times.size(); }

    void validate() const {
        if (times.empty()) throw std::invalid_argument("Trajectory: empty");
        if (states.size() != times.size() || phase.size() != times.size() ||
            mean_pows.size() != times.size())
            throw std::invalid_argument("Trajectory: ragged columns");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1])) throw std::invalid_argument("Trajectory: non-monotone times");
        if (phase.front() != 0.0 && times.front() == 0.0)
            throw std::invalid_argument("Trajectory: phase must start at 0");
    }
};

namespace detail {
// Phi(t_i) by cumulative trapezoid of the rate sum_j a_j d_j (u^{d_j-1})_0,
// i.e. sum_j a_j d_j mean_power(...)/(2 pi), on the sample grid.
inline std::vector<double> phase_integral(const Trajectory& traj, const PolyNonlinearity& P) {
    const auto& ms = P.monomials();
    auto rate = [&](std::size_t i) {
        if (traj.mean_pows[i].size() != ms.size())
            throw std::invalid_argument("gauge: trajectory diagnostics do not match P");
        double r = 0.0;
        for (std::size_t j = 0; j < ms.size(); ++j)
            r += ms[j].coeff * ms[j].degree * traj.mean_pows[i][j] / (2.0 * std::numbers::pi);
        return r;
    };
    std::vector<double> phi(traj.size(), 0.0);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        double dt = traj.times[i] - traj.times[i - 1];
        phi[i] = phi[i - 1] + 0.5 * dt * (rate(i - 1) + rate(i));
    }
    return phi;
}

inline SpectralField phase_shift(const SpectralField& u, double phi) {
    std::vector<cx> pos(static_cast<size_t>(u.cutoff()));
    for (int k = 1; k <= u.cutoff(); ++k) pos[size_t(k - 1)] = u.coef(k) * std::polar(1.0, -k * phi);
    return SpectralField::from_positive_modes(std::move(pos));
}
}  // namespace detail

/// u -> utilde: mode k multiplied by exp(-i k Phi(t)), removing R^1. Norms,
/// means, mass and hamiltonian are unchanged slice by slice.
inline Trajectory gauge_forward(const Trajectory& traj, const PolyNonlinearity& P) {
    traj.validate();
    Trajectory out = traj;
    out.phase = detail::phase_integral(traj, P);
    for (std::size_t i = 0; i < traj.size(); ++i)
        out.states[i] = detail::phase_shift(traj.states[i], out.phase[i]);
    return out;
}

/// utilde -> u by spatial translation x -> x + Phi(t), with Phi recomputed
/// from utilde's means (they equal u's). Inverse of gauge_forward.
inline Trajectory gauge_inverse(const Trajectory& traj, const PolyNonlinearity& P) {
    traj.validate();
    Trajectory out = traj;
    std::vector<double> phi = detail::phase_integral(traj, P);
    for (std::size_t i = 0; i < traj.size(); ++i) out.states[i] = translate(traj.states[i], phi[i]);
    for (auto& p : out.phase) p = 0.0;
    return out;
}

}  // namespace gkdv

#endif
