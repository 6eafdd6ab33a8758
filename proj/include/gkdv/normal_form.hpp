#ifndef GKDV_NORMAL_FORM_HPP
#define GKDV_NORMAL_FORM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkdv/dispersion.hpp"
#include "gkdv/field.hpp"
#include "gkdv/gauge.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/poly.hpp"

namespace gkdv {

struct NormalFormConfig {
    double C_hl = 2.0;  // >= 2 keeps H_n away from zero on the restricted domain
    int cutoff = 64;    // output projection P_{<= cutoff}

    void validate() const {
        if (C_hl < 2.0) throw std::invalid_argument("NormalFormConfig: C_hl >= 2 required");
        if (cutoff < 1) throw std::invalid_argument("NormalFormConfig: cutoff >= 1 required");
    }
};

// Exact rational over __int128 for the symbol algebra.
struct Rat {
    __int128 num = 0;
    __int128 den = 1;

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(__int128 n, __int128 d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 a = num < 0 ? -num : num, b = den;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
    }

    Rat operator+(const Rat& o) const { return Rat(num * o.den + o.num * den, den * o.den); }
    Rat operator-(const Rat& o) const { return Rat(num * o.den - o.num * den, den * o.den); }
    Rat operator*(const Rat& o) const { return Rat(num * o.num, den * o.den); }
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool is_zero() const { return num == 0; }
    double to_double() const { return double(num) / double(den); }
};

namespace detail {
inline long long hn_ll(std::span<const int> k) {
    long long s = 0, cubes = 0;
    for (int x : k) {
        s += x;
        cubes += 1ll * x * x * x;
    }
    return s * s * s - cubes;
}
}  // namespace detail

/// Normal form operator: symbol -k/H_n on the domain
/// |k_1| >= C_hl max_{j>=2} |k_j| (ties included), k_2 + ... + k_n != 0.
/// The sign makes (d_t + dx^3) T_NF(e^{t dx^3} f, v,..,v) = HL^n[...] + remainder,
/// so the transform cancels the free-first-slot high-low term.
inline SpectralField t_nf(int n, const SpectralField& f, const std::vector<SpectralField>& trailing,
                          const NormalFormConfig& cfg, int out_cutoff = -1,
                          long long budget = 400'000'000ll) {
    cfg.validate();
    if (int(trailing.size()) != n - 1) throw std::invalid_argument("t_nf: need n-1 trailing fields");
    int B = 0;
    for (const auto& v : trailing) B = std::max(B, v.cutoff());
    if (out_cutoff < 0) out_cutoff = f.cutoff() + (n - 1) * B;
    detail::check_budget(n - 1, B, 2ll * f.cutoff() + 1, budget);

    std::vector<cx> raw(2 * static_cast<size_t>(out_cutoff) + 1, cx{});
    std::vector<int> t(static_cast<size_t>(n));
    for (int k1 = -f.cutoff(); k1 <= f.cutoff(); ++k1) {
        if (!k1 || f.coef(k1) == cx{}) continue;
        int b2 = std::min(B, int(std::floor(std::abs(double(k1)) / cfg.C_hl + 1e-12)));
        if (b2 < 1) continue;
        detail::TupleIter it(n - 1, b2);
        do {
            auto& tail = it.value();
            long long s = std::accumulate(tail.begin(), tail.end(), 0ll);
            if (s == 0) continue;
            long long k = k1 + s;
            if (k == 0 || std::abs(k) > out_cutoff) continue;
            t[0] = k1;
            for (int j = 1; j < n; ++j) t[size_t(j)] = tail[size_t(j - 1)];
            long long H = detail::hn_ll(t);
            if (H == 0)
                throw std::domain_error("t_nf: vanishing H_n on restricted domain (configuration error)");
            cx pr = f.coef(k1);
            for (int j = 0; j < n - 1; ++j) pr *= trailing[size_t(j)].coef(tail[size_t(j)]);
            raw[size_t(k + out_cutoff)] += -double(k) / double(H) * pr;
        } while (it.advance());
    }
    return SpectralField::from_raw(raw, out_cutoff, kHermitianTol);
}

/// Enumerative guard: no vanishing H_n on the restricted domain for boxes
/// |k_j| <= K. Returns the number of admissible tuples checked.
inline long long assert_hn_nonvanishing(int n, int K, double C_hl, long long budget = 200'000'000ll) {
    detail::check_budget(n, K, 1, budget);
    long long checked = 0;
    detail::TupleIter it(n, K);
    do {
        auto& k = it.value();
        long long maxtail = 0, s = 0;
        for (int j = 1; j < n; ++j) maxtail = std::max(maxtail, (long long)std::abs(k[size_t(j)]));
        for (int j = 1; j < n; ++j) s += k[size_t(j)];
        if (s == 0) continue;
        if (std::abs(double(k[0])) < C_hl * double(maxtail)) continue;
        ++checked;
        if (detail::hn_ll(std::span<const int>(k)) == 0)
            throw std::runtime_error("H_n vanishes on restricted domain at n=" + std::to_string(n));
    } while (it.advance());
    return checked;
}

/// Empirical ceiling check for the normal-form bound:
/// max over trials of ||T_NF(u, v..v)||_{H^{s+1}} / (||u||_{H^s} ||v||_{H^{0.6}}^{n-1}).
inline double nf_bound_ratio(int n, double s, int N, int trials, std::uint64_t seed,
                             const NormalFormConfig& cfg) {
    double best = 0.0;
    for (int tr = 0; tr < trials; ++tr) {
        auto u = random_sobolev({s}, N, seed + 2 * std::uint64_t(tr));
        auto v = random_sobolev({0.6}, N, seed + 2 * std::uint64_t(tr) + 1);
        double du = sobolev_norm(u, {s});
        if (du == 0.0) continue;  // degenerate trial skipped
        std::vector<SpectralField> vs(static_cast<size_t>(n - 1), v);
        auto T = t_nf(n, u, vs, cfg);
        double num = sobolev_norm(T, {s + 1.0});
        double den = du * std::pow(sobolev_norm(v, {0.6}), n - 1);
        best = std::max(best, num / den);
    }
    return best;
}

/// w = u - e^{t dx^3} f - sum_j a_j d_j P_{<=cutoff} T_NF^{d_j}(e^{t dx^3} f, u,..,u).
/// Input u is the gauged solution at time t. At t = 0 this reduces to
/// -sum_j a_j d_j T_NF(f,..,f).
inline SpectralField w_decompose(const SpectralField& u_t, const SpectralField& f, double t,
                                 const PolyNonlinearity& P, const NormalFormConfig& cfg) {
    cfg.validate();
    SpectralField F = free_flow(f, t);
    SpectralField w = truncated(u_t, cfg.cutoff) - truncated(F, cfg.cutoff);
    for (const auto& m : P.monomials()) {
        if (m.coeff == 0.0) continue;
        std::vector<SpectralField> tr(static_cast<size_t>(m.degree - 1), u_t);
        SpectralField T = truncated(t_nf(m.degree, F, tr, cfg), cfg.cutoff);
        w = w - (m.coeff * m.degree) * T;
    }
    return w;
}

// sigma - mu for the composite high-low/normal-form symbol on the resonant
// (B-restricted) set, where the head tuple is (k_1,...,k_n), the total output
// frequency equals k_1, sigma = i k ktil_1 / H_n and mu = i/(3 ktil_2).
// Both the direct difference and the telescoped closed form are exact
// rationals; value() is i times the rational.
struct SigmaMinusMu {
    Rat direct;
    Rat closed;
    double bound_ratio = 0.0;  // |sigma-mu| k_1^2 / (kmax2 kmax3 kmax4 of the head tail)

    bool exact_equal() const { return direct == closed; }
    cx value() const { return cx(0.0, direct.to_double()); }
};

inline SigmaMinusMu sigma_minus_mu(const FrequencyTuple& head) {
    int n = head.arity();
    const auto& k = head.k;
    long long ktil2 = 0;
    for (int j = 1; j < n; ++j) ktil2 += k[size_t(j)];
    if (ktil2 == 0) throw std::domain_error("sigma_minus_mu: ktil_2 = 0");
    long long H = h_n(head);
    if (H == 0) throw std::domain_error("sigma_minus_mu: H_n = 0");
    long long k1 = k[0];
    long long ktil1 = k1 + ktil2;

    SigmaMinusMu out;
    // direct: k1*ktil1/H - 1/(3 ktil2)  (output frequency = k1 on the B set)
    out.direct = Rat(__int128(k1) * ktil1, __int128(H)) - Rat(1, __int128(3) * ktil2);

    if (n == 2) {
        out.closed = Rat(0);
    } else {
        // tails ktil_j = k_j + ... + k_n
        std::vector<long long> tail(static_cast<size_t>(n) + 1, 0);
        for (int j = n - 1; j >= 0; --j) tail[size_t(j)] = tail[size_t(j) + 1] + k[size_t(j)];
        // -k2 ktil3 / H - sum_{j=3}^{n-1} k_j ktil_{j+1} / H
        // + sum_{j=3}^{n-1} sum_{l=2}^{j-1} sum_{m=j+1}^{n} k_l k_j k_m / (ktil2 H)
        Rat acc = Rat(-__int128(k[1]) * tail[2], __int128(H));
        for (int j = 3; j <= n - 1; ++j)
            acc = acc - Rat(__int128(k[size_t(j - 1)]) * tail[size_t(j)], __int128(H));
        __int128 triple = 0;
        for (int j = 3; j <= n - 1; ++j)
            for (int l = 2; l <= j - 1; ++l)
                for (int m = j + 1; m <= n; ++m)
                    triple += __int128(k[size_t(l - 1)]) * k[size_t(j - 1)] * k[size_t(m - 1)];
        acc = acc + Rat(triple, __int128(ktil2) * H);
        out.closed = acc;
    }

    std::vector<long long> tails;
    for (int j = 1; j < n; ++j) tails.push_back(std::abs(k[size_t(j)]));
    std::sort(tails.rbegin(), tails.rend());
    auto m_at = [&](int j) { return j < int(tails.size()) ? double(tails[size_t(j)]) : 1.0; };
    out.bound_ratio =
        std::abs(out.direct.to_double()) * double(k1) * double(k1) / (m_at(0) * m_at(1) * m_at(2));
    return out;
}

enum class CancelKind { self_n, mixed_nm };

struct CancellationResult {
    double residual = 0.0;  // H^0 norm of the assembled T_mu^B
    double scale = 0.0;     // H^0 norm of the absolute-value assembly
    double relative() const { return scale > 0 ? residual / scale : residual; }
};

/// Assemble T_mu^B by direct restricted summation and return its size. The
/// paper's cancellation says this vanishes identically; numerically the
/// relative residual is pure roundoff.
///   self_n:   mu = i / (3 (k_2+..+k_n)) over 2n-2 trailing slots summing to 0;
///   mixed_nm: mu = i/(3 (k_2+..+k_m)) + i/(3 (k_2+..+k_n)) over n+m-2 slots.
/// All trailing slots carry u; the head carries f_k; every |k_j| <= |k|/C_hl.
inline CancellationResult cancellation_residual(CancelKind kind, int n, int m, const SpectralField& f,
                                                const SpectralField& u, const NormalFormConfig& cfg,
                                                long long budget = 2'000'000'000ll) {
    cfg.validate();
    if (n < 2 || (kind == CancelKind::mixed_nm && m < 2))
        throw std::invalid_argument("cancellation_residual: arities >= 2");
    int q = kind == CancelKind::self_n ? 2 * n - 2 : n + m - 2;
    int la_len = kind == CancelKind::self_n ? n - 1 : m - 1;  // first inner block length
    int lb_len = n - 1;

    int Nf = f.cutoff();
    {
        int bmax = std::min(u.cutoff(), int(std::floor(Nf / cfg.C_hl)));
        detail::check_budget(q - 1, std::max(bmax, 1), 2ll * Nf + 1, budget);
    }

    std::vector<cx> val(2 * static_cast<size_t>(Nf) + 1, cx{});
    std::vector<double> mag(2 * static_cast<size_t>(Nf) + 1, 0.0);
    for (int k = -Nf; k <= Nf; ++k) {
        if (!k || f.coef(k) == cx{}) continue;
        int B = std::min(u.cutoff(), int(std::floor(std::abs(double(k)) / cfg.C_hl + 1e-12)));
        if (B < 1) continue;
        cx acc{};
        double amag = 0.0;
        detail::TupleIter it(q - 1, B);
        do {
            auto& head = it.value();
            long long s = std::accumulate(head.begin(), head.end(), 0ll);
            long long last = -s;
            if (last == 0 || std::abs(last) > B) continue;
            cx pr = 1.0;
            for (int x : head) pr *= u.coef(x);
            pr *= u.coef(int(last));
            auto blocksum = [&](int len) {
                long long t = 0;
                for (int j = 0; j < len; ++j) t += (j < q - 1 ? head[size_t(j)] : last);
                return t;
            };
            cx mu{};
            long long la = blocksum(la_len);
            if (la != 0) mu += cx(0.0, 1.0 / (3.0 * double(la)));
            if (kind == CancelKind::mixed_nm) {
                long long lb = blocksum(lb_len);
                if (lb != 0) mu += cx(0.0, 1.0 / (3.0 * double(lb)));
            }
            acc += mu * pr;
            amag += std::abs(mu) * std::abs(pr);
        } while (it.advance());
        val[size_t(k + Nf)] = f.coef(k) * acc;
        mag[size_t(k + Nf)] = std::abs(f.coef(k)) * amag;
    }
    CancellationResult out;
    double r2 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < val.size(); ++i) {
        r2 += std::norm(val[i]);
        s2 += mag[i] * mag[i];
    }
    out.residual = std::sqrt(r2);
    out.scale = std::sqrt(s2);
    return out;
}

// Labeled right-hand-side terms of the w-equation for the truncated (Galerkin)
// system the solver integrates:
//   (d_t + dx^3) w = w1 + ... + w6,
//   w1 = P[R^2 + HH],  w2 = sum_j a_j d_j P[HL^{d_j}[w, u..]],
//   w3/w4 = -a_j d_j (d_j - 1) P[T_NF^{d_j}(F, u,.., N_rhs)]  (per monomial),
//   w5 = diagonal P[HL[T_j, u..]] cross terms, w6 = off-diagonal ones,
// with N_rhs = P[dxP(u) - R^1(u)] and T_j = P[T_NF^{d_j}(F, u,..,u)].
struct WRhsTerms {
    SpectralField w1, w2, w3, w4, w5, w6;
    SpectralField sum() const { return w1 + w2 + w3 + w4 + w5 + w6; }
};

inline WRhsTerms w_rhs_terms(const SpectralField& u, const SpectralField& f, double t,
                             const PolyNonlinearity& P, const NormalFormConfig& cfg,
                             long long budget = 400'000'000ll) {
    cfg.validate();
    int C = cfg.cutoff;
    SpectralField F = free_flow(f, t);
    const auto& ms = P.monomials();

    SpectralField n_rhs = truncated(dxP(u, P, C) - resonant_r1(u, P), C);

    // T_j = projected normal-form fields; w from the same objects
    std::vector<SpectralField> T(ms.size());
    SpectralField w = truncated(u, C) - truncated(F, C);
    for (std::size_t j = 0; j < ms.size(); ++j) {
        if (ms[j].coeff == 0.0) {
            T[j] = SpectralField{};
            continue;
        }
        std::vector<SpectralField> tr(static_cast<size_t>(ms[j].degree - 1), u);
        T[j] = truncated(t_nf(ms[j].degree, F, tr, cfg, -1, budget), C);
        w = w - (ms[j].coeff * ms[j].degree) * T[j];
    }

    WRhsTerms out;
    // w1 = P[R2 + HH] = N_rhs - sum_j a_j d_j P[HL^{d_j}[u, u..]]
    out.w1 = n_rhs;
    for (std::size_t j = 0; j < ms.size(); ++j) {
        if (ms[j].coeff == 0.0) continue;
        std::vector<SpectralField> rest(static_cast<size_t>(ms[j].degree - 1), u);
        out.w1 = out.w1 - (ms[j].coeff * ms[j].degree) * truncated(hl_apply(u, rest, cfg.C_hl, C, budget), C);
    }
    // w2: first slot w
    for (std::size_t j = 0; j < ms.size(); ++j) {
        if (ms[j].coeff == 0.0) continue;
        std::vector<SpectralField> rest(static_cast<size_t>(ms[j].degree - 1), u);
        out.w2 = out.w2 + (ms[j].coeff * ms[j].degree) * truncated(hl_apply(w, rest, cfg.C_hl, C, budget), C);
    }
    // w3/w4: normal-form remainder, last trailing slot = N_rhs
    std::vector<SpectralField> rem(ms.size());
    for (std::size_t j = 0; j < ms.size(); ++j) {
        if (ms[j].coeff == 0.0) continue;
        std::vector<SpectralField> tr(static_cast<size_t>(ms[j].degree - 1), u);
        tr.back() = n_rhs;
        rem[j] = truncated(t_nf(ms[j].degree, F, tr, cfg, -1, budget), C);
        rem[j] = (-ms[j].coeff * ms[j].degree * (ms[j].degree - 1)) * rem[j];
    }
    if (!ms.empty()) out.w3 = rem[0];
    for (std::size_t j = 1; j < ms.size(); ++j) out.w4 = out.w4 + rem[j];
    // w5 (diagonal) and w6 (mixed): HL^{d_j}[T_l, u..]
    for (std::size_t j = 0; j < ms.size(); ++j) {
        if (ms[j].coeff == 0.0) continue;
        for (std::size_t l = 0; l < ms.size(); ++l) {
            if (ms[l].coeff == 0.0) continue;
            std::vector<SpectralField> rest(static_cast<size_t>(ms[j].degree - 1), u);
            SpectralField term = (ms[j].coeff * ms[j].degree * ms[l].coeff * ms[l].degree) *
                                 truncated(hl_apply(T[l], rest, cfg.C_hl, C, budget), C);
            if (j == l)
                out.w5 = out.w5 + term;
            else
                out.w6 = out.w6 + term;
        }
    }
    return out;
}

}  // namespace gkdv

#endif
