#ifndef GKDV_NONLINEARITY_HPP
#define GKDV_NONLINEARITY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "gkdv/dispersion.hpp"
#include "gkdv/field.hpp"
#include "gkdv/poly.hpp"

namespace gkdv {

inline constexpr double kHermitianTol = 1e-11;

// Generic restricted multilinear Fourier multiplier T^n_sigma.
struct MultilinearSpec {
    int arity;
    SymbolFn symbol;
    DomainFn domain;       // frequency restriction Omega_k (true = admissible)
    bool symmetric = false;
};

namespace detail {

// Lexicographic iteration over (k_1,...,k_m) in ([-B,B]\{0})^m.
class TupleIter {
  public:
    TupleIter(int m, int B) : b_(B), k_(static_cast<size_t>(m), -B) {}
    std::vector<int>& value() { return k_; }
    bool advance() {
        for (int i = int(k_.size()) - 1; i >= 0; --i) {
            ++k_[size_t(i)];
            if (k_[size_t(i)] == 0) ++k_[size_t(i)];
            if (k_[size_t(i)] <= b_) return true;
            k_[size_t(i)] = -b_;
        }
        return false;
    }

  private:
    int b_;
    std::vector<int> k_;
};

inline void check_budget(int m, int B, long long outer, long long budget) {
    double logcount = m * std::log2(2.0 * B + 1.0) + std::log2(double(outer) + 1.0);
    if (logcount > std::log2(double(budget))) throw budget_error("restricted multilinear sum: budget exceeded");
}

}  // namespace detail

/// Exact modes of d/dx P(u) truncated to |k| <= cutoff. The derivative kills
/// the zero mode.
inline SpectralField dxP(const SpectralField& u, const PolyNonlinearity& P, int cutoff,
                         int max_cutoff = kDefaultMaxCutoff) {
    if (cutoff < u.cutoff()) throw std::invalid_argument("dxP: cutoff >= N required");
    std::vector<cx> raw(2 * static_cast<size_t>(cutoff) + 1, cx{});
    for (const auto& m : P.monomials()) {
        if (m.coeff == 0.0) continue;
        PaddedField pw = power(u, m.degree, max_cutoff);
        for (int k = -cutoff; k <= cutoff; ++k) {
            if (!k) continue;
            raw[size_t(k + cutoff)] += m.coeff * cx(0.0, double(k)) * pw.coef(k);
        }
    }
    return SpectralField::from_raw(raw, cutoff, kHermitianTol);
}

/// Zero mode (u^p)_0; the spatial mean of u^p is 2*pi times this.
inline double zero_mode_power(const SpectralField& u, int p) {
    if (p < 1) throw std::invalid_argument("zero_mode_power: p >= 1");
    if (p == 1) return 0.0;
    PaddedField pw = power(u, p);
    double im = std::abs(pw.coef(0).imag());
    double scale = 0.0;
    for (const auto& v : pw.raw()) scale = std::max(scale, std::abs(v));
    if (im > 1e-13 * std::max(1.0, scale))
        throw std::runtime_error("zero_mode_power: non-real zero mode (broken Hermitian symmetry)");
    return pw.coef(0).real();
}

/// R^1[u]_k = i k u_k sum_j a_j d_j (u^{d_j - 1})_0: the spatially uniform
/// resonant part removed by the gauge. Note (u^{p})_0 = (1/2pi) Int u^p dx.
inline SpectralField resonant_r1(const SpectralField& u, const PolyNonlinearity& P) {
    double rate = 0.0;
    for (const auto& m : P.monomials())
        if (m.coeff != 0.0) rate += m.coeff * m.degree * zero_mode_power(u, m.degree - 1);
    std::vector<cx> pos(static_cast<size_t>(u.cutoff()));
    for (int k = 1; k <= u.cutoff(); ++k) pos[size_t(k - 1)] = cx(0.0, double(k)) * u.coef(k) * rate;
    return SpectralField::from_positive_modes(std::move(pos));
}

struct ResonantSets {
    std::vector<std::vector<int>> R_k;                 // all tuples, explicit
    std::vector<std::vector<std::vector<int>>> R_k_l;  // per slot l = 1..n
};

/// Explicit enumeration of the resonant sets R_k and R_k^l with |k_j| <= K.
inline ResonantSets enumerate_resonant(int k, int n, int K, long long budget = 200'000'000ll) {
    if (k == 0) throw std::invalid_argument("enumerate_resonant: k != 0");
    if (n < 2) throw std::invalid_argument("enumerate_resonant: n >= 2");
    detail::check_budget(n - 1, K, 1, budget);
    ResonantSets out;
    out.R_k_l.resize(static_cast<size_t>(n));
    detail::TupleIter it(n - 1, K);
    do {
        auto& head = it.value();
        long long s = std::accumulate(head.begin(), head.end(), 0ll);
        long long last = k - s;
        if (last == 0 || std::abs(last) > K) continue;
        std::vector<int> t(head);
        t.push_back(int(last));
        bool member = false;
        for (int x : t)
            if (x == k) member = true;
        if (member) out.R_k.push_back(t);
    } while (it.advance());
    if (std::abs(k) <= K) {
        detail::TupleIter rest(n - 1, K);
        do {
            auto& r = rest.value();
            if (std::accumulate(r.begin(), r.end(), 0ll) != 0) continue;
            for (int l = 0; l < n; ++l) {
                std::vector<int> t(r);
                t.insert(t.begin() + l, k);
                out.R_k_l[size_t(l)].push_back(std::move(t));
            }
        } while (rest.advance());
    }
    return out;
}

/// |#R_k - alternating inclusion-exclusion count|; must be zero.
inline long long inclusion_exclusion_residual(int k, int n, int K, long long budget = 200'000'000ll) {
    if (k == 0 || n < 2) throw std::invalid_argument("inclusion_exclusion_residual: bad arguments");
    detail::check_budget(n - 1, K, 1, budget);
    // direct count of R_k
    long long direct = 0;
    detail::TupleIter it(n - 1, K);
    do {
        auto& head = it.value();
        long long s = std::accumulate(head.begin(), head.end(), 0ll);
        long long last = k - s;
        if (last == 0 || std::abs(last) > K) continue;
        bool member = last == k;
        for (int x : head)
            if (x == k) member = true;
        if (member) ++direct;
    } while (it.advance());

    // ways[m][s] = # of m-tuples of nonzero ints in [-K, K] summing to s
    long long alt = 0;
    if (std::abs(k) <= K) {
        int shift = n * K;
        std::vector<std::vector<long long>> ways(static_cast<size_t>(n),
                                                 std::vector<long long>(2 * static_cast<size_t>(shift) + 1, 0));
        ways[0][size_t(shift)] = 1;
        for (int m = 1; m < n; ++m)
            for (int s = -shift; s <= shift; ++s) {
                long long acc = 0;
                for (int x = -K; x <= K; ++x) {
                    if (!x) continue;
                    int prev = s - x;
                    if (std::abs(prev) <= shift) acc += ways[size_t(m - 1)][size_t(prev + shift)];
                }
                ways[size_t(m)][size_t(s + shift)] = acc;
            }
        long long binom = 1;
        for (int r = 1; r <= n; ++r) {
            binom = binom * (n - r + 1) / r;  // C(n, r)
            long long target = 1ll * k * (1 - r);
            long long cnt = std::abs(target) <= shift ? ways[size_t(n - r)][size_t(target + shift)] : 0;
            alt += (r % 2 == 1 ? 1 : -1) * binom * cnt;
        }
    }
    return std::abs(direct - alt);
}

namespace detail {
// Direct sum over the resonant set: sum_{R_k} i k a prod u_{k_j}, per monomial.
inline SpectralField resonant_direct(const SpectralField& u, const PolyNonlinearity& P, int cutoff,
                                     long long budget) {
    int N = u.cutoff();
    std::vector<cx> raw(2 * static_cast<size_t>(cutoff) + 1, cx{});
    for (const auto& mono : P.monomials()) {
        if (mono.coeff == 0.0) continue;
        int n = mono.degree;
        check_budget(n - 1, N, 2ll * cutoff + 1, budget);
        for (int k = -cutoff; k <= cutoff; ++k) {
            if (!k) continue;
            cx acc{};
            TupleIter it(n - 1, N);
            do {
                auto& head = it.value();
                long long s = std::accumulate(head.begin(), head.end(), 0ll);
                long long last = k - s;
                if (last == 0 || std::abs(last) > N) continue;
                bool member = last == k;
                for (int x : head)
                    if (x == k) member = true;
                if (!member) continue;
                cx pr = u.coef(int(last));
                for (int x : head) pr *= u.coef(x);
                acc += pr;
            } while (it.advance());
            raw[size_t(k + cutoff)] += mono.coeff * cx(0.0, double(k)) * acc;
        }
    }
    return SpectralField::from_raw(raw, cutoff, kHermitianTol);
}
}  // namespace detail

/// R^2[u] = (direct resonant sum) - R^1[u], by enumeration.
inline SpectralField resonant_r2(const SpectralField& u, const PolyNonlinearity& P, int cutoff = -1,
                                 long long budget = 200'000'000ll) {
    if (cutoff < 0) cutoff = u.cutoff() * std::max(1, P.max_degree());
    return detail::resonant_direct(u, P, cutoff, budget) - resonant_r1(u, P);
}

/// HL^n[first, rest...]: high-low part with the dominant slot first. Symbol ik;
/// restrictions |k_1| >= C_hl max_{j>=2}|k_j| (ties in), sum_{j>=2} k_j != 0.
inline SpectralField hl_apply(const SpectralField& first, const std::vector<SpectralField>& rest,
                              double C_hl, int cutoff, long long budget = 200'000'000ll) {
    int n = int(rest.size()) + 1;
    int B = 0;
    for (const auto& v : rest) B = std::max(B, v.cutoff());
    detail::check_budget(n - 1, B, 2ll * first.cutoff() + 1, budget);
    std::vector<cx> raw(2 * static_cast<size_t>(cutoff) + 1, cx{});
    for (int k1 = -first.cutoff(); k1 <= first.cutoff(); ++k1) {
        if (!k1 || first.coef(k1) == cx{}) continue;
        int b2 = std::min(B, int(std::floor(std::abs(double(k1)) / C_hl + 1e-12)));
        if (b2 < 1) continue;
        detail::TupleIter it(n - 1, b2);
        do {
            auto& tail = it.value();
            long long s = std::accumulate(tail.begin(), tail.end(), 0ll);
            if (s == 0) continue;
            long long k = k1 + s;
            if (k == 0 || std::abs(k) > cutoff) continue;
            cx pr = first.coef(k1);
            for (int j = 0; j < n - 1; ++j) pr *= rest[size_t(j)].coef(tail[size_t(j)]);
            raw[size_t(k + cutoff)] += cx(0.0, double(k)) * pr;
        } while (it.advance());
    }
    return SpectralField::from_raw(raw, cutoff, kHermitianTol);
}

struct NonresonantSplit {
    std::vector<SpectralField> hl;  // unweighted HL^{d_j}[u,...,u], one per monomial
    SpectralField hh;               // defined by subtraction; exact partition
};

/// Split the nonresonant part: NR = sum_j a_j d_j HL^{d_j} + HH, so that
/// dxP = R^1 + R^2 + sum_j a_j d_j HL^{d_j} + HH exactly.
inline NonresonantSplit split_nr(const SpectralField& u, const PolyNonlinearity& P, double C_hl,
                                 int cutoff = -1, long long budget = 200'000'000ll) {
    if (cutoff < 0) cutoff = u.cutoff() * std::max(1, P.max_degree());
    NonresonantSplit out;
    SpectralField acc;
    for (const auto& m : P.monomials()) {
        std::vector<SpectralField> rest(static_cast<size_t>(m.degree - 1), u);
        SpectralField hl = hl_apply(u, rest, C_hl, cutoff, budget);
        acc = acc + (m.coeff * m.degree) * hl;
        out.hl.push_back(std::move(hl));
    }
    SpectralField nr = dxP(u, P, cutoff) - resonant_r1(u, P) - resonant_r2(u, P, cutoff, budget);
    out.hh = nr - acc;
    return out;
}

/// Direct restricted sum of eq-style multilinear multipliers, deterministic
/// lexicographic order in (k_1,...,k_{n-1}).
inline SpectralField multilinear_apply(const MultilinearSpec& spec,
                                       const std::vector<SpectralField>& inputs, int cutoff,
                                       long long budget = 200'000'000ll) {
    int n = spec.arity;
    if (int(inputs.size()) != n) throw std::invalid_argument("multilinear_apply: arity mismatch");
    int B = 0;
    for (const auto& v : inputs) B = std::max(B, v.cutoff());
    detail::check_budget(n - 1, B, 2ll * cutoff + 1, budget);
    std::vector<cx> raw(2 * static_cast<size_t>(cutoff) + 1, cx{});
    std::vector<int> t(static_cast<size_t>(n));
    for (int k = -cutoff; k <= cutoff; ++k) {
        if (!k) continue;
        cx acc{};
        detail::TupleIter it(n - 1, B);
        do {
            auto& head = it.value();
            long long s = std::accumulate(head.begin(), head.end(), 0ll);
            long long last = k - s;
            if (last == 0 || std::abs(last) > B) continue;
            for (int j = 0; j < n - 1; ++j) t[size_t(j)] = head[size_t(j)];
            t[size_t(n - 1)] = int(last);
            if (!spec.domain(t)) continue;
            cx sv = spec.symbol(t);
            if (!std::isfinite(std::abs(sv)))
                throw std::domain_error("multilinear_apply: symbol non-finite on domain tuple");
            cx pr = sv;
            for (int j = 0; j < n; ++j) pr *= inputs[size_t(j)].coef(t[size_t(j)]);
            acc += pr;
        } while (it.advance());
        raw[size_t(k + cutoff)] = acc;
    }
    return SpectralField::from_raw(raw, cutoff, kHermitianTol);
}

namespace detail {
inline void require_symmetric(const MultilinearSpec& spec) {
    if (!spec.symmetric) throw std::invalid_argument("polarize_check: asymmetric spec rejected");
    // spot check on a few tuples: symbol and domain must be permutation stable
    std::vector<std::vector<int>> probes = {{}};
    std::vector<int> base;
    for (int j = 0; j < spec.arity; ++j) base.push_back(j % 2 ? -(j + 1) : j + 2);
    probes = {base};
    std::vector<int> alt(base);
    std::reverse(alt.begin(), alt.end());
    probes.push_back(alt);
    for (auto t : probes) {
        std::vector<int> sorted(t);
        std::sort(sorted.begin(), sorted.end());
        bool dom = spec.domain(sorted);
        cx sym = dom ? spec.symbol(sorted) : cx{};
        do {
            if (spec.domain(sorted) != dom ||
                (dom && std::abs(spec.symbol(sorted) - sym) > 1e-12 * (1.0 + std::abs(sym))))
                throw std::invalid_argument("polarize_check: spec not permutation symmetric");
        } while (std::next_permutation(sorted.begin(), sorted.end()));
    }
}
}  // namespace detail

/// || alternating subset-sum combination - n! T(v_1,...,v_n) ||_{H^0}.
/// Vanishes (to roundoff) for every symmetric spec.
inline double polarize_check(const MultilinearSpec& spec, const std::vector<SpectralField>& v,
                             int cutoff = -1, long long budget = 200'000'000ll) {
    int n = spec.arity;
    if (int(v.size()) != n) throw std::invalid_argument("polarize_check: need n fields");
    detail::require_symmetric(spec);
    int B = 0;
    for (const auto& f : v) B = std::max(B, f.cutoff());
    if (cutoff < 0) cutoff = n * B;

    SpectralField alternating;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        SpectralField s;
        int bits = 0;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) {
                s = s + v[size_t(j)];
                ++bits;
            }
        std::vector<SpectralField> same(static_cast<size_t>(n), s);
        SpectralField term = multilinear_apply(spec, same, cutoff, budget);
        double sign = ((n - bits) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{|A|}, A = complement
        alternating = alternating + sign * term;
    }
    double fact = 1.0;
    for (int j = 2; j <= n; ++j) fact *= j;
    SpectralField direct = multilinear_apply(spec, v, cutoff, budget);
    return sobolev_norm(alternating - fact * direct, {0.0});
}

}  // namespace gkdv

#endif
