#ifndef GKDV_DISPERSION_HPP
#define GKDV_DISPERSION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkdv/field.hpp"

namespace gkdv {

struct FrequencyTuple {
    std::vector<int> k;

    FrequencyTuple(std::initializer_list<int> init) : k(init) { validate(); }
    explicit FrequencyTuple(std::vector<int> v) : k(std::move(v)) { validate(); }

    int arity() const { return int(k.size()); }
    long long sum() const {
        long long s = 0;
        for (int x : k) s += x;
        return s;
    }

  private:
    void validate() const {
        if (k.size() < 2) throw std::invalid_argument("FrequencyTuple: n >= 2 required");
        for (int x : k)
            if (x == 0) throw std::invalid_argument("FrequencyTuple: entries must be nonzero");
    }
};

namespace detail {
inline long long checked_cube(long long x) {
    // |x|^3 must fit in int64; enough for |x| <= 2^21.
    if (std::abs(x) > (1ll << 21)) throw std::overflow_error("h_n: |k| too large for checked cube");
    return x * x * x;
}
}  // namespace detail

/// Dispersion generator H_n = (sum k_j)^3 - sum k_j^3, exact integer.
inline long long h_n(const FrequencyTuple& t) {
    long long s = 0, cubes = 0;
    for (int x : t.k) {
        s += x;
        cubes += detail::checked_cube(x);
    }
    __int128 total = __int128(detail::checked_cube(s)) - cubes;
    if (total > std::numeric_limits<long long>::max() || total < std::numeric_limits<long long>::min())
        throw std::overflow_error("h_n: overflow");
    return (long long)(total);
}

/// Telescoped form H_n = 3 sum_{j=1}^{n-1} k_j ktil_j ktil_{j+1} with
/// ktil_j = k_j + ... + k_n. Must agree with h_n exactly on every tuple.
inline long long h_n_telescoped(const FrequencyTuple& t) {
    int n = t.arity();
    std::vector<long long> tails(size_t(n) + 1, 0);
    for (int j = n - 1; j >= 0; --j) tails[size_t(j)] = tails[size_t(j) + 1] + t.k[size_t(j)];
    __int128 acc = 0;
    for (int j = 0; j + 1 < n; ++j)
        acc += __int128(3) * t.k[size_t(j)] * tails[size_t(j)] * tails[size_t(j) + 1];
    if (acc > std::numeric_limits<long long>::max() || acc < std::numeric_limits<long long>::min())
        throw std::overflow_error("h_n_telescoped: overflow");
    return (long long)(acc);
}

// Explicit constants for the proposition's comparability relations.
struct ComparabilityConstants {
    double c_A = 1.0;    // case A:  |H_n| >= c_A * k_max^2
    double c_C = -1.0;   // case C:  k_max3 >= c_C |k| (n=3: all |k_j| >= c_C |k|); <0 => 1/(2n)
    double c_D = 0.25;   // case D:  k_max3^2 k_max4 >= c_D k_max^2
    double C_hl = 4.0;   // high-low separation |k_1| >= C_hl max_{j>=2}|k_j|

    double c_C_for(int n) const { return c_C > 0 ? c_C : 1.0 / (2.0 * n); }
};

enum class Case : int { A = 0, B = 1, C = 2, D = 3 };

struct CaseReport {
    FrequencyTuple tuple;
    std::array<bool, 4> holds{};   // indexed by Case
    long long Hn = 0;
    long long k = 0;
    std::array<long long, 4> kmax{1, 1, 1, 1};  // j-th largest |k_j|, 1 beyond arity

    bool any() const { return holds[0] || holds[1] || holds[2] || holds[3]; }
};

/// Sorted |k_j| descending, padded with the convention k_max_j = 1 for j > n.
inline std::array<long long, 4> kmax_of(const FrequencyTuple& t) {
    std::vector<long long> a;
    a.reserve(t.k.size());
    for (int x : t.k) a.push_back(std::abs((long long)x));
    std::sort(a.rbegin(), a.rend());
    std::array<long long, 4> out{1, 1, 1, 1};
    for (int j = 0; j < 4 && j < int(a.size()); ++j) out[size_t(j)] = a[size_t(j)];
    return out;
}

/// Classify a tuple with k != 0 against the cases of the dispersion
/// proposition (n=2: A only; n=3: A,B,C; n>=4: A,B,C,D).
inline CaseReport classify(const FrequencyTuple& t, const ComparabilityConstants& c) {
    long long k = t.sum();
    if (k == 0) throw std::invalid_argument("classify: k = 0 tuples are filtered, not classified");
    CaseReport rep{t, {}, h_n(t), k, kmax_of(t)};
    int n = t.arity();
    double kmax = double(rep.kmax[0]);
    rep.holds[int(Case::A)] = std::abs(double(rep.Hn)) >= c.c_A * kmax * kmax;
    if (n >= 3) {
        for (int x : t.k)
            if (x == k) rep.holds[int(Case::B)] = true;
        double cc = c.c_C_for(n);
        if (n == 3) {
            bool all = true;
            for (int x : t.k) all = all && std::abs(double(x)) >= cc * std::abs(double(k));
            rep.holds[int(Case::C)] = all;
        } else {
            rep.holds[int(Case::C)] = double(rep.kmax[2]) >= cc * std::abs(double(k));
        }
    }
    if (n >= 4)
        rep.holds[int(Case::D)] =
            double(rep.kmax[2]) * double(rep.kmax[2]) * double(rep.kmax[3]) >= c.c_D * kmax * kmax;
    return rep;
}

struct ExhaustiveReport {
    int n = 0;
    int K = 0;
    ComparabilityConstants constants;
    long long total = 0;   // tuples with k != 0
    long long kzero = 0;   // excluded tuples with k = 0
    std::array<long long, 4> case_counts{};
    long long violations = 0;
    std::vector<FrequencyTuple> first_violations;  // up to 16
    // Sharp constants observed: min ratio over tuples covered by no other case
    // (inf if every tuple is covered by the other cases).
    double sharp_c_A = std::numeric_limits<double>::infinity();
    double sharp_c_C = std::numeric_limits<double>::infinity();
    double sharp_c_D = std::numeric_limits<double>::infinity();
};

/// Exhaustive check of the proposition over 0 < |k_j| <= K, k != 0.
inline ExhaustiveReport verify_cases(int n, int K, const ComparabilityConstants& c,
                                     long long budget = 200'000'000ll) {
    if (n < 2 || n > 5) throw std::invalid_argument("verify_cases: 2 <= n <= 5");
    double logcount = n * std::log2(2.0 * K);
    if (logcount > std::log2(double(budget))) throw budget_error("verify_cases: enumeration budget exceeded");

    ExhaustiveReport rep;
    rep.n = n;
    rep.K = K;
    rep.constants = c;
    std::vector<int> k(size_t(n), -K);
    auto next = [&]() -> bool {
        for (int i = n - 1; i >= 0; --i) {
            ++k[size_t(i)];
            if (k[size_t(i)] == 0) ++k[size_t(i)];
            if (k[size_t(i)] <= K) return true;
            k[size_t(i)] = -K;
        }
        return false;
    };
    while (true) {
        long long sum = 0;
        for (int x : k) sum += x;
        if (sum == 0) {
            ++rep.kzero;
        } else {
            ++rep.total;
            FrequencyTuple t(k);
            CaseReport cr = classify(t, c);
            for (int j = 0; j < 4; ++j)
                if (cr.holds[size_t(j)]) ++rep.case_counts[size_t(j)];
            if (!cr.any()) {
                ++rep.violations;
                if (rep.first_violations.size() < 16) rep.first_violations.push_back(t);
            }
            double kmax = double(cr.kmax[0]);
            bool othersA = cr.holds[1] || cr.holds[2] || cr.holds[3];
            if (!othersA) rep.sharp_c_A = std::min(rep.sharp_c_A, std::abs(double(cr.Hn)) / (kmax * kmax));
            if (n >= 3) {
                bool othersC = cr.holds[0] || cr.holds[1] || cr.holds[3];
                if (!othersC) {
                    double r = n == 3 ? double(cr.kmax[2]) / std::abs(double(sum))
                                      : double(cr.kmax[2]) / std::abs(double(sum));
                    rep.sharp_c_C = std::min(rep.sharp_c_C, r);
                }
            }
            if (n >= 4) {
                bool othersD = cr.holds[0] || cr.holds[1] || cr.holds[2];
                if (!othersD)
                    rep.sharp_c_D = std::min(rep.sharp_c_D,
                                             double(cr.kmax[2]) * double(cr.kmax[2]) * double(cr.kmax[3]) /
                                                 (kmax * kmax));
            }
        }
        if (!next()) break;
    }
    return rep;
}

// Symbol-ratio suprema for the multilinear estimate conditions. The symbol and
// domain are callables on integer tuples.
using SymbolFn = std::function<cx(std::span<const int>)>;
using DomainFn = std::function<bool(std::span<const int>)>;

enum class RatioMode { with_dispersion, without_dispersion };
enum class RatioVariant { symmetric, first_slot };  // prop conditions vs their asymmetric forms

struct RatioResult {
    double sup = 0.0;
    bool empty_domain = true;
    std::vector<int> arg;  // maximizing tuple
};

/// sup over tuples |k_j| <= K, k != 0, dom(tuple) of the estimate-condition
/// ratio. symmetric/with: |k|^{s0} |sigma| / (<H_n>^{1/2} kmax1^{s1} kmax2^{s2});
/// symmetric/without: |k|^{s0} |sigma| / (kmax1^{s1-eps} (kmax2 kmax3 kmax4)^{s2});
/// first_slot variants use |k|^{s0-s1} (resp. |k|^{s0-s1+eps}) and the maxima
/// of the trailing entries only. Convention kmax_j = 1 beyond the arity.
inline RatioResult symbol_ratio_sup(int n, const SymbolFn& sym, const DomainFn& dom, double s0, double s1,
                                    double s2, double eps, int K, RatioMode mode,
                                    RatioVariant variant = RatioVariant::symmetric,
                                    long long budget = 200'000'000ll) {
    if (n < 2) throw std::invalid_argument("symbol_ratio_sup: n >= 2");
    double logcount = n * std::log2(2.0 * K);
    if (logcount > std::log2(double(budget))) throw budget_error("symbol_ratio_sup: budget exceeded");
    RatioResult res;
    std::vector<int> k(size_t(n), -K);
    auto next = [&]() -> bool {
        for (int i = n - 1; i >= 0; --i) {
            ++k[size_t(i)];
            if (k[size_t(i)] == 0) ++k[size_t(i)];
            if (k[size_t(i)] <= K) return true;
            k[size_t(i)] = -K;
        }
        return false;
    };
    while (true) {
        long long sum = 0;
        for (int x : k) sum += x;
        if (sum != 0 && dom(k)) {
            res.empty_domain = false;
            FrequencyTuple t(k);
            cx sv = sym(k);
            if (!std::isfinite(std::abs(sv)))
                throw std::domain_error("symbol_ratio_sup: symbol non-finite on domain tuple");
            double num, den;
            std::array<long long, 4> m{1, 1, 1, 1};
            if (variant == RatioVariant::symmetric) {
                m = kmax_of(t);
                num = std::pow(std::abs(double(sum)), s0) * std::abs(sv);
                if (mode == RatioMode::with_dispersion)
                    den = std::sqrt(jbracket(double(h_n(t)))) * std::pow(double(m[0]), s1) *
                          std::pow(double(m[1]), s2);
                else
                    den = std::pow(double(m[0]), s1 - eps) *
                          std::pow(double(m[1]) * double(m[2]) * double(m[3]), s2);
            } else {
                std::vector<long long> a;
                for (size_t j = 1; j < k.size(); ++j) a.push_back(std::abs((long long)k[j]));
                std::sort(a.rbegin(), a.rend());
                for (int j = 0; j < 3 && j < int(a.size()); ++j) m[size_t(j)] = a[size_t(j)];
                if (mode == RatioMode::with_dispersion) {
                    num = std::pow(std::abs(double(sum)), s0 - s1) * std::abs(sv);
                    den = std::sqrt(jbracket(double(h_n(t)))) * std::pow(double(m[0]), s2);
                } else {
                    num = std::pow(std::abs(double(sum)), s0 - s1 + eps) * std::abs(sv);
                    den = std::pow(double(m[0]) * double(m[1]) * double(m[2]), s2);
                }
            }
            double r = num / den;
            if (r > res.sup) {
                res.sup = r;
                res.arg = k;
            }
        }
        if (!next()) break;
    }
    return res;
}

}  // namespace gkdv

#endif
