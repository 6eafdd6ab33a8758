#ifndef GKDV_FIELD_HPP
#define GKDV_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gkdv {

using cx = std::complex<double>;

/// Japanese-bracket weight (1 + x^2)^{1/2}, used uniformly for norm and
/// dispersion weights.
inline double jbracket(double x) { return std::sqrt(1.0 + x * x); }

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SobolevIndex {
    double s = 0.0;
};

namespace detail {
inline void check_finite(const cx& v, int k) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("non-finite coefficient at k=" + std::to_string(k));
}
}  // namespace detail

// Trigonometric polynomial with a permitted zero mode; workspace for exact
// products u^p. Storage: coeffs[k + M] for k in [-M, M].
class PaddedField {
  public:
    PaddedField() : m_(0), c_(1, cx{}) {}
    explicit PaddedField(int cutoff) : m_(cutoff), c_(2 * size_t(cutoff) + 1, cx{}) {
        if (cutoff < 0) throw std::invalid_argument("negative cutoff");
    }

    int cutoff() const { return m_; }
    cx coef(int k) const { return std::abs(k) <= m_ ? c_[size_t(k + m_)] : cx{}; }
    void set(int k, cx v) {
        if (std::abs(k) > m_) throw std::invalid_argument("mode outside cutoff");
        detail::check_finite(v, k);
        c_[size_t(k + m_)] = v;
    }
    void add(int k, cx v) { set(k, coef(k) + v); }

    const std::vector<cx>& raw() const { return c_; }

    double hermitian_error() const {
        double e = std::abs(c_[size_t(m_)].imag());
        for (int k = 1; k <= m_; ++k)
            e = std::max(e, std::abs(c_[size_t(m_ + k)] - std::conj(c_[size_t(m_ - k)])));
        return e;
    }

  private:
    int m_;
    std::vector<cx> c_;
};

// Mean-zero real trigonometric polynomial stored by Fourier modes
// c_k, k in {-N,...,-1,1,...,N}, with c_{-k} = conj(c_k). The k = 0 slot is
// structurally absent. Immutable after construction.
class SpectralField {
  public:
    SpectralField() : n_(0), c_(1, cx{}) {}

    /// Construct from positive-mode coefficients pos[k-1] = c_k, k = 1..N.
    static SpectralField from_positive_modes(std::vector<cx> pos) {
        SpectralField u;
        u.n_ = int(pos.size());
        u.c_.assign(2 * pos.size() + 1, cx{});
        for (int k = 1; k <= u.n_; ++k) {
            detail::check_finite(pos[size_t(k - 1)], k);
            u.c_[size_t(u.n_ + k)] = pos[size_t(k - 1)];
            u.c_[size_t(u.n_ - k)] = std::conj(pos[size_t(k - 1)]);
        }
        return u;
    }

    /// Construct from a full [-N..N] table. The zero mode must be absent
    /// (|c_0| <= tol, discarded) and Hermitian symmetry must hold within tol;
    /// the table is then symmetrized exactly.
    static SpectralField from_raw(const std::vector<cx>& full, int cutoff, double tol) {
        if (int(full.size()) != 2 * cutoff + 1) throw std::invalid_argument("raw size mismatch");
        double scale = 0.0;
        for (const cx& v : full) scale = std::max(scale, std::abs(v));
        double bound = tol * std::max(1.0, scale);
        if (std::abs(full[size_t(cutoff)]) > bound)
            throw std::invalid_argument("zero mode forbidden in SpectralField");
        std::vector<cx> pos(static_cast<size_t>(cutoff));
        for (int k = 1; k <= cutoff; ++k) {
            cx a = full[size_t(cutoff + k)], b = std::conj(full[size_t(cutoff - k)]);
            if (std::abs(a - b) > bound)
                throw std::invalid_argument("Hermitian symmetry violated at k=" + std::to_string(k));
            pos[size_t(k - 1)] = 0.5 * (a + b);
        }
        return from_positive_modes(std::move(pos));
    }

    int cutoff() const { return n_; }
    cx coef(int k) const { return std::abs(k) <= n_ ? c_[size_t(k + n_)] : cx{}; }

    bool is_zero() const {
        for (const cx& v : c_)
            if (v != cx{}) return false;
        return true;
    }

    double hermitian_error() const {
        double e = std::abs(c_[size_t(n_)]);
        for (int k = 1; k <= n_; ++k)
            e = std::max(e, std::abs(c_[size_t(n_ + k)] - std::conj(c_[size_t(n_ - k)])));
        return e;
    }

    PaddedField padded(int cutoff) const {
        PaddedField p(cutoff);
        for (int k = -std::min(n_, cutoff); k <= std::min(n_, cutoff); ++k)
            if (k) p.set(k, coef(k));
        return p;
    }

  private:
    int n_;
    std::vector<cx> c_;
};

/// Build a field from (k, c_k) entries. Mirrors are synthesized; if both k and
/// -k are given they must be conjugates.
inline SpectralField from_modes(const std::vector<std::pair<int, cx>>& entries) {
    int n = 0;
    for (auto& [k, v] : entries) {
        if (k == 0) throw std::invalid_argument("zero mode forbidden");
        n = std::max(n, std::abs(k));
    }
    std::vector<cx> pos(static_cast<size_t>(n));
    std::vector<int> seen(size_t(n) + 1, 0);  // bit 1: +k given, bit 2: -k given
    for (auto& [k, v] : entries) {
        detail::check_finite(v, k);
        int a = std::abs(k), bit = k > 0 ? 1 : 2;
        if (seen[size_t(a)] & bit) throw std::invalid_argument("duplicate index k=" + std::to_string(k));
        cx as_pos = k > 0 ? v : std::conj(v);
        if (seen[size_t(a)] && std::abs(pos[size_t(a - 1)] - as_pos) > 1e-14 * std::max(1.0, std::abs(as_pos)))
            throw std::invalid_argument("conjugate-pair violation at |k|=" + std::to_string(a));
        pos[size_t(a - 1)] = as_pos;
        seen[size_t(a)] |= bit;
    }
    return SpectralField::from_positive_modes(std::move(pos));
}

namespace detail {
// Exact convolution of two padded tables, output truncated to out_cutoff.
// Fixed increasing-k1 inner order for bit reproducibility.
inline PaddedField convolve(const PaddedField& a, const PaddedField& b, int out_cutoff) {
    PaddedField out(out_cutoff);
    int A = a.cutoff(), B = b.cutoff();
    const auto& ar = a.raw();
    const auto& br = b.raw();
    std::vector<cx> acc(2 * size_t(out_cutoff) + 1, cx{});
    for (int k = -out_cutoff; k <= out_cutoff; ++k) {
        int lo = std::max(-A, k - B), hi = std::min(A, k + B);
        cx s{};
        for (int k1 = lo; k1 <= hi; ++k1) s += ar[size_t(k1 + A)] * br[size_t(k - k1 + B)];
        acc[size_t(k + out_cutoff)] = s;
    }
    PaddedField r(out_cutoff);
    for (int k = -out_cutoff; k <= out_cutoff; ++k) r.set(k, acc[size_t(k + out_cutoff)]);
    return r;
}
}  // namespace detail

inline constexpr int kDefaultMaxCutoff = 1 << 14;

/// Exact modes of u^p up to cutoff p*N (direct convolution; exact because u is
/// a trigonometric polynomial, and independent of any larger working cutoff).
inline PaddedField power(const SpectralField& u, int p, int max_cutoff = kDefaultMaxCutoff) {
    if (p < 1) throw std::invalid_argument("power: p >= 1 required");
    long long target = 1ll * p * u.cutoff();
    if (target > max_cutoff) throw budget_error("power: cutoff budget exceeded");
    PaddedField r = u.padded(u.cutoff());
    for (int j = 2; j <= p; ++j) r = detail::convolve(r, u.padded(u.cutoff()), j * u.cutoff());
    return r;
}

/// H^s norm (sum over increasing k of <k>^{2s} |c_k|^2)^{1/2}. The 2*pi volume
/// factor of the circle is omitted throughout.
inline double sobolev_norm(const SpectralField& u, SobolevIndex s) {
    double acc = 0.0;
    for (int k = -u.cutoff(); k <= u.cutoff(); ++k) {
        if (!k) continue;
        double a = std::abs(u.coef(k));
        acc += std::pow(jbracket(double(k)), 2.0 * s.s) * a * a;
    }
    return std::sqrt(acc);
}

enum class Band { at_most, above };

/// Frequency projection: keep |k| <= K (Band::at_most) or |k| > K.
inline SpectralField project(const SpectralField& u, Band band, int K) {
    if (K < 0) throw std::invalid_argument("project: K >= 0 required");
    std::vector<cx> pos(static_cast<size_t>(u.cutoff()));
    for (int k = 1; k <= u.cutoff(); ++k) {
        bool keep = band == Band::at_most ? (k <= K) : (k > K);
        pos[size_t(k - 1)] = keep ? u.coef(k) : cx{};
    }
    return SpectralField::from_positive_modes(std::move(pos));
}

/// Airy group e^{t dx^3}: multiplier exp(+i k^3 t), solving u_t + u_xxx = 0.
inline SpectralField free_flow(const SpectralField& u, double t) {
    std::vector<cx> pos(static_cast<size_t>(u.cutoff()));
    for (int k = 1; k <= u.cutoff(); ++k)
        pos[size_t(k - 1)] = u.coef(k) * std::polar(1.0, double(k) * double(k) * double(k) * t);
    return SpectralField::from_positive_modes(std::move(pos));
}

/// Spatial translation x -> x + h: c_k -> c_k exp(i k h).
inline SpectralField translate(const SpectralField& u, double h) {
    std::vector<cx> pos(static_cast<size_t>(u.cutoff()));
    for (int k = 1; k <= u.cutoff(); ++k) pos[size_t(k - 1)] = u.coef(k) * std::polar(1.0, k * h);
    return SpectralField::from_positive_modes(std::move(pos));
}

/// Deterministic random data that is exactly H^s-regular and no better:
/// c_k = <k>^{-s-1/2-delta} exp(i theta_k), theta_k drawn in increasing k from
/// a seeded mt19937_64.
inline SpectralField random_sobolev(SobolevIndex s, int N, std::uint64_t seed, double delta = 0.05) {
    if (N < 1) throw std::invalid_argument("random_sobolev: N >= 1 required");
    if (delta <= 0) throw std::invalid_argument("random_sobolev: delta > 0 required");
    std::mt19937_64 rng(seed);
    constexpr double two_pi = 6.283185307179586476925286766559;
    std::vector<cx> pos(static_cast<size_t>(N));
    for (int k = 1; k <= N; ++k) {
        double u01 = double(rng() >> 11) * 0x1p-53;
        double mag = std::pow(jbracket(double(k)), -(s.s + 0.5 + delta));
        pos[size_t(k - 1)] = std::polar(mag, two_pi * u01);
    }
    return SpectralField::from_positive_modes(std::move(pos));
}

// ---- small arithmetic helpers ----

inline SpectralField axpy(cx a, const SpectralField& x, const SpectralField& y) {
    int n = std::max(x.cutoff(), y.cutoff());
    std::vector<cx> pos(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) pos[size_t(k - 1)] = a * x.coef(k) + y.coef(k);
    return SpectralField::from_positive_modes(std::move(pos));
}

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) { return axpy(1.0, a, b); }
inline SpectralField operator-(const SpectralField& a, const SpectralField& b) { return axpy(-1.0, b, a); }
inline SpectralField operator*(double a, const SpectralField& u) { return axpy(a - 1.0, u, u); }

inline SpectralField truncated(const SpectralField& u, int cutoff) {
    std::vector<cx> pos(static_cast<size_t>(std::min(cutoff, u.cutoff())));
    for (int k = 1; k <= int(pos.size()); ++k) pos[size_t(k - 1)] = u.coef(k);
    return SpectralField::from_positive_modes(std::move(pos));
}

}  // namespace gkdv

#endif
