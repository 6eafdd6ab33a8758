#ifndef GKDV_FFT_HPP
#define GKDV_FFT_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gkdv/field.hpp"
#include "gkdv/poly.hpp"

namespace gkdv {

// Iterative radix-2 complex FFT with precomputed twiddles. Deterministic,
// no external dependency; used only as the fast product path in the solver.
class Fft {
  public:
    explicit Fft(std::size_t n) : n_(n) {
        if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("Fft: size must be a power of two");
        rev_.resize(n);
        std::size_t lg = 0;
        while ((std::size_t(1) << lg) < n) ++lg;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < lg; ++b)
                if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (lg - 1 - b);
            rev_[i] = r;
        }
        constexpr double two_pi = 6.283185307179586476925286766559;
        tw_.resize(n / 2);
        for (std::size_t i = 0; i < n / 2; ++i)
            tw_[i] = std::polar(1.0, -two_pi * double(i) / double(n));
    }

    std::size_t size() const { return n_; }

    // sign -1: forward (e^{-ikx}); sign +1: inverse without the 1/n factor.
    void transform(std::vector<cx>& a, int sign) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            std::size_t stride = n_ / len;
            for (std::size_t i = 0; i < n_; i += len) {
                for (std::size_t j = 0; j < len / 2; ++j) {
                    cx w = tw_[j * stride];
                    if (sign > 0) w = std::conj(w);
                    cx u = a[i + j], v = a[i + j + len / 2] * w;
                    a[i + j] = u + v;
                    a[i + j + len / 2] = u - v;
                }
            }
        }
    }

  private:
    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<cx> tw_;
};

// Zero-padded transform workspace for exact powers of trig polynomials with
// mode cutoff N and degrees up to dmax: length >= 2*dmax*N + 2 so that u^d is
// alias-free.
class ProductEngine {
  public:
    ProductEngine(int N, int dmax) : n_(N), dmax_(dmax), fft_(pick_size(N, dmax)) {}

    int cutoff() const { return n_; }
    std::size_t length() const { return fft_.size(); }

    /// Grid values of the field (length L).
    std::vector<cx> grid(const SpectralField& u) const {
        std::size_t L = fft_.size();
        std::vector<cx> z(L, cx{});
        for (int k = 1; k <= u.cutoff(); ++k) {
            z[size_t(k)] = u.coef(k);
            z[L - size_t(k)] = u.coef(-k);
        }
        fft_.transform(z, +1);
        return z;
    }

    /// Modes of pointwise values^d, index helper via mode(). Exact for d <= dmax.
    std::vector<cx> modes_of_pow(const std::vector<cx>& values, int d) const {
        if (d > dmax_) throw std::invalid_argument("ProductEngine: degree above workspace bound");
        std::size_t L = fft_.size();
        std::vector<cx> z(L);
        for (std::size_t i = 0; i < L; ++i) {
            cx v = values[i], p = v;
            for (int j = 1; j < d; ++j) p *= v;
            z[i] = p;
        }
        fft_.transform(z, -1);
        double inv = 1.0 / double(L);
        for (auto& v : z) v *= inv;
        return z;
    }

    static cx mode(const std::vector<cx>& spectrum, int k) {
        std::size_t L = spectrum.size();
        return k >= 0 ? spectrum[size_t(k)] : spectrum[L - size_t(-k)];
    }

    /// ik * (P(u))_k truncated to |k| <= cutoff, returned as a raw [-C..C] table.
    std::vector<cx> dxP_raw(const SpectralField& u, const PolyNonlinearity& P, int out_cutoff) const {
        std::vector<cx> out(2 * size_t(out_cutoff) + 1, cx{});
        if (P.is_zero()) return out;
        std::vector<cx> vals = grid(u);
        for (const auto& m : P.monomials()) {
            if (m.coeff == 0.0) continue;
            std::vector<cx> pw = modes_of_pow(vals, m.degree);
            for (int k = -out_cutoff; k <= out_cutoff; ++k) {
                if (!k) continue;
                out[size_t(k + out_cutoff)] += m.coeff * cx(0.0, double(k)) * mode(pw, k);
            }
        }
        return out;
    }

    /// Zero mode of u^p (needed for means inside the stepper).
    double zero_mode_of_pow(const SpectralField& u, int p) const {
        std::vector<cx> vals = grid(u);
        std::vector<cx> pw = modes_of_pow(vals, p);
        return pw[0].real();
    }

  private:
    static std::size_t pick_size(int N, int dmax) {
        if (N < 0 || dmax < 1) throw std::invalid_argument("ProductEngine: bad parameters");
        std::size_t need = 2 * std::size_t(dmax) * std::size_t(N) + 2;
        std::size_t L = 8;
        while (L < need) L <<= 1;
        return L;
    }

    int n_;
    int dmax_;
    Fft fft_;
};

}  // namespace gkdv

#endif
