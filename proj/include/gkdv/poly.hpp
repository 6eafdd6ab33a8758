#ifndef GKDV_POLY_HPP
#define GKDV_POLY_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace gkdv {

struct Monomial {
    double coeff;
    int degree;  // >= 2
};

// P(u) = sum_j a_j u^{d_j}, degrees strictly increasing, all >= 2.
// Zero coefficients are allowed (P == 0 is the linear equation).
class PolyNonlinearity {
  public:
    PolyNonlinearity() = default;
    explicit PolyNonlinearity(std::vector<Monomial> ms) : ms_(std::move(ms)) {
        if (ms_.empty()) throw std::invalid_argument("PolyNonlinearity: at least one monomial");
        int prev = 1;
        for (const auto& m : ms_) {
            if (m.degree < 2) throw std::invalid_argument("PolyNonlinearity: degrees must be >= 2");
            if (m.degree <= prev) throw std::invalid_argument("PolyNonlinearity: degrees must increase");
            prev = m.degree;
        }
    }

    static PolyNonlinearity monomial(double a, int d) { return PolyNonlinearity({{a, d}}); }

    const std::vector<Monomial>& monomials() const { return ms_; }
    int max_degree() const {
        int d = 0;
        for (const auto& m : ms_) d = std::max(d, m.degree);
        return d;
    }
    bool is_zero() const {
        for (const auto& m : ms_)
            if (m.coeff != 0.0) return false;
        return true;
    }

    std::string str() const {
        std::string out;
        for (const auto& m : ms_) {
            if (!out.empty()) out += " + ";
            out += std::to_string(m.coeff) + "*u^" + std::to_string(m.degree);
        }
        return out.empty() ? "0" : out;
    }

  private:
    std::vector<Monomial> ms_;
};

}  // namespace gkdv

#endif
