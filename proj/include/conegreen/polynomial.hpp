#pragma once

#include <cassert>
#include <vector>

#include "conegreen/rational.hpp"

namespace conegreen {

// Univariate polynomial over Q(i), trailing (highest-power) zeros trimmed.
class Polynomial {
  public:
    Polynomial() = default;
    Polynomial(GaussianRational c) { // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) coeffs_.push_back(std::move(c));
    }
    Polynomial(int c) : Polynomial(GaussianRational(c)) {} // NOLINT(google-explicit-constructor)
    explicit Polynomial(std::vector<GaussianRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Polynomial variable() { return Polynomial({GaussianRational(0), GaussianRational(1)}); }
    static Polynomial monomial(const GaussianRational &c, int power) {
        std::vector<GaussianRational> v(power + 1);
        v[power] = c;
        return Polynomial(std::move(v));
    }

    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is -1 by convention.
    int degree() const { return int(coeffs_.size()) - 1; }
    const std::vector<GaussianRational> &coeffs() const { return coeffs_; }
    GaussianRational coeff(int k) const {
        return k >= 0 && k < int(coeffs_.size()) ? coeffs_[k] : GaussianRational(0);
    }
    GaussianRational leading() const {
        return coeffs_.empty() ? GaussianRational(0) : coeffs_.back();
    }

    GaussianRational operator()(const GaussianRational &z) const {
        GaussianRational acc(0);
        for (int k = degree(); k >= 0; --k) acc = acc * z + coeffs_[k];
        return acc;
    }

    Polynomial operator-() const {
        Polynomial p = *this;
        for (auto &c : p.coeffs_) c = -c;
        return p;
    }
    Polynomial &operator+=(const Polynomial &o) {
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    Polynomial &operator-=(const Polynomial &o) { return *this += -o; }
    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<GaussianRational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(Polynomial a, const GaussianRational &c) {
        for (auto &x : a.coeffs_) x *= c;
        a.trim();
        return a;
    }
    friend Polynomial operator*(const GaussianRational &c, Polynomial a) { return std::move(a) * c; }
    friend bool operator==(const Polynomial &a, const Polynomial &b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const Polynomial &a, const Polynomial &b) { return !(a == b); }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<GaussianRational> c(coeffs_.size() - 1);
        for (size_t k = 1; k < coeffs_.size(); ++k) c[k - 1] = coeffs_[k] * GaussianRational(int(k));
        return Polynomial(std::move(c));
    }

    // Composition with an affine argument: p(a*z + b).
    Polynomial compose_affine(const GaussianRational &a, const GaussianRational &b) const {
        Polynomial result;
        Polynomial arg({b, a});
        for (int k = degree(); k >= 0; --k) result = result * arg + Polynomial(coeffs_[k]);
        return result;
    }
    Polynomial shift(const GaussianRational &c) const { return compose_affine(GaussianRational(1), c); }

    Polynomial conj_coeffs() const {
        Polynomial p = *this;
        for (auto &c : p.coeffs_) c = c.conj();
        return p;
    }

    // Taylor coefficients at z0: p(z0 + w) as coefficients of w^0..w^(count-1).
    std::vector<GaussianRational> taylor_at(const GaussianRational &z0, int count) const {
        Polynomial shifted = shift(z0);
        std::vector<GaussianRational> out(count);
        for (int k = 0; k < count; ++k) out[k] = shifted.coeff(k);
        return out;
    }

    // Euclidean division; divisor must be nonzero.
    friend std::pair<Polynomial, Polynomial> divmod(const Polynomial &a, const Polynomial &b) {
        assert(!b.is_zero());
        Polynomial r = a, q;
        GaussianRational inv = b.leading().inverse();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int d = r.degree() - b.degree();
            GaussianRational f = r.leading() * inv;
            q += Polynomial::monomial(f, d);
            r -= Polynomial::monomial(f, d) * b;
        }
        return {q, r};
    }

    Polynomial monic() const {
        if (is_zero()) return {};
        return *this * leading().inverse();
    }

    friend Polynomial gcd(Polynomial a, Polynomial b) {
        // remainders are renormalized monic; plain Euclid blows up the
        // rational coefficients on large inputs
        a = a.monic();
        b = b.monic();
        while (!b.is_zero()) {
            Polynomial r = divmod(a, b).second.monic();
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    // Multiplicity of z0 as a root.
    int root_multiplicity(const GaussianRational &z0) const {
        assert(!is_zero());
        Polynomial p = *this;
        Polynomial lin({-z0, GaussianRational(1)});
        int m = 0;
        while (true) {
            auto [q, r] = divmod(p, lin);
            if (!r.is_zero()) return m;
            p = q;
            ++m;
        }
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }
    std::vector<GaussianRational> coeffs_;
};

inline std::string to_string(const Polynomial &p, const std::string &var = "z") {
    if (p.is_zero()) return "0";
    std::string s;
    for (int k = p.degree(); k >= 0; --k) {
        GaussianRational c = p.coeff(k);
        if (c.is_zero()) continue;
        if (!s.empty()) s += " + ";
        std::string cs = to_string(c);
        if (cs.find('+') != std::string::npos || (cs.find('-') != std::string::npos && k > 0))
            cs = "(" + cs + ")";
        if (k == 0) {
            s += cs;
        } else {
            s += (c == GaussianRational(1) ? "" : cs + "*") + var;
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s;
}

} // namespace conegreen
