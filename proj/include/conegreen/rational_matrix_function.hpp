#pragma once

#include <cassert>

#include "conegreen/errors.hpp"
#include "conegreen/matrix_polynomial.hpp"

namespace conegreen {

// N x N meromorphic matrix function num(z)/den(z) with scalar denominator.
// Reduced form: den monic and gcd(den, gcd of all numerator entries) = 1.
class RationalMatrixFunction {
  public:
    RationalMatrixFunction() = default;
    RationalMatrixFunction(MatrixPolynomial num, Polynomial den)
        : num_(std::move(num)), den_(std::move(den)) {
        reduce();
    }
    explicit RationalMatrixFunction(const MatrixPolynomial &num)
        : RationalMatrixFunction(num, Polynomial(GaussianRational(1))) {}

    static RationalMatrixFunction identity(int size) {
        return RationalMatrixFunction(MatrixPolynomial::identity(size));
    }
    static RationalMatrixFunction zero(int size) {
        return RationalMatrixFunction(MatrixPolynomial(size));
    }
    static RationalMatrixFunction scalar(int size, const Polynomial &num, const Polynomial &den) {
        return RationalMatrixFunction(MatrixPolynomial::scalar(size, num), den);
    }

    const MatrixPolynomial &num() const { return num_; }
    const Polynomial &den() const { return den_; }
    int size() const { return num_.size(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() <= 0; }

    RationalMatrixFunction operator-() const { return {-num_, den_}; }
    friend RationalMatrixFunction operator+(const RationalMatrixFunction &a,
                                            const RationalMatrixFunction &b) {
        assert(a.size() == b.size());
        Polynomial g = gcd(a.den_, b.den_);
        Polynomial aq = divmod(a.den_, g).first, bq = divmod(b.den_, g).first;
        return {a.num_ * bq + b.num_ * aq, a.den_ * bq};
    }
    friend RationalMatrixFunction operator-(const RationalMatrixFunction &a,
                                            const RationalMatrixFunction &b) {
        return a + (-b);
    }
    friend RationalMatrixFunction operator*(const RationalMatrixFunction &a,
                                            const RationalMatrixFunction &b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RationalMatrixFunction operator*(const RationalMatrixFunction &a,
                                            const GaussianRational &s) {
        return {a.num_ * s, a.den_};
    }
    friend bool operator==(const RationalMatrixFunction &a, const RationalMatrixFunction &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalMatrixFunction &a, const RationalMatrixFunction &b) {
        return !(a == b);
    }

    RationalMatrixFunction compose_affine(const GaussianRational &a, const GaussianRational &b) const {
        return {num_.compose_affine(a, b), den_.compose_affine(a, b)};
    }
    RationalMatrixFunction shift(const GaussianRational &c) const {
        return compose_affine(GaussianRational(1), c);
    }
    RationalMatrixFunction conj_coeffs() const { return {num_.conj_coeffs(), den_.conj_coeffs()}; }
    RationalMatrixFunction dagger_coeffs() const { return {num_.dagger_coeffs(), den_.conj_coeffs()}; }
    RationalMatrixFunction transpose_coeffs() const { return {num_.transpose_coeffs(), den_}; }

    bool is_holomorphic_at(const GaussianRational &p) const { return !den_(p).is_zero(); }

    Matrix operator()(const GaussianRational &z) const {
        GaussianRational d = den_(z);
        if (d.is_zero()) throw std::domain_error("RationalMatrixFunction: evaluation at a pole");
        return num_(z) * d.inverse();
    }

    // Exact Laurent data at p through (z-p)^order.
    LaurentExpansion laurent_at(const GaussianRational &p, int order) const {
        int n = size();
        if (num_.is_zero()) return LaurentExpansion::zero(p, order, n, n);
        int nu = den_.root_multiplicity(p);
        // den = (z-p)^nu * dt with dt(p) != 0
        Polynomial dt = den_;
        Polynomial lin({-p, GaussianRational(1)});
        for (int k = 0; k < nu; ++k) dt = divmod(dt, lin).first;
        int count = order + nu + 1;
        if (count <= 0) return LaurentExpansion::zero(p, order, n, n);
        std::vector<GaussianRational> d = dt.taylor_at(p, count);
        // series inverse of dt at p
        std::vector<GaussianRational> inv(count);
        GaussianRational d0 = d[0].inverse();
        inv[0] = d0;
        for (int k = 1; k < count; ++k) {
            GaussianRational acc(0);
            for (int j = 1; j <= k; ++j) acc += d[j] * inv[k - j];
            inv[k] = -acc * d0;
        }
        std::vector<Matrix> numt = num_.taylor_at(p, count);
        std::vector<Matrix> c(count, Matrix(n, n));
        for (int k = 0; k < count; ++k)
            for (int j = 0; j <= k; ++j) c[k] += numt[j] * inv[k - j];
        return LaurentExpansion(p, -nu, std::move(c), n, n);
    }

    LaurentExpansion principal_part_at(const GaussianRational &p) const {
        return laurent_at(p, -1).principal_part();
    }

    std::vector<Matrix> taylor_at(const GaussianRational &p, int count) const {
        if (!is_holomorphic_at(p))
            throw std::domain_error("RationalMatrixFunction: Taylor expansion at a pole");
        LaurentExpansion l = laurent_at(p, count - 1);
        std::vector<Matrix> out;
        out.reserve(count);
        for (int k = 0; k < count; ++k) out.push_back(l.coeff(k));
        return out;
    }

  private:
    void reduce() {
        if (den_.is_zero()) throw std::domain_error("RationalMatrixFunction: zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial(GaussianRational(1));
            return;
        }
        Polynomial g = den_;
        for (int i = 0; i < num_.size() && g.degree() > 0; ++i)
            for (int j = 0; j < num_.size() && g.degree() > 0; ++j) {
                Polynomial e = num_.entry(i, j);
                if (!e.is_zero()) g = gcd(g, e);
            }
        if (g.degree() > 0) {
            std::vector<std::vector<Polynomial>> entries(num_.size(),
                                                         std::vector<Polynomial>(num_.size()));
            for (int i = 0; i < num_.size(); ++i)
                for (int j = 0; j < num_.size(); ++j)
                    entries[i][j] = divmod(num_.entry(i, j), g).first;
            num_ = MatrixPolynomial::from_entries(entries);
            den_ = divmod(den_, g).first;
        }
        GaussianRational lead = den_.leading();
        if (lead != GaussianRational(1)) {
            den_ = den_.monic();
            num_ = num_ * lead.inverse();
        }
    }

    MatrixPolynomial num_;
    Polynomial den_{GaussianRational(1)};
};

// Adjugate/determinant inversion of a matrix polynomial.
inline RationalMatrixFunction matrix_inverse_rational(const MatrixPolynomial &m) {
    Polynomial d = m.det();
    if (d.is_zero()) throw SingularSymbol("matrix polynomial has identically vanishing determinant");
    return {m.adjugate(), d};
}

inline RationalMatrixFunction inverse(const RationalMatrixFunction &f) {
    Polynomial d = f.num().det();
    if (d.is_zero()) throw SingularSymbol("rational matrix function is singular");
    // (num/den)^-1 = den * adj(num) / det(num)
    return {f.num().adjugate() * f.den(), d};
}

} // namespace conegreen
