#pragma once

#include <vector>

#include "conegreen/errors.hpp"
#include "conegreen/matrix_polynomial.hpp"

namespace conegreen {

// Fuchs-type operator t^{-mu} sum_{j=0}^{mu} a_j(t) (-t d/dt)^j with N x N
// matrix polynomial coefficients.
struct FuchsOperator {
    int mu = 0;
    int size = 0;
    std::vector<MatrixPolynomial> coeffs; // a_0 .. a_mu

    const MatrixPolynomial &a(int j) const { return coeffs[size_t(j)]; }
    Matrix principal_matrix() const { return coeffs[size_t(mu)](GaussianRational(0)); }

    friend bool operator==(const FuchsOperator &x, const FuchsOperator &y) {
        return x.mu == y.mu && x.size == y.size && x.coeffs == y.coeffs;
    }
    friend bool operator!=(const FuchsOperator &x, const FuchsOperator &y) { return !(x == y); }
};

// One summand c(t) * t^tpower * d_t^deriv of a classical-form operator.
struct ClassicalTerm {
    MatrixPolynomial coeff;
    int tpower = 0;
    int deriv = 0;
};

namespace detail {

// theta (theta - 1) ... (theta - k + 1)
inline Polynomial falling_factorial(int k) {
    Polynomial p{GaussianRational(1)};
    for (int i = 0; i < k; ++i)
        p = p * Polynomial({GaussianRational(-i), GaussianRational(1)});
    return p;
}

} // namespace detail

// Rewrites sum_k c_k(t) t^{s_k} d_t^k into the form t^{-mu} sum a_j (-t d_t)^j
// using t^k d_t^k = theta (theta-1) ... (theta-k+1).
inline FuchsOperator to_fuchs_form(const std::vector<ClassicalTerm> &terms, int size) {
    int mu = 0;
    for (const auto &t : terms) mu = std::max(mu, t.deriv);
    FuchsOperator op;
    op.mu = mu;
    op.size = size;
    op.coeffs.assign(size_t(mu) + 1, MatrixPolynomial(size));
    for (const auto &term : terms) {
        if (term.coeff.is_zero()) continue;
        if (term.coeff.size() != size) throw NotFuchsType("coefficient size mismatch");
        int e = mu + term.tpower - term.deriv;
        if (e < 0)
            throw NotFuchsType("negative power of t survives after multiplying by t^mu");
        Polynomial falling = detail::falling_factorial(term.deriv);
        for (int j = 0; j <= falling.degree(); ++j) {
            GaussianRational c = falling.coeff(j);
            if (j % 2 != 0) c = -c;
            if (c.is_zero()) continue;
            op.coeffs[size_t(j)] += term.coeff * Polynomial::monomial(c, e);
        }
    }
    return op;
}

// A applied to t^alpha v: t^{alpha-mu} * (sum_j (-alpha)^j a_j(t)) v, returned
// as pairs (t-exponent, vector).
inline std::vector<std::pair<GaussianRational, Matrix>>
apply_to_monomial(const FuchsOperator &op, const GaussianRational &alpha, const Matrix &v) {
    MatrixPolynomial acc(op.size);
    GaussianRational pw(1);
    for (int j = 0; j <= op.mu; ++j) {
        acc += op.coeffs[size_t(j)] * pw;
        pw *= -alpha;
    }
    std::vector<std::pair<GaussianRational, Matrix>> out;
    for (int k = 0; k <= acc.degree(); ++k) {
        Matrix w = acc.coeff(k) * v;
        if (!w.is_zero())
            out.push_back({alpha - GaussianRational(op.mu) + GaussianRational(k), w});
    }
    return out;
}

// Same evaluation through the classical form, as an independent cross check.
inline std::vector<std::pair<GaussianRational, Matrix>>
apply_classical_to_monomial(const std::vector<ClassicalTerm> &terms, const GaussianRational &alpha,
                            const Matrix &v) {
    std::vector<std::pair<GaussianRational, Matrix>> out;
    for (const auto &term : terms) {
        GaussianRational fall(1);
        for (int i = 0; i < term.deriv; ++i) fall *= alpha - GaussianRational(i);
        if (fall.is_zero()) continue;
        for (int k = 0; k <= term.coeff.degree(); ++k) {
            Matrix w = term.coeff.coeff(k) * v * fall;
            if (!w.is_zero())
                out.push_back(
                    {alpha - GaussianRational(term.deriv) + GaussianRational(term.tpower + k), w});
        }
    }
    return out;
}

inline std::vector<std::pair<GaussianRational, Matrix>>
collect_monomials(std::vector<std::pair<GaussianRational, Matrix>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto &a, const auto &b) { return lex_less(a.first, b.first); });
    std::vector<std::pair<GaussianRational, Matrix>> out;
    for (auto &t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto &t) { return t.second.is_zero(); }),
              out.end());
    return out;
}

namespace detail {

// Operator word sum_m c_m(t) (-theta)^m; left multiplication rules:
// (-theta) c(t) = c(t)(-theta) - t c'(t),  (-theta) t^{-nu} = t^{-nu}(-theta + nu).
struct ThetaWord {
    int size;
    std::vector<MatrixPolynomial> c; // by power of (-theta)

    explicit ThetaWord(int size_) : size(size_) {}

    void add(int m, const MatrixPolynomial &p) {
        if (int(c.size()) <= m) c.resize(size_t(m) + 1, MatrixPolynomial(size));
        c[size_t(m)] += p;
    }

    // multiply by (-theta + shift) on the left
    ThetaWord left_theta(const GaussianRational &shift) const {
        ThetaWord out(size);
        Polynomial t = Polynomial::variable();
        for (int m = 0; m < int(c.size()); ++m) {
            if (c[size_t(m)].is_zero()) continue;
            out.add(m + 1, c[size_t(m)]);
            out.add(m, -(c[size_t(m)].derivative() * t) + c[size_t(m)] * shift);
        }
        return out;
    }

    // multiply by the matrix polynomial a(t) on the left
    ThetaWord left_coeff(const MatrixPolynomial &a) const {
        ThetaWord out(size);
        for (int m = 0; m < int(c.size()); ++m)
            if (!c[size_t(m)].is_zero()) out.add(m, a * c[size_t(m)]);
        return out;
    }

    void accumulate(const ThetaWord &o) {
        for (int m = 0; m < int(o.c.size()); ++m)
            if (!o.c[size_t(m)].is_zero()) add(m, o.c[size_t(m)]);
    }
};

} // namespace detail

// Symbolic composition: Fuchs operators form a filtered algebra.
inline FuchsOperator compose(const FuchsOperator &a, const FuchsOperator &b) {
    if (a.size != b.size) throw NotFuchsType("compose: size mismatch");
    detail::ThetaWord bw(b.size);
    for (int k = 0; k <= b.mu; ++k) bw.add(k, b.coeffs[size_t(k)]);
    detail::ThetaWord result(b.size);
    // (-theta)^j t^{-nu} = t^{-nu} (-theta + nu)^j
    for (int j = 0; j <= a.mu; ++j) {
        if (a.coeffs[size_t(j)].is_zero()) continue;
        detail::ThetaWord w = bw;
        for (int i = 0; i < j; ++i) w = w.left_theta(GaussianRational(b.mu));
        result.accumulate(w.left_coeff(a.coeffs[size_t(j)]));
    }
    FuchsOperator out;
    out.mu = a.mu + b.mu;
    out.size = a.size;
    out.coeffs.assign(size_t(out.mu) + 1, MatrixPolynomial(a.size));
    if (int(result.c.size()) > out.mu + 1)
        throw std::logic_error("compose: word order exceeds mu+nu");
    for (int m = 0; m < int(result.c.size()); ++m) out.coeffs[size_t(m)] = result.c[size_t(m)];
    return out;
}

} // namespace conegreen
