#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "conegreen/fuchs.hpp"
#include "conegreen/rational_matrix_function.hpp"
#include "conegreen/roots.hpp"

namespace conegreen {

// Reference weight data.  dim X is kept symbolic in exactly one place.
struct WeightContext {
    Rational delta;
    int dim_x = 1;
    int mu = 0;

    WeightContext(Rational delta_, int mu_) : delta(std::move(delta_)), mu(mu_) {}

    // weight line Re z = dim X / 2 - delta
    Rational weight_line() const { return Rational(dim_x, 2) - delta; }
    // dual exponent q = dim X - 2 delta - conj(p) - mu
    GaussianRational reflect(const GaussianRational &p) const {
        return GaussianRational(Rational(dim_x) - 2 * delta) - p.conj() - GaussianRational(mu);
    }
    // argument shift of the adjoint involution for term j of an order-mu symbol
    GaussianRational adjoint_shift(int symbol_mu, int j) const {
        return GaussianRational(Rational(dim_x) - 2 * delta + Rational(j - symbol_mu));
    }
};

// Sequence {s^{mu-j}(z)} of rational matrix functions with finite support.
struct CompleteMellinSymbol {
    int mu = 0;
    int size = 0;
    std::vector<RationalMatrixFunction> terms; // index j, trailing zeros trimmed

    CompleteMellinSymbol() = default;
    CompleteMellinSymbol(int mu_, int size_, std::vector<RationalMatrixFunction> terms_)
        : mu(mu_), size(size_), terms(std::move(terms_)) {
        trim();
    }

    static CompleteMellinSymbol identity(int size) {
        return {0, size, {RationalMatrixFunction::identity(size)}};
    }

    RationalMatrixFunction term(int j) const {
        return j >= 0 && j < int(terms.size()) ? terms[size_t(j)]
                                               : RationalMatrixFunction::zero(size);
    }
    int support() const { return int(terms.size()); }
    bool is_holomorphic() const {
        for (const auto &t : terms)
            if (!t.is_polynomial()) return false;
        return true;
    }

    friend bool operator==(const CompleteMellinSymbol &a, const CompleteMellinSymbol &b) {
        return a.mu == b.mu && a.size == b.size && a.terms == b.terms;
    }
    friend bool operator!=(const CompleteMellinSymbol &a, const CompleteMellinSymbol &b) {
        return !(a == b);
    }

  private:
    void trim() {
        while (!terms.empty() && terms.back().is_zero()) terms.pop_back();
    }
};

// sigma_c^{mu-j}(A)(z) = sum_k (1/j!) (d^j a_k / dt^j)(0) z^k
inline MatrixPolynomial conormal_symbol(const FuchsOperator &op, int j) {
    std::vector<Matrix> coeffs;
    for (int k = 0; k <= op.mu; ++k) coeffs.push_back(op.a(k).coeff(j));
    return MatrixPolynomial(op.size, std::move(coeffs));
}

inline CompleteMellinSymbol complete_symbol(const FuchsOperator &op) {
    int depth = 0;
    for (const auto &a : op.coeffs) depth = std::max(depth, a.degree() + 1);
    std::vector<RationalMatrixFunction> terms;
    for (int j = 0; j < depth; ++j)
        terms.push_back(RationalMatrixFunction(conormal_symbol(op, j)));
    return {op.mu, op.size, std::move(terms)};
}

// Mellin translation product: term l of S o_M T is
// sum_{j+k=l} s^{mu-j}(z + nu - k) t^{nu-k}(z).
inline CompleteMellinSymbol mtp(const CompleteMellinSymbol &s, const CompleteMellinSymbol &t) {
    if (s.size != t.size) throw PreconditionViolation("mtp: size mismatch");
    int nu = t.mu;
    int support = s.support() + t.support() - 1;
    if (support < 1) support = 0;
    std::vector<RationalMatrixFunction> terms;
    for (int l = 0; l < support; ++l) {
        RationalMatrixFunction acc = RationalMatrixFunction::zero(s.size);
        for (int j = 0; j <= l; ++j) {
            int k = l - j;
            if (j >= s.support() || k >= t.support()) continue;
            acc = acc + s.term(j).shift(GaussianRational(nu - k)) * t.term(k);
        }
        terms.push_back(acc);
    }
    return {s.mu + t.mu, s.size, std::move(terms)};
}

// Adjoint involution: r^{mu-j}(z) = s^{mu-j}(dim X - 2 delta - conj(z) - mu + j)^*,
// realized on Gaussian-rational coefficients as a coefficient dagger composed
// with the affine substitution z -> c_j - z.
inline CompleteMellinSymbol adjoint_symbol(const CompleteMellinSymbol &s, const WeightContext &w) {
    std::vector<RationalMatrixFunction> terms;
    for (int j = 0; j < s.support(); ++j) {
        GaussianRational c = w.adjoint_shift(s.mu, j);
        terms.push_back(s.term(j).dagger_coeffs().compose_affine(GaussianRational(-1), c));
    }
    return {s.mu, s.size, std::move(terms)};
}

struct EllipticityReport {
    bool interior = false;
    bool weight_line_clear = false;
    bool shifted_lines_clear = false; // no root on Re z = dimX/2 - delta - mu + j, j = 0..mu
    std::vector<GaussianRational> offending_roots;
    std::vector<std::pair<GaussianRational, int>> indicial_roots;
    bool checked_interior_for_positive_t = false; // condition at t > 0 is not verified

    bool elliptic() const { return interior && weight_line_clear; }
};

// Roots of det sigma_c^mu, either computed exactly or supplied by the caller.
inline std::vector<std::pair<GaussianRational, int>>
indicial_roots(const MatrixPolynomial &principal,
               const std::optional<std::vector<GaussianRational>> &supplied = std::nullopt) {
    Polynomial d = principal.det();
    if (d.is_zero()) throw SingularSymbol("determinant of the principal conormal symbol vanishes");
    if (supplied) {
        std::vector<std::pair<GaussianRational, int>> out;
        Polynomial rest = d;
        for (const auto &r : *supplied) {
            int mult = rest.root_multiplicity(r);
            if (mult == 0) throw PreconditionViolation("supplied exponent is not an indicial root");
            Polynomial lin({-r, GaussianRational(1)});
            for (int i = 0; i < mult; ++i) rest = divmod(rest, lin).first;
            out.push_back({r, mult});
        }
        if (rest.degree() > 0)
            throw UnsupportedExponentField("supplied roots do not exhaust the indicial polynomial");
        std::sort(out.begin(), out.end(),
                  [](const auto &a, const auto &b) { return lex_less(a.first, b.first); });
        return out;
    }
    RootMultiset rm = rational_roots(d);
    if (rm.nonrational_remainder)
        throw UnsupportedExponentField(
            "indicial polynomial has roots outside Q(i); supply them explicitly");
    return rm.roots;
}

inline EllipticityReport
ellipticity_check(const FuchsOperator &op, const WeightContext &w,
                  const std::optional<std::vector<GaussianRational>> &supplied = std::nullopt) {
    EllipticityReport rep;
    MatrixPolynomial principal = conormal_symbol(op, 0);
    rep.interior = !op.principal_matrix().det().is_zero() && !principal.det().is_zero();
    if (!rep.interior) return rep;
    rep.indicial_roots = indicial_roots(principal, supplied);
    Rational line = w.weight_line();
    rep.weight_line_clear = true;
    rep.shifted_lines_clear = true;
    for (const auto &[root, mult] : rep.indicial_roots) {
        if (root.re == line) {
            rep.weight_line_clear = false;
            rep.offending_roots.push_back(root);
        }
        for (int j = 0; j <= w.mu; ++j)
            if (root.re == line - w.mu + j) rep.shifted_lines_clear = false;
    }
    return rep;
}

// Lazy inverse under the Mellin translation product, memoized in shifted form
// that_j(z) = t^{-mu-j}(z + mu).  Thread-safe; behaves as if computed eagerly.
class MellinInverse {
  public:
    explicit MellinInverse(CompleteMellinSymbol s) : s_(std::move(s)) {
        Polynomial d = s_.term(0).num().det();
        if (d.is_zero())
            throw SingularSymbol("complete Mellin symbol is not elliptic; no inverse exists");
        shifted_.push_back(inverse(s_.term(0)));
    }

    const CompleteMellinSymbol &original() const { return s_; }
    int mu() const { return s_.mu; }
    int size() const { return s_.size; }

    // t^{-mu-j}(z + mu)
    RationalMatrixFunction shifted_term(int j) const {
        std::lock_guard<std::mutex> lock(mutex_);
        extend(j);
        return shifted_[size_t(j)];
    }
    // t^{-mu-j}(z)
    RationalMatrixFunction term(int j) const {
        return shifted_term(j).shift(GaussianRational(-s_.mu));
    }

    CompleteMellinSymbol to_symbol(int terms) const {
        std::vector<RationalMatrixFunction> t;
        for (int j = 0; j <= terms; ++j) t.push_back(term(j));
        return {-s_.mu, s_.size, std::move(t)};
    }

  private:
    // sum_{j+k=l} t^{-mu-j}(z+mu+j) s^{mu-k}(z+l) = delta_{0l} id resolves to
    // that_l(w) = -(sum_{j<l} that_j(w-(l-j)) s^{mu-(l-j)}(w)) that_0(w).
    void extend(int upto) const {
        while (int(shifted_.size()) <= upto) {
            int l = int(shifted_.size());
            RationalMatrixFunction acc = RationalMatrixFunction::zero(s_.size);
            for (int j = 0; j < l; ++j) {
                int k = l - j;
                if (k >= s_.support()) continue;
                acc = acc + shifted_[size_t(j)].shift(GaussianRational(-k)) * s_.term(k);
            }
            shifted_.push_back(-acc * shifted_[0]);
        }
    }

    CompleteMellinSymbol s_;
    mutable std::mutex mutex_;
    mutable std::vector<RationalMatrixFunction> shifted_;
};

// Materializes the first K+1 terms of the inverse (order -mu).
inline CompleteMellinSymbol invert_complete_symbol(const CompleteMellinSymbol &s, int terms) {
    return MellinInverse(s).to_symbol(terms);
}
inline CompleteMellinSymbol invert_complete_symbol(const CompleteMellinSymbol &s) {
    return invert_complete_symbol(s, 2 * std::max(s.mu, 0));
}

// Exact (pole, residue) table of t^{-mu-k}(z + mu).
inline std::vector<std::pair<GaussianRational, Matrix>>
residue_table(const MellinInverse &inv, int k) {
    RationalMatrixFunction f = inv.shifted_term(k);
    RootMultiset rm = rational_roots(f.den().is_zero() ? Polynomial(GaussianRational(1)) : f.den());
    if (rm.nonrational_remainder)
        throw UnsupportedExponentField("inverse symbol has poles outside Q(i)");
    std::vector<std::pair<GaussianRational, Matrix>> out;
    for (const auto &[pole, mult] : rm.roots) {
        Matrix res = f.laurent_at(pole, -1).residue();
        if (!res.is_zero() || f.laurent_at(pole, -1).pole_order() > 0)
            out.push_back({pole, res});
    }
    return out;
}

} // namespace conegreen
