#pragma once

#include <cassert>
#include <vector>

#include "conegreen/laurent.hpp"
#include "conegreen/matrix.hpp"

namespace conegreen {

// Element of [C^N]^infty: a finite chain (phi_0,...,phi_{m-1}) identified
// with the principal part phi_0/(z-p)^m + ... + phi_{m-1}/(z-p).  Leading
// zeros are trimmed, so m() is minimal.
class ChainVector {
  public:
    ChainVector() = default;
    ChainVector(int dim, std::vector<Matrix> entries) : dim_(dim), entries_(std::move(entries)) {
        normalize();
    }
    static ChainVector from_scalars(const std::vector<GaussianRational> &values) {
        std::vector<Matrix> e;
        for (const auto &v : values) e.push_back(Matrix::column({v}));
        return ChainVector(1, std::move(e));
    }

    int dim() const { return dim_; }
    int m() const { return int(entries_.size()); }
    bool is_zero() const { return entries_.empty(); }
    // entry r of the chain; entry(0) is the leading one (pole order m)
    const Matrix &entry(int r) const { return entries_[size_t(r)]; }
    const std::vector<Matrix> &entries() const { return entries_; }

    // right shift: drops the last entry
    ChainVector shifted() const {
        if (entries_.empty()) return *this;
        return ChainVector(dim_, std::vector<Matrix>(entries_.begin(), entries_.end() - 1));
    }
    ChainVector shifted(int k) const {
        if (k >= m()) return ChainVector(dim_, {});
        return ChainVector(dim_, std::vector<Matrix>(entries_.begin(), entries_.end() - k));
    }

    ChainVector conj() const { // C
        std::vector<Matrix> e = entries_;
        for (auto &v : e) v = v.conj();
        return ChainVector(dim_, std::move(e));
    }
    ChainVector sign_flipped() const { // J: entry r scaled by (-1)^(m-r)
        std::vector<Matrix> e = entries_;
        int mm = m();
        for (int r = 0; r < mm; ++r)
            if ((mm - r) % 2 != 0) e[size_t(r)] = -e[size_t(r)];
        return ChainVector(dim_, std::move(e));
    }
    ChainVector conj_sign_flipped() const { return sign_flipped().conj(); } // I = C J

    ChainVector operator-() const {
        std::vector<Matrix> e = entries_;
        for (auto &v : e) v = -v;
        return ChainVector(dim_, std::move(e));
    }
    friend ChainVector operator*(const ChainVector &a, const GaussianRational &s) {
        std::vector<Matrix> e = a.entries_;
        for (auto &v : e) v = v * s;
        return ChainVector(a.dim_, std::move(e));
    }
    friend ChainVector operator+(const ChainVector &a, const ChainVector &b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        assert(a.dim_ == b.dim_);
        int mm = std::max(a.m(), b.m());
        std::vector<Matrix> e(size_t(mm), Matrix(a.dim_, 1));
        for (int r = 0; r < a.m(); ++r) e[size_t(r + mm - a.m())] += a.entry(r);
        for (int r = 0; r < b.m(); ++r) e[size_t(r + mm - b.m())] += b.entry(r);
        return ChainVector(a.dim_, std::move(e));
    }
    friend ChainVector operator-(const ChainVector &a, const ChainVector &b) { return a + (-b); }
    friend bool operator==(const ChainVector &a, const ChainVector &b) {
        return a.entries_ == b.entries_;
    }
    friend bool operator!=(const ChainVector &a, const ChainVector &b) { return !(a == b); }

    // Phi[z - p] as an exact (not truncation-limited) N x 1 Laurent germ.
    LaurentExpansion germ(const GaussianRational &p, int trunc = 0) const {
        std::vector<Matrix> c = entries_;
        for (int e = 0; e <= trunc; ++e) c.push_back(Matrix(dim_, 1));
        return LaurentExpansion(p, -m(), std::move(c), dim_, 1);
    }

    friend bool lex_less(const ChainVector &a, const ChainVector &b) {
        for (int r = 0; r < std::min(a.m(), b.m()); ++r)
            for (int c = 0; c < a.dim_; ++c) {
                const GaussianRational &x = a.entry(r)(c, 0), &y = b.entry(r)(c, 0);
                if (x != y) return lex_less(x, y);
            }
        return a.m() < b.m();
    }

  private:
    void normalize() {
        size_t lead = 0;
        while (lead < entries_.size() && entries_[lead].is_zero()) ++lead;
        entries_.erase(entries_.begin(), entries_.begin() + long(lead));
        for (auto &v : entries_) {
            assert(v.rows() == dim_ && v.cols() == 1);
            (void)v;
        }
    }

    int dim_ = 0;
    std::vector<Matrix> entries_;
};

// Chain extracted from the principal part of an N x 1 Laurent germ.
inline ChainVector chain_from_principal(const LaurentExpansion &l) {
    assert(l.cols() == 1);
    std::vector<Matrix> e;
    for (int ord = l.lead(); ord < 0; ++ord) e.push_back(l.coeff(ord));
    return ChainVector(l.rows(), std::move(e));
}

// (Phi (x) Psi)[z-p]: rank-one matrix chain of length max(m(Phi), m(Psi)),
// built with the bilinear pairing (no conjugation); returned as the exact
// principal part at p.
inline LaurentExpansion tensor_chain(const ChainVector &phi, const ChainVector &psi,
                                     const GaussianRational &p, int trunc = 0) {
    int n = phi.dim() ? phi.dim() : psi.dim();
    int mm = std::max(phi.m(), psi.m());
    std::vector<Matrix> c(size_t(mm), Matrix(n, n));
    for (int r = 0; r < phi.m(); ++r)
        for (int s = 0; s < psi.m(); ++s) {
            // product germ exponent shifted by (z-p)^mm, cf. the identity
            // (Phi(x)Psi)[z-p] = (z-p)^m [Phi[z-p] (x) Psi[z-p]]^*
            int e = (r - phi.m()) + (s - psi.m()) + mm;
            if (e > -1) continue;
            c[size_t(e + mm)] += phi.entry(r) * psi.entry(s).transpose();
        }
    for (int e = 0; e <= trunc; ++e) c.push_back(Matrix(n, n));
    return LaurentExpansion(p, -mm, std::move(c), n, n);
}

} // namespace conegreen
