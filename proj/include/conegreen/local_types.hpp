#pragma once

#include <algorithm>
#include <vector>

#include "conegreen/chains.hpp"
#include "conegreen/nilpotent.hpp"
#include "conegreen/rational_matrix_function.hpp"

namespace conegreen {

// Local asymptotic type of an analytic matrix function at one point: a
// characteristic basis of the space of null chains.
struct LocalType {
    GaussianRational point;
    std::vector<ChainVector> basis;
    std::vector<int> characteristic;

    bool empty() const { return basis.empty(); }
    int dimension() const {
        int d = 0;
        for (int m : characteristic) d += m;
        return d;
    }
};

namespace detail {

// Map sending a padded chain (length cap, leading entry first) to the
// principal-part coefficients of F(z) * chain[z-p]:
// block row l (= cap - pole order) holds sum_{n+r=l} F_n phi_r.
inline Matrix block_toeplitz(const std::vector<Matrix> &taylor, int cap, int n) {
    Matrix a(n * cap, n * cap);
    for (int l = 0; l < cap; ++l)
        for (int r = 0; r <= l; ++r) {
            const Matrix &f = taylor[size_t(l - r)];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a(l * n + i, r * n + j) = f(i, j);
        }
    return a;
}

inline Matrix pack_chain(const ChainVector &chain, int cap, int n) {
    Matrix v(n * cap, 1);
    int pad = cap - chain.m();
    for (int r = 0; r < chain.m(); ++r)
        for (int c = 0; c < n; ++c) v((pad + r) * n + c, 0) = chain.entry(r)(c, 0);
    return v;
}

inline ChainVector unpack_chain(const Matrix &v, int cap, int n) {
    std::vector<Matrix> entries;
    for (int r = 0; r < cap; ++r) {
        Matrix e(n, 1);
        for (int c = 0; c < n; ++c) e(c, 0) = v(r * n + c, 0);
        entries.push_back(std::move(e));
    }
    return ChainVector(n, std::move(entries));
}

// right shift on packed chain coordinates
inline Matrix shift_packed(const Matrix &v, int n) {
    Matrix out(v.rows(), 1);
    for (int i = n; i < v.rows(); ++i) out(i, 0) = v(i - n, 0);
    return out;
}

inline void sort_chains(std::vector<ChainVector> &chains) {
    std::stable_sort(chains.begin(), chains.end(), [](const ChainVector &a, const ChainVector &b) {
        if (a.m() != b.m()) return a.m() > b.m();
        return lex_less(a, b);
    });
}

} // namespace detail

// Characteristic basis of L_F at p for F holomorphic at p with det F not
// identically zero.  dim L_F equals the multiplicity of p as a zero of det F.
inline LocalType jordan_chains(const RationalMatrixFunction &f, const GaussianRational &p) {
    if (!f.is_holomorphic_at(p))
        throw PreconditionViolation("jordan_chains: function must be holomorphic at the point");
    Polynomial d = f.num().det();
    if (d.is_zero()) throw SingularSymbol("jordan_chains: det F vanishes identically");
    int n = f.size();
    int mult = d.root_multiplicity(p);
    LocalType result{p, {}, {}};
    if (mult == 0) return result;

    Matrix a = detail::block_toeplitz(f.taylor_at(p, mult), mult, n);
    std::vector<Matrix> kernel = a.kernel_basis();
    auto chains = characteristic_basis_mod(
        kernel, {}, [&](const Matrix &v) { return detail::shift_packed(v, n); }, n * mult);
    for (const auto &ch : chains) result.basis.push_back(detail::unpack_chain(ch.top, mult, n));
    detail::sort_chains(result.basis);
    for (const auto &c : result.basis) result.characteristic.push_back(c.m());

    int total = result.dimension();
    if (total != mult) throw std::logic_error("jordan_chains: dimension / multiplicity mismatch");
    return result;
}

inline LocalType jordan_chains(const MatrixPolynomial &f, const GaussianRational &p) {
    return jordan_chains(RationalMatrixFunction(f), p);
}

// Unique characteristic basis of L_{F^t} with
// [F^{-1}(z)]_p^* = sum_i (Phi_i (x) Psi_i)[z-p].
inline LocalType conjugate_local_basis(const RationalMatrixFunction &f, const GaussianRational &p,
                                       const LocalType &primal) {
    int n = f.size();
    LocalType result{p, {}, {}};
    if (primal.empty()) {
        if (!inverse(f).is_holomorphic_at(p))
            throw DegenerateBasis("conjugate_local_basis: primal basis misses the pole");
        return result;
    }
    LaurentExpansion target = inverse(f).laurent_at(p, -1).principal_part();
    int mmax = 0;
    for (int m : primal.characteristic) mmax = std::max(mmax, m);

    // unknowns: entries of Psi_i, padded to length m_i
    int e = int(primal.basis.size());
    std::vector<int> offset(e + 1, 0);
    for (int i = 0; i < e; ++i) offset[size_t(i) + 1] = offset[size_t(i)] + primal.characteristic[size_t(i)] * n;
    int unknowns = offset[size_t(e)];

    // equations: matrix entries of the coefficient at each pole order
    int rows = mmax * n * n;
    Matrix a(rows, unknowns);
    Matrix b(rows, 1);
    int row = 0;
    for (int nu = 1; nu <= mmax; ++nu) {
        Matrix t = nu <= target.pole_order() ? target.coeff(-nu) : Matrix(n, n);
        for (int i0 = 0; i0 < n; ++i0)
            for (int j0 = 0; j0 < n; ++j0) {
                for (int i = 0; i < e; ++i) {
                    int mi = primal.characteristic[size_t(i)];
                    if (nu > mi) continue;
                    const ChainVector &phi = primal.basis[size_t(i)];
                    // coefficient at (z-p)^(-nu): sum_{r+s = mi-nu} phi_r psi_s^t
                    for (int r = 0; r < mi; ++r) {
                        int s = mi - nu - r;
                        if (s < 0 || s >= mi) continue;
                        a(row, offset[size_t(i)] + s * n + j0) += phi.entry(r)(i0, 0);
                    }
                }
                b(row, 0) = t(i0, j0);
                ++row;
            }
    }
    auto x = a.solve(b, /*unique=*/true);
    if (!x) throw DegenerateBasis("conjugate_local_basis: matching system is inconsistent");
    for (int i = 0; i < e; ++i) {
        int mi = primal.characteristic[size_t(i)];
        std::vector<Matrix> entries;
        for (int s = 0; s < mi; ++s) {
            Matrix v(n, 1);
            for (int c = 0; c < n; ++c) v(c, 0) = (*x)(offset[size_t(i)] + s * n + c, 0);
            entries.push_back(std::move(v));
        }
        ChainVector psi(n, std::move(entries));
        if (psi.m() != mi)
            throw DegenerateBasis("conjugate_local_basis: conjugate chain degenerates");
        result.basis.push_back(psi);
        result.characteristic.push_back(mi);
    }
    return result;
}

// Pairs (i, j) for which Keldysh's relation
// <F(z) Phi_i[z-p], Psi_j[z-p]> = delta_ij (z-p)^{-m_i} + O(1) fails.
inline std::vector<std::pair<int, int>> keldysh_check(const RationalMatrixFunction &f,
                                                      const GaussianRational &p,
                                                      const LocalType &primal,
                                                      const LocalType &conjugate) {
    std::vector<std::pair<int, int>> violations;
    int e = int(primal.basis.size());
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < int(conjugate.basis.size()); ++j) {
            const ChainVector &phi = primal.basis[size_t(i)];
            const ChainVector &psi = conjugate.basis[size_t(j)];
            int window = phi.m() + psi.m() + 1;
            LaurentExpansion prod = f.laurent_at(p, window) * phi.germ(p, window);
            LaurentExpansion pairing = prod.transpose() * psi.germ(p, window);
            if (i == j) {
                std::vector<Matrix> one{Matrix::identity(1)};
                pairing = pairing - LaurentExpansion(p, -phi.m(), std::move(one), 1, 1);
            }
            if (pairing.pole_order() > 0) violations.push_back({i, j});
        }
    return violations;
}

// [Phi, Psi]_F = Res_{z=p} <F(z) Phi[z-p], Psi[z-p]>
inline GaussianRational local_pairing(const RationalMatrixFunction &f, const GaussianRational &p,
                                      const ChainVector &phi, const ChainVector &psi) {
    if (phi.is_zero() || psi.is_zero()) return GaussianRational(0);
    int window = phi.m() + psi.m() + 1;
    LaurentExpansion prod = f.laurent_at(p, window) * phi.germ(p, window);
    LaurentExpansion pairing = prod.transpose() * psi.germ(p, window);
    return pairing.residue()(0, 0);
}

} // namespace conegreen
