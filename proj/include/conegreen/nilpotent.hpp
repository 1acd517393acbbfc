#pragma once

#include <functional>
#include <vector>

#include "conegreen/matrix.hpp"

namespace conegreen {

namespace detail {

// Canonical basis (as D x 1 columns) of the span of `vectors`, via row RREF.
inline std::vector<Matrix> canonical_span(const std::vector<Matrix> &vectors, int dim) {
    if (vectors.empty()) return {};
    Matrix rows(int(vectors.size()), dim);
    for (size_t i = 0; i < vectors.size(); ++i)
        for (int j = 0; j < dim; ++j) rows(int(i), j) = vectors[i](j, 0);
    auto pivots = rows.rref();
    std::vector<Matrix> out;
    for (size_t r = 0; r < pivots.size(); ++r) {
        Matrix v(dim, 1);
        for (int j = 0; j < dim; ++j) v(j, 0) = rows(int(r), j);
        out.push_back(v);
    }
    return out;
}

// Reduces v against RREF rows; returns the reduced vector (zero if dependent).
inline Matrix reduce_against(const Matrix &rows, const std::vector<int> &pivots, Matrix v) {
    for (size_t r = 0; r < pivots.size(); ++r) {
        const GaussianRational &c = v(pivots[r], 0);
        if (c.is_zero()) continue;
        GaussianRational f = c;
        for (int j = 0; j < v.rows(); ++j) v(j, 0) -= f * rows(int(r), j);
    }
    return v;
}

} // namespace detail

struct NilpotentChain {
    Matrix top; // ambient vector
    int length; // T-orbit length modulo Q
};

// Canonical characteristic basis of V/Q for a nilpotent shift T, where V and
// Q are T-invariant subspaces given by spanning vectors.  Chains are returned
// longest first; every top is fully reduced against ker(T^{k-1}) + the orbit
// vectors of longer chains, which pins the basis uniquely given the
// coordinate order.
inline std::vector<NilpotentChain>
characteristic_basis_mod(const std::vector<Matrix> &v_span, const std::vector<Matrix> &q_span,
                         const std::function<Matrix(const Matrix &)> &shift, int dim) {
    auto vb = detail::canonical_span(v_span, dim);
    auto qb = detail::canonical_span(q_span, dim);
    if (vb.empty()) return {};
    int dv = int(vb.size());

    // N_k = {v in V : T^k v in Q}, as canonical ambient bases
    std::vector<std::vector<Matrix>> nk;
    {
        Matrix vmat = hcat(vb, dim);
        Matrix qmat = qb.empty() ? Matrix(dim, 0) : hcat(qb, dim);
        for (int k = 0;; ++k) {
            std::vector<Matrix> tkv;
            for (const auto &v : vb) {
                Matrix w = v;
                for (int i = 0; i < k; ++i) w = shift(w);
                tkv.push_back(w);
            }
            Matrix a(dim, dv + qmat.cols());
            for (int i = 0; i < dim; ++i) {
                for (int j = 0; j < dv; ++j) a(i, j) = tkv[size_t(j)](i, 0);
                for (int j = 0; j < qmat.cols(); ++j) a(i, dv + j) = -qmat(i, j);
            }
            std::vector<Matrix> members;
            for (const auto &kvec : a.kernel_basis()) {
                Matrix v(dim, 1);
                for (int j = 0; j < dv; ++j)
                    if (!kvec(j, 0).is_zero()) v += vb[size_t(j)] * kvec(j, 0);
                if (!v.is_zero()) members.push_back(v);
            }
            nk.push_back(detail::canonical_span(members, dim));
            if (int(nk.back().size()) == dv) break;
            if (k > dv + 1) throw std::logic_error("shift operator is not nilpotent modulo Q");
        }
    }
    int height = int(nk.size()) - 1;

    std::vector<NilpotentChain> chains;
    for (int k = height; k >= 1; --k) {
        // context: N_{k-1} plus height-k orbit vectors of longer chains
        std::vector<Matrix> context = nk[size_t(k - 1)];
        for (const auto &ch : chains) {
            Matrix w = ch.top;
            for (int i = 0; i < ch.length - k; ++i) w = shift(w);
            context.push_back(w);
        }
        auto ctx = detail::canonical_span(context, dim);
        Matrix work(int(ctx.size()), dim);
        for (size_t i = 0; i < ctx.size(); ++i)
            for (int j = 0; j < dim; ++j) work(int(i), j) = ctx[i](j, 0);
        auto pivots = work.rref();
        for (const auto &cand : nk[size_t(k)]) {
            Matrix red = detail::reduce_against(work, pivots, cand);
            if (red.is_zero()) continue;
            // normalize to leading coefficient one
            for (int j = 0; j < dim; ++j)
                if (!red(j, 0).is_zero()) {
                    red = red * red(j, 0).inverse();
                    break;
                }
            chains.push_back({red, k});
            // extend the context with the new top
            Matrix grown(work.rows() + 1, dim);
            for (int i = 0; i < work.rows(); ++i)
                for (int j = 0; j < dim; ++j) grown(i, j) = work(i, j);
            for (int j = 0; j < dim; ++j) grown(work.rows(), j) = red(j, 0);
            pivots = grown.rref();
            work = grown;
        }
    }
    return chains;
}

} // namespace conegreen
