#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "conegreen/chains.hpp"
#include "conegreen/local_types.hpp"
#include "conegreen/mellin.hpp"
#include "conegreen/nilpotent.hpp"

namespace conegreen {

// Special vector: chains over the exponent lattice anchor - N_0.  chains[l]
// is the chain at exponent anchor - l; the anchor is the top lattice point of
// the computed window (chains there may be zero).
struct SpecialVector {
    GaussianRational anchor;
    int dim = 0;
    std::vector<ChainVector> chains;

    int levels() const { return int(chains.size()); }

    // level of p on the lattice, or -1 when p is off the lattice
    int level_of(const GaussianRational &p) const {
        GaussianRational d = anchor - p;
        if (d.im != 0 || den(d.re) != 1) return -1;
        Integer l = num(d.re);
        if (l < 0 || l >= levels()) return -1;
        return int(l);
    }

    ChainVector chain_at(const GaussianRational &p) const {
        int l = level_of(p);
        return l < 0 ? ChainVector(dim, {}) : chains[size_t(l)];
    }
    int m_at(const GaussianRational &p) const { return chain_at(p).m(); }

    // quotient chain length at p: the longest chain at p or above it on the
    // lattice (the T-orbit length seen down to this exponent)
    int quotient_m_at(const GaussianRational &p) const {
        GaussianRational d = anchor - p;
        if (d.im != 0 || den(d.re) != 1) return 0;
        Integer l = num(d.re);
        int upto = l < 0 ? -1 : std::min(Integer(levels() - 1), l).convert_to<int>();
        int m = 0;
        for (int i = 0; i <= upto; ++i) m = std::max(m, chains[size_t(i)].m());
        if (l >= levels()) m = max_chain_length();
        return m;
    }

    bool is_zero() const {
        for (const auto &c : chains)
            if (!c.is_zero()) return false;
        return true;
    }

    // top exponent carrying a nonzero chain
    GaussianRational gamma() const {
        for (int l = 0; l < levels(); ++l)
            if (!chains[size_t(l)].is_zero()) return anchor - GaussianRational(l);
        return anchor;
    }

    int max_chain_length() const {
        int m = 0;
        for (const auto &c : chains) m = std::max(m, c.m());
        return m;
    }

    SpecialVector shifted(int k = 1) const {
        SpecialVector out = *this;
        for (auto &c : out.chains) c = c.shifted(k);
        return out;
    }
    SpecialVector involution_C() const {
        SpecialVector out = *this;
        for (auto &c : out.chains) c = c.conj();
        return out;
    }
    SpecialVector involution_J() const {
        SpecialVector out = *this;
        for (auto &c : out.chains) c = c.sign_flipped();
        return out;
    }
    SpecialVector involution_I() const { return involution_J().involution_C(); }

    friend bool operator==(const SpecialVector &a, const SpecialVector &b) {
        if (a.dim != b.dim) return false;
        auto chain_of = [](const SpecialVector &v, const GaussianRational &p) {
            return v.chain_at(p);
        };
        int la = a.levels(), lb = b.levels();
        for (int l = 0; l < std::max(la, lb); ++l) {
            GaussianRational pa = a.anchor - GaussianRational(l);
            if (chain_of(a, pa) != chain_of(b, pa)) return false;
            GaussianRational pb = b.anchor - GaussianRational(l);
            if (chain_of(a, pb) != chain_of(b, pb)) return false;
        }
        return true;
    }
    friend bool operator!=(const SpecialVector &a, const SpecialVector &b) { return !(a == b); }
};

// Characteristic basis of L_S^delta modulo L_S^{delta+depth}.
struct StripBasis {
    Rational delta;
    int dim_x = 1;
    int depth = 0;
    int dim = 0;
    std::vector<SpecialVector> vectors;
    std::vector<std::vector<int>> scheme; // scheme[i][j-1] = m_i^j, j = 1..depth

    Rational weight_line() const { return Rational(dim_x, 2) - delta; }

    int dimension() const {
        int total = 0;
        for (const auto &row : scheme)
            if (!row.empty()) total += row.back();
        return total;
    }
};

// Theta_l(Phi; S)[z]: sum_{j+k=l} s^{mu-k}(z+k) Phi(p-j)[z-p+l], expanded at
// the point p-l; `base` defaults to gamma(Phi).
struct ThetaValue {
    LaurentExpansion value;
};

inline LaurentExpansion theta_expansion(const SpecialVector &phi, const CompleteMellinSymbol &s,
                                        int l, const GaussianRational &base, int taylor_order) {
    GaussianRational at = base - GaussianRational(l);
    int window = taylor_order + 2 * std::max(1, phi.max_chain_length());
    LaurentExpansion acc = LaurentExpansion::zero(at, taylor_order, s.size, 1);
    for (int k = 0; k <= l && k < s.support(); ++k) {
        int j = l - k;
        ChainVector c = phi.chain_at(base - GaussianRational(j));
        if (c.is_zero()) continue;
        RationalMatrixFunction sk = s.term(k).shift(GaussianRational(k));
        if (!sk.is_holomorphic_at(at))
            throw PreconditionViolation("theta: symbol term is not holomorphic at the point");
        acc = acc + (sk.laurent_at(at, window) * c.germ(at, window)).truncated(taylor_order);
    }
    return acc;
}

inline ThetaValue theta(const SpecialVector &phi, const CompleteMellinSymbol &s, int l,
                        int taylor_order = 0) {
    return {theta_expansion(phi, s, l, phi.gamma(), taylor_order)};
}

namespace detail {

// number of integers l >= 0 with l < bound
inline int levels_below(const Rational &bound) {
    if (bound <= 0) return 0;
    Integer fl = num(bound) / den(bound);
    if (fl * den(bound) == num(bound)) return int(fl); // integral bound, strict
    return int(fl) + 1;
}

struct LatticeClass {
    GaussianRational anchor;
    std::vector<int> multiplicity; // nu_l at anchor - l, within the window
};

// Groups in-window indicial roots into mod-1 lattices.
inline std::vector<LatticeClass>
lattice_classes(const std::vector<std::pair<GaussianRational, int>> &roots, const Rational &line,
                int depth) {
    std::vector<LatticeClass> classes;
    std::vector<std::pair<GaussianRational, int>> in_window;
    for (const auto &r : roots)
        if (r.first.re < line && r.first.re > line - depth) in_window.push_back(r);
    std::sort(in_window.begin(), in_window.end(), [](const auto &a, const auto &b) {
        if (a.first.re != b.first.re) return a.first.re > b.first.re;
        return a.first.im < b.first.im;
    });
    for (const auto &[root, mult] : in_window) {
        bool placed = false;
        for (auto &cls : classes) {
            GaussianRational d = cls.anchor - root;
            if (d.im == 0 && den(d.re) == 1 && num(d.re) >= 0) {
                int l = int(num(d.re));
                if (l >= int(cls.multiplicity.size())) cls.multiplicity.resize(size_t(l) + 1, 0);
                cls.multiplicity[size_t(l)] = mult;
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back({root, {mult}});
    }
    // extend every class down to the window boundary
    for (auto &cls : classes) {
        int levels = levels_below(cls.anchor.re - (line - depth));
        cls.multiplicity.resize(size_t(levels), 0);
    }
    return classes;
}

// principal-part coefficients as a packed column (pole order cap..1)
inline Matrix pack_principal(const LaurentExpansion &l, int cap, int n) {
    Matrix b(cap * n, 1);
    for (int nu = 1; nu <= cap && nu <= l.pole_order(); ++nu) {
        Matrix c = l.coeff(-nu);
        for (int i = 0; i < n; ++i) b((cap - nu) * n + i, 0) = c(i, 0);
    }
    return b;
}

} // namespace detail

// Per-class state of the layer-by-layer construction.
namespace detail {

struct StripClassBuilder {
    const CompleteMellinSymbol &symbol;
    GaussianRational anchor;
    std::vector<int> multiplicity;
    int dim;
    std::vector<SpecialVector> vectors;

    StripClassBuilder(const CompleteMellinSymbol &s, LatticeClass cls)
        : symbol(s), anchor(std::move(cls.anchor)), multiplicity(std::move(cls.multiplicity)),
          dim(s.size) {}

    int cumulative(int level) const {
        int m = 0;
        for (int l = 0; l <= level; ++l) m += multiplicity[size_t(l)];
        return m;
    }

    // right-hand side of the level condition for an existing vector: the
    // principal part at anchor-l of sum_{k>=1} s^{mu-k}(z+k) Phi(p0-l+k)[..]
    LaurentExpansion level_inhomogeneity(const SpecialVector &phi, int level) const {
        GaussianRational at = anchor - GaussianRational(level);
        int window = 2 * std::max(1, phi.max_chain_length()) + 2;
        LaurentExpansion acc = LaurentExpansion::zero(at, 0, dim, 1);
        for (int k = 1; k <= level && k < symbol.support(); ++k) {
            ChainVector c = phi.chains[size_t(level - k)];
            if (c.is_zero()) continue;
            RationalMatrixFunction sk = symbol.term(k).shift(GaussianRational(k));
            acc = acc + (sk.laurent_at(at, window) * c.germ(at, window)).truncated(0);
        }
        return acc.principal_part();
    }

    // orbit length of T^k phi restricted to the levels below `upto`
    static int visible_orbit(const SpecialVector &phi, int k, int upto) {
        int m = 0;
        for (int l = 0; l < upto && l < phi.levels(); ++l)
            m = std::max(m, phi.chains[size_t(l)].m());
        return std::max(0, m - k);
    }

    void build() {
        int levels = int(multiplicity.size());
        for (int level = 0; level < levels; ++level) {
            int cap = cumulative(level);
            if (cap == 0) continue;
            GaussianRational at = anchor - GaussianRational(level);
            Matrix toeplitz =
                detail::block_toeplitz(symbol.term(0).taylor_at(at, cap), cap, dim);
            std::vector<Matrix> kernel = toeplitz.kernel_basis();

            // extend existing vectors by the shortest canonical solution
            for (auto &phi : vectors) {
                LaurentExpansion g = level_inhomogeneity(phi, level);
                Matrix rhs = -detail::pack_principal(g, cap, dim);
                ChainVector ext = minimal_extension(toeplitz, rhs, cap);
                phi.chains.push_back(ext);
            }

            // when several vectors are forced to grow in parallel directions,
            // only a genuine resonance combination may keep the growth; the
            // others absorb orbit elements of their partners and re-extend
            std::vector<std::pair<int, int>> provenance; // (vector, shift)
            std::vector<Matrix> tails;
            for (int repair = 0;; ++repair) {
                if (repair > cap * int(vectors.size()) + 1)
                    throw std::logic_error("strip basis: resonance repair does not terminate");
                provenance.clear();
                tails.clear();
                for (size_t i = 0; i < vectors.size(); ++i) {
                    const SpecialVector &phi = vectors[i];
                    int prev = visible_orbit(phi, 0, level);
                    const ChainVector &x = phi.chains[size_t(level)];
                    for (int r = prev; r < x.m(); ++r) {
                        provenance.push_back({int(i), r});
                        tails.push_back(detail::pack_chain(x.shifted(r), cap, dim));
                    }
                }
                if (tails.empty()) break;
                Matrix tmat(cap * dim, int(tails.size()));
                for (size_t c = 0; c < tails.size(); ++c)
                    for (int r = 0; r < cap * dim; ++r) tmat(r, int(c)) = tails[c](r, 0);
                auto deps = tmat.kernel_basis();
                if (deps.empty()) break;
                const Matrix &rel = deps.front();
                // pivot: minimal shift, then the latest vector in order
                int pivot = -1;
                for (int c = 0; c < int(tails.size()); ++c) {
                    if (rel(c, 0).is_zero()) continue;
                    if (pivot < 0 || provenance[size_t(c)].second < provenance[size_t(pivot)].second ||
                        (provenance[size_t(c)].second == provenance[size_t(pivot)].second &&
                         provenance[size_t(c)].first > provenance[size_t(pivot)].first))
                        pivot = c;
                }
                auto [pi, rpi] = provenance[size_t(pivot)];
                SpecialVector updated = vectors[size_t(pi)];
                GaussianRational inv = rel(pivot, 0).inverse();
                for (int c = 0; c < int(tails.size()); ++c) {
                    if (c == pivot || rel(c, 0).is_zero()) continue;
                    auto [q, rq] = provenance[size_t(c)];
                    int offset = rq - rpi;
                    if (offset < 0 ||
                        visible_orbit(vectors[size_t(q)], offset, level) >
                            visible_orbit(vectors[size_t(pi)], 0, level))
                        throw DegenerateBasis(
                            "strip basis: no compatible basis change resolves the resonance");
                    GaussianRational coef = rel(c, 0) * inv;
                    for (int l = 0; l <= level; ++l)
                        updated.chains[size_t(l)] =
                            updated.chains[size_t(l)] +
                            vectors[size_t(q)].chains[size_t(l)].shifted(offset) * coef;
                }
                // re-extend the repaired vector at this level
                updated.chains.pop_back();
                LaurentExpansion g = level_inhomogeneity(updated, level);
                Matrix rhs = -detail::pack_principal(g, cap, dim);
                ChainVector ext = minimal_extension(toeplitz, rhs, cap);
                if (ext.m() >= vectors[size_t(pi)].chains[size_t(level)].m())
                    throw std::logic_error("strip basis: resonance repair made no progress");
                updated.chains.push_back(ext);
                vectors[size_t(pi)] = std::move(updated);
            }

            auto new_tops = characteristic_basis_mod(
                kernel, tails, [&](const Matrix &v) { return detail::shift_packed(v, dim); },
                cap * dim);
            std::vector<ChainVector> tops;
            for (const auto &t : new_tops) tops.push_back(detail::unpack_chain(t.top, cap, dim));
            detail::sort_chains(tops);
            for (const auto &c : tops) {
                SpecialVector v;
                v.anchor = anchor;
                v.dim = dim;
                v.chains.assign(size_t(level), ChainVector(dim, {}));
                v.chains.push_back(c);
                vectors.push_back(std::move(v));
            }

            int total = 0;
            for (const auto &phi : vectors) total += phi.max_chain_length();
            if (total != cap)
                throw std::logic_error("strip basis: dimension law violated at a level");
        }
    }

    // shortest solution of toeplitz * x = rhs; within that length the choice
    // is pinned by zeroing the pivot coordinates of the equal-length kernel
    ChainVector minimal_extension(const Matrix &toeplitz, const Matrix &rhs, int cap) const {
        for (int len = 0; len <= cap; ++len) {
            int pad = (cap - len) * dim;
            Matrix sys(cap * dim + pad, cap * dim);
            Matrix b(sys.rows(), 1);
            for (int i = 0; i < cap * dim; ++i) {
                for (int j = 0; j < cap * dim; ++j) sys(i, j) = toeplitz(i, j);
                b(i, 0) = rhs(i, 0);
            }
            for (int r = 0; r < pad; ++r) sys(cap * dim + r, r) = GaussianRational(1);
            if (!sys.solve(b)) continue;

            // kernel chains of length <= len, canonical pivots
            std::vector<Matrix> short_kernel;
            for (const auto &k : sys.kernel_basis()) short_kernel.push_back(k);
            auto rows = canonical_span(short_kernel, cap * dim);
            std::vector<int> pivots;
            if (!rows.empty()) {
                Matrix kr(int(rows.size()), cap * dim);
                for (size_t i = 0; i < rows.size(); ++i)
                    for (int j = 0; j < cap * dim; ++j) kr(int(i), j) = rows[i](j, 0);
                pivots = kr.rref();
            }
            Matrix full(sys.rows() + int(pivots.size()), cap * dim);
            Matrix fb(full.rows(), 1);
            for (int i = 0; i < sys.rows(); ++i) {
                for (int j = 0; j < cap * dim; ++j) full(i, j) = sys(i, j);
                fb(i, 0) = b(i, 0);
            }
            for (size_t i = 0; i < pivots.size(); ++i)
                full(sys.rows() + int(i), pivots[i]) = GaussianRational(1);
            auto x = full.solve(fb, /*unique=*/true);
            if (!x) throw std::logic_error("strip basis: canonical extension became unsolvable");
            return detail::unpack_chain(*x, cap, dim);
        }
        throw std::logic_error("strip basis: level extension system is unsolvable");
    }
};

} // namespace detail

inline void require_holomorphic_elliptic(const CompleteMellinSymbol &s) {
    if (!s.is_holomorphic())
        throw PreconditionViolation("strip computations require a holomorphic complete symbol");
    if (s.term(0).num().det().is_zero())
        throw SingularSymbol("principal symbol is singular");
}

// Roots of det s^mu with boundary-line screening for the given depths.
inline std::vector<std::pair<GaussianRational, int>>
screened_roots(const CompleteMellinSymbol &s, const WeightContext &w, int depth,
               const std::optional<std::vector<GaussianRational>> &supplied = std::nullopt,
               bool all_lines = false) {
    auto roots = indicial_roots(s.term(0).num(), supplied);
    Rational line = w.weight_line();
    for (const auto &[root, mult] : roots) {
        if (all_lines) {
            for (int j = 0; j <= std::max(depth, w.mu); ++j)
                if (root.re == line - j)
                    throw PreconditionViolation(
                        "indicial root lies on a shifted weight line Re z = dimX/2 - delta - j");
        } else if (root.re == line || root.re == line - depth) {
            throw PreconditionViolation("indicial root lies on a strip boundary line");
        }
    }
    return roots;
}

// Characteristic basis of L_S^delta modulo L_S^{delta+depth}, satisfying the
// compatibility conditions across all intermediate conormal orders.
inline StripBasis strip_basis(const CompleteMellinSymbol &s, const WeightContext &w, int depth,
                              const std::optional<std::vector<GaussianRational>> &supplied =
                                  std::nullopt) {
    require_holomorphic_elliptic(s);
    if (depth < 0) throw PreconditionViolation("strip depth must be nonnegative");
    StripBasis basis;
    basis.delta = w.delta;
    basis.dim_x = w.dim_x;
    basis.depth = depth;
    basis.dim = s.size;
    if (depth == 0) return basis;

    auto roots = screened_roots(s, w, depth, supplied);
    Rational line = w.weight_line();
    for (auto &cls : detail::lattice_classes(roots, line, depth)) {
        detail::StripClassBuilder builder(s, cls);
        builder.build();
        for (auto &v : builder.vectors) basis.vectors.push_back(std::move(v));
    }

    // deterministic global order: gamma by decreasing Re, increasing Im,
    // then longer vectors first, then lexicographic chain data
    std::stable_sort(basis.vectors.begin(), basis.vectors.end(),
                     [](const SpecialVector &a, const SpecialVector &b) {
                         GaussianRational ga = a.gamma(), gb = b.gamma();
                         if (ga.re != gb.re) return ga.re > gb.re;
                         if (ga.im != gb.im) return ga.im < gb.im;
                         if (a.max_chain_length() != b.max_chain_length())
                             return a.max_chain_length() > b.max_chain_length();
                         return lex_less(a.chain_at(ga), b.chain_at(gb));
                     });

    for (const auto &v : basis.vectors) {
        std::vector<int> row;
        for (int j = 1; j <= depth; ++j) {
            int m = 0;
            for (int l = 0; l < v.levels(); ++l) {
                if (v.anchor.re - l > line - j) m = std::max(m, v.chains[size_t(l)].m());
            }
            row.push_back(m);
        }
        basis.scheme.push_back(std::move(row));
    }
    return basis;
}

// Condition (b) of the compatibility proposition: at every depth step the
// deepest nonvanishing shifts of the basis vectors stay linearly independent
// modulo deeper conormal orders.
inline bool properness_check(const StripBasis &basis) {
    Rational line = basis.weight_line();
    if (basis.vectors.empty()) return true;
    // common packing: class representative anchor (highest Re), exponent
    // index from it, pole order
    std::vector<GaussianRational> anchors;
    auto class_of = [&](const GaussianRational &a) {
        for (size_t c = 0; c < anchors.size(); ++c) {
            GaussianRational d = anchors[c] - a;
            if (d.im == 0 && den(d.re) == 1) return int(c);
        }
        return -1;
    };
    for (const auto &v : basis.vectors) {
        int c = class_of(v.anchor);
        if (c < 0)
            anchors.push_back(v.anchor);
        else if (v.anchor.re > anchors[size_t(c)].re)
            anchors[size_t(c)] = v.anchor;
    }
    int cap = 1, max_levels = 1;
    for (const auto &v : basis.vectors) {
        cap = std::max(cap, v.max_chain_length());
        max_levels = std::max(max_levels, v.levels() + basis.depth);
    }
    for (int j = 1; j <= basis.depth; ++j) {
        std::map<int, std::vector<Matrix>> leads;
        for (size_t i = 0; i < basis.vectors.size(); ++i) {
            const SpecialVector &v = basis.vectors[i];
            int m = basis.scheme[i][size_t(j) - 1];
            if (m == 0) continue;
            int cls = class_of(v.anchor);
            // index exponents from the class representative anchor
            GaussianRational rep = anchors[size_t(cls)];
            Integer base_off = num((rep - v.anchor).re);
            SpecialVector t = v.shifted(m - 1);
            Matrix packed(max_levels * cap * basis.dim, 1);
            bool any = false;
            for (int l = 0; l < t.levels(); ++l) {
                if (!(v.anchor.re - l > line - j)) continue;
                const ChainVector &c = t.chains[size_t(l)];
                if (c.is_zero()) continue;
                int idx = int(base_off) + l;
                if (idx < 0 || idx >= max_levels) return false;
                for (int r = 0; r < c.m(); ++r)
                    for (int d0 = 0; d0 < basis.dim; ++d0) {
                        packed((idx * cap + (cap - c.m() + r)) * basis.dim + d0, 0) =
                            c.entry(r)(d0, 0);
                        any = true;
                    }
            }
            if (!any) return false; // T^{m-1} v invisible although m_i^j = m
            leads[cls].push_back(packed);
        }
        for (auto &[cls, vecs] : leads) {
            Matrix m(int(vecs.size()), vecs[0].rows());
            for (size_t i = 0; i < vecs.size(); ++i)
                for (int r = 0; r < vecs[i].rows(); ++r) m(int(i), r) = vecs[i](r, 0);
            if (m.rank() != int(vecs.size())) return false;
        }
    }
    return true;
}

} // namespace conegreen
