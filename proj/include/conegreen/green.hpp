#pragma once

#include <sstream>
#include <vector>

#include "conegreen/conjugate.hpp"

namespace conegreen {

// Jordan basis of D(A_max)/D(A_min), realized as the strip characteristic
// basis over dimX/2 - delta - mu < Re p < dimX/2 - delta.
struct DomainQuotient {
    Rational delta;
    int mu = 0;
    StripBasis basis;

    int dimension() const { return basis.dimension(); }
    // orbit listing (vector index, shift power), vectors in canonical order
    std::vector<std::pair<int, int>> jordan_listing() const {
        std::vector<std::pair<int, int>> out;
        for (size_t i = 0; i < basis.vectors.size(); ++i)
            for (int r = 0; r < basis.vectors[i].max_chain_length(); ++r)
                out.push_back({int(i), r});
        return out;
    }
};

struct GreenTerm {
    std::string u_name, v_name;
    GaussianRational coefficient;
};

struct GreenReport {
    DomainQuotient primal;
    DomainQuotient adjoint;
    std::vector<int> tau_star; // primal vector index -> adjoint vector index
    Matrix pairing;            // [T^r Phi_i, T^s Psi_j]_A over the orbit listings
    bool verified = false;
    std::string formula;
    std::vector<GreenTerm> terms;
    std::vector<std::string> primal_names, adjoint_names; // slot dictionaries
};

inline void require_green_preconditions(const CompleteMellinSymbol &s, const WeightContext &w) {
    require_holomorphic_elliptic(s);
    // ellipticity with respect to delta plus the shifted-line screening
    (void)screened_roots(s, w, w.mu, std::nullopt, /*all_lines=*/true);
}

inline DomainQuotient domain_quotient(const CompleteMellinSymbol &s, const WeightContext &w) {
    require_green_preconditions(s, w);
    DomainQuotient q;
    q.delta = w.delta;
    q.mu = w.mu;
    q.basis = strip_basis(s, w, w.mu);
    return q;
}

inline DomainQuotient domain_quotient(const FuchsOperator &op, const WeightContext &w) {
    return domain_quotient(complete_symbol(op), w);
}

// [Phi, Psi]_A by the residue formula
//   -sum_{k<mu} sum_p Res_{z=p} <s^{mu-k}(z) Phi(p)[z-p], I Psi(q+k)[z-p]>,
// with p running over the open strip and q = dimX - 2 delta - conj(p) - mu.
inline GaussianRational boundary_pairing(const CompleteMellinSymbol &s, const WeightContext &w,
                                         const SpecialVector &phi, const SpecialVector &psi) {
    GaussianRational acc(0);
    Rational line = w.weight_line();
    for (int l = 0; l < phi.levels(); ++l) {
        GaussianRational p = phi.anchor - GaussianRational(l);
        if (!(p.re < line && p.re > line - w.mu)) continue;
        const ChainVector &cphi = phi.chains[size_t(l)];
        if (cphi.is_zero()) continue;
        GaussianRational q = w.reflect(p);
        int window = 2 * (cphi.m() + psi.max_chain_length()) + 2;
        for (int k = 0; k < w.mu && k < s.support(); ++k) {
            ChainVector cpsi = psi.chain_at(q + GaussianRational(k)).conj_sign_flipped();
            if (cpsi.is_zero()) continue;
            LaurentExpansion f = s.term(k).laurent_at(p, window) * cphi.germ(p, window);
            acc += (f.transpose() * cpsi.germ(p, window)).residue()(0, 0);
        }
    }
    return -acc;
}

namespace detail {

inline SpecialVector scaled(const SpecialVector &v, const GaussianRational &c) {
    SpecialVector out = v;
    for (auto &ch : out.chains) ch = ch * c;
    return out;
}

// pointwise sum on the merged lattice
inline SpecialVector add(const SpecialVector &a, const SpecialVector &b) {
    if (a.dim == 0 || a.chains.empty()) return b;
    if (b.dim == 0 || b.chains.empty()) return a;
    GaussianRational anchor = a.anchor.re > b.anchor.re ? a.anchor : b.anchor;
    GaussianRational d = a.anchor - b.anchor;
    if (d.im != 0 || den(d.re) != 1)
        throw PreconditionViolation("special vectors live on different lattices");
    SpecialVector out;
    out.anchor = anchor;
    out.dim = a.dim;
    int la = int(num((anchor - a.anchor).re));
    int lb = int(num((anchor - b.anchor).re));
    int levels = std::max(a.levels() + la, b.levels() + lb);
    for (int l = 0; l < levels; ++l) {
        ChainVector c(a.dim, {});
        if (l - la >= 0 && l - la < a.levels()) c = c + a.chains[size_t(l - la)];
        if (l - lb >= 0 && l - lb < b.levels()) c = c + b.chains[size_t(l - lb)];
        out.chains.push_back(c);
    }
    return out;
}

} // namespace detail

// Gram-matrix route to the conjugate Jordan basis: recombines an arbitrary
// characteristic basis of the adjoint quotient so that the pairing matrix
// becomes the signed antidiagonal pattern.  Kept independent from the
// principal-part route as a cross check.
inline std::vector<SpecialVector> conjugate_by_gram(const CompleteMellinSymbol &s,
                                                    const WeightContext &w,
                                                    const DomainQuotient &primal) {
    CompleteMellinSymbol r = adjoint_symbol(s, w);
    StripBasis adj = strip_basis(r, w, w.mu);
    auto porbit = primal.jordan_listing();
    std::vector<std::pair<int, int>> aorbit;
    for (size_t k = 0; k < adj.vectors.size(); ++k)
        for (int t = 0; t < adj.vectors[k].max_chain_length(); ++t)
            aorbit.push_back({int(k), t});
    int dim = int(porbit.size());
    if (int(aorbit.size()) != dim)
        throw DegenerateBasis("adjoint quotient dimension differs from the primal one");

    Matrix gram(dim, dim);
    for (int row = 0; row < dim; ++row) {
        SpecialVector u = primal.basis.vectors[size_t(porbit[size_t(row)].first)].shifted(
            porbit[size_t(row)].second);
        for (int col = 0; col < dim; ++col) {
            SpecialVector v =
                adj.vectors[size_t(aorbit[size_t(col)].first)].shifted(aorbit[size_t(col)].second);
            gram(row, col) = boundary_pairing(s, w, u, v);
        }
    }

    std::vector<SpecialVector> out(primal.basis.vectors.size());
    for (size_t j = 0; j < primal.basis.vectors.size(); ++j) {
        int mj = primal.basis.vectors[j].max_chain_length();
        // equations for all shifts sigma of the target vector
        Matrix a(dim * mj, dim), b(dim * mj, 1);
        for (int sigma = 0; sigma < mj; ++sigma)
            for (int row = 0; row < dim; ++row) {
                for (int col = 0; col < dim; ++col) {
                    auto [k, t] = aorbit[size_t(col)];
                    int shifted = t + sigma;
                    GaussianRational g(0);
                    if (shifted < adj.vectors[size_t(k)].max_chain_length()) {
                        // locate the orbit column of T^{t+sigma} Psi'_k
                        for (int c2 = 0; c2 < dim; ++c2)
                            if (aorbit[size_t(c2)] == std::make_pair(k, shifted)) g = gram(row, c2);
                    }
                    a(sigma * dim + row, col) = g;
                }
                auto [i, rr] = porbit[size_t(row)];
                bool hit = size_t(i) == j &&
                           rr + sigma == primal.basis.vectors[j].max_chain_length() - 1;
                b(sigma * dim + row, 0) =
                    hit ? GaussianRational((sigma % 2 == 0) ? -1 : 1) : GaussianRational(0);
            }
        auto y = a.solve(b, /*unique=*/true);
        if (!y) throw DegenerateBasis("gram route: pattern system is inconsistent");
        SpecialVector psi;
        for (int col = 0; col < dim; ++col) {
            GaussianRational c = (*y)(col, 0).conj();
            if (c.is_zero()) continue;
            auto [k, t] = aorbit[size_t(col)];
            psi = detail::add(psi, detail::scaled(adj.vectors[size_t(k)].shifted(t), c));
        }
        out[j] = psi;
    }
    return out;
}

// Conjugate Jordan basis via the principal-part route, cross-checked against
// the Gram route.
inline std::pair<DomainQuotient, std::vector<int>>
conjugate_jordan_basis(const CompleteMellinSymbol &s, const WeightContext &w,
                       const DomainQuotient &primal) {
    ConjugateBasis conj = conjugate_complete_basis(s, w, w.mu, primal.basis);
    auto gram = conjugate_by_gram(s, w, primal);
    for (size_t i = 0; i < primal.basis.vectors.size(); ++i) {
        const SpecialVector &route1 = conj.basis.vectors[size_t(conj.tau_star[i])];
        if (!(route1 == gram[i]))
            throw DegenerateBasis(
                "conjugate Jordan basis: principal-part and Gram routes disagree");
    }
    DomainQuotient adj;
    adj.delta = w.delta;
    adj.mu = w.mu;
    adj.basis = conj.basis;
    return {adj, conj.tau_star};
}

namespace detail {

inline std::string coefficient_letter(int index) {
    static const char *names[] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta",
                                  "eta",   "rho",  "sigma", "kappa", "lambda",  "omega"};
    if (index < int(sizeof(names) / sizeof(names[0]))) return names[index];
    return "c" + std::to_string(index);
}

struct SlotTable {
    // one slot per (exponent, pole order, component)
    struct Slot {
        GaussianRational exponent;
        int pole_order;
        int component;
        int block_length;
        std::string name;
    };
    std::vector<Slot> slots;

    static SlotTable build(const StripBasis &basis, int first_letter) {
        SlotTable table;
        std::vector<GaussianRational> exps;
        for (const auto &v : basis.vectors)
            for (int l = 0; l < v.levels(); ++l)
                if (!v.chains[size_t(l)].is_zero()) {
                    GaussianRational p = v.anchor - GaussianRational(l);
                    bool seen = false;
                    for (const auto &e : exps) seen = seen || e == p;
                    if (!seen) exps.push_back(p);
                }
        std::sort(exps.begin(), exps.end(), [](const auto &a, const auto &b) {
            if (a.re != b.re) return a.re > b.re;
            return lex_less(a, b);
        });
        int letter = first_letter;
        for (const auto &p : exps) {
            int m = 0;
            for (const auto &v : basis.vectors) m = std::max(m, v.chain_at(p).m());
            std::string base = coefficient_letter(letter++);
            for (int nu = m; nu >= 1; --nu)
                for (int c = 0; c < basis.dim; ++c) {
                    std::string name = base;
                    if (m > 1) name += std::to_string(m - nu);
                    if (basis.dim > 1) name += "[" + std::to_string(c) + "]";
                    table.slots.push_back({p, nu, c, m, name});
                }
        }
        return table;
    }

    // name coordinates of a special vector: name = (-1)^(nu-1)/(nu-1)! * coeff
    Matrix coordinates(const SpecialVector &v) const {
        Matrix out(int(slots.size()), 1);
        for (size_t s = 0; s < slots.size(); ++s) {
            const Slot &slot = slots[s];
            ChainVector c = v.chain_at(slot.exponent);
            if (slot.pole_order > c.m()) continue;
            GaussianRational coeff = c.entry(c.m() - slot.pole_order)(slot.component, 0);
            GaussianRational fact(1);
            for (int q = 2; q < slot.pole_order; ++q) fact *= GaussianRational(q);
            if ((slot.pole_order - 1) % 2 != 0) fact = -fact;
            out(int(s), 0) = coeff * fact.inverse();
        }
        return out;
    }
};

inline std::string format_coefficient_term(const GaussianRational &c, const std::string &u,
                                           const std::string &v, bool first) {
    GaussianRational a = c;
    std::string sign = first ? "" : " + ";
    if (a.im == 0 && a.re < 0) {
        sign = first ? "-" : " - ";
        a = -a;
    }
    std::string mag;
    if (!(a == GaussianRational(1))) {
        std::string cs = to_string(a);
        if (cs.find('+') != std::string::npos || cs.find('-') != std::string::npos)
            cs = "(" + cs + ")";
        mag = cs + "*";
    }
    return sign + mag + u + "*conj(" + v + ")";
}

} // namespace detail

// The pairing as a bilinear expression in named singular coefficients,
// following the (-1)^k / k! t^{-p} log^k t dictionary.
inline void render_green_formula(GreenReport &report) {
    report.terms.clear();
    report.primal_names.clear();
    report.adjoint_names.clear();
    int dim = report.primal.dimension();
    if (dim == 0) {
        report.formula = "[u,v]_A = 0";
        return;
    }
    detail::SlotTable uslots = detail::SlotTable::build(report.primal.basis, 0);
    int adj_letter = 0;
    {
        // continue the letter sequence after the primal blocks
        std::vector<GaussianRational> exps;
        for (const auto &s : uslots.slots) {
            bool seen = false;
            for (const auto &e : exps) seen = seen || e == s.exponent;
            if (!seen) exps.push_back(s.exponent);
        }
        adj_letter = int(exps.size());
    }
    detail::SlotTable vslots = detail::SlotTable::build(report.adjoint.basis, adj_letter);
    for (const auto &s : uslots.slots) report.primal_names.push_back(s.name);
    for (const auto &s : vslots.slots) report.adjoint_names.push_back(s.name);
    if (int(uslots.slots.size()) != dim || int(vslots.slots.size()) != dim) {
        report.formula = "[pairing matrix given on the Jordan bases; the coefficient "
                         "parameterization is not square for this operator]";
        return;
    }

    auto porbit = report.primal.jordan_listing();
    auto aorbit = report.adjoint.jordan_listing();
    Matrix u(dim, dim), v(dim, dim);
    for (int col = 0; col < dim; ++col) {
        Matrix cu = uslots.coordinates(report.primal.basis.vectors[size_t(porbit[size_t(col)].first)]
                                           .shifted(porbit[size_t(col)].second));
        Matrix cv = vslots.coordinates(report.adjoint.basis.vectors[size_t(aorbit[size_t(col)].first)]
                                           .shifted(aorbit[size_t(col)].second));
        for (int rr = 0; rr < dim; ++rr) {
            u(rr, col) = cu(rr, 0);
            v(rr, col) = cv(rr, 0);
        }
    }
    auto uinv = u.inverse(), vinv = v.inverse();
    if (!uinv || !vinv) {
        report.formula = "[pairing matrix given on the Jordan bases; coefficient "
                         "parameterization is singular]";
        return;
    }
    Matrix f = uinv->transpose() * report.pairing * vinv->conj();
    std::string out;
    bool first = true;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            if (f(a, b).is_zero()) continue;
            report.terms.push_back({uslots.slots[size_t(a)].name, vslots.slots[size_t(b)].name,
                                    f(a, b)});
            out += detail::format_coefficient_term(f(a, b), uslots.slots[size_t(a)].name,
                                                   vslots.slots[size_t(b)].name, first);
            first = false;
        }
    report.formula = "[u,v]_A = " + (out.empty() ? std::string("0") : out);
}

// Runs the full pipeline and checks the signed antidiagonal pattern,
// non-degeneracy, skew-adjointness and equality of the Jordan structures.
inline GreenReport verify_theorem_main(const CompleteMellinSymbol &s, const WeightContext &w) {
    require_green_preconditions(s, w);
    GreenReport report;
    report.primal = domain_quotient(s, w);
    auto [adjoint, tau] = conjugate_jordan_basis(s, w, report.primal);
    report.adjoint = adjoint;
    report.tau_star = tau;

    auto porbit = report.primal.jordan_listing();
    auto aorbit = report.adjoint.jordan_listing();
    int dim = int(porbit.size());
    report.pairing = Matrix(dim, int(aorbit.size()));
    for (int row = 0; row < dim; ++row)
        for (int col = 0; col < int(aorbit.size()); ++col) {
            SpecialVector u = report.primal.basis.vectors[size_t(porbit[size_t(row)].first)].shifted(
                porbit[size_t(row)].second);
            SpecialVector v = report.adjoint.basis.vectors[size_t(aorbit[size_t(col)].first)]
                                  .shifted(aorbit[size_t(col)].second);
            report.pairing(row, col) = boundary_pairing(s, w, u, v);
        }

    bool ok = dim == int(aorbit.size());
    // signed antidiagonal pattern
    for (int row = 0; ok && row < dim; ++row)
        for (int col = 0; ok && col < dim; ++col) {
            auto [i, r] = porbit[size_t(row)];
            auto [jj, ss] = aorbit[size_t(col)];
            int mi = report.primal.basis.vectors[size_t(i)].max_chain_length();
            GaussianRational expect(0);
            if (report.tau_star[size_t(i)] == jj && r + ss == mi - 1)
                expect = GaussianRational(ss % 2 == 0 ? -1 : 1);
            ok = report.pairing(row, col) == expect;
        }
    // non-degeneracy
    ok = ok && !report.pairing.det().is_zero();
    // skew-adjointness [T Phi, Psi] + [Phi, T Psi] = 0 on the orbit
    auto entry = [&](int i, int r, int jj, int ss) {
        for (size_t row = 0; row < porbit.size(); ++row)
            for (size_t col = 0; col < aorbit.size(); ++col)
                if (porbit[row] == std::make_pair(i, r) && aorbit[col] == std::make_pair(jj, ss))
                    return report.pairing(int(row), int(col));
        return GaussianRational(0);
    };
    for (size_t i = 0; ok && i < report.primal.basis.vectors.size(); ++i)
        for (size_t jj = 0; ok && jj < report.adjoint.basis.vectors.size(); ++jj) {
            int mi = report.primal.basis.vectors[i].max_chain_length();
            int mj = report.adjoint.basis.vectors[jj].max_chain_length();
            for (int r = 0; ok && r < mi; ++r)
                for (int ss = 0; ok && ss < mj; ++ss)
                    ok = (entry(int(i), r + 1, int(jj), ss) + entry(int(i), r, int(jj), ss + 1))
                             .is_zero();
        }
    // identical Jordan structures
    {
        std::vector<int> a, b;
        for (const auto &v : report.primal.basis.vectors) a.push_back(v.max_chain_length());
        for (const auto &v : report.adjoint.basis.vectors) b.push_back(v.max_chain_length());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        ok = ok && a == b;
    }
    report.verified = ok;
    render_green_formula(report);
    return report;
}

inline GreenReport verify_theorem_main(const FuchsOperator &op, const WeightContext &w) {
    return verify_theorem_main(complete_symbol(op), w);
}

// Expansion dictionary text for one chain block, e.g. "(1,0)" at p = -1
// renders as "-t*log(t)".
inline std::string render_expansion(const ChainVector &chain, const GaussianRational &p) {
    if (chain.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (int r = 0; r < chain.m(); ++r) {
        int nu = chain.m() - r; // pole order; log power k = nu - 1
        GaussianRational coeff = chain.entry(r)(0, 0);
        if (coeff.is_zero()) continue;
        GaussianRational fact(1);
        for (int q = 2; q < nu; ++q) fact *= GaussianRational(q);
        GaussianRational c = coeff * fact.inverse();
        if ((nu - 1) % 2 != 0) c = -c;
        std::string sign = first ? "" : " + ";
        if (c.im == 0 && c.re < 0) {
            sign = first ? "-" : " - ";
            c = -c;
        }
        std::string mono;
        GaussianRational mp = -p;
        if (!mp.is_zero()) {
            mono = "t";
            if (!(mp == GaussianRational(1))) mono += "^(" + to_string(mp) + ")";
        }
        for (int k = 0; k < nu - 1; ++k) mono += (mono.empty() ? "log(t)" : "*log(t)");
        std::string cs;
        if (!(c == GaussianRational(1)) || mono.empty()) {
            cs = to_string(c);
            if (cs.find('+') != std::string::npos ||
                (cs.find('-') != std::string::npos && !mono.empty()))
                cs = "(" + cs + ")";
            if (!mono.empty()) cs += "*";
        }
        out += sign + cs + mono;
        first = false;
    }
    return out.empty() ? "0" : out;
}

} // namespace conegreen
