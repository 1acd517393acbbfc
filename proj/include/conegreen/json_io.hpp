#pragma once

#include <json.hpp>

#include "conegreen/green.hpp"
#include "conegreen/parser.hpp"

namespace conegreen {

using Json = nlohmann::ordered_json;

inline constexpr const char *schema_tag = "cone-green/1";

// All numbers are serialized as lowest-terms strings; no floating point
// representation appears anywhere in the schemas.

inline Json to_json(const Matrix &m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_json(const Json &j) {
    int rows = int(j.size());
    int cols = rows ? int(j.at(0).size()) : 0;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c)
            m(i, c) = gaussian_rational_from_string(j.at(size_t(i)).at(size_t(c)).get<std::string>());
    return m;
}

inline Json to_json(const Polynomial &p) {
    Json coeffs = Json::array();
    for (int k = 0; k <= p.degree(); ++k) coeffs.push_back(to_string(p.coeff(k)));
    return coeffs;
}

inline Polynomial polynomial_from_json(const Json &j) {
    std::vector<GaussianRational> coeffs;
    for (const auto &c : j) coeffs.push_back(gaussian_rational_from_string(c.get<std::string>()));
    return Polynomial(std::move(coeffs));
}

inline Json to_json(const MatrixPolynomial &p) {
    Json coeffs = Json::array();
    for (int k = 0; k <= p.degree(); ++k) coeffs.push_back(to_json(p.coeff(k)));
    return coeffs;
}

inline MatrixPolynomial matrix_polynomial_from_json(const Json &j, int size) {
    std::vector<Matrix> coeffs;
    for (const auto &c : j) coeffs.push_back(matrix_from_json(c));
    return MatrixPolynomial(size, std::move(coeffs));
}

inline Json to_json(const RationalMatrixFunction &f) {
    return Json{{"num", to_json(f.num())}, {"den", to_json(f.den())}};
}

inline Json to_json(const FuchsOperator &op) {
    Json coeffs = Json::array();
    for (const auto &a : op.coeffs) coeffs.push_back(to_json(a));
    return Json{{"schema", schema_tag},
                {"kind", "fuchs_operator"},
                {"size", op.size},
                {"mu", op.mu},
                {"coeffs", coeffs}};
}

inline FuchsOperator fuchs_operator_from_json(const Json &j) {
    if (j.value("kind", "") != "fuchs_operator")
        throw ParseError("expected a fuchs_operator record", 0, 0);
    FuchsOperator op;
    op.size = j.at("size").get<int>();
    op.mu = j.at("mu").get<int>();
    for (const auto &c : j.at("coeffs")) op.coeffs.push_back(matrix_polynomial_from_json(c, op.size));
    if (int(op.coeffs.size()) != op.mu + 1)
        throw ParseError("fuchs_operator must carry exactly mu+1 coefficients", 0, 0);
    return op;
}

inline Json to_json(const CompleteMellinSymbol &s) {
    Json terms = Json::array();
    for (int j = 0; j < s.support(); ++j) terms.push_back(to_json(s.term(j)));
    return Json{{"schema", schema_tag},
                {"kind", "complete_mellin_symbol"},
                {"mu", s.mu},
                {"size", s.size},
                {"terms", terms}};
}

inline Json to_json(const ChainVector &c) {
    Json entries = Json::array();
    for (int r = 0; r < c.m(); ++r) {
        Json v = Json::array();
        for (int d = 0; d < c.dim(); ++d) v.push_back(to_string(c.entry(r)(d, 0)));
        entries.push_back(v);
    }
    return entries;
}

inline Json to_json(const SpecialVector &v) {
    Json chains = Json::array();
    for (int l = 0; l < v.levels(); ++l) {
        if (v.chains[size_t(l)].is_zero()) continue;
        chains.push_back(Json{{"exponent", to_string(v.anchor - GaussianRational(l))},
                              {"chain", to_json(v.chains[size_t(l)])}});
    }
    return Json{{"gamma", to_string(v.gamma())}, {"anchor", to_string(v.anchor)},
                {"levels", v.levels()}, {"chains", chains}};
}

inline Json to_json(const StripBasis &b) {
    Json vectors = Json::array();
    for (const auto &v : b.vectors) vectors.push_back(to_json(v));
    return Json{{"schema", schema_tag},
                {"kind", "strip_basis"},
                {"delta", detail::rational_to_string(b.delta)},
                {"depth", b.depth},
                {"size", b.dim},
                {"dimension", b.dimension()},
                {"vectors", vectors},
                {"scheme", b.scheme}};
}

inline Json to_json(const LocalType &t) {
    Json chains = Json::array();
    for (const auto &c : t.basis) chains.push_back(to_json(c));
    return Json{{"point", to_string(t.point)},
                {"characteristic", t.characteristic},
                {"chains", chains}};
}

inline Json to_json(const GreenReport &r) {
    Json tau = Json::array();
    for (int t : r.tau_star) tau.push_back(t + 1);
    Json terms = Json::array();
    for (const auto &t : r.terms)
        terms.push_back(
            Json{{"u", t.u_name}, {"v", t.v_name}, {"coeff", to_string(t.coefficient)}});
    return Json{{"schema", schema_tag},
                {"kind", "green_report"},
                {"verified", r.verified},
                {"primal", to_json(r.primal.basis)},
                {"adjoint", to_json(r.adjoint.basis)},
                {"tau_star", tau},
                {"pairing", to_json(r.pairing)},
                {"formula", r.formula},
                {"terms", terms},
                {"primal_names", r.primal_names},
                {"adjoint_names", r.adjoint_names}};
}

// structured form -> pairing data (used for the lossless round-trip check)
inline std::vector<GreenTerm> green_terms_from_json(const Json &j) {
    std::vector<GreenTerm> out;
    for (const auto &t : j.at("terms"))
        out.push_back({t.at("u").get<std::string>(), t.at("v").get<std::string>(),
                       gaussian_rational_from_string(t.at("coeff").get<std::string>())});
    return out;
}

inline Json error_record(const std::string &error, const std::string &message, int line = 0,
                         int column = 0) {
    Json j{{"schema", schema_tag}, {"kind", "error"}, {"error", error}, {"message", message}};
    if (line > 0) {
        j["line"] = line;
        j["column"] = column;
    }
    return j;
}

} // namespace conegreen
