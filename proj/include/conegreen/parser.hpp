#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "conegreen/fuchs.hpp"

namespace conegreen {

// Differential-operator expressions over the tokens d (= d/dt), theta
// (= t d/dt), t with integer powers, Gaussian-rational literals, named
// parameters and N x N matrix literals, combined with +, -, *, ^.
struct OperatorExpression {
    enum class Kind { derivative, theta, variable_t, imaginary, number, parameter, matrix, add, mul, pow, neg };
    Kind kind;
    GaussianRational value;                                 // number
    std::string name;                                       // parameter
    std::vector<std::vector<OperatorExpression>> entries;   // matrix
    std::vector<OperatorExpression> children;               // add / mul / neg
    int exponent = 1;                                       // pow
    int line = 0, column = 0;
};

using Bindings = std::map<std::string, GaussianRational>;

namespace detail {

struct Token {
    enum class Type { ident, number, plus, minus, star, caret, lparen, rparen, lbracket, rbracket, comma, slash, end };
    Type type;
    std::string text;
    int line, column;
};

class Lexer {
  public:
    explicit Lexer(const std::string &src) : src_(src) { advance(); }
    const Token &peek() const { return current_; }
    Token next() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < src_.size() && isspace(static_cast<unsigned char>(src_[pos_]))) bump();
        current_.line = line_;
        current_.column = col_;
        if (pos_ >= src_.size()) {
            current_.type = Token::Type::end;
            current_.text.clear();
            return;
        }
        char c = src_[pos_];
        auto single = [&](Token::Type t) {
            current_.type = t;
            current_.text = std::string(1, c);
            bump();
        };
        if (isdigit(static_cast<unsigned char>(c))) {
            current_.type = Token::Type::number;
            current_.text.clear();
            while (pos_ < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_]))) {
                current_.text += src_[pos_];
                bump();
            }
            return;
        }
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            current_.type = Token::Type::ident;
            current_.text.clear();
            while (pos_ < src_.size() &&
                   (isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                current_.text += src_[pos_];
                bump();
            }
            return;
        }
        switch (c) {
        case '+': single(Token::Type::plus); return;
        case '-': single(Token::Type::minus); return;
        case '*': single(Token::Type::star); return;
        case '^': single(Token::Type::caret); return;
        case '(': single(Token::Type::lparen); return;
        case ')': single(Token::Type::rparen); return;
        case '[': single(Token::Type::lbracket); return;
        case ']': single(Token::Type::rbracket); return;
        case ',': single(Token::Type::comma); return;
        case '/': single(Token::Type::slash); return;
        default: throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        }
    }
    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token current_{Token::Type::end, "", 1, 1};
};

class Parser {
  public:
    explicit Parser(const std::string &src) : lex_(src) {}

    OperatorExpression parse() {
        OperatorExpression e = expression();
        const Token &t = lex_.peek();
        if (t.type != Token::Type::end)
            throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.column);
        return e;
    }

  private:
    OperatorExpression expression() {
        OperatorExpression sum;
        sum.kind = OperatorExpression::Kind::add;
        const Token &first = lex_.peek();
        sum.line = first.line;
        sum.column = first.column;
        sum.children.push_back(term());
        while (lex_.peek().type == Token::Type::plus || lex_.peek().type == Token::Type::minus) {
            Token op = lex_.next();
            OperatorExpression t = term();
            if (op.type == Token::Type::minus) {
                OperatorExpression neg;
                neg.kind = OperatorExpression::Kind::neg;
                neg.line = op.line;
                neg.column = op.column;
                neg.children.push_back(std::move(t));
                sum.children.push_back(std::move(neg));
            } else {
                sum.children.push_back(std::move(t));
            }
        }
        if (sum.children.size() == 1) return sum.children[0];
        return sum;
    }

    OperatorExpression term() {
        OperatorExpression prod;
        prod.kind = OperatorExpression::Kind::mul;
        const Token &first = lex_.peek();
        prod.line = first.line;
        prod.column = first.column;
        prod.children.push_back(factor());
        while (lex_.peek().type == Token::Type::star) {
            lex_.next();
            prod.children.push_back(factor());
        }
        if (prod.children.size() == 1) return prod.children[0];
        return prod;
    }

    OperatorExpression factor() {
        OperatorExpression base = primary();
        while (lex_.peek().type == Token::Type::caret) {
            Token caret = lex_.next();
            bool neg = false;
            if (lex_.peek().type == Token::Type::minus) {
                lex_.next();
                neg = true;
            } else if (lex_.peek().type == Token::Type::plus) {
                lex_.next();
            }
            const Token &t = lex_.peek();
            if (t.type != Token::Type::number)
                throw ParseError("exponent must be an integer", caret.line, caret.column);
            Token num = lex_.next();
            OperatorExpression p;
            p.kind = OperatorExpression::Kind::pow;
            p.line = caret.line;
            p.column = caret.column;
            p.exponent = (neg ? -1 : 1) * std::stoi(num.text);
            p.children.push_back(std::move(base));
            base = std::move(p);
        }
        return base;
    }

    OperatorExpression primary() {
        Token t = lex_.next();
        OperatorExpression e;
        e.line = t.line;
        e.column = t.column;
        switch (t.type) {
        case Token::Type::minus:
            e.kind = OperatorExpression::Kind::neg;
            e.children.push_back(factor());
            return e;
        case Token::Type::plus: return primary();
        case Token::Type::number: {
            // optional /denominator
            std::string text = t.text;
            if (lex_.peek().type == Token::Type::slash) {
                lex_.next();
                const Token &d = lex_.peek();
                if (d.type != Token::Type::number)
                    throw ParseError("expected denominator digits", d.line, d.column);
                text += "/" + lex_.next().text;
            }
            e.kind = OperatorExpression::Kind::number;
            e.value = gaussian_rational_from_string(text);
            return e;
        }
        case Token::Type::ident:
            if (t.text == "d") {
                e.kind = OperatorExpression::Kind::derivative;
                return e;
            }
            if (t.text == "theta") {
                e.kind = OperatorExpression::Kind::theta;
                return e;
            }
            if (t.text == "t") {
                e.kind = OperatorExpression::Kind::variable_t;
                return e;
            }
            if (t.text == "i") {
                e.kind = OperatorExpression::Kind::imaginary;
                return e;
            }
            e.kind = OperatorExpression::Kind::parameter;
            e.name = t.text;
            return e;
        case Token::Type::lparen: {
            OperatorExpression inner = expression();
            const Token &close = lex_.peek();
            if (close.type != Token::Type::rparen)
                throw ParseError("expected ')'", close.line, close.column);
            lex_.next();
            return inner;
        }
        case Token::Type::lbracket: {
            e.kind = OperatorExpression::Kind::matrix;
            while (true) {
                const Token &row_open = lex_.peek();
                if (row_open.type != Token::Type::lbracket)
                    throw ParseError("expected '[' starting a matrix row", row_open.line,
                                     row_open.column);
                lex_.next();
                std::vector<OperatorExpression> row;
                while (true) {
                    row.push_back(expression());
                    if (lex_.peek().type == Token::Type::comma) {
                        lex_.next();
                        continue;
                    }
                    break;
                }
                const Token &row_close = lex_.peek();
                if (row_close.type != Token::Type::rbracket)
                    throw ParseError("expected ']' ending a matrix row", row_close.line,
                                     row_close.column);
                lex_.next();
                e.entries.push_back(std::move(row));
                if (lex_.peek().type == Token::Type::comma) {
                    lex_.next();
                    continue;
                }
                break;
            }
            const Token &close = lex_.peek();
            if (close.type != Token::Type::rbracket)
                throw ParseError("expected ']' ending the matrix", close.line, close.column);
            lex_.next();
            return e;
        }
        case Token::Type::end: throw ParseError("unexpected end of input", t.line, t.column);
        default: throw ParseError("unexpected token '" + t.text + "'", t.line, t.column);
        }
    }

    Lexer lex_;
};

// operator algebra element: deriv order -> (integer t-power -> matrix)
struct DiffOp {
    int size = 1;
    std::map<int, std::map<int, Matrix>> terms;

    static DiffOp constant(const Matrix &m) {
        DiffOp op;
        op.size = m.rows();
        if (!m.is_zero()) op.terms[0][0] = m;
        return op;
    }
    static DiffOp scalar(int size, const GaussianRational &c) {
        return constant(Matrix::identity(size) * c);
    }

    void add_term(int deriv, int tpow, const Matrix &m) {
        if (m.is_zero()) return;
        auto &slot = terms[deriv];
        auto it = slot.find(tpow);
        if (it == slot.end())
            slot[tpow] = m;
        else {
            it->second += m;
            if (it->second.is_zero()) slot.erase(it);
        }
        if (terms[deriv].empty()) terms.erase(deriv);
    }

    friend DiffOp operator+(const DiffOp &a, const DiffOp &b) {
        DiffOp out = a;
        for (const auto &[k, row] : b.terms)
            for (const auto &[tp, m] : row) out.add_term(k, tp, m);
        return out;
    }

    friend DiffOp operator*(const DiffOp &a, const DiffOp &b) {
        DiffOp out;
        out.size = a.size;
        for (const auto &[k, arow] : a.terms)
            for (const auto &[ta, ca] : arow)
                for (const auto &[m, brow] : b.terms)
                    for (const auto &[tb, cb] : brow) {
                        // d^k (cb t^tb d^m) via Leibniz
                        GaussianRational binom(1);
                        GaussianRational fall(1);
                        for (int r = 0; r <= k; ++r) {
                            if (r > 0) {
                                binom *= GaussianRational(k - r + 1);
                                binom /= GaussianRational(r);
                                fall *= GaussianRational(tb - r + 1);
                            }
                            if (!fall.is_zero())
                                out.add_term(k - r + m, ta + tb - r, (ca * cb) * (binom * fall));
                        }
                    }
        return out;
    }
};

inline DiffOp diffop_pow(const DiffOp &base, int e, int line, int col) {
    if (e < 0) {
        // negative powers only for t and invertible constants
        if (base.terms.size() == 1 && base.terms.count(0)) {
            const auto &row = base.terms.at(0);
            if (row.size() == 1) {
                auto [tp, m] = *row.begin();
                if (tp != 0) {
                    if (!(m == Matrix::identity(m.rows())))
                        throw ParseError("negative powers only apply to plain t or constants", line,
                                         col);
                    DiffOp out;
                    out.size = base.size;
                    out.terms[0][tp * e] = Matrix::identity(base.size);
                    return out;
                }
                auto inv = m.inverse();
                if (!inv) throw ParseError("constant factor is not invertible", line, col);
                DiffOp out = DiffOp::constant(*inv);
                DiffOp acc = out;
                for (int i = 1; i < -e; ++i) acc = acc * out;
                return acc;
            }
        }
        throw ParseError("negative powers are only defined for t and invertible constants", line,
                         col);
    }
    DiffOp acc = DiffOp::scalar(base.size, GaussianRational(1));
    for (int i = 0; i < e; ++i) acc = acc * base;
    return acc;
}

} // namespace detail

inline OperatorExpression parse_operator(const std::string &src) {
    return detail::Parser(src).parse();
}

namespace detail {

inline int find_matrix_size(const OperatorExpression &e, int current) {
    if (e.kind == OperatorExpression::Kind::matrix) {
        int n = int(e.entries.size());
        for (const auto &row : e.entries)
            if (int(row.size()) != n)
                throw ParseError("matrix literal is not square", e.line, e.column);
        if (current != 1 && current != n)
            throw ParseError("matrix literals of different sizes", e.line, e.column);
        return n;
    }
    int n = current;
    for (const auto &c : e.children) n = find_matrix_size(c, n);
    for (const auto &row : e.entries)
        for (const auto &c : row) n = find_matrix_size(c, n);
    return n;
}

inline GaussianRational eval_constant(const OperatorExpression &e, const Bindings &bindings) {
    switch (e.kind) {
    case OperatorExpression::Kind::number: return e.value;
    case OperatorExpression::Kind::imaginary: return GaussianRational::i();
    case OperatorExpression::Kind::parameter: {
        auto it = bindings.find(e.name);
        if (it == bindings.end()) throw UnboundParameter(e.name);
        return it->second;
    }
    case OperatorExpression::Kind::neg: return -eval_constant(e.children[0], bindings);
    case OperatorExpression::Kind::add: {
        GaussianRational acc(0);
        for (const auto &c : e.children) acc += eval_constant(c, bindings);
        return acc;
    }
    case OperatorExpression::Kind::mul: {
        GaussianRational acc(1);
        for (const auto &c : e.children) acc *= eval_constant(c, bindings);
        return acc;
    }
    case OperatorExpression::Kind::pow: {
        GaussianRational base = eval_constant(e.children[0], bindings);
        int ex = e.exponent;
        GaussianRational acc(1);
        for (int i = 0; i < std::abs(ex); ++i) acc *= base;
        return ex < 0 ? acc.inverse() : acc;
    }
    default:
        throw ParseError("matrix entries must be constant expressions", e.line, e.column);
    }
}

inline DiffOp lower(const OperatorExpression &e, const Bindings &bindings, int size) {
    switch (e.kind) {
    case OperatorExpression::Kind::derivative: {
        DiffOp op;
        op.size = size;
        op.terms[1][0] = Matrix::identity(size);
        return op;
    }
    case OperatorExpression::Kind::theta: {
        DiffOp op;
        op.size = size;
        op.terms[1][1] = Matrix::identity(size);
        return op;
    }
    case OperatorExpression::Kind::variable_t: {
        DiffOp op;
        op.size = size;
        op.terms[0][1] = Matrix::identity(size);
        return op;
    }
    case OperatorExpression::Kind::number: return DiffOp::scalar(size, e.value);
    case OperatorExpression::Kind::imaginary: return DiffOp::scalar(size, GaussianRational::i());
    case OperatorExpression::Kind::parameter: {
        auto it = bindings.find(e.name);
        if (it == bindings.end()) throw UnboundParameter(e.name);
        return DiffOp::scalar(size, it->second);
    }
    case OperatorExpression::Kind::matrix: {
        Matrix m(size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) m(i, j) = eval_constant(e.entries[size_t(i)][size_t(j)], bindings);
        return DiffOp::constant(m);
    }
    case OperatorExpression::Kind::neg: {
        DiffOp inner = lower(e.children[0], bindings, size);
        return DiffOp::scalar(size, GaussianRational(-1)) * inner;
    }
    case OperatorExpression::Kind::add: {
        DiffOp acc;
        acc.size = size;
        for (const auto &c : e.children) acc = acc + lower(c, bindings, size);
        return acc;
    }
    case OperatorExpression::Kind::mul: {
        DiffOp acc = DiffOp::scalar(size, GaussianRational(1));
        for (const auto &c : e.children) acc = acc * lower(c, bindings, size);
        return acc;
    }
    case OperatorExpression::Kind::pow:
        return diffop_pow(lower(e.children[0], bindings, size), e.exponent, e.line, e.column);
    }
    throw ParseError("unreachable expression kind", e.line, e.column);
}

} // namespace detail

// Lowers a parsed expression to the Fuchs normal form.
inline FuchsOperator lower_to_fuchs(const OperatorExpression &e, const Bindings &bindings) {
    int size = detail::find_matrix_size(e, 1);
    detail::DiffOp op = detail::lower(e, bindings, size);
    std::vector<ClassicalTerm> terms;
    for (const auto &[k, row] : op.terms)
        for (const auto &[tp, m] : row)
            terms.push_back({MatrixPolynomial::constant(m), tp, k});
    return to_fuchs_form(terms, size);
}

inline FuchsOperator parse_fuchs_operator(const std::string &src, const Bindings &bindings = {}) {
    return lower_to_fuchs(parse_operator(src), bindings);
}

// Canonical text form: classical terms ordered by descending derivative
// order, then ascending t-power.
inline std::string unparse(const FuchsOperator &op) {
    // rebuild the classical form by applying the Fuchs word to t^a d^k basis:
    // t^{-mu} sum_j a_j(t) (-theta)^j expands into terms c * t^{s} * d^k
    detail::DiffOp acc;
    acc.size = op.size;
    detail::DiffOp theta_op;
    theta_op.size = op.size;
    theta_op.terms[1][1] = Matrix::identity(op.size) * GaussianRational(-1); // -theta
    for (int j = 0; j <= op.mu; ++j) {
        detail::DiffOp word = detail::DiffOp::scalar(op.size, GaussianRational(1));
        for (int i = 0; i < j; ++i) word = word * theta_op;
        const MatrixPolynomial &aj = op.a(j);
        for (int k2 = 0; k2 <= aj.degree(); ++k2) {
            detail::DiffOp c;
            c.size = op.size;
            if (!aj.coeff(k2).is_zero()) {
                c.terms[0][k2 - op.mu] = aj.coeff(k2);
                acc = acc + (c * word);
            }
        }
    }
    std::string out;
    std::vector<std::pair<int, std::pair<int, Matrix>>> items;
    for (const auto &[k, row] : acc.terms)
        for (const auto &[tp, m] : row) items.push_back({k, {tp, m}});
    std::sort(items.begin(), items.end(), [](const auto &a, const auto &b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second.first < b.second.first;
    });
    for (const auto &[k, rest] : items) {
        const auto &[tp, m] = rest;
        std::string piece;
        bool scalar = true;
        GaussianRational c = m(0, 0);
        for (int i = 0; i < m.rows() && scalar; ++i)
            for (int j = 0; j < m.cols() && scalar; ++j)
                scalar = (i == j) ? m(i, j) == c : m(i, j).is_zero();
        if (scalar && m.rows() > 0) {
            if (!(c == GaussianRational(1)) || (tp == 0 && k == 0)) {
                std::string cs = to_string(c);
                if (cs.find('+') != std::string::npos || cs.find('-') != std::string::npos)
                    cs = "(" + cs + ")";
                piece = cs;
            }
        } else {
            piece = "[";
            for (int i = 0; i < m.rows(); ++i) {
                piece += "[";
                for (int j = 0; j < m.cols(); ++j)
                    piece += to_string(m(i, j)) + (j + 1 < m.cols() ? "," : "");
                piece += std::string("]") + (i + 1 < m.rows() ? "," : "");
            }
            piece += "]";
        }
        if (tp != 0) {
            if (!piece.empty()) piece += "*";
            piece += "t";
            if (tp != 1) piece += "^" + std::to_string(tp);
        }
        if (k != 0) {
            if (!piece.empty()) piece += "*";
            piece += "d";
            if (k != 1) piece += "^" + std::to_string(k);
        }
        if (piece.empty()) piece = "1";
        out += (out.empty() ? "" : " + ") + piece;
    }
    return out.empty() ? "0" : out;
}

} // namespace conegreen
