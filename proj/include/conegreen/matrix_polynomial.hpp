#pragma once

#include <cassert>
#include <vector>

#include "conegreen/laurent.hpp"
#include "conegreen/matrix.hpp"
#include "conegreen/polynomial.hpp"

namespace conegreen {

// N x N matrix with polynomial entries, stored as matrix coefficients per
// power of the variable (z or t depending on context).
class MatrixPolynomial {
  public:
    MatrixPolynomial() : size_(0) {}
    explicit MatrixPolynomial(int size) : size_(size) {}
    MatrixPolynomial(int size, std::vector<Matrix> coeffs) : size_(size), coeffs_(std::move(coeffs)) {
        trim();
    }

    static MatrixPolynomial constant(Matrix m) {
        int n = m.rows();
        assert(m.cols() == n);
        return MatrixPolynomial(n, {std::move(m)});
    }
    static MatrixPolynomial identity(int size) { return constant(Matrix::identity(size)); }
    static MatrixPolynomial scalar(int size, const Polynomial &p) {
        MatrixPolynomial m(size);
        for (int k = 0; k <= p.degree(); ++k) {
            Matrix c(size, size);
            for (int i = 0; i < size; ++i) c(i, i) = p.coeff(k);
            m.coeffs_.push_back(std::move(c));
        }
        m.trim();
        return m;
    }
    static MatrixPolynomial from_entries(const std::vector<std::vector<Polynomial>> &entries) {
        int n = int(entries.size());
        int deg = -1;
        for (const auto &row : entries) {
            assert(int(row.size()) == n);
            for (const auto &p : row) deg = std::max(deg, p.degree());
        }
        MatrixPolynomial m(n);
        for (int k = 0; k <= deg; ++k) {
            Matrix c(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) c(i, j) = entries[i][j].coeff(k);
            m.coeffs_.push_back(std::move(c));
        }
        m.trim();
        return m;
    }

    int size() const { return size_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return int(coeffs_.size()) - 1; }
    Matrix coeff(int k) const {
        return k >= 0 && k < int(coeffs_.size()) ? coeffs_[k] : Matrix(size_, size_);
    }
    const std::vector<Matrix> &coeffs() const { return coeffs_; }

    Polynomial entry(int i, int j) const {
        std::vector<GaussianRational> c(coeffs_.size());
        for (size_t k = 0; k < coeffs_.size(); ++k) c[k] = coeffs_[k](i, j);
        return Polynomial(std::move(c));
    }

    Matrix operator()(const GaussianRational &z) const {
        Matrix acc(size_, size_);
        for (int k = degree(); k >= 0; --k) acc = acc * z + coeffs_[k];
        return acc;
    }

    MatrixPolynomial operator-() const {
        MatrixPolynomial m = *this;
        for (auto &c : m.coeffs_) c = -c;
        return m;
    }
    MatrixPolynomial &operator+=(const MatrixPolynomial &o) {
        assert(size_ == o.size_);
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Matrix(size_, size_));
        for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    MatrixPolynomial &operator-=(const MatrixPolynomial &o) { return *this += -o; }
    friend MatrixPolynomial operator+(MatrixPolynomial a, const MatrixPolynomial &b) { return a += b; }
    friend MatrixPolynomial operator-(MatrixPolynomial a, const MatrixPolynomial &b) { return a -= b; }
    friend MatrixPolynomial operator*(const MatrixPolynomial &a, const MatrixPolynomial &b) {
        assert(a.size_ == b.size_);
        if (a.is_zero() || b.is_zero()) return MatrixPolynomial(a.size_);
        std::vector<Matrix> c(a.coeffs_.size() + b.coeffs_.size() - 1, Matrix(a.size_, a.size_));
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return MatrixPolynomial(a.size_, std::move(c));
    }
    friend MatrixPolynomial operator*(MatrixPolynomial a, const GaussianRational &s) {
        for (auto &c : a.coeffs_) c = c * s;
        a.trim();
        return a;
    }
    friend MatrixPolynomial operator*(const MatrixPolynomial &a, const Polynomial &p) {
        return a * MatrixPolynomial::scalar(a.size_, p);
    }
    friend bool operator==(const MatrixPolynomial &a, const MatrixPolynomial &b) {
        return a.size_ == b.size_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const MatrixPolynomial &a, const MatrixPolynomial &b) { return !(a == b); }

    // p(a*z + b) entrywise
    MatrixPolynomial compose_affine(const GaussianRational &a, const GaussianRational &b) const {
        MatrixPolynomial result(size_);
        MatrixPolynomial arg(size_);
        arg.coeffs_ = {Matrix::identity(size_) * b, Matrix::identity(size_) * a};
        arg.trim();
        for (int k = degree(); k >= 0; --k) result = result * arg + constant(coeffs_[k]);
        return result;
    }
    MatrixPolynomial shift(const GaussianRational &c) const {
        return compose_affine(GaussianRational(1), c);
    }

    MatrixPolynomial conj_coeffs() const {
        MatrixPolynomial m = *this;
        for (auto &c : m.coeffs_) c = c.conj();
        return m;
    }
    // conjugate-transpose of every coefficient
    MatrixPolynomial dagger_coeffs() const {
        MatrixPolynomial m = *this;
        for (auto &c : m.coeffs_) c = c.dagger();
        return m;
    }
    MatrixPolynomial transpose_coeffs() const {
        MatrixPolynomial m = *this;
        for (auto &c : m.coeffs_) c = c.transpose();
        return m;
    }

    // d/dt, used for conormal symbols of Fuchs coefficients
    MatrixPolynomial derivative() const {
        if (coeffs_.size() <= 1) return MatrixPolynomial(size_);
        std::vector<Matrix> c(coeffs_.size() - 1, Matrix(size_, size_));
        for (size_t k = 1; k < coeffs_.size(); ++k) c[k - 1] = coeffs_[k] * GaussianRational(int(k));
        return MatrixPolynomial(size_, std::move(c));
    }

    Polynomial det() const {
        std::vector<int> rows(size_), cols(size_);
        for (int i = 0; i < size_; ++i) rows[i] = cols[i] = i;
        return det_laplace(rows, cols);
    }

    MatrixPolynomial adjugate() const {
        MatrixPolynomial adj(size_);
        std::vector<std::vector<Polynomial>> entries(size_, std::vector<Polynomial>(size_));
        for (int i = 0; i < size_; ++i)
            for (int j = 0; j < size_; ++j) {
                std::vector<int> rows, cols;
                for (int r = 0; r < size_; ++r)
                    if (r != j) rows.push_back(r);
                for (int c = 0; c < size_; ++c)
                    if (c != i) cols.push_back(c);
                Polynomial minor =
                    rows.empty() ? Polynomial(GaussianRational(1)) : det_laplace(rows, cols);
                entries[i][j] = ((i + j) % 2 == 0) ? minor : -minor;
            }
        return from_entries(entries);
    }

    std::vector<Matrix> taylor_at(const GaussianRational &z0, int count) const {
        MatrixPolynomial shifted = shift(z0);
        std::vector<Matrix> out;
        out.reserve(count);
        for (int k = 0; k < count; ++k) out.push_back(shifted.coeff(k));
        return out;
    }

    LaurentExpansion laurent_at(const GaussianRational &z0, int order) const {
        auto t = taylor_at(z0, order + 1);
        return LaurentExpansion(z0, 0, std::move(t), size_, size_);
    }

  private:
    Polynomial det_laplace(const std::vector<int> &rows, const std::vector<int> &cols) const {
        int n = int(rows.size());
        if (n == 1) return entry(rows[0], cols[0]);
        Polynomial result;
        std::vector<int> sub_rows(rows.begin() + 1, rows.end());
        for (int j = 0; j < n; ++j) {
            Polynomial e = entry(rows[0], cols[j]);
            if (e.is_zero()) continue;
            std::vector<int> sub_cols;
            for (int k = 0; k < n; ++k)
                if (k != j) sub_cols.push_back(cols[k]);
            Polynomial minor = det_laplace(sub_rows, sub_cols);
            result += (j % 2 == 0) ? e * minor : -(e * minor);
        }
        return result;
    }

    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    int size_;
    std::vector<Matrix> coeffs_;
};

} // namespace conegreen
