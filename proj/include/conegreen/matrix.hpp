#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "conegreen/rational.hpp"

namespace conegreen {

// Dense matrix over Q(i).  Column vectors are N x 1 matrices.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = GaussianRational(1);
        return m;
    }
    static Matrix column(const std::vector<GaussianRational> &entries) {
        Matrix m(int(entries.size()), 1);
        for (size_t i = 0; i < entries.size(); ++i) m(int(i), 0) = entries[i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    GaussianRational &operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
    const GaussianRational &operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

    bool is_zero() const {
        for (const auto &x : data_)
            if (!x.is_zero()) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    Matrix conj() const {
        Matrix m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).conj();
        return m;
    }
    Matrix dagger() const { return transpose().conj(); }

    Matrix operator-() const {
        Matrix m(rows_, cols_);
        for (size_t k = 0; k < data_.size(); ++k) m.data_[k] = -data_[k];
        return m;
    }
    Matrix &operator+=(const Matrix &o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix &operator-=(const Matrix &o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix &operator*=(const GaussianRational &c) {
        for (auto &x : data_) x *= c;
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator*(Matrix a, const GaussianRational &c) { return a *= c; }
    friend Matrix operator*(const GaussianRational &c, Matrix a) { return a *= c; }
    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        assert(a.cols_ == b.rows_);
        Matrix m(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) m(i, j) += a(i, k) * b(k, j);
            }
        return m;
    }
    friend bool operator==(const Matrix &a, const Matrix &b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix &a, const Matrix &b) { return !(a == b); }

    // In-place reduced row echelon form; returns pivot column indices.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int row = 0;
        for (int col = 0; col < cols_ && row < rows_; ++col) {
            int pr = -1;
            for (int i = row; i < rows_; ++i)
                if (!(*this)(i, col).is_zero()) {
                    pr = i;
                    break;
                }
            if (pr < 0) continue;
            if (pr != row)
                for (int j = 0; j < cols_; ++j) std::swap((*this)(pr, j), (*this)(row, j));
            GaussianRational inv = (*this)(row, col).inverse();
            for (int j = col; j < cols_; ++j) (*this)(row, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == row || (*this)(i, col).is_zero()) continue;
                GaussianRational f = (*this)(i, col);
                for (int j = col; j < cols_; ++j) (*this)(i, j) -= f * (*this)(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    int rank() const {
        Matrix m = *this;
        return int(m.rref().size());
    }

    // Basis of the right kernel, canonical via RREF (one column per free column).
    std::vector<Matrix> kernel_basis() const {
        Matrix m = *this;
        std::vector<int> pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (int p : pivots) is_pivot[p] = true;
        std::vector<Matrix> basis;
        for (int free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            Matrix v(cols_, 1);
            v(free, 0) = GaussianRational(1);
            for (size_t r = 0; r < pivots.size(); ++r) v(pivots[r], 0) = -m(int(r), free);
            basis.push_back(v);
        }
        return basis;
    }

    // Solves A x = b; returns std::nullopt when inconsistent.  With
    // `unique` set, throws DegenerateBasis unless the solution is unique.
    std::optional<Matrix> solve(const Matrix &b, bool unique = false) const {
        assert(b.rows() == rows_);
        Matrix aug(rows_, cols_ + b.cols());
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            for (int j = 0; j < b.cols(); ++j) aug(i, cols_ + j) = b(i, j);
        }
        std::vector<int> pivots = aug.rref();
        for (int p : pivots)
            if (p >= cols_) return std::nullopt;
        if (unique && int(pivots.size()) < cols_)
            throw DegenerateBasis("linear system has a non-trivial kernel");
        Matrix x(cols_, b.cols());
        for (size_t r = 0; r < pivots.size(); ++r)
            for (int j = 0; j < b.cols(); ++j) x(pivots[r], j) = aug(int(r), cols_ + j);
        return x;
    }

    GaussianRational det() const {
        assert(rows_ == cols_);
        Matrix m = *this;
        GaussianRational result(1);
        for (int col = 0; col < cols_; ++col) {
            int pr = -1;
            for (int i = col; i < rows_; ++i)
                if (!m(i, col).is_zero()) {
                    pr = i;
                    break;
                }
            if (pr < 0) return GaussianRational(0);
            if (pr != col) {
                for (int j = 0; j < cols_; ++j) std::swap(m(pr, j), m(col, j));
                result = -result;
            }
            result *= m(col, col);
            GaussianRational inv = m(col, col).inverse();
            for (int i = col + 1; i < rows_; ++i) {
                if (m(i, col).is_zero()) continue;
                GaussianRational f = m(i, col) * inv;
                for (int j = col; j < cols_; ++j) m(i, j) -= f * m(col, j);
            }
        }
        return result;
    }

    std::optional<Matrix> inverse() const {
        assert(rows_ == cols_);
        auto x = solve(identity(rows_));
        return x;
    }

  private:
    int rows_, cols_;
    std::vector<GaussianRational> data_;
};

// Stacks columns of the given matrices side by side.
inline Matrix hcat(const std::vector<Matrix> &cols, int rows) {
    int total = 0;
    for (const auto &c : cols) total += c.cols();
    Matrix m(rows, total);
    int at = 0;
    for (const auto &c : cols) {
        assert(c.rows() == rows);
        for (int j = 0; j < c.cols(); ++j, ++at)
            for (int i = 0; i < rows; ++i) m(i, at) = c(i, j);
    }
    return m;
}

} // namespace conegreen
