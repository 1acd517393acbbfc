#pragma once

#include <cassert>
#include <limits>
#include <stdexcept>
#include <vector>

#include "conegreen/matrix.hpp"

namespace conegreen {

// Finite window of a Laurent expansion at a Gaussian-rational point:
// coefficients of (z-p)^e for lead() <= e <= trunc().  The leading
// coefficient is kept nonzero (tight pole order); coefficients below lead()
// are exactly zero, coefficients above trunc() are unknown and asking for
// them is an error.
class LaurentExpansion {
  public:
    LaurentExpansion(GaussianRational point, int lead, std::vector<Matrix> coeffs, int rows, int cols)
        : point_(std::move(point)), lead_(lead), coeffs_(std::move(coeffs)), rows_(rows), cols_(cols) {
        trunc_ = lead_ + int(coeffs_.size()) - 1;
        normalize();
    }

    static LaurentExpansion zero(const GaussianRational &point, int trunc, int rows, int cols) {
        return LaurentExpansion(point, trunc + 1, {}, rows, cols);
    }

    const GaussianRational &point() const { return point_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int lead() const { return lead_; }
    int trunc() const { return trunc_; }

    bool is_zero() const { return coeffs_.empty(); }

    // pole order: nu >= 0, tight
    int pole_order() const { return coeffs_.empty() || lead_ >= 0 ? 0 : -lead_; }

    Matrix coeff(int e) const {
        if (e > trunc_)
            throw std::out_of_range("LaurentExpansion: coefficient beyond truncation order");
        if (coeffs_.empty() || e < lead_ || e >= lead_ + int(coeffs_.size()))
            return Matrix(rows_, cols_);
        return coeffs_[size_t(e - lead_)];
    }

    LaurentExpansion principal_part() const {
        std::vector<Matrix> c;
        for (int e = lead_; e < 0 && e <= trunc_; ++e) c.push_back(coeff(e));
        return LaurentExpansion(point_, lead_, std::move(c), rows_, cols_);
    }

    LaurentExpansion truncated(int new_trunc) const {
        if (new_trunc > trunc_)
            throw std::out_of_range("LaurentExpansion: cannot extend truncation window");
        std::vector<Matrix> c;
        for (int e = lead_; e <= new_trunc; ++e) c.push_back(coeff(e));
        return LaurentExpansion(point_, lead_, std::move(c), rows_, cols_);
    }

    Matrix residue() const { return trunc_ >= -1 ? coeff(-1) : Matrix(rows_, cols_); }

    LaurentExpansion operator-() const {
        std::vector<Matrix> c = coeffs_;
        for (auto &m : c) m = -m;
        return LaurentExpansion(point_, lead_, std::move(c), rows_, cols_);
    }

    LaurentExpansion transpose() const {
        std::vector<Matrix> c = coeffs_;
        for (auto &m : c) m = m.transpose();
        return LaurentExpansion(point_, lead_, std::move(c), cols_, rows_);
    }

    friend LaurentExpansion operator+(const LaurentExpansion &a, const LaurentExpansion &b) {
        assert(a.point_ == b.point_ && a.rows_ == b.rows_ && a.cols_ == b.cols_);
        int trunc = std::min(a.trunc_, b.trunc_);
        int lead = std::min(a.coeffs_.empty() ? trunc + 1 : a.lead_,
                            b.coeffs_.empty() ? trunc + 1 : b.lead_);
        std::vector<Matrix> c;
        for (int e = lead; e <= trunc; ++e) c.push_back(a.coeff(e) + b.coeff(e));
        return LaurentExpansion(a.point_, lead, std::move(c), a.rows_, a.cols_);
    }
    friend LaurentExpansion operator-(const LaurentExpansion &a, const LaurentExpansion &b) {
        return a + (-b);
    }

    friend LaurentExpansion operator*(const LaurentExpansion &a, const LaurentExpansion &b) {
        assert(a.point_ == b.point_ && a.cols_ == b.rows_);
        if (a.is_zero() || b.is_zero()) {
            // truncation of an exact zero factor does not limit the product
            int trunc = a.is_zero() && b.is_zero() ? std::max(a.trunc_, b.trunc_)
                        : a.is_zero()              ? a.trunc_ + b.lead_
                                                   : b.trunc_ + a.lead_;
            return zero(a.point_, trunc, a.rows_, b.cols_);
        }
        int trunc = std::min(a.trunc_ + b.lead_, b.trunc_ + a.lead_);
        int lead = a.lead_ + b.lead_;
        std::vector<Matrix> c(size_t(trunc - lead + 1), Matrix(a.rows_, b.cols_));
        for (int ea = a.lead_; ea <= a.trunc_; ++ea)
            for (int eb = b.lead_; eb <= b.trunc_; ++eb) {
                int e = ea + eb;
                if (e > trunc) continue;
                c[size_t(e - lead)] += a.coeff(ea) * b.coeff(eb);
            }
        return LaurentExpansion(a.point_, lead, std::move(c), a.rows_, b.cols_);
    }

    friend LaurentExpansion operator*(const GaussianRational &s, const LaurentExpansion &a) {
        std::vector<Matrix> c = a.coeffs_;
        for (auto &m : c) m = m * s;
        return LaurentExpansion(a.point_, a.lead_, std::move(c), a.rows_, a.cols_);
    }

    // equality of the overlapping windows plus identical tight leads
    friend bool operator==(const LaurentExpansion &a, const LaurentExpansion &b) {
        if (a.point_ != b.point_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        int trunc = std::min(a.trunc_, b.trunc_);
        int lead = std::min(a.is_zero() ? 0 : a.lead_, b.is_zero() ? 0 : b.lead_);
        for (int e = lead; e <= trunc; ++e)
            if (a.coeff(e) != b.coeff(e)) return false;
        return true;
    }

  private:
    void normalize() {
        while (!coeffs_.empty() && coeffs_.front().is_zero()) {
            coeffs_.erase(coeffs_.begin());
            ++lead_;
        }
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
        if (coeffs_.empty()) lead_ = trunc_ + 1;
        for (auto &m : coeffs_) {
            assert(m.rows() == rows_ && m.cols() == cols_);
            (void)m;
        }
    }

    GaussianRational point_;
    int lead_;
    int trunc_;
    std::vector<Matrix> coeffs_;
    int rows_, cols_;
};

} // namespace conegreen
