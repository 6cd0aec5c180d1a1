#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "relans/rational.hpp"

namespace relans {

// Dense row-major matrix over exact rationals. The substrate for every rank
// and dimension computation in the library; all arithmetic is exact.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    ExactMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            require(row.size() == cols_, "ExactMatrix: ragged initializer");
            for (const auto& v : row) data_.push_back(v);
        }
    }

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static ExactMatrix from_rows(const std::vector<RatVec>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.front().size() : 0;
        ExactMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            require(rows[i].size() == c, "from_rows: ragged rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatVec row(std::size_t i) const {
        return RatVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    bool operator==(const ExactMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (v != 0) return false;
        return true;
    }

    ExactMatrix transpose() const {
        ExactMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    ExactMatrix& operator+=(const ExactMatrix& o) {
        require(rows_ == o.rows_ && cols_ == o.cols_, "matrix add: shape mismatch");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    ExactMatrix& operator-=(const ExactMatrix& o) {
        require(rows_ == o.rows_ && cols_ == o.cols_, "matrix sub: shape mismatch");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ExactMatrix& operator*=(const Rational& s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
    friend ExactMatrix operator*(ExactMatrix a, const Rational& s) { return a *= s; }
    friend ExactMatrix operator*(const Rational& s, ExactMatrix a) { return a *= s; }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        require(a.cols_ == b.rows_, "matrix mul: shape mismatch");
        ExactMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rational& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const Rational& bkj = b(k, j);
                    if (bkj != 0) c(i, j) += aik * bkj;
                }
            }
        }
        return c;
    }

    RatVec apply(const RatVec& x) const {
        require(x.size() == cols_, "matrix apply: shape mismatch");
        RatVec y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Rational acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) {
                const Rational& v = (*this)(i, j);
                if (v != 0 && x[j] != 0) acc += v * x[j];
            }
            y[i] = std::move(acc);
        }
        return y;
    }

    Rational trace() const {
        require(rows_ == cols_, "trace: not square");
        Rational t = 0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

inline Rational dot(const RatVec& a, const RatVec& b) {
    require(a.size() == b.size(), "dot: length mismatch");
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) acc += a[i] * b[i];
    return acc;
}

inline bool is_zero_vec(const RatVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace relans
