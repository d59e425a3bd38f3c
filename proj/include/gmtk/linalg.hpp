#pragma once

#include "gmtk/exact.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace gmtk {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<long>> init);

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        Matrix s(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
        return s;
    }

    Matrix principal(const std::vector<std::size_t>& idx) const { return submatrix(idx, idx); }

    Matrix operator-() const {
        Matrix n(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) n.data_[k] = -data_[k];
        return n;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
        if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        for (long x : row) data_.emplace_back(x);
    }
}

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using ExactMatrix = RatMatrix;

RatMatrix to_rational(const IntMatrix& m);

// Fraction-free Bareiss elimination.
Integer determinant(const IntMatrix& m);
Rational determinant(const RatMatrix& m);

// Signed cofactor (-1)^(i+j) det(m without row i and column j).
Integer cofactor(const IntMatrix& m, std::size_t i, std::size_t j);

struct HomologySummary {
    std::vector<Integer> invariant_factors;  // d_1 | d_2 | ..., zeros mark free summands
    Integer order;                           // 0 means infinite
};

// Cokernel of m viewed as a map Z^cols -> Z^rows.
HomologySummary smith_invariants(const IntMatrix& m);

// Basis (as rows) of { z : z * m = 0 }.
IntMatrix left_kernel(const IntMatrix& m);

// Nonzero rows of a row echelon form spanning the same lattice as the rows of m.
IntMatrix row_lattice_basis(const IntMatrix& m);

class ContinuedFraction {
public:
    ContinuedFraction() = default;
    ContinuedFraction(std::vector<Integer> terms, Integer num, Integer den)
        : terms_(std::move(terms)), num_(std::move(num)), den_(std::move(den)) {}

    bool empty() const { return terms_.empty(); }
    const std::vector<Integer>& terms() const { return terms_; }
    const Integer& numerator() const { return num_; }
    const Integer& denominator() const { return den_; }
    Rational value() const;
    // 1/[] reads as 0.
    Rational reciprocal() const;

private:
    std::vector<Integer> terms_;
    Integer num_ = 1;
    Integer den_ = 0;
};

// [x1,...,xm] = x1 - 1/[x2,...,xm].
ContinuedFraction cf_eval(const std::vector<Integer>& terms);

// Leading principal minors, in order.
std::vector<Integer> leading_principal_minors(const IntMatrix& m);

bool is_positive_definite(const RatMatrix& m);
bool is_positive_definite(const IntMatrix& m);

}  // namespace gmtk
