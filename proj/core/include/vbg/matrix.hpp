#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vbg/scalar.hpp"

namespace vbg {

using Vector = std::vector<Scalar>;

// Dense row-major matrix acting on column vectors from the left.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, Field f = {});
    static Matrix identity(std::size_t n, Field f = {});
    static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows, Field f = {});
    static Matrix column(const Vector& v, Field f = {});
    static Matrix hstack(const Matrix& a, const Matrix& b);
    static Matrix vstack(const Matrix& a, const Matrix& b);
    static Matrix diag(const Matrix& a, const Matrix& b);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Field field() const { return field_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    Matrix columns(const std::vector<std::size_t>& idx) const;
    Matrix rows_of(const std::vector<std::size_t>& idx) const;
    Vector col(std::size_t j) const;
    void set_col(std::size_t j, const Vector& v);

    Matrix transpose() const;
    bool is_zero() const;
    bool is_identity() const;

    Matrix operator-() const;
    Matrix operator+(const Matrix& b) const;
    Matrix operator-(const Matrix& b) const;
    Matrix operator*(const Matrix& b) const;
    Vector operator*(const Vector& v) const;
    friend Matrix operator*(const Scalar& s, const Matrix& m);
    Matrix& operator+=(const Matrix& b);
    Matrix& operator-=(const Matrix& b);

    friend bool operator==(const Matrix& a, const Matrix& b);
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    Field field_;
    std::vector<Scalar> data_;
};

Vector zero_vector(std::size_t n);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const Scalar& s, const Vector& v);
bool is_zero(const Vector& v);
Vector unit_vector(std::size_t n, std::size_t i, Field f = {});

struct Echelon {
    Matrix reduced;
    std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

// Gauss-Jordan elimination. Columns are scanned in `order` (default 0..n-1),
// so a permuted order selects different pivot columns.
Echelon rref(const Matrix& a, const std::vector<std::size_t>& order = {});
std::size_t rank(const Matrix& a);

// Kernel basis as columns, one per non-pivot column, free variable set to 1.
Matrix kernel(const Matrix& a, const std::vector<std::size_t>& order = {});
// Basis of the column space taken from pivot columns of a.
Matrix column_space(const Matrix& a, const std::vector<std::size_t>& order = {});
// Solution of a x = b with free variables zero, or nullopt if inconsistent.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);
std::optional<Vector> solve(const Matrix& a, const Vector& b);
std::optional<Matrix> inverse(const Matrix& a);
// x with a x = I for surjective a; x a = I for injective a.
Matrix right_inverse(const Matrix& a);
Matrix left_inverse(const Matrix& a);
// Standard basis vectors completing the column span of a to the whole space.
Matrix complement(const Matrix& a, const std::vector<std::size_t>& order = {});
// Canonical basis of the column span: transposed reduced row echelon form.
Matrix canonical_basis(const Matrix& a);

}  // namespace vbg
