#include "vbg/matrix.hpp"

#include <numeric>
#include <sstream>

#include "vbg/errors.hpp"

namespace vbg {
namespace {

Field join(Field a, Field b) { return a.is_rational() ? b : a; }

void require(bool ok, const std::string& what) {
    if (!ok) throw Error("ShapeMismatch", what);
}

Echelon eliminate(const Matrix& a, const std::vector<std::size_t>& order, bool full) {
    Matrix m(a.rows(), a.cols(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j).in(a.field());

    std::vector<std::size_t> ord = order;
    if (ord.empty()) {
        ord.resize(a.cols());
        std::iota(ord.begin(), ord.end(), 0);
    }
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> nz;
    std::size_t r = 0;
    for (std::size_t c : ord) {
        if (r == m.rows()) break;
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        nz.clear();
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(r, j).is_zero()) nz.push_back(j);
        if (full) {
            Scalar inv = m(r, c).inverse();
            for (std::size_t j : nz) m(r, j) = m(r, j) * inv;
        }
        Scalar pv = m(r, c);
        for (std::size_t i = full ? 0 : r + 1; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            Scalar f = full ? m(i, c) : m(i, c) / pv;
            for (std::size_t j : nz) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, Field f)
    : rows_(rows), cols_(cols), field_(f), data_(rows * cols, Scalar(0)) {}

Matrix Matrix::identity(std::size_t n, Field f) {
    Matrix m(n, n, f);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1).in(f);
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows, Field f) {
    std::size_t nc = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), nc, f);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == nc, "ragged matrix rows");
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = rows[i][j].in(f);
    }
    return m;
}

Matrix Matrix::column(const Vector& v, Field f) {
    Matrix m(v.size(), 1, f);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i].in(f);
    return m;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "hstack row mismatch");
    Matrix m(a.rows(), a.cols() + b.cols(), join(a.field(), b.field()));
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "vstack column mismatch");
    Matrix m(a.rows() + b.rows(), a.cols(), join(a.field(), b.field()));
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

Matrix Matrix::diag(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows() + b.rows(), a.cols() + b.cols(), join(a.field(), b.field()));
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
    Matrix m(nr, nc, field_);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    require(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_, "set_block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::columns(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size(), field_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < idx.size(); ++k) m(i, k) = (*this)(i, idx[k]);
    return m;
}

Matrix Matrix::rows_of(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), cols_, field_);
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t j = 0; j < cols_; ++j) m(k, j) = (*this)(idx[k], j);
    return m;
}

Vector Matrix::col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_col(std::size_t j, const Vector& v) {
    require(v.size() == rows_, "set_col length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
    Matrix m(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

bool Matrix::is_zero() const {
    for (const Scalar& s : data_)
        if (!s.in(field_).is_zero()) return false;
    return true;
}

bool Matrix::is_identity() const { return rows_ == cols_ && *this == identity(rows_, field_); }

Matrix Matrix::operator-() const {
    Matrix m(rows_, cols_, field_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = -data_[k];
    return m;
}

Matrix Matrix::operator+(const Matrix& b) const {
    require(rows_ == b.rows_ && cols_ == b.cols_, "matrix sum shape mismatch");
    Matrix m(rows_, cols_, join(field_, b.field_));
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k] + b.data_[k];
    return m;
}

Matrix Matrix::operator-(const Matrix& b) const {
    require(rows_ == b.rows_ && cols_ == b.cols_, "matrix difference shape mismatch");
    Matrix m(rows_, cols_, join(field_, b.field_));
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k] - b.data_[k];
    return m;
}

Matrix& Matrix::operator+=(const Matrix& b) { return *this = *this + b; }
Matrix& Matrix::operator-=(const Matrix& b) { return *this = *this - b; }

Matrix Matrix::operator*(const Matrix& b) const {
    require(cols_ == b.rows_, "matrix product shape mismatch (" + std::to_string(rows_) + "x" +
                                  std::to_string(cols_) + " * " + std::to_string(b.rows_) + "x" +
                                  std::to_string(b.cols_) + ")");
    Matrix m(rows_, b.cols_, join(field_, b.field_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& a = (*this)(i, k);
            if (a.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                const Scalar& c = b(k, j);
                if (!c.is_zero()) m(i, j) += a * c;
            }
        }
    return m;
}

Vector Matrix::operator*(const Vector& v) const {
    require(cols_ == v.size(), "matrix-vector shape mismatch (" + std::to_string(rows_) + "x" +
                                   std::to_string(cols_) + " * " + std::to_string(v.size()) + ")");
    Vector r(rows_, Scalar(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& a = (*this)(i, k);
            if (!a.is_zero() && !v[k].is_zero()) r[i] += a * v[k];
        }
    return r;
}

Matrix operator*(const Scalar& s, const Matrix& m) {
    Matrix r(m.rows_, m.cols_, m.field_);
    for (std::size_t k = 0; k < m.data_.size(); ++k) r.data_[k] = s * m.data_[k];
    return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k)
        if (a.data_[k] != b.data_[k]) return false;
    return true;
}

std::string Matrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).to_string();
    }
    os << "] (" << rows_ << "x" << cols_ << ")";
    return os.str();
}

Vector zero_vector(std::size_t n) { return Vector(n, Scalar(0)); }

Vector add(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "vector sum length mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "vector difference length mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vector scale(const Scalar& s, const Vector& v) {
    Vector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

bool is_zero(const Vector& v) {
    for (const Scalar& s : v)
        if (!s.is_zero()) return false;
    return true;
}

Vector unit_vector(std::size_t n, std::size_t i, Field f) {
    Vector v(n, Scalar(0));
    v[i] = Scalar(1).in(f);
    return v;
}

Echelon rref(const Matrix& a, const std::vector<std::size_t>& order) { return eliminate(a, order, true); }

std::size_t rank(const Matrix& a) { return eliminate(a, {}, false).pivots.size(); }

Matrix kernel(const Matrix& a, const std::vector<std::size_t>& order) {
    Echelon e = rref(a, order);
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t c : e.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix k(a.cols(), free_cols.size(), a.field());
    for (std::size_t f = 0; f < free_cols.size(); ++f) {
        k(free_cols[f], f) = Scalar(1).in(a.field());
        for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], f) = -e.reduced(r, free_cols[f]);
    }
    return k;
}

Matrix column_space(const Matrix& a, const std::vector<std::size_t>& order) {
    return a.columns(rref(a, order).pivots);
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "solve: right-hand side has wrong length");
    std::vector<std::size_t> order(a.cols());
    std::iota(order.begin(), order.end(), 0);
    Echelon e = rref(Matrix::hstack(a, b), order);
    for (std::size_t r = e.pivots.size(); r < a.rows(); ++r)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (!e.reduced(r, a.cols() + j).is_zero()) return std::nullopt;
    Matrix x(a.cols(), b.cols(), e.reduced.field());
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
    return x;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
    auto x = solve(a, Matrix::column(b, a.field()));
    if (!x) return std::nullopt;
    return x->col(0);
}

std::optional<Matrix> inverse(const Matrix& a) {
    if (a.rows() != a.cols() || rank(a) != a.rows()) return std::nullopt;
    return solve(a, Matrix::identity(a.rows(), a.field()));
}

Matrix right_inverse(const Matrix& a) {
    auto x = solve(a, Matrix::identity(a.rows(), a.field()));
    if (!x) throw Error("NotSurjective", "matrix has no right inverse");
    return *x;
}

Matrix left_inverse(const Matrix& a) {
    auto x = solve(a.transpose(), Matrix::identity(a.cols(), a.field()));
    if (!x) throw Error("NotInjective", "matrix has no left inverse");
    return x->transpose();
}

Matrix complement(const Matrix& a, const std::vector<std::size_t>& order) {
    std::size_t n = a.rows();
    std::vector<std::size_t> ord(a.cols());
    std::iota(ord.begin(), ord.end(), 0);
    if (order.empty())
        for (std::size_t i = 0; i < n; ++i) ord.push_back(a.cols() + i);
    else
        for (std::size_t i : order) ord.push_back(a.cols() + i);
    Echelon e = rref(Matrix::hstack(a, Matrix::identity(n, a.field())), ord);
    std::vector<std::size_t> picked;
    for (std::size_t c : e.pivots)
        if (c >= a.cols()) picked.push_back(c - a.cols());
    return Matrix::identity(n, a.field()).columns(picked);
}

Matrix canonical_basis(const Matrix& a) {
    Echelon e = rref(a.transpose());
    return e.reduced.block(0, 0, e.pivots.size(), a.rows()).transpose();
}

}  // namespace vbg
