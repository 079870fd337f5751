#pragma once

// Dense complex matrices for desk-scale numerical work (n <= ~200).
// Row-major storage, value semantics, plain O(n^3) kernels.

#include <cassert>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace meanmat {

using cplx = std::complex<double>;

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}

    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
    }

    Matrix(int rows, int cols, std::initializer_list<cplx> init) : Matrix(rows, cols) {
        if (static_cast<int>(init.size()) != rows * cols)
            throw std::invalid_argument("Matrix: initializer size mismatch");
        std::copy(init.begin(), init.end(), a_.begin());
    }

    static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diag(std::span<const double> d) {
        Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }

    static Matrix diag(const std::vector<cplx>& d) {
        Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }

    // matrix unit E_ij
    static Matrix unit(int n, int i, int j) {
        Matrix m(n, n);
        m(i, j) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(int i, int j) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }
    cplx operator()(int i, int j) const {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }

    const std::vector<cplx>& data() const { return a_; }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(cplx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, double s) { return a *= cplx(s); }
    friend Matrix operator*(double s, Matrix a) { return a *= cplx(s); }
    Matrix operator-() const {
        Matrix r(*this);
        for (auto& v : r.a_) v = -v;
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix multiply: shape mismatch");
        Matrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0)) continue;
                for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix conjugate() const {
        Matrix r(*this);
        for (auto& v : r.a_) v = std::conj(v);
        return r;
    }

    Matrix adjoint() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    // (A + A*)/2
    Matrix hermitized() const {
        require_square("hermitized");
        Matrix r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                r(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        return r;
    }

    Matrix hadamard(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * o.a_[k];
        return r;
    }

    static Matrix kron(const Matrix& a, const Matrix& b) {
        Matrix r(a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) {
                const cplx aij = a(i, j);
                if (aij == cplx(0.0)) continue;
                for (int k = 0; k < b.rows_; ++k)
                    for (int l = 0; l < b.cols_; ++l)
                        r(i * b.rows_ + k, j * b.cols_ + l) = aij * b(k, l);
            }
        return r;
    }

    cplx trace() const {
        require_square("trace");
        cplx t = 0.0;
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double fro_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    // max row sum
    double inf_norm() const {
        double m = 0.0;
        for (int i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

    bool is_hermitian(double rel_tol = 1e-12) const {
        if (!square()) return false;
        const double scale = std::max(1.0, max_abs());
        for (int i = 0; i < rows_; ++i)
            for (int j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > rel_tol * scale)
                    return false;
        return true;
    }

    // row-major flattening; the basis convention for superoperator matrices
    std::vector<cplx> vec() const { return a_; }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }
    void require_square(const char* op) const {
        if (!square()) throw std::invalid_argument(std::string("Matrix::") + op + ": not square");
    }

    int rows_, cols_;
    std::vector<cplx> a_;
};

// Hilbert-Schmidt inner product <A,B> = Tr A* B
inline cplx hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("hs_inner: shape mismatch");
    cplx s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += std::conj(a(i, j)) * b(i, j);
    return s;
}

inline double quadratic_form(const Matrix& m, std::span<const cplx> x) {
    if (static_cast<int>(x.size()) != m.rows() || !m.square())
        throw std::invalid_argument("quadratic_form: shape mismatch");
    cplx s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s += std::conj(x[i]) * m(i, j) * x[j];
    return s.real();
}

inline double norm_of(const Matrix& m) { return m.fro_norm(); }
inline double norm_of(double x) { return std::abs(x); }

}  // namespace meanmat
