#pragma once

// Superoperators on M_n: the entrywise-mean multiplier attached to a
// positive matrix D and a mean function (acting in D's eigenbasis), its
// inverse, Hilbert-Schmidt matrix representations in the matrix-unit basis,
// Choi matrices, complete-positivity checks, Kraus channels, and the
// channel-monotonicity gap of the inverse map.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "meanmat/eig.hpp"
#include "meanmat/functions.hpp"
#include "meanmat/matrix.hpp"
#include "meanmat/mean_matrix.hpp"
#include "meanmat/rng.hpp"

namespace meanmat {

// Hermitian positive definite D with its eigendecomposition cached at
// construction (immutable afterwards; safe to share across threads).
class PositiveMatrix {
public:
    explicit PositiveMatrix(const Matrix& d) : d_(d.hermitized()), eig_(eig_herm(d_)) {
        if (!d.is_hermitian(1e-10))
            throw std::invalid_argument("PositiveMatrix: input not Hermitian");
        if (eig_.values.front() <= 0.0)
            throw std::invalid_argument("PositiveMatrix: input not positive definite");
    }

    static PositiveMatrix diagonal(const Spectrum& lambda) {
        return PositiveMatrix(Matrix::diag(std::span<const double>(lambda.values())));
    }

    int dim() const { return d_.rows(); }
    const Matrix& matrix() const { return d_; }
    const std::vector<double>& eigenvalues() const { return eig_.values; }
    const Matrix& eigenvectors() const { return eig_.vectors; }
    Spectrum spectrum() const { return Spectrum(eig_.values); }

    double trace() const { return d_.trace().real(); }

    PositiveMatrix normalized() const { return PositiveMatrix(d_ * (1.0 / trace())); }

    Matrix power(double t) const { return detail::power_of(eig_, t); }

private:
    Matrix d_;
    EigResult eig_;
};

// In D's eigenbasis, multiplies the (i,j) entry by m(l_i, l_j):
//   result = U ((U* A U) o X) U*,  X = mean_matrix(fn, spectrum of D)
inline Matrix apply_mean_map(const MeanFunction& fn, const PositiveMatrix& d, const Matrix& a) {
    if (a.rows() != d.dim() || a.cols() != d.dim())
        throw std::invalid_argument("apply_mean_map: dimension mismatch");
    const Matrix& u = d.eigenvectors();
    const Matrix x = mean_matrix(fn, d.spectrum());
    return u * (u.adjoint() * a * u).hadamard(x) * u.adjoint();
}

// Inverse of apply_mean_map: entrywise multiplication by 1/m(l_i, l_j)
inline Matrix apply_inverse_mean_map(const MeanFunction& fn, const PositiveMatrix& d,
                                     const Matrix& a) {
    if (a.rows() != d.dim() || a.cols() != d.dim())
        throw std::invalid_argument("apply_inverse_mean_map: dimension mismatch");
    const Matrix& u = d.eigenvectors();
    const Matrix t = inverse_mean_matrix(fn, d.spectrum());
    return u * (u.adjoint() * a * u).hadamard(t) * u.adjoint();
}

// Linear map between matrix spaces, held as an action plus its matrix in
// the row-major matrix-unit basis. The basis matrix is built eagerly so a
// constructed SuperOperator is immutable and safe to share.
class SuperOperator {
public:
    SuperOperator(int n_in, int n_out, std::function<Matrix(const Matrix&)> action)
        : n_in_(n_in), n_out_(n_out), action_(std::move(action)),
          hs_(n_out * n_out, n_in * n_in) {
        if (n_in < 1 || n_out < 1) throw std::invalid_argument("SuperOperator: bad dimensions");
        for (int i = 0; i < n_in_; ++i)
            for (int j = 0; j < n_in_; ++j) {
                const Matrix img = action_(Matrix::unit(n_in_, i, j));
                if (img.rows() != n_out_ || img.cols() != n_out_)
                    throw std::invalid_argument("SuperOperator: action has wrong output shape");
                const int col = i * n_in_ + j;
                for (int k = 0; k < n_out_; ++k)
                    for (int l = 0; l < n_out_; ++l) hs_(k * n_out_ + l, col) = img(k, l);
            }
    }

    int n_in() const { return n_in_; }
    int n_out() const { return n_out_; }

    Matrix operator()(const Matrix& a) const {
        if (a.rows() != n_in_ || a.cols() != n_in_)
            throw std::invalid_argument("SuperOperator: input dimension mismatch");
        return action_(a);
    }

    // (n_out^2) x (n_in^2); column (i*n_in+j) is vec of S(E_ij)
    const Matrix& hs_matrix() const { return hs_; }

    // image of E_ij read back from the cached basis matrix
    Matrix basis_image(int i, int j) const {
        Matrix img(n_out_, n_out_);
        const int col = i * n_in_ + j;
        for (int k = 0; k < n_out_; ++k)
            for (int l = 0; l < n_out_; ++l) img(k, l) = hs_(k * n_out_ + l, col);
        return img;
    }

private:
    int n_in_, n_out_;
    std::function<Matrix(const Matrix&)> action_;
    Matrix hs_;
};

inline SuperOperator identity_map(int n) {
    return SuperOperator(n, n, [](const Matrix& a) { return a; });
}

inline SuperOperator hadamard_multiplier(const Matrix& t) {
    if (!t.square()) throw std::invalid_argument("hadamard_multiplier: matrix not square");
    return SuperOperator(t.rows(), t.rows(), [t](const Matrix& a) { return a.hadamard(t); });
}

inline SuperOperator mean_map(const MeanFunction& fn, const PositiveMatrix& d) {
    return SuperOperator(d.dim(), d.dim(),
                         [fn, d](const Matrix& a) { return apply_mean_map(fn, d, a); });
}

inline SuperOperator inverse_mean_map(const MeanFunction& fn, const PositiveMatrix& d) {
    return SuperOperator(d.dim(), d.dim(),
                         [fn, d](const Matrix& a) { return apply_inverse_mean_map(fn, d, a); });
}

// C = sum_ij E_ij (x) S(E_ij); Hermitian iff S preserves Hermiticity,
// positive semidefinite iff S is completely positive.
inline Matrix choi_matrix(const SuperOperator& s) {
    const int ni = s.n_in(), no = s.n_out();
    Matrix c(ni * no, ni * no);
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ni; ++j) {
            const Matrix img = s.basis_image(i, j);
            for (int k = 0; k < no; ++k)
                for (int l = 0; l < no; ++l) c(i * no + k, j * no + l) = img(k, l);
        }
    if (!c.is_hermitian(1e-10))
        throw std::invalid_argument("choi_matrix: map is not Hermiticity-preserving");
    return c.hermitized();
}

inline PsdReport cp_check(const SuperOperator& s, double rel_tol = 1e-10) {
    return psd_check(choi_matrix(s), rel_tol);
}

struct CpEquivalenceResult {
    bool agree = false;
    PsdReport t_report;
    PsdReport choi_report;
};

// T >= 0 and "Hadamard multiplication by T is completely positive" are the
// same statement; both verdicts are computed independently here.
inline CpEquivalenceResult hadamard_cp_equivalence(const MeanFunction& fn, const Spectrum& lambda,
                                       double rel_tol = 1e-10) {
    CpEquivalenceResult r;
    const Matrix t = inverse_mean_matrix(fn, lambda);
    r.t_report = psd_check(t, rel_tol);
    r.choi_report = cp_check(hadamard_multiplier(t), rel_tol);
    r.agree = r.t_report.is_psd == r.choi_report.is_psd;
    return r;
}

inline CpEquivalenceResult hadamard_cp_equivalence_direct(const Matrix& t, double rel_tol = 1e-10) {
    CpEquivalenceResult r;
    r.t_report = psd_check(t, rel_tol);
    r.choi_report = cp_check(hadamard_multiplier(t), rel_tol);
    r.agree = r.t_report.is_psd == r.choi_report.is_psd;
    return r;
}

// Trace-preserving Kraus channel: sum_i K_i* K_i = I
class KrausChannel {
public:
    explicit KrausChannel(std::vector<Matrix> kraus) : k_(std::move(kraus)) {
        if (k_.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
        for (const auto& k : k_)
            if (k.rows() != k_[0].rows() || k.cols() != k_[0].cols())
                throw std::invalid_argument("KrausChannel: inconsistent shapes");
    }

    int n_in() const { return k_[0].cols(); }
    int n_out() const { return k_[0].rows(); }
    const std::vector<Matrix>& kraus() const { return k_; }

    Matrix apply(const Matrix& a) const {
        Matrix r(n_out(), n_out());
        for (const auto& k : k_) r += k * a * k.adjoint();
        return r;
    }

    // Hilbert-Schmidt adjoint: B -> sum_i K_i* B K_i
    Matrix apply_adjoint(const Matrix& b) const {
        Matrix r(n_in(), n_in());
        for (const auto& k : k_) r += k.adjoint() * b * k;
        return r;
    }

    double trace_preservation_defect() const {
        Matrix s(n_in(), n_in());
        for (const auto& k : k_) s += k.adjoint() * k;
        return (s - Matrix::identity(n_in())).max_abs();
    }

    SuperOperator superop() const {
        auto self = *this;
        return SuperOperator(n_in(), n_out(), [self](const Matrix& a) { return self.apply(a); });
    }

private:
    std::vector<Matrix> k_;
};

inline SuperOperator adjoint_channel(const KrausChannel& alpha) {
    return SuperOperator(alpha.n_out(), alpha.n_in(),
                         [alpha](const Matrix& b) { return alpha.apply_adjoint(b); });
}

// Random CPTP channel: a complex Gaussian (n_kraus*n_out) x n_in block is
// orthonormalized into a stacked isometry and cut into Kraus operators.
inline KrausChannel random_cptp(int n_in, int n_out, int n_kraus, std::uint64_t seed) {
    if (n_in < 1 || n_out < 1 || n_kraus < 1)
        throw std::invalid_argument("random_cptp: dimensions must be >= 1");
    if (static_cast<long>(n_kraus) * n_out < n_in)
        throw std::invalid_argument("random_cptp: n_kraus*n_out < n_in, no isometry exists");
    Rng rng = derived_rng(seed, 0);
    const int rows = n_kraus * n_out;
    Matrix g(rows, n_in);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < n_in; ++j) g(i, j) = rng.cnormal();

    // modified Gram-Schmidt on columns
    for (int j = 0; j < n_in; ++j) {
        for (int prev = 0; prev < j; ++prev) {
            cplx proj = 0.0;
            for (int i = 0; i < rows; ++i) proj += std::conj(g(i, prev)) * g(i, j);
            for (int i = 0; i < rows; ++i) g(i, j) -= proj * g(i, prev);
        }
        double nrm = 0.0;
        for (int i = 0; i < rows; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        while (nrm < 1e-8) {  // essentially impossible; redraw keeps determinism
            for (int i = 0; i < rows; ++i) g(i, j) = rng.cnormal();
            for (int prev = 0; prev < j; ++prev) {
                cplx proj = 0.0;
                for (int i = 0; i < rows; ++i) proj += std::conj(g(i, prev)) * g(i, j);
                for (int i = 0; i < rows; ++i) g(i, j) -= proj * g(i, prev);
            }
            nrm = 0.0;
            for (int i = 0; i < rows; ++i) nrm += std::norm(g(i, j));
            nrm = std::sqrt(nrm);
        }
        for (int i = 0; i < rows; ++i) g(i, j) *= 1.0 / nrm;
    }

    std::vector<Matrix> ks;
    ks.reserve(n_kraus);
    for (int b = 0; b < n_kraus; ++b) {
        Matrix k(n_out, n_in);
        for (int i = 0; i < n_out; ++i)
            for (int j = 0; j < n_in; ++j) k(i, j) = g(b * n_out + i, j);
        ks.push_back(std::move(k));
    }
    return KrausChannel(std::move(ks));
}

struct DegenerateChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// orthonormal basis of the real Hermitian subspace of M_n (n^2 elements)
inline std::vector<Matrix> hermitian_basis(int n) {
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) basis.push_back(Matrix::unit(n, i, i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Matrix re(n, n);
            re(i, j) = M_SQRT1_2;
            re(j, i) = M_SQRT1_2;
            basis.push_back(std::move(re));
            Matrix im(n, n);
            im(i, j) = cplx(0.0, M_SQRT1_2);
            im(j, i) = cplx(0.0, -M_SQRT1_2);
            basis.push_back(std::move(im));
        }
    return basis;
}

}  // namespace detail

// Minimal eigenvalue, over the real Hermitian subspace, of the operator
//   A -> inv_mean_map_D(A) - alpha*( inv_mean_map_{alpha(D)}( alpha(A) ) ).
// Nonnegative (up to tolerance) certifies the channel-monotonicity
// inequality of the inverse mean map for this (fn, D, alpha) instance.
// D is normalized to unit trace first.
inline double monotonicity_gap(const MeanFunction& fn, const PositiveMatrix& d,
                               const KrausChannel& alpha) {
    if (alpha.n_in() != d.dim())
        throw std::invalid_argument("monotonicity_gap: channel input dimension mismatch");
    const PositiveMatrix dn = d.normalized();
    const Matrix ad = alpha.apply(dn.matrix()).hermitized();
    {
        const EigResult e = eig_herm(ad);
        if (e.values.front() <= 1e-12)
            throw DegenerateChannelError("monotonicity_gap: alpha(D) is numerically singular");
    }
    const PositiveMatrix adp(ad);

    const int n = d.dim();
    const auto basis = detail::hermitian_basis(n);
    const int dim = static_cast<int>(basis.size());
    Matrix gram(dim, dim);
    for (int b = 0; b < dim; ++b) {
        const Matrix lhs = apply_inverse_mean_map(fn, dn, basis[b]);
        const Matrix rhs =
            alpha.apply_adjoint(apply_inverse_mean_map(fn, adp, alpha.apply(basis[b])));
        const Matrix diff = lhs - rhs;
        for (int a = 0; a < dim; ++a) gram(a, b) = hs_inner(basis[a], diff).real();
    }
    return eig_herm(gram.hermitized()).values.front();
}

}  // namespace meanmat
