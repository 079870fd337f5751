#pragma once

// Hermitian eigendecomposition by cyclic Jacobi rotations, and PSD testing
// with witness extraction. Deterministic, dependency-free, and accurate to
// ~1e-14 * ||A|| at the sizes used here (n <= 64).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "meanmat/matrix.hpp"

namespace meanmat {

struct EigResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns; A = V diag(values) V*
};

namespace detail {

inline double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
}

}  // namespace detail

inline EigResult eig_herm(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("eig_herm: matrix not square");
    if (!m.is_hermitian(1e-10))
        throw std::invalid_argument("eig_herm: matrix not Hermitian");

    const int n = m.rows();
    Matrix a = m.hermitized();
    Matrix v = Matrix::identity(n);

    const double scale = std::max(a.max_abs(), 1e-300);
    const double stop = 1e-15 * scale * n;

    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (detail::offdiag_norm(a) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx b = a(p, q);
                const double absb = std::abs(b);
                if (absb <= 1e-300) continue;
                // annihilate a(p,q) with the plane rotation
                //   R = [[c, sigma], [-conj(sigma), c]],  sigma = s * b/|b|
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * absb);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;
                const cplx phase = b / absb;
                const cplx sigma = s * phase;

                // columns p,q of A
                for (int i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - std::conj(sigma) * aiq;
                    a(i, q) = sigma * aip + c * aiq;
                }
                // rows p,q of A
                for (int j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - sigma * aqj;
                    a(q, j) = std::conj(sigma) * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                // accumulate V <- V R
                for (int i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - std::conj(sigma) * viq;
                    v(i, q) = sigma * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigResult r;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        r.values[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

struct PsdReport {
    double min_eig = 0.0;
    bool is_psd = true;
    std::vector<cplx> witness;  // unit vector with <w, M w> = min_eig; empty when PSD
    double tol_used = 0.0;      // absolute threshold applied to min_eig
};

// is_psd  <=>  min_eig >= -rel_tol * max(1, ||M||_inf)
inline PsdReport psd_check(const Matrix& m, double rel_tol = 1e-10) {
    if (rel_tol < 0.0) throw std::invalid_argument("psd_check: negative tolerance");
    const EigResult e = eig_herm(m);
    PsdReport r;
    r.min_eig = e.values.front();
    r.tol_used = rel_tol * std::max(1.0, m.inf_norm());
    r.is_psd = r.min_eig >= -r.tol_used;
    if (!r.is_psd) {
        r.witness.resize(m.rows());
        for (int i = 0; i < m.rows(); ++i) r.witness[i] = e.vectors(i, 0);
    }
    return r;
}

}  // namespace meanmat
