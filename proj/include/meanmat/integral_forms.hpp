#pragma once

// Quadrature-backed implementations of the integral and series
// representations of the inverse mean map, used as independent cross-checks
// of the Hadamard-product route. Nested integrals grade tolerances by a
// factor of 10 per level.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "meanmat/matrix.hpp"
#include "meanmat/mean_matrix.hpp"
#include "meanmat/quadrature.hpp"
#include "meanmat/superop.hpp"

namespace meanmat {

namespace detail {

template <class F>
Matrix spectral_apply(const PositiveMatrix& d, F&& f) {
    const auto& lam = d.eigenvalues();
    std::vector<cplx> fl(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) fl[i] = f(lam[i]);
    const Matrix& u = d.eigenvectors();
    return u * Matrix::diag(fl) * u.adjoint();
}

inline Matrix exp_scaled(const PositiveMatrix& d, double s) {
    return spectral_apply(d, [s](double l) { return std::exp(-s * l); });
}

inline Matrix resolvent(const PositiveMatrix& d, double s) {
    return spectral_apply(d, [s](double l) { return 1.0 / (l + s); });
}

// Inner integrals of nested forms must converge in *relative* terms: the
// outer tail transform probes them at points where their values are tiny,
// and an absolute cutoff there would freeze large relative errors into a
// non-negligible share of the outer integral.
inline QuadratureSpec nested(const QuadratureSpec& outer, int max_sub) {
    return QuadratureSpec{1e-300, std::max(outer.rel_tol, outer.abs_tol) / 10.0, max_sub};
}

}  // namespace detail

// 2 int_0^inf exp(-sD) A exp(-sD) ds; equals the inverse mean map for the
// arithmetic mean
inline Matrix arith_exp_integral(const PositiveMatrix& d, const Matrix& a,
                                  const QuadratureSpec& q = {}) {
    auto f = [&](double s) {
        const Matrix e = detail::exp_scaled(d, s);
        return e * a * e;
    };
    const auto r = integrate_half_line(f, q);
    return require_converged(r, "arith_exp_integral") * 2.0;
}

// int_0^inf (D+t)^{-1} A (D+t)^{-1} dt; the logarithmic-mean inverse map
inline Matrix log_resolvent_integral(const PositiveMatrix& d, const Matrix& a,
                                const QuadratureSpec& q = {}) {
    auto f = [&](double s) {
        const Matrix res = detail::resolvent(d, s);
        return res * a * res;
    };
    const auto r = integrate_half_line(f, q);
    return require_converged(r, "log_resolvent_integral");
}

// Solves D^t Y D^{1-t} + D^{1-t} Y D^t = 2A through the Sylvester-equation
// integral Y = int exp(-s D^{1-2t}) (2 D^{-t} A D^{-t}) exp(-s D^{1-2t}) ds.
// t = 1/2 short-circuits to D^{-1/2} A D^{-1/2}.
inline Matrix heinz_sylvester_integral(double t, const PositiveMatrix& d, const Matrix& a,
                                   const QuadratureSpec& q = {}) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("heinz_sylvester_integral: t must be in [0,1]");
    const Matrix d_mt = d.power(-t);
    if (std::abs(t - 0.5) <= 1e-12) return (d_mt * a * d_mt).hermitized();
    const PositiveMatrix b(d.power(1.0 - 2.0 * t));
    const Matrix rhs = 2.0 * (d_mt * a * d_mt);
    auto f = [&](double s) {
        const Matrix e = detail::exp_scaled(b, s);
        return e * rhs * e;
    };
    const auto r = integrate_half_line(f, q);
    return require_converged(r, "heinz_sylvester_integral");
}

// divided_difference_map(A) = (sin(pi t)/pi) int_0^inf s^t (D+s)^{-1} A (D+s)^{-1} ds;
// for diagonal D this is Hadamard multiplication by the divided-difference
// matrix of x^t.
inline Matrix divided_difference_map(const PositiveMatrix& d, const Matrix& a, double t,
                      const QuadratureSpec& q = {1e-9, 1e-9, 500}) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("divided_difference_map: t must be in (0,1)");
    auto f = [&](double s) {
        const Matrix res = detail::resolvent(d, s);
        return (res * a * res) * std::pow(s, t);
    };
    const auto r = integrate_half_line(f, q);
    return require_converged(r, "divided_difference_map") * (std::sin(M_PI * t) / M_PI);
}

// Inverse mean map of the two-parameter interpolation family as a nested
// double integral over resolvents,
//   (sin(pi t) sin(pi(1-t)) / (pi^2 t (1-t))) *
//       intint r^{1-t} s^t (D+r)^{-1}(D+s)^{-1} A (D+s)^{-1}(D+r)^{-1} ds dr.
inline Matrix wyd_double_integral(double t, const PositiveMatrix& d, const Matrix& a,
                                       const QuadratureSpec& q = {1e-6, 1e-6, 500}) {
    if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("wyd_double_integral: t must be in (0,1)");
    const QuadratureSpec inner_spec = detail::nested(q, 200);
    auto outer = [&](double r) {
        const Matrix res_r = detail::resolvent(d, r);
        auto inner = [&](double s) {
            const Matrix res_s = detail::resolvent(d, s);
            return (res_r * res_s * a * res_s * res_r) * std::pow(s, t);
        };
        const auto ri = integrate_half_line(inner, inner_spec);
        return require_converged(ri, "wyd_double_integral inner") * std::pow(r, 1.0 - t);
    };
    const auto r = integrate_half_line(outer, q);
    const double pref =
        std::sin(M_PI * t) * std::sin(M_PI * (1.0 - t)) / (M_PI * M_PI * t * (1.0 - t));
    return require_converged(r, "wyd_double_integral") * pref;
}

// the t = 1/2 exponential form: 4 intint exp(-(s+r) sqrt(D)) A exp(...) ds dr
inline Matrix binomial_exp_double_integral(const PositiveMatrix& d, const Matrix& a,
                                       const QuadratureSpec& q = {1e-6, 1e-6, 500}) {
    const PositiveMatrix root(d.power(0.5));
    const QuadratureSpec inner_spec = detail::nested(q, 200);
    auto outer = [&](double r) {
        auto inner = [&](double s) {
            const Matrix e = detail::exp_scaled(root, s + r);
            return e * a * e;
        };
        const auto ri = integrate_half_line(inner, inner_spec);
        return require_converged(ri, "binomial_exp_double_integral inner");
    };
    const auto r = integrate_half_line(outer, q);
    return require_converged(r, "binomial_exp_double_integral") * 4.0;
}

// Triple-integral representation of 1/f_t(x) for the interpolation family:
//   (sin(t pi)/pi) int_0^inf dl l^{t-1} int_0^1 ds int_0^1 dr
//       1 / (x((1-r)l + (1-s)) + (r l + s))
inline double wyd_reciprocal_triple_integral(double t, double x, const QuadratureSpec& q = {1e-5, 1e-5, 600}) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("wyd_reciprocal_triple_integral: t must be in (0,1)");
    if (!(x > 0.0)) throw std::domain_error("wyd_reciprocal_triple_integral: x must be positive");
    const QuadratureSpec mid_spec = detail::nested(q, 200);
    const QuadratureSpec inner_spec = detail::nested(mid_spec, 100);
    auto outer = [&](double l) {
        auto mid = [&](double s) {
            auto inner = [&](double r) {
                return 1.0 / (x * ((1.0 - r) * l + (1.0 - s)) + (r * l + s));
            };
            const auto ri = integrate_adaptive(inner, 0.0, 1.0, inner_spec);
            return require_converged(ri, "wyd_reciprocal_triple_integral inner");
        };
        const auto rm = integrate_adaptive(mid, 0.0, 1.0, mid_spec);
        return require_converged(rm, "wyd_reciprocal_triple_integral mid") * std::pow(l, t - 1.0);
    };
    const auto r = integrate_half_line(outer, q);
    return require_converged(r, "wyd_reciprocal_triple_integral") * (std::sin(t * M_PI) / M_PI);
}

// a_k of (1-x)^{-alpha} = sum a_k x^k, i.e. a_k = Gamma(alpha+k)/(Gamma(alpha) k!)
inline std::vector<double> hansen_series_coefficients(double alpha, int kmax) {
    if (!(alpha > 0.0)) throw std::invalid_argument("hansen_series_coefficients: alpha <= 0");
    std::vector<double> a(static_cast<std::size_t>(kmax) + 1);
    a[0] = 1.0;
    for (int k = 0; k < kmax; ++k)
        a[static_cast<std::size_t>(k) + 1] = a[static_cast<std::size_t>(k)] * (alpha + k) / (k + 1);
    return a;
}

struct HansenSeries {
    Matrix partial_sum;   // S_K, sum of the rank-one terms k = 0..K
    double tail_bound;    // upper bound on ||T - S_K||_F
    int terms;            // K + 1
};

// Rank-one series for the inverse mean matrix of the arithmetic-harmonic
// interpolation family at 0 < t < 1/2:
//   T_ij = 2^{1-2t} sum_k a_k u_i^(k) u_j^(k),
//   u_i^(k) = (l_i - 1/2)^k / ((l_i + 1/2)^{k+alpha} l_i^t),  alpha = 1-2t.
// Every term is PSD, so partial sums increase monotonically to T.
inline HansenSeries hansen_series_T(double t, const Spectrum& lambda, int K) {
    if (!(t > 0.0 && t < 0.5))
        throw std::invalid_argument("hansen_series_T: t must be in (0, 1/2)");
    if (K < 0) throw std::invalid_argument("hansen_series_T: K must be >= 0");
    const double alpha = 1.0 - 2.0 * t;
    const int n = lambda.size();

    const double pref = std::pow(2.0, alpha);
    double w_max = 0.0, c_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double li = lambda[i];
        w_max = std::max(w_max, std::abs(li - 0.5) / (li + 0.5));
        c_sum += std::pow(li + 0.5, -2.0 * alpha) * std::pow(li, -2.0 * t);
    }

    Matrix s(n, n);
    std::vector<double> u(static_cast<std::size_t>(n));
    double a_k = 1.0;
    for (int k = 0; k <= K; ++k) {
        for (int i = 0; i < n; ++i) {
            const double li = lambda[i];
            u[static_cast<std::size_t>(i)] = std::pow(li - 0.5, k) /
                                             (std::pow(li + 0.5, k + alpha) * std::pow(li, t));
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s(i, j) += pref * a_k * u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)];
        a_k *= (alpha + k) / (k + 1);
    }

    HansenSeries out;
    out.partial_sum = std::move(s);
    // a_k decreases in k (alpha < 1), so the tail is dominated by a geometric series
    out.tail_bound = (w_max < 1.0)
                         ? pref * c_sum * a_k * std::pow(w_max, 2.0 * (K + 1)) / (1.0 - w_max * w_max)
                         : std::numeric_limits<double>::infinity();
    out.terms = K + 1;
    return out;
}

}  // namespace meanmat
