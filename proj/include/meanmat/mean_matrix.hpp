#pragma once

// Mean matrices X_ij = m(l_i, l_j), their entrywise reciprocals T, Loewner
// matrices, scalar functional calculus f(A), two-variable matrix means, and
// the random-pair monotonicity probe.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "meanmat/eig.hpp"
#include "meanmat/functions.hpp"
#include "meanmat/matrix.hpp"
#include "meanmat/parallel.hpp"
#include "meanmat/rng.hpp"

namespace meanmat {

// strictly positive eigenvalue tuple
class Spectrum {
public:
    explicit Spectrum(std::vector<double> values) : v_(std::move(values)) {
        if (v_.empty()) throw std::invalid_argument("Spectrum: empty");
        for (const double x : v_)
            if (!(x > 0.0)) throw std::invalid_argument("Spectrum: entries must be > 0");
    }
    Spectrum(std::initializer_list<double> values) : Spectrum(std::vector<double>(values)) {}

    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return v_; }

private:
    std::vector<double> v_;
};

// X_ij = m(l_i, l_j); symmetric by construction, X_ii = l_i exactly
inline Matrix mean_matrix(const MeanFunction& fn, const Spectrum& lambda) {
    const int n = lambda.size();
    Matrix x(n, n);
    for (int i = 0; i < n; ++i) {
        x(i, i) = lambda[i];
        for (int j = i + 1; j < n; ++j) {
            const double m = fn.mean(lambda[i], lambda[j]);
            x(i, j) = m;
            x(j, i) = m;
        }
    }
    return x;
}

// T_ij = 1/m(l_i, l_j)
inline Matrix inverse_mean_matrix(const MeanFunction& fn, const Spectrum& lambda) {
    const int n = lambda.size();
    Matrix t(n, n);
    for (int i = 0; i < n; ++i) {
        t(i, i) = 1.0 / lambda[i];
        for (int j = i + 1; j < n; ++j) {
            const double v = 1.0 / fn.mean(lambda[i], lambda[j]);
            t(i, j) = v;
            t(j, i) = v;
        }
    }
    return t;
}

struct ScalarFunction {
    std::function<double(double)> f;
    std::function<double(double)> df;
};

// L_ij = (g(l_i) - g(l_j))/(l_i - l_j), L_ii = g'(l_i); nearly equal
// eigenvalues (within 1e-8 relative) use the derivative at the midpoint.
inline Matrix loewner_matrix(const ScalarFunction& g, const Spectrum& lambda) {
    if (!g.f || !g.df) throw std::invalid_argument("loewner_matrix: f and df required");
    const int n = lambda.size();
    Matrix l(n, n);
    for (int i = 0; i < n; ++i) {
        l(i, i) = g.df(lambda[i]);
        for (int j = i + 1; j < n; ++j) {
            const double a = lambda[i], b = lambda[j];
            double v;
            if (std::abs(a - b) < 1e-8 * std::max(a, b))
                v = g.df(0.5 * (a + b));
            else
                v = (g.f(a) - g.f(b)) / (a - b);
            l(i, j) = v;
            l(j, i) = v;
        }
    }
    return l;
}

// f(A) = V f(Lambda) V* for Hermitian A
inline Matrix fun_calc(const std::function<double(double)>& f, const Matrix& a) {
    const EigResult e = eig_herm(a);
    const int n = a.rows();
    Matrix r(n, n);
    for (int k = 0; k < n; ++k) {
        const double fk = f(e.values[k]);
        for (int i = 0; i < n; ++i) {
            const cplx vik = e.vectors(i, k) * fk;
            for (int j = 0; j < n; ++j) r(i, j) += vik * std::conj(e.vectors(j, k));
        }
    }
    return r.hermitized();
}

// catalog version: domain (0,inf) enforced on the spectrum
inline Matrix fun_calc(const MeanFunction& fn, const Matrix& a) {
    const EigResult e = eig_herm(a);
    for (const double v : e.values)
        if (!(v > 0.0)) throw std::domain_error("fun_calc: spectrum outside (0,inf)");
    return fun_calc([&fn](double x) { return fn(x); }, a);
}

namespace detail {

inline Matrix power_of(const EigResult& e, double t) {
    const int n = static_cast<int>(e.values.size());
    Matrix r(n, n);
    for (int k = 0; k < n; ++k) {
        const double fk = std::pow(e.values[k], t);
        for (int i = 0; i < n; ++i) {
            const cplx vik = e.vectors(i, k) * fk;
            for (int j = 0; j < n; ++j) r(i, j) += vik * std::conj(e.vectors(j, k));
        }
    }
    return r.hermitized();
}

}  // namespace detail

// M_f(A,B) = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}
inline Matrix matrix_mean(const MeanFunction& fn, const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix_mean: dimension mismatch");
    const EigResult ea = eig_herm(a);
    if (ea.values.front() <= 0.0) throw std::domain_error("matrix_mean: A not positive definite");
    const Matrix a_half = detail::power_of(ea, 0.5);
    const Matrix a_minus_half = detail::power_of(ea, -0.5);
    const Matrix inner = (a_minus_half * b * a_minus_half).hermitized();
    return (a_half * fun_calc(fn, inner) * a_half).hermitized();
}

struct MonotonePairReport {
    int trials = 0;
    int violations = 0;
    double worst_min_eig = 0.0;  // most negative eigenvalue of f(B)-f(A) seen
    std::uint64_t seed = 0;
    int worst_trial = -1;
};

// Samples A = P, B = P + Q with P,Q = G G^T (real standard normal G, seeded
// per trial) and reports the spectrum of f(B) - f(A). A matrix monotone f
// never yields a negative eigenvalue beyond roundoff.
inline MonotonePairReport monotone_pair_test(const std::function<double(double)>& f, int dim,
                                             int trials, std::uint64_t seed,
                                             double rel_tol = 1e-10, int jobs = 1) {
    if (dim < 1 || dim > 8) throw std::invalid_argument("monotone_pair_test: dim must be in [1,8]");
    if (trials < 1) throw std::invalid_argument("monotone_pair_test: trials must be >= 1");
    MonotonePairReport rep;
    rep.trials = trials;
    rep.seed = seed;
    std::vector<double> mins(static_cast<std::size_t>(trials));
    std::vector<double> scales(static_cast<std::size_t>(trials));
    parallel_for_index(trials, jobs, [&](long k) {
        Rng rng = derived_rng(seed, static_cast<std::uint64_t>(k));
        // small positive shift keeps the spectra inside f's domain
        const Matrix p = random_real_psd(dim, rng) + 1e-3 * Matrix::identity(dim);
        const Matrix q = random_real_psd(dim, rng);
        const Matrix fa = fun_calc(f, p);
        const Matrix fb = fun_calc(f, p + q);
        const EigResult d = eig_herm(fb - fa);
        mins[static_cast<std::size_t>(k)] = d.values.front();
        scales[static_cast<std::size_t>(k)] = std::max(1.0, (fb - fa).inf_norm());
    });
    rep.worst_min_eig = 0.0;
    for (int k = 0; k < trials; ++k) {
        const double m = mins[static_cast<std::size_t>(k)];
        if (m < -rel_tol * scales[static_cast<std::size_t>(k)]) ++rep.violations;
        if (m < rep.worst_min_eig) {
            rep.worst_min_eig = m;
            rep.worst_trial = k;
        }
    }
    return rep;
}

inline MonotonePairReport monotone_pair_test(const MeanFunction& fn, int dim, int trials,
                                             std::uint64_t seed, double rel_tol = 1e-10,
                                             int jobs = 1) {
    return monotone_pair_test([&fn](double x) { return fn(x); }, dim, trials, seed, rel_tol, jobs);
}

}  // namespace meanmat
