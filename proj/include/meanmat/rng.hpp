#pragma once

// Seeded splitmix-style PRNG plus the random objects used by scans and
// channel generation. Everything here is reproducible from (seed, index):
// no global state, no libc rand, no distribution objects with unspecified
// algorithms.

#include <cstdint>
#include <cmath>
#include <vector>

#include "meanmat/matrix.hpp"

namespace meanmat {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // splitmix64 step
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Box-Muller; second value cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx cnormal() { return cplx(normal(), normal()) * M_SQRT1_2; }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Independent stream for (seed, index) pairs, so parallel trials stay
// reproducible regardless of scheduling.
inline Rng derived_rng(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    return Rng(mix.next_u64());
}

// G * G^T with real standard-normal G; real symmetric PSD
inline Matrix random_real_psd(int n, Rng& rng) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    return g * g.transpose();
}

inline Matrix random_complex_psd(int n, Rng& rng) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
    return g * g.adjoint();
}

inline Matrix random_hermitian(int n, Rng& rng) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
    return g.hermitized();
}

inline std::vector<double> random_log_spectrum(int n, double lo, double hi, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.log_uniform(lo, hi);
    return v;
}

}  // namespace meanmat
