#pragma once

// Counterexample search and parameter scans: locate spectra where the
// inverse mean matrix (or the mean matrix) fails to be PSD, and sweep
// parameter grids over seeded random spectra to confirm claimed positivity
// ranges. All searches are deterministic in their seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "meanmat/eig.hpp"
#include "meanmat/functions.hpp"
#include "meanmat/matrix.hpp"
#include "meanmat/mean_matrix.hpp"
#include "meanmat/parallel.hpp"
#include "meanmat/rng.hpp"

namespace meanmat {

enum class SearchStrategy { grid, random, hybrid };
enum class SearchCriterion { min_eig, determinant };

inline const char* to_string(SearchStrategy s) {
    switch (s) {
        case SearchStrategy::grid: return "grid";
        case SearchStrategy::random: return "random";
        default: return "hybrid";
    }
}
inline const char* to_string(SearchCriterion c) {
    return c == SearchCriterion::min_eig ? "min_eig" : "determinant";
}

struct SearchSpec {
    MeanFunction fn;
    int n = 3;
    double lambda_lo = 1e-3;
    double lambda_hi = 1.0;
    SearchStrategy strategy = SearchStrategy::hybrid;
    long budget = 100000;
    std::uint64_t seed = 0;
    SearchCriterion criterion = SearchCriterion::min_eig;

    void validate() const {
        if (n < 2) throw std::invalid_argument("SearchSpec: n must be >= 2");
        if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo))
            throw std::invalid_argument("SearchSpec: need 0 < lo < hi");
        if (budget < 1) throw std::invalid_argument("SearchSpec: budget must be >= 1");
    }
};

struct Witness {
    std::vector<double> lambdas;
    double criterion_value = 0.0;  // min eigenvalue or determinant of T
    std::vector<cplx> vector;      // eigen-witness when available
    std::string seed_trace;        // provenance of the find
};

namespace detail {

inline double determinant_from_eigs(const std::vector<double>& eigs) {
    double d = 1.0;
    for (const double e : eigs) d *= e;
    return d;
}

struct Evaluation {
    double criterion;   // value being minimized
    double min_eig;
    double scale;       // max(1, ||T||_inf)
};

inline Evaluation evaluate_T(const MeanFunction& fn, const std::vector<double>& lam,
                             SearchCriterion crit) {
    const Matrix t = inverse_mean_matrix(fn, Spectrum(lam));
    const EigResult e = eig_herm(t);
    Evaluation ev;
    ev.min_eig = e.values.front();
    ev.scale = std::max(1.0, t.inf_norm());
    ev.criterion = crit == SearchCriterion::min_eig ? ev.min_eig : determinant_from_eigs(e.values);
    return ev;
}

// canonical form: scale so that max(lambda) = 1 (T(c l) = T(l)/c, so
// PSD failures come in scale families)
inline void canonicalize(std::vector<double>& lam) {
    const double m = *std::max_element(lam.begin(), lam.end());
    for (double& x : lam) x /= m;
    std::sort(lam.begin(), lam.end());
}

}  // namespace detail

// Searches for a spectrum with a negative PSD criterion of the inverse
// mean matrix. Returns nullopt when the budget is exhausted without a
// find; that is evidence, not a proof, of positivity.
inline std::optional<Witness> find_negative_witness(const SearchSpec& spec, int jobs = 1) {
    spec.validate();

    struct Candidate {
        double criterion = 1e300;
        double min_eig = 1e300;
        double scale = 1.0;
        std::vector<double> lam;
        std::string trace;
    };

    auto better = [](const Candidate& a, const Candidate& b) {
        if (a.criterion != b.criterion) return a.criterion < b.criterion;
        return a.lam < b.lam;  // deterministic tie-break
    };

    Candidate best;
    long spent = 0;

    const double lo = spec.lambda_lo / spec.lambda_hi;  // canonical lower end

    // --- grid phase -------------------------------------------------------
    if (spec.strategy == SearchStrategy::grid || spec.strategy == SearchStrategy::hybrid) {
        const long grid_budget =
            spec.strategy == SearchStrategy::grid ? spec.budget : spec.budget / 2;
        const int free_dims = spec.n - 1;
        int per_dim = static_cast<int>(std::floor(std::pow(static_cast<double>(grid_budget),
                                                           1.0 / free_dims)));
        per_dim = std::max(2, std::min(per_dim, 200));
        long cells = 1;
        for (int d = 0; d < free_dims; ++d) cells *= per_dim;

        std::vector<double> axis(static_cast<std::size_t>(per_dim));
        for (int k = 0; k < per_dim; ++k)
            axis[static_cast<std::size_t>(k)] =
                std::exp(std::log(lo) + (std::log(1.0) - std::log(lo)) * k / (per_dim - 1));

        std::vector<Candidate> results(static_cast<std::size_t>(cells));
        parallel_for_index(cells, jobs, [&](long cell) {
            std::vector<double> lam(static_cast<std::size_t>(spec.n), 1.0);
            long rest = cell;
            for (int d = 0; d < free_dims; ++d) {
                lam[static_cast<std::size_t>(d)] = axis[static_cast<std::size_t>(rest % per_dim)];
                rest /= per_dim;
            }
            detail::canonicalize(lam);
            const auto ev = detail::evaluate_T(spec.fn, lam, spec.criterion);
            results[static_cast<std::size_t>(cell)] = Candidate{
                ev.criterion, ev.min_eig, ev.scale, std::move(lam),
                "grid:" + std::to_string(cell)};
        });
        for (auto& c : results)
            if (better(c, best)) best = std::move(c);
        spent += cells;
    }

    // --- random phase ------------------------------------------------------
    if (spec.strategy == SearchStrategy::random || spec.strategy == SearchStrategy::hybrid) {
        const long random_budget =
            spec.strategy == SearchStrategy::random ? spec.budget : spec.budget / 4;
        const long trials = std::max<long>(0, random_budget);
        std::vector<Candidate> results(static_cast<std::size_t>(trials));
        parallel_for_index(trials, jobs, [&](long k) {
            Rng rng = derived_rng(spec.seed, static_cast<std::uint64_t>(k));
            std::vector<double> lam =
                random_log_spectrum(spec.n, spec.lambda_lo, spec.lambda_hi, rng);
            detail::canonicalize(lam);
            const auto ev = detail::evaluate_T(spec.fn, lam, spec.criterion);
            results[static_cast<std::size_t>(k)] = Candidate{
                ev.criterion, ev.min_eig, ev.scale, std::move(lam),
                "random:" + std::to_string(k)};
        });
        for (auto& c : results)
            if (better(c, best)) best = std::move(c);
        spent += trials;
    }

    // --- local refinement around the incumbent -----------------------------
    if (spec.strategy == SearchStrategy::hybrid && !best.lam.empty()) {
        long remaining = spec.budget - spent;
        Rng rng = derived_rng(spec.seed, 0xFFFF);
        double step = 0.5;
        long iter = 0;
        while (remaining > 0) {
            std::vector<double> lam = best.lam;
            for (double& x : lam) {
                x *= std::exp(step * rng.normal());
                x = std::min(std::max(x, lo * 1e-3), 1.0);
            }
            detail::canonicalize(lam);
            const auto ev = detail::evaluate_T(spec.fn, lam, spec.criterion);
            Candidate c{ev.criterion, ev.min_eig, ev.scale, std::move(lam),
                        "refine:" + std::to_string(iter)};
            if (better(c, best))
                best = std::move(c);
            else
                step *= 0.995;  // slowly contract when not improving
            --remaining;
            ++iter;
        }
    }

    // negativity must clear the same relative threshold psd_check applies
    if (best.min_eig >= -1e-10 * best.scale) return std::nullopt;

    Witness w;
    w.lambdas = best.lam;
    w.criterion_value = best.criterion;
    w.seed_trace = "seed=" + std::to_string(spec.seed) + ";" + best.trace;
    const PsdReport rep = psd_check(inverse_mean_matrix(spec.fn, Spectrum(best.lam)));
    w.vector = rep.witness;
    return w;
}

// re-evaluates the witness; true when the stored criterion reproduces
inline bool revalidate(const MeanFunction& fn, const Witness& w, SearchCriterion crit,
                       double rel_tol = 1e-12) {
    const auto ev = detail::evaluate_T(fn, w.lambdas, crit);
    return std::abs(ev.criterion - w.criterion_value) <=
           rel_tol * std::max(1.0, std::abs(w.criterion_value));
}

enum class ScanTarget { inverse_mean, mean };

struct ScanRow {
    double param = 0.0;
    double worst_min_eig = 0.0;
    double worst_scale = 1.0;  // max(1, ||.||_inf) at the worst spectrum
    std::vector<double> worst_lambda;
    bool claimed = false;      // inside the claimed-positive parameter range
    bool violation = false;    // claimed && worst_min_eig < -1e-10 * scale
};

struct ScanReport {
    Family family{};
    ScanTarget target = ScanTarget::inverse_mean;
    int n = 0;
    int spectra_per_point = 0;
    std::uint64_t seed = 0;
    std::vector<ScanRow> rows;
    int violations = 0;
};

// For each parameter value, builds T (or X) over seeded random spectra and
// records the most negative eigenvalue. Violations are only flagged inside
// the claimed range; outside it the rows are exploratory data.
inline ScanReport scan_psd(Family family, std::span<const double> params, int n,
                           int spectra_per_point, std::uint64_t seed, ScanTarget target,
                           int jobs = 1, double spectra_lo = 1e-2, double spectra_hi = 1e2) {
    if (n < 2) throw std::invalid_argument("scan_psd: n must be >= 2");
    if (spectra_per_point < 1) throw std::invalid_argument("scan_psd: spectra_per_point >= 1");
    ScanReport rep;
    rep.family = family;
    rep.target = target;
    rep.n = n;
    rep.spectra_per_point = spectra_per_point;
    rep.seed = seed;
    rep.rows.resize(params.size());

    const bool has_param = detail::family_info(family).has_param;
    parallel_for_index(static_cast<long>(params.size()), jobs, [&](long pi) {
        const double p = params[static_cast<std::size_t>(pi)];
        const MeanFunction fn = has_param ? MeanFunction(family, p) : MeanFunction(family);
        ScanRow row;
        row.param = p;
        row.claimed =
            target == ScanTarget::inverse_mean ? claims_inverse_mean_psd(fn) : claims_mean_psd(fn);
        row.worst_min_eig = 1e300;
        for (int s = 0; s < spectra_per_point; ++s) {
            Rng rng = derived_rng(seed, static_cast<std::uint64_t>(pi) * 1000003ULL +
                                            static_cast<std::uint64_t>(s));
            std::vector<double> lam = random_log_spectrum(n, spectra_lo, spectra_hi, rng);
            const Matrix m = target == ScanTarget::inverse_mean
                                 ? inverse_mean_matrix(fn, Spectrum(lam))
                                 : mean_matrix(fn, Spectrum(lam));
            const EigResult e = eig_herm(m);
            if (e.values.front() < row.worst_min_eig) {
                row.worst_min_eig = e.values.front();
                row.worst_scale = std::max(1.0, m.inf_norm());
                row.worst_lambda = lam;
            }
        }
        row.violation = row.claimed && row.worst_min_eig < -1e-10 * row.worst_scale;
        rep.rows[static_cast<std::size_t>(pi)] = std::move(row);
    });
    for (const auto& r : rep.rows) rep.violations += r.violation ? 1 : 0;
    return rep;
}

inline ScanReport scan_positivity(Family family, std::span<const double> params, int n,
                                  int spectra_per_point, std::uint64_t seed, int jobs = 1) {
    return scan_psd(family, params, n, spectra_per_point, seed, ScanTarget::inverse_mean, jobs);
}

inline ScanReport scan_mean_matrix_positivity(Family family, std::span<const double> params, int n,
                                              int spectra_per_point, std::uint64_t seed,
                                              int jobs = 1) {
    return scan_psd(family, params, n, spectra_per_point, seed, ScanTarget::mean, jobs);
}

struct PointwiseReport {
    long points = 0;
    long violations = 0;
    double worst_defect = 0.0;  // positive amount by which an inequality failed
    double worst_primary = 0.0;   // t (or lambda) at the worst point
    double worst_secondary = 0.0; // x (or t) at the worst point
};

// f_t(x) >= sqrt(x) on (0,1), along with the sharper intermediate
// inequality t(x-1)/(x^t-1) >= x^{(1-t)/2}
inline PointwiseReport verify_wyd_sqrt_domination(std::span<const double> t_grid,
                                               std::span<const double> x_grid) {
    PointwiseReport rep;
    for (const double t : t_grid) {
        if (!(t > 0.0 && t < 1.0))
            throw std::invalid_argument("verify_wyd_sqrt_domination: t must be in (0,1)");
        const MeanFunction fn(Family::wyd_efek, t);
        for (const double x : x_grid) {
            if (!(x > 0.0)) throw std::invalid_argument("verify_wyd_sqrt_domination: x must be > 0");
            const double s = std::sqrt(x);
            const double tol = 1e-12 * std::max(1.0, s);
            const double final_defect = s - fn(x);
            // t(x-1)/(x^t-1) = 1/h_t(x-1)
            const double ratio = 1.0 / detail::power_ratio_h(t, x - 1.0);
            const double inter_defect = std::pow(x, 0.5 * (1.0 - t)) - ratio;
            const double defect = std::max(final_defect, inter_defect);
            ++rep.points;
            if (defect > tol) {
                ++rep.violations;
                if (defect > rep.worst_defect) {
                    rep.worst_defect = defect;
                    rep.worst_primary = t;
                    rep.worst_secondary = x;
                }
            }
        }
    }
    return rep;
}

// g(t) = sinh(l t) sinh(l (t-1)) - l t (t-1) sinh(l) stays nonnegative and
// vanishes at t = 0, 1; the derivative-sign argument behind the
// power-difference t-monotonicity.
inline PointwiseReport verify_power_diff_deriv_sign(std::span<const double> lambda_grid,
                                         std::span<const double> t_grid) {
    PointwiseReport rep;
    auto g = [](double l, double t) {
        return std::sinh(l * t) * std::sinh(l * (t - 1.0)) - l * t * (t - 1.0) * std::sinh(l);
    };
    for (const double l : lambda_grid) {
        if (l == 0.0) throw std::invalid_argument("verify_power_diff_deriv_sign: lambda must be nonzero");
        for (const double t : t_grid) {
            ++rep.points;
            const double defect = -g(l, t);
            if (defect > 1e-12) {
                ++rep.violations;
                if (defect > rep.worst_defect) {
                    rep.worst_defect = defect;
                    rep.worst_primary = l;
                    rep.worst_secondary = t;
                }
            }
        }
        // endpoints vanish identically
        for (const double t0 : {0.0, 1.0}) {
            ++rep.points;
            const double defect = std::abs(g(l, t0));
            if (defect > 1e-12) {
                ++rep.violations;
                if (defect > rep.worst_defect) {
                    rep.worst_defect = defect;
                    rep.worst_primary = l;
                    rep.worst_secondary = t0;
                }
            }
        }
    }
    return rep;
}

}  // namespace meanmat
