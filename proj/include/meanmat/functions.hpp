#pragma once

// Catalog of standard mean-generating functions f:(0,inf)->(0,inf) with
// f(1)=1 and x f(1/x)=f(x), their scalar means m(x,y) = x f(y/x), and the
// pointwise checks used throughout the library.
//
// Parameterized families evaluate through the helper
//     h_a(u) = ((1+u)^a - 1) / (a u)      (a=0: log1p(u)/u, u=0: 1)
// computed via expm1/log1p, which keeps full relative accuracy across the
// removable singularity at x = 1 with a single code path.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace meanmat {

enum class Family {
    arithmetic,
    harmonic,
    geometric,
    logarithmic,
    heinz,
    hansen,
    wyd_efek,
    power_difference,
    ando_mix,
    tx_interp,
    stolarsky,
    binomial,
    identric,
};

namespace detail {

struct FamilyInfo {
    const char* name;
    bool has_param;
    double lo, hi;
    bool open_lo, open_hi;
};

inline const FamilyInfo& family_info(Family f) {
    static const FamilyInfo table[] = {
        {"arithmetic", false, 0, 0, false, false},
        {"harmonic", false, 0, 0, false, false},
        {"geometric", false, 0, 0, false, false},
        {"logarithmic", false, 0, 0, false, false},
        {"heinz", true, 0.0, 1.0, false, false},
        {"hansen", true, 0.0, 1.0, false, false},
        {"wyd_efek", true, 0.0, 1.0, true, true},
        {"power_difference", true, -1.0, 2.0, false, false},
        {"ando_mix", false, 0, 0, false, false},
        {"tx_interp", true, 0.0, 1.0, false, false},
        {"stolarsky", true, -2.0, 2.0, false, false},
        {"binomial", true, -1.0, 1.0, false, false},
        {"identric", false, 0, 0, false, false},
    };
    return table[static_cast<int>(f)];
}

// h_a(u) = ((1+u)^a - 1)/(a u); the shared primitive behind the families
// with a removable singularity at x = 1+u = 1.
inline double power_ratio_h(double a, double u) {
    if (u == 0.0) return 1.0;
    const double l = std::log1p(u);
    if (a == 0.0) return l / u;
    return std::expm1(a * l) / (a * u);
}

inline double eval_logarithmic(double x) { return 1.0 / power_ratio_h(0.0, x - 1.0); }

inline double eval_identric(double x) {
    const double u = x - 1.0;
    return std::exp((1.0 + u) * power_ratio_h(0.0, u) - 1.0);
}

inline double eval_stolarsky(double p, double x) {
    if (std::abs(p) < 1e-8) return eval_logarithmic(x);
    if (std::abs(p - 1.0) < 1e-8) return eval_identric(x);
    const double h = power_ratio_h(p, x - 1.0);
    return std::exp(-std::log(h) / (1.0 - p));
}

}  // namespace detail

inline const char* family_name(Family f) { return detail::family_info(f).name; }

class MeanFunction {
public:
    explicit MeanFunction(Family f) : family_(f) {
        if (detail::family_info(f).has_param)
            throw std::invalid_argument(std::string(family_name(f)) + ": parameter required");
    }

    MeanFunction(Family f, double param) : family_(f), param_(param) {
        const auto& info = detail::family_info(f);
        if (!info.has_param)
            throw std::invalid_argument(std::string(info.name) + ": takes no parameter");
        if (std::isnan(param) || param < info.lo || param > info.hi ||
            (info.open_lo && param == info.lo) || (info.open_hi && param == info.hi)) {
            throw std::invalid_argument(std::string(info.name) + ": parameter " +
                                        std::to_string(param) + " outside admissible range");
        }
    }

    // "family" or "family:param", e.g. "heinz:0.5", "stolarsky:-1"
    static MeanFunction parse(std::string_view s) {
        const auto colon = s.find(':');
        const std::string_view name = s.substr(0, colon);
        Family fam{};
        bool found = false;
        for (int i = 0; i <= static_cast<int>(Family::identric); ++i) {
            if (name == detail::family_info(static_cast<Family>(i)).name) {
                fam = static_cast<Family>(i);
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("unknown function family '" + std::string(name) + "'");
        if (colon == std::string_view::npos) return MeanFunction(fam);
        const std::string ptext(s.substr(colon + 1));
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(ptext, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad parameter in '" + std::string(s) + "'");
        }
        if (used != ptext.size())
            throw std::invalid_argument("bad parameter in '" + std::string(s) + "'");
        return MeanFunction(fam, p);
    }

    Family family() const { return family_; }
    std::optional<double> param() const { return param_; }

    std::string str() const {
        std::string s = family_name(family_);
        if (param_) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12g", *param_);
            s += ':';
            s += buf;
        }
        return s;
    }

    // f(x); removable singularities evaluated by their limits
    double operator()(double x) const {
        if (!(x > 0.0)) throw std::domain_error("MeanFunction: x must be positive");
        using detail::power_ratio_h;
        const double u = x - 1.0;
        const double t = param_.value_or(0.0);
        switch (family_) {
            case Family::arithmetic: return 0.5 * (1.0 + x);
            case Family::harmonic: return 2.0 * x / (1.0 + x);
            case Family::geometric: return std::sqrt(x);
            case Family::logarithmic: return detail::eval_logarithmic(x);
            case Family::heinz: return 0.5 * (std::pow(x, t) + std::pow(x, 1.0 - t));
            case Family::hansen:
                return std::exp((2.0 * t - 1.0) * M_LN2 + t * std::log(x) +
                                (1.0 - 2.0 * t) * std::log1p(x));
            case Family::wyd_efek: {
                if (std::abs(t - 0.5) <= 1e-12) {
                    const double b = 0.5 * (1.0 + std::sqrt(x));
                    return b * b;
                }
                return 1.0 / (power_ratio_h(t, u) * power_ratio_h(1.0 - t, u));
            }
            case Family::power_difference:
                return power_ratio_h(t, u) / power_ratio_h(t - 1.0, u);
            case Family::ando_mix: return 0.25 * (1.0 + x) + x / (1.0 + x);
            case Family::tx_interp:
                return 2.0 * (t * x + 1.0) * (t + x) / ((1.0 + t) * (1.0 + t) * (x + 1.0));
            case Family::stolarsky: return detail::eval_stolarsky(t, x);
            case Family::binomial: {
                if (std::abs(t) < 1e-8) return std::sqrt(x);
                return std::exp(std::log1p(std::expm1(t * std::log(x)) / 2.0) / t);
            }
            case Family::identric: return detail::eval_identric(x);
        }
        throw std::logic_error("MeanFunction: unreachable");
    }

    // m(x,y) = x f(y/x)
    double mean(double x, double y) const {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("MeanFunction::mean: arguments must be positive");
        return x * (*this)(y / x);
    }

private:
    Family family_;
    std::optional<double> param_;
};

// threshold of the geometric-mean comparison for tx_interp (Example-8 family)
inline double tx_interp_comparable_threshold() { return 3.0 - 2.0 * std::sqrt(2.0); }

// Whether operator monotonicity is claimed for this family/parameter; the
// bound chain 2x/(x+1) <= f <= (x+1)/2 is only asserted where this holds.
inline bool claims_operator_monotone(const MeanFunction& fn) {
    if (fn.family() == Family::tx_interp)
        return fn.param().value() >= tx_interp_comparable_threshold() - 1e-15;
    return true;
}

// Closed parameter range on which the inverse mean matrix T (entrywise
// 1/m) is claimed positive semidefinite; nullopt = no claim.
inline std::optional<std::pair<double, double>> claimed_inverse_mean_psd_range(Family f) {
    switch (f) {
        case Family::arithmetic:
        case Family::geometric:
        case Family::logarithmic:
        case Family::identric: return std::pair{0.0, 0.0};  // parameterless: always
        case Family::heinz: return std::pair{0.0, 1.0};
        case Family::hansen: return std::pair{0.0, 0.5};   // open interval in substance
        case Family::wyd_efek: return std::pair{0.0, 1.0};
        case Family::power_difference: return std::pair{0.5, 2.0};
        case Family::stolarsky: return std::pair{-1.0, 2.0};
        case Family::binomial: return std::pair{0.0, 1.0};
        default: return std::nullopt;
    }
}

// Same for the mean matrix X (entrywise m).
inline std::optional<std::pair<double, double>> claimed_mean_psd_range(Family f) {
    switch (f) {
        case Family::geometric: return std::pair{0.0, 0.0};
        case Family::harmonic: return std::pair{0.0, 0.0};
        case Family::hansen: return std::pair{0.5, 1.0};
        case Family::binomial: return std::pair{-1.0, 0.0};
        default: return std::nullopt;
    }
}

inline bool claims_inverse_mean_psd(const MeanFunction& fn) {
    const auto r = claimed_inverse_mean_psd_range(fn.family());
    if (!r) return false;
    if (!fn.param()) return true;
    const double p = *fn.param();
    // interior-only claim for hansen (strict 0 < t < 1/2)
    if (fn.family() == Family::hansen) return p > 0.0 && p < 0.5;
    if (fn.family() == Family::wyd_efek) return p > 0.0 && p < 1.0;
    return p >= r->first && p <= r->second;
}

inline bool claims_mean_psd(const MeanFunction& fn) {
    const auto r = claimed_mean_psd_range(fn.family());
    if (!r) return false;
    if (!fn.param()) return true;
    const double p = *fn.param();
    if (fn.family() == Family::hansen) return p > 0.5 && p < 1.0;
    return p >= r->first && p <= r->second;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw std::invalid_argument("log_grid: need 0 < lo < hi and points >= 2");
    std::vector<double> g(points);
    const double a = std::log(lo), b = std::log(hi);
    for (int k = 0; k < points; ++k)
        g[k] = std::exp(a + (b - a) * k / (points - 1));
    return g;
}

struct StandardnessReport {
    double f1_defect = 0.0;            // |f(1) - 1|
    double max_symmetry_defect = 0.0;  // max |x f(1/x) - f(x)| / max(1, f(x))
    double worst_symmetry_x = 1.0;
    bool bound_checked = false;        // bound chain asserted for this fn?
    int bound_violations = 0;
    double worst_bound_defect = 0.0;   // positive amount past a bound
    double worst_bound_x = 1.0;
};

inline StandardnessReport check_standard(const MeanFunction& fn, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("check_standard: empty grid");
    StandardnessReport rep;
    rep.f1_defect = std::abs(fn(1.0) - 1.0);
    rep.bound_checked = claims_operator_monotone(fn);
    for (const double x : grid) {
        if (!(x > 0.0)) throw std::invalid_argument("check_standard: grid entry <= 0");
        const double fx = fn(x);
        const double sym = std::abs(x * fn(1.0 / x) - fx) / std::max(1.0, fx);
        if (sym > rep.max_symmetry_defect) {
            rep.max_symmetry_defect = sym;
            rep.worst_symmetry_x = x;
        }
        if (rep.bound_checked) {
            const double lo = 2.0 * x / (x + 1.0), hi = 0.5 * (x + 1.0);
            const double defect =
                std::max(lo - fx - 1e-12 * std::max(1.0, lo), fx - hi - 1e-12 * std::max(1.0, hi));
            if (defect > 0.0) {
                ++rep.bound_violations;
                if (defect > rep.worst_bound_defect) {
                    rep.worst_bound_defect = defect;
                    rep.worst_bound_x = x;
                }
            }
        }
    }
    return rep;
}

enum class SqrtOrder { geq, leq, incomparable };

inline const char* to_string(SqrtOrder o) {
    switch (o) {
        case SqrtOrder::geq: return "GEQ";
        case SqrtOrder::leq: return "LEQ";
        default: return "INCOMPARABLE";
    }
}

struct SqrtComparison {
    SqrtOrder order = SqrtOrder::geq;
    double min_gap = 0.0, max_gap = 0.0;   // extremes of f(x) - sqrt(x) on the grid
    double witness_above = 0.0, witness_below = 0.0;  // x values, meaningful when incomparable
};

// Classifies f against the geometric mean on the grid; the necessary
// condition f >= sqrt(x) for inverse-mean positivity makes this the first
// thing to ask of a candidate function.
inline SqrtComparison compare_sqrt(const MeanFunction& fn, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("compare_sqrt: empty grid");
    double lo = grid[0], hi = grid[0];
    for (const double x : grid) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (!(lo < 1.0 && hi > 1.0))
        throw std::invalid_argument("compare_sqrt: grid must span both sides of 1");

    SqrtComparison r;
    bool geq_ok = true, leq_ok = true;
    r.min_gap = 1e300;
    r.max_gap = -1e300;
    for (const double x : grid) {
        const double s = std::sqrt(x);
        const double gap = fn(x) - s;
        const double tol = 1e-12 * std::max(1.0, s);
        if (gap < r.min_gap) {
            r.min_gap = gap;
            r.witness_below = x;
        }
        if (gap > r.max_gap) {
            r.max_gap = gap;
            r.witness_above = x;
        }
        if (gap < -tol) geq_ok = false;
        if (gap > tol) leq_ok = false;
    }
    r.order = geq_ok ? SqrtOrder::geq : (leq_ok ? SqrtOrder::leq : SqrtOrder::incomparable);
    return r;
}

struct TMonotonicity {
    bool nondecreasing = true;
    double worst_drop = 0.0;  // largest decrease between consecutive grid values
    double at_t = 0.0;
};

// power-difference means: f_t(x) is nondecreasing in t for fixed x
inline TMonotonicity power_diff_t_monotone(double x, std::span<const double> t_grid) {
    if (!(x > 0.0)) throw std::domain_error("power_diff_t_monotone: x must be positive");
    if (t_grid.size() < 2)
        throw std::invalid_argument("power_diff_t_monotone: need at least two t values");
    TMonotonicity r;
    double prev_t = t_grid[0];
    double prev = MeanFunction(Family::power_difference, prev_t)(x);
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        if (t_grid[k] < prev_t)
            throw std::invalid_argument("power_diff_t_monotone: t grid must be ascending");
        const double cur = MeanFunction(Family::power_difference, t_grid[k])(x);
        const double drop = prev - cur;
        if (drop > r.worst_drop) {
            r.worst_drop = drop;
            r.at_t = t_grid[k];
        }
        prev = cur;
        prev_t = t_grid[k];
    }
    r.nondecreasing = r.worst_drop <= 1e-10;
    return r;
}

// |closed form - binomial sum| for f_{1/n}(x) = 2^{-n} sum_k C(n,k) x^{k/n}
inline double binomial_expansion_identity(int n, double x) {
    if (n < 1 || n > 20) throw std::invalid_argument("binomial_expansion_identity: need 1 <= n <= 20");
    if (!(x > 0.0)) throw std::domain_error("binomial_expansion_identity: x must be positive");
    const double closed = MeanFunction(Family::binomial, 1.0 / n)(x);
    double sum = 0.0;
    double coeff = 1.0;  // C(n,0)
    for (int k = 0; k <= n; ++k) {
        sum += coeff * std::pow(x, static_cast<double>(k) / n);
        coeff = coeff * (n - k) / (k + 1);
    }
    sum = std::ldexp(sum, -n);
    return std::abs(closed - sum);
}

// one MeanFunction per family at representative parameters; the workhorse
// list for catalog-wide property tests
inline std::vector<MeanFunction> sample_catalog(int per_family = 5) {
    std::vector<MeanFunction> out;
    for (int i = 0; i <= static_cast<int>(Family::identric); ++i) {
        const Family f = static_cast<Family>(i);
        const auto& info = detail::family_info(f);
        if (!info.has_param) {
            out.emplace_back(f);
            continue;
        }
        for (int k = 0; k < per_family; ++k) {
            const double frac = (k + 1.0) / (per_family + 1.0);
            out.emplace_back(f, info.lo + (info.hi - info.lo) * frac);
        }
    }
    return out;
}

}  // namespace meanmat
