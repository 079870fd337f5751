// meanmat command-line tool: positivity checks, parameter scans,
// counterexample search, and integral cross-checks over the mean-function
// catalog.
//
// Exit codes: 0 = all asserted properties hold, 1 = usage/config error,
// 2 = a property violation or finding (non-PSD matrix, witness located,
// tolerance exceeded).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meanmat/meanmat.hpp"

namespace {

using namespace meanmat;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFinding = 2;

struct OutputOpts {
    std::string out;     // empty = stdout
    std::string format = "json";
    int jobs = 0;        // 0 = default parallelism
};

int effective_jobs(const OutputOpts& o) { return o.jobs > 0 ? o.jobs : default_jobs(); }

void emit(const OutputOpts& o, const std::string& body) {
    if (o.out.empty()) {
        std::cout << body;
        if (!body.empty() && body.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file '" + o.out + "'");
    f << body;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return g;
}

Family family_from_string(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Family::identric); ++i)
        if (name == family_name(static_cast<Family>(i))) return static_cast<Family>(i);
    throw std::invalid_argument("unknown family '" + name + "'");
}

// the parameterized sweep list used by the monotonicity command
std::vector<MeanFunction> standard_monotone_catalog() {
    std::vector<MeanFunction> fns;
    fns.emplace_back(Family::arithmetic);
    fns.emplace_back(Family::geometric);
    fns.emplace_back(Family::logarithmic);
    for (double t : {0.25, 0.75}) fns.emplace_back(Family::heinz, t);
    for (double t : {0.25, 0.75}) fns.emplace_back(Family::hansen, t);
    for (double t : {0.3, 0.7}) fns.emplace_back(Family::wyd_efek, t);
    for (double t : {-1.0, 0.25, 1.5, 2.0}) fns.emplace_back(Family::power_difference, t);
    for (double p : {-2.0, -0.5, 1.5, 2.0}) fns.emplace_back(Family::stolarsky, p);
    for (double p : {-1.0, -0.5, 0.5, 1.0}) fns.emplace_back(Family::binomial, p);
    return fns;
}

// ---------------------------------------------------------------- check-function

int cmd_check_function(const std::string& fn_string, double grid_lo, double grid_hi,
                       int grid_points, const OutputOpts& opts) {
    const MeanFunction fn = MeanFunction::parse(fn_string);
    const auto grid = log_grid(grid_lo, grid_hi, grid_points);
    const auto standard = check_standard(fn, grid);
    const auto cmp = compare_sqrt(fn, grid);

    const bool standard_ok = standard.f1_defect <= 1e-12 && standard.max_symmetry_defect <= 1e-12;
    const bool bounds_ok = !standard.bound_checked || standard.bound_violations == 0;
    const bool comparable = cmp.order != SqrtOrder::incomparable;
    const bool pass = standard_ok && bounds_ok && comparable;

    json rec{{"fn", fn.str()},
             {"f1_defect", standard.f1_defect},
             {"max_symmetry_defect", standard.max_symmetry_defect},
             {"bound_chain_checked", standard.bound_checked},
             {"bound_violations", standard.bound_violations},
             {"sqrt_comparison", to_string(cmp.order)},
             {"min_gap_vs_sqrt", cmp.min_gap},
             {"max_gap_vs_sqrt", cmp.max_gap},
             {"pass", pass}};
    emit(opts, rec.dump(2));

    std::cerr << fn.str() << ": standardness "
              << (standard_ok ? "PASS" : "FAIL")
              << " (f(1) defect " << fmt6(standard.f1_defect) << ", symmetry defect "
              << fmt6(standard.max_symmetry_defect) << "); bound chain "
              << (standard.bound_checked ? (bounds_ok ? "PASS" : "FAIL") : "not claimed")
              << "; vs sqrt(x): " << to_string(cmp.order) << '\n';
    return pass ? kExitOk : kExitFinding;
}

// ---------------------------------------------------------------------- psd

int cmd_psd(const std::string& fn_string, const std::vector<double>& lambdas, double tol,
            const OutputOpts& opts) {
    const MeanFunction fn = MeanFunction::parse(fn_string);
    const Spectrum lam(lambdas);
    const Matrix t = inverse_mean_matrix(fn, lam);
    const PsdReport rep = psd_check(t, tol);

    json rec{{"fn", fn.str()},
             {"matrix", "inverse_mean"},
             {"report", psd_report_to_json(rep)}};
    emit(opts, rec.dump(2));
    std::cerr << fn.str() << ": inverse mean matrix " << (rep.is_psd ? "PSD" : "NOT PSD")
              << " (min_eig " << fmt6(rep.min_eig) << ")\n";
    return rep.is_psd ? kExitOk : kExitFinding;
}

// ----------------------------------------------------------------------- cp

int cmd_cp(const std::string& fn_string, const std::vector<double>& lambdas,
           const std::string& matrix_file, double tol, const OutputOpts& opts) {
    CpEquivalenceResult res;
    std::string label;
    if (!matrix_file.empty()) {
        std::ifstream in(matrix_file);
        if (!in) throw std::invalid_argument("cannot open '" + matrix_file + "'");
        json j;
        in >> j;
        res = hadamard_cp_equivalence_direct(matrix_from_json(j).hermitized(), tol);
        label = "file:" + matrix_file;
    } else {
        const MeanFunction fn = MeanFunction::parse(fn_string);
        res = hadamard_cp_equivalence(fn, Spectrum(lambdas), tol);
        label = fn.str();
    }

    json rec{{"fn", label},
             {"t_psd", res.t_report.is_psd},
             {"t_min_eig", res.t_report.min_eig},
             {"choi_psd", res.choi_report.is_psd},
             {"choi_min_eig", res.choi_report.min_eig},
             {"verdicts_agree", res.agree}};
    emit(opts, rec.dump(2));
    std::cerr << label << ": T " << (res.t_report.is_psd ? "PSD" : "NOT PSD") << ", Choi "
              << (res.choi_report.is_psd ? "PSD" : "NOT PSD")
              << (res.agree ? " (verdicts agree)" : " (VERDICTS DISAGREE)") << '\n';
    if (!res.agree) return kExitFinding;
    return res.t_report.is_psd ? kExitOk : kExitFinding;
}

// --------------------------------------------------------------------- scan

int run_positivity_scan(const Config& cfg, const OutputOpts& base_opts, ScanTarget target) {
    cfg.require_known({"kind", "family", "param_lo", "param_hi", "param_points", "n", "spectra",
                       "seed", "out", "format", "jobs", "lambda_lo", "lambda_hi"});
    const Family fam = family_from_string(cfg.get_string("family"));
    OutputOpts opts = base_opts;
    if (opts.out.empty()) opts.out = cfg.get_string("out", "");
    if (cfg.has("format")) opts.format = cfg.get_string("format");
    if (cfg.has("jobs")) opts.jobs = static_cast<int>(cfg.get_long("jobs"));

    std::vector<double> params;
    if (detail::family_info(fam).has_param) {
        const double lo = cfg.get_double("param_lo");
        const double hi = cfg.get_double("param_hi");
        const int pts = static_cast<int>(cfg.get_long("param_points", 20));
        params = linear_grid(lo, hi, pts);
    } else {
        params = {0.0};
    }
    const int n = static_cast<int>(cfg.get_long("n", 6));
    const int spectra = static_cast<int>(cfg.get_long("spectra", 50));
    const std::uint64_t seed = cfg.get_seed("seed", 0);
    const double lam_lo = cfg.get_double("lambda_lo", 1e-2);
    const double lam_hi = cfg.get_double("lambda_hi", 1e2);

    const ScanReport rep =
        scan_psd(fam, params, n, spectra, seed, target, effective_jobs(opts), lam_lo, lam_hi);

    if (opts.format == "csv") {
        std::ostringstream os;
        scan_report_to_csv(rep, os);
        emit(opts, os.str());
    } else {
        emit(opts, scan_report_to_json(rep).dump(2));
    }
    std::cerr << "scan " << family_name(fam) << " ("
              << (target == ScanTarget::inverse_mean ? "inverse mean" : "mean") << "): "
              << rep.violations << " violation(s) over " << rep.rows.size() << " parameter(s)\n";
    return rep.violations == 0 ? kExitOk : kExitFinding;
}

int run_monotonicity_scan(const Config& cfg, const OutputOpts& base_opts) {
    cfg.require_known({"kind", "seeds", "seed", "out", "format", "jobs", "tol"});
    OutputOpts opts = base_opts;
    if (opts.out.empty()) opts.out = cfg.get_string("out", "");
    if (cfg.has("format")) opts.format = cfg.get_string("format");
    if (cfg.has("jobs")) opts.jobs = static_cast<int>(cfg.get_long("jobs"));
    const int seeds = static_cast<int>(cfg.get_long("seeds", 25));
    const std::uint64_t seed0 = cfg.get_seed("seed", 0);
    const double tol = cfg.get_double("tol", 1e-8);

    const auto fns = standard_monotone_catalog();
    struct Row {
        std::string fn;
        int n, m, seed;
        double gap;
    };
    std::vector<int> dims = {2, 3};
    std::vector<Row> rows;
    for (const auto& fn : fns)
        for (int n : dims)
            for (int m : dims)
                for (int s = 0; s < seeds; ++s) rows.push_back({fn.str(), n, m, s, 0.0});

    parallel_for_index(static_cast<long>(rows.size()), effective_jobs(opts), [&](long i) {
        Row& r = rows[static_cast<std::size_t>(i)];
        Rng rng = derived_rng(seed0, static_cast<std::uint64_t>(i));
        const Matrix dmat =
            random_complex_psd(r.n, rng) + (0.05 * r.n) * Matrix::identity(r.n);
        const PositiveMatrix d(dmat);
        const KrausChannel alpha =
            random_cptp(r.n, r.m, r.n, seed0 ^ (0xABCD1234ULL + static_cast<std::uint64_t>(i)));
        r.gap = monotonicity_gap(MeanFunction::parse(r.fn), d, alpha);
    });

    double min_gap = 0.0;
    for (const auto& r : rows) min_gap = std::min(min_gap, r.gap);

    if (opts.format == "csv") {
        std::ostringstream os;
        os << "fn,n,m,seed,gap\n";
        for (const auto& r : rows)
            os << r.fn << ',' << r.n << ',' << r.m << ',' << r.seed << ',' << fmt17(r.gap) << '\n';
        emit(opts, os.str());
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"fn", r.fn}, {"n", r.n}, {"m", r.m}, {"seed", r.seed},
                               {"gap", r.gap}});
        emit(opts, json{{"kind", "monotonicity"}, {"min_gap", min_gap}, {"rows", std::move(arr)}}.dump(2));
    }
    std::cerr << "monotonicity sweep: min gap " << fmt6(min_gap) << " over " << rows.size() << " rows\n";
    return min_gap >= -tol ? kExitOk : kExitFinding;
}

int cmd_scan(const std::string& config_path, const OutputOpts& opts) {
    const Config cfg = Config::parse_file(config_path);
    const std::string kind = cfg.get_string("kind");
    if (kind == "t_positivity") return run_positivity_scan(cfg, opts, ScanTarget::inverse_mean);
    if (kind == "mean_matrix_positivity") return run_positivity_scan(cfg, opts, ScanTarget::mean);
    if (kind == "monotonicity") return run_monotonicity_scan(cfg, opts);
    throw std::invalid_argument("scan: unknown kind '" + kind + "'");
}

// -------------------------------------------------------------------- search

int cmd_search(const std::string& config_path, std::string fn_string, int n, double lo, double hi,
               const std::string& strategy, long budget, std::uint64_t seed,
               const std::string& criterion, const OutputOpts& base_opts) {
    OutputOpts opts = base_opts;
    if (!config_path.empty()) {
        const Config cfg = Config::parse_file(config_path);
        cfg.require_known({"fn", "n", "lambda_lo", "lambda_hi", "strategy", "budget", "seed",
                           "criterion", "out", "format", "jobs"});
        fn_string = cfg.get_string("fn");
        n = static_cast<int>(cfg.get_long("n", n));
        lo = cfg.get_double("lambda_lo", lo);
        hi = cfg.get_double("lambda_hi", hi);
        budget = cfg.get_long("budget", budget);
        seed = cfg.get_seed("seed", seed);
        if (opts.out.empty()) opts.out = cfg.get_string("out", "");
        if (cfg.has("format")) opts.format = cfg.get_string("format");
        if (cfg.has("jobs")) opts.jobs = static_cast<int>(cfg.get_long("jobs"));
        return cmd_search("", fn_string, n, lo, hi, cfg.get_string("strategy", strategy), budget,
                          seed, cfg.get_string("criterion", criterion), opts);
    }
    if (fn_string.empty()) throw std::invalid_argument("search: function required");

    SearchSpec spec{MeanFunction::parse(fn_string), n, lo, hi, SearchStrategy::hybrid, budget,
                    seed, SearchCriterion::min_eig};
    if (strategy == "grid")
        spec.strategy = SearchStrategy::grid;
    else if (strategy == "random")
        spec.strategy = SearchStrategy::random;
    else if (strategy != "hybrid")
        throw std::invalid_argument("search: unknown strategy '" + strategy + "'");
    if (criterion == "determinant")
        spec.criterion = SearchCriterion::determinant;
    else if (criterion != "min_eig")
        throw std::invalid_argument("search: unknown criterion '" + criterion + "'");

    const auto witness = find_negative_witness(spec, effective_jobs(opts));
    if (!witness) {
        json rec{{"fn", spec.fn.str()},  {"found", false},
                 {"budget", spec.budget}, {"n", spec.n},
                 {"seed", spec.seed},     {"criterion", to_string(spec.criterion)}};
        emit(opts, rec.dump(2));
        std::cerr << spec.fn.str() << ": no negative witness within budget " << spec.budget
                  << '\n';
        return kExitOk;
    }
    if (opts.format == "csv") {
        std::ostringstream os;
        witness_to_csv(spec.fn, *witness, spec.criterion, os);
        emit(opts, os.str());
    } else {
        json rec = witness_to_json(spec.fn, *witness, spec.criterion);
        rec["found"] = true;
        emit(opts, rec.dump(2));
    }
    std::cerr << spec.fn.str() << ": witness found, " << to_string(spec.criterion) << " = "
              << fmt6(witness->criterion_value) << '\n';
    return kExitFinding;
}

// ----------------------------------------------------------------- crosscheck

struct CrosscheckResult {
    std::string fn;
    std::string params;
    double discrepancy = 0.0;
    double tolerance = 0.0;
    double error_estimate = 0.0;
};

CrosscheckResult run_crosscheck(const std::string& form, double t, double x, int n,
                                std::uint64_t seed) {
    Rng rng = derived_rng(seed, 17);
    const Matrix dmat = random_complex_psd(n, rng) + 0.2 * Matrix::identity(n);
    const PositiveMatrix d(dmat);
    const Matrix a = random_hermitian(n, rng);
    CrosscheckResult res;

    if (form == "arith-integral") {
        const Matrix via = arith_exp_integral(d, a);
        const Matrix had = apply_inverse_mean_map(MeanFunction(Family::arithmetic), d, a);
        res = {"arithmetic", "", (via - had).max_abs(), 1e-7, 0.0};
    } else if (form == "log-integral") {
        const Matrix via = log_resolvent_integral(d, a);
        const Matrix had = apply_inverse_mean_map(MeanFunction(Family::logarithmic), d, a);
        res = {"logarithmic", "", (via - had).max_abs(), 1e-7, 0.0};
    } else if (form == "heinz-sylvester") {
        const Matrix via = heinz_sylvester_integral(t, d, a);
        const Matrix had = apply_inverse_mean_map(MeanFunction(Family::heinz, t), d, a);
        res = {"heinz", "t=" + fmt6(t), (via - had).max_abs(), 1e-7, 0.0};
    } else if (form == "ddiff-compose") {
        const Matrix composed =
            divided_difference_map(d, divided_difference_map(d, a, 1.0 - t), t) * (1.0 / (t * (1.0 - t)));
        const Matrix had = apply_inverse_mean_map(MeanFunction(Family::wyd_efek, t), d, a);
        res = {"wyd_efek", "t=" + fmt6(t), (composed - had).max_abs(), 1e-7, 0.0};
    } else if (form == "wyd-double") {
        const Matrix via = wyd_double_integral(t, d, a);
        const Matrix had = apply_inverse_mean_map(MeanFunction(Family::wyd_efek, t), d, a);
        res = {"wyd_efek", "t=" + fmt6(t), (via - had).max_abs(), 1e-5, 0.0};
    } else if (form == "binomial-double") {
        const Matrix via = binomial_exp_double_integral(d, a);
        const Matrix had = apply_inverse_mean_map(MeanFunction(Family::wyd_efek, 0.5), d, a);
        res = {"wyd_efek", "t=0.5", (via - had).max_abs(), 1e-5, 0.0};
    } else if (form == "wyd-triple") {
        const double integral = wyd_reciprocal_triple_integral(t, x);
        const double f = MeanFunction(Family::wyd_efek, t)(x);
        res = {"wyd_efek", "t=" + fmt6(t) + ",x=" + fmt6(x), std::abs(integral * f - 1.0), 1e-3,
               0.0};
    } else if (form == "hansen-series") {
        const std::vector<double> lam = [&] {
            Rng r2 = derived_rng(seed, 99);
            return random_log_spectrum(n, 0.1, 10.0, r2);
        }();
        const Spectrum spectrum(lam);
        const Matrix target = inverse_mean_matrix(MeanFunction(Family::hansen, t), spectrum);
        double best = 1e300;
        for (int k = 50; k <= 500; k += 50) {
            const HansenSeries s = hansen_series_T(t, spectrum, k);
            best = std::min(best, (target - s.partial_sum).max_abs());
            if (best <= 1e-8) break;
        }
        res = {"hansen", "t=" + fmt6(t), best, 1e-8, 0.0};
    } else {
        throw std::invalid_argument("crosscheck: unknown form '" + form + "'");
    }
    return res;
}

int cmd_crosscheck(const std::string& form, double t, double x, int n, std::uint64_t seed,
                   const OutputOpts& opts) {
    const CrosscheckResult res = run_crosscheck(form, t, x, n, seed);
    const bool ok = res.discrepancy <= res.tolerance;
    json rec = crosscheck_to_json(form, res.fn, res.params, n, seed, res.discrepancy,
                                  res.error_estimate);
    rec["tolerance"] = res.tolerance;
    rec["pass"] = ok;
    emit(opts, rec.dump(2));
    std::cerr << "crosscheck " << form << ": discrepancy " << fmt6(res.discrepancy)
              << (ok ? " <= " : " > ") << fmt6(res.tolerance) << '\n';
    return ok ? kExitOk : kExitFinding;
}

// -------------------------------------------------------------- monotonicity

int cmd_monotonicity(int seeds, std::uint64_t seed0, double tol, const OutputOpts& opts) {
    std::ostringstream cfg;
    cfg << "kind = monotonicity\nseeds = " << seeds << "\nseed = " << seed0 << "\ntol = " << fmt17(tol)
        << "\n";
    return run_monotonicity_scan(Config::parse(cfg.str()), opts);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-matrix positivity toolkit"};
    app.require_subcommand(1);

    OutputOpts opts;

    // check-function
    std::string fn_string;
    double grid_lo = 1e-4, grid_hi = 1e4;
    int grid_points = 101;
    auto* c_check = app.add_subcommand("check-function",
                                       "standardness, bound chain and sqrt comparison");
    c_check->add_option("fn", fn_string, "function, e.g. heinz:0.5")->required();
    c_check->add_option("--grid-lo", grid_lo);
    c_check->add_option("--grid-hi", grid_hi);
    c_check->add_option("--grid-points", grid_points);

    // psd
    std::vector<double> lambdas;
    double tol = 1e-10;
    auto* c_psd = app.add_subcommand("psd", "PSD test of the inverse mean matrix at a spectrum");
    c_psd->add_option("fn", fn_string, "function")->required();
    c_psd->add_option("lambda", lambdas, "spectrum entries")->required();
    c_psd->add_option("--tol", tol, "relative PSD tolerance");

    // cp
    std::string matrix_file;
    auto* c_cp = app.add_subcommand("cp",
                                    "complete positivity: T-positivity and Choi agree (Hadamard "
                                    "multiplier)");
    c_cp->add_option("fn", fn_string, "function (omit with --matrix-file)");
    c_cp->add_option("lambda", lambdas, "spectrum entries");
    c_cp->add_option("--matrix-file", matrix_file, "JSON matrix to use directly as T");
    c_cp->add_option("--tol", tol);

    // scan
    std::string config_path;
    auto* c_scan = app.add_subcommand("scan", "parameter scan from a config file");
    c_scan->add_option("--config", config_path, "key = value config")->required();

    // search
    int search_n = 3;
    double search_lo = 1e-3, search_hi = 1.0;
    std::string strategy = "hybrid", criterion = "min_eig";
    long budget = 100000;
    std::uint64_t seed = 0;
    auto* c_search = app.add_subcommand("search", "counterexample search for non-PSD T");
    c_search->add_option("fn", fn_string, "function");
    c_search->add_option("--config", config_path, "key = value config");
    c_search->add_option("--n", search_n);
    c_search->add_option("--lo", search_lo);
    c_search->add_option("--hi", search_hi);
    c_search->add_option("--strategy", strategy, "grid|random|hybrid");
    c_search->add_option("--budget", budget);
    c_search->add_option("--seed", seed);
    c_search->add_option("--criterion", criterion, "min_eig|determinant");

    // crosscheck
    std::string form;
    double cc_t = 0.3, cc_x = 4.0;
    int cc_n = 3;
    auto* c_cross = app.add_subcommand("crosscheck",
                                       "integral/series form vs the Hadamard route");
    c_cross->add_option("form", form,
                        "arith-integral|log-integral|heinz-sylvester|ddiff-compose|wyd-double|"
                        "binomial-double|wyd-triple|hansen-series")
        ->required();
    c_cross->add_option("--t", cc_t, "family parameter");
    c_cross->add_option("--x", cc_x, "evaluation point (phas)");
    c_cross->add_option("--n", cc_n, "matrix dimension");
    c_cross->add_option("--seed", seed);

    // monotonicity
    int seeds = 25;
    double fmon_tol = 1e-8;
    auto* c_mono = app.add_subcommand("monotonicity",
                                      "channel-monotonicity gap sweep over the standard catalog");
    c_mono->add_option("--seeds", seeds, "channels per (fn, n, m)");
    c_mono->add_option("--seed", seed);
    c_mono->add_option("--tol", fmon_tol);

    for (auto* sub : {c_check, c_psd, c_cp, c_scan, c_search, c_cross, c_mono}) {
        sub->add_option("--out", opts.out, "output file (default stdout)");
        sub->add_option("--format", opts.format, "json|csv");
        sub->add_option("--jobs", opts.jobs, "worker threads (0 = auto)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_check->parsed())
            return cmd_check_function(fn_string, grid_lo, grid_hi, grid_points, opts);
        if (c_psd->parsed()) return cmd_psd(fn_string, lambdas, tol, opts);
        if (c_cp->parsed()) return cmd_cp(fn_string, lambdas, matrix_file, tol, opts);
        if (c_scan->parsed()) return cmd_scan(config_path, opts);
        if (c_search->parsed())
            return cmd_search(config_path, fn_string, search_n, search_lo, search_hi, strategy,
                              budget, seed, criterion, opts);
        if (c_cross->parsed()) return cmd_crosscheck(form, cc_t, cc_x, cc_n, seed, opts);
        if (c_mono->parsed()) return cmd_monotonicity(seeds, seed, fmon_tol, opts);
    } catch (const QuadratureError& e) {
        std::cerr << "error: " << e.what() << " (achieved " << fmt6(e.achieved_error) << ")\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
