#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "meanmat/search.hpp"

using namespace meanmat;
using Catch::Approx;

TEST_CASE("counterexample search reproduces the known failures") {
    SECTION("arithmetic-harmonic mix has a 3x3 witness") {
        SearchSpec spec{MeanFunction(Family::ando_mix), 3, 1e-2, 1e2,
                        SearchStrategy::hybrid, 100000, 1, SearchCriterion::min_eig};
        const auto w = find_negative_witness(spec, 4);
        REQUIRE(w.has_value());
        CHECK(w->criterion_value < -1e-6);
        CHECK(revalidate(spec.fn, *w, spec.criterion));
        // independent confirmation
        const auto rep = psd_check(inverse_mean_matrix(spec.fn, Spectrum(w->lambdas)));
        CHECK_FALSE(rep.is_psd);
    }
    SECTION("the geometric-comparison interpolation family fails inside its monotone range") {
        SearchSpec spec{MeanFunction(Family::tx_interp, 0.3), 3, 1e-3, 1.0,
                        SearchStrategy::hybrid, 100000, 1, SearchCriterion::min_eig};
        const auto w = find_negative_witness(spec, 4);
        REQUIRE(w.has_value());
        CHECK(revalidate(spec.fn, *w, spec.criterion));
    }
    SECTION("determinant criterion also certifies the mix-family failure") {
        SearchSpec spec{MeanFunction(Family::ando_mix), 3, 1e-3, 1.0,
                        SearchStrategy::grid, 4000, 9, SearchCriterion::determinant};
        const auto w = find_negative_witness(spec, 2);
        REQUIRE(w.has_value());
        CHECK(w->criterion_value < 0.0);
    }
}

TEST_CASE("no witness for the positive families") {
    SECTION("arithmetic") {
        SearchSpec spec{MeanFunction(Family::arithmetic), 3, 1e-2, 1e2,
                        SearchStrategy::hybrid, 20000, 2, SearchCriterion::min_eig};
        CHECK_FALSE(find_negative_witness(spec, 4).has_value());
    }
    SECTION("geometric up to dimension 6") {
        for (int n : {2, 4, 6}) {
            SearchSpec spec{MeanFunction(Family::geometric), n, 1e-2, 1e2,
                            SearchStrategy::random, 3000, 3, SearchCriterion::min_eig};
            CHECK_FALSE(find_negative_witness(spec, 4).has_value());
        }
    }
    SECTION("claimed-positive parameter ranges stay clean under search") {
        for (const char* name : {"hansen:0.25", "wyd_efek:0.5", "power_difference:1.5",
                                 "stolarsky:0.5", "binomial:0.5", "heinz:0.3"}) {
            SearchSpec spec{MeanFunction::parse(name), 3, 1e-2, 1e2,
                            SearchStrategy::hybrid, 8000, 4, SearchCriterion::min_eig};
            INFO(name);
            CHECK_FALSE(find_negative_witness(spec, 4).has_value());
        }
    }
}

TEST_CASE("per-parameter outcomes for the geometric-comparison interpolation family") {
    // nothing is claimed anywhere on this family, so every row is
    // exploratory; failures at small t are recorded, larger t stay clean at
    // this dimension and spectrum range
    const std::vector<double> params = {0.18, 0.25, 0.6, 0.9};
    const auto rep = scan_psd(Family::tx_interp, params, 3, 60, 12, ScanTarget::inverse_mean, 4,
                              1e-4, 1.0);
    CHECK(rep.violations == 0);
    for (const auto& row : rep.rows) CHECK_FALSE(row.claimed);
    CHECK(rep.rows[0].worst_min_eig < -1e-10 * rep.rows[0].worst_scale);
    CHECK(rep.rows[3].worst_min_eig >= -1e-10 * rep.rows[3].worst_scale);
}

TEST_CASE("search determinism") {
    SearchSpec spec{MeanFunction(Family::ando_mix), 3, 1e-3, 1.0,
                    SearchStrategy::hybrid, 5000, 31, SearchCriterion::min_eig};
    const auto a = find_negative_witness(spec, 1);
    const auto b = find_negative_witness(spec, 4);  // different worker count, same result
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->criterion_value == b->criterion_value);
    CHECK(a->lambdas == b->lambdas);
    CHECK(a->seed_trace == b->seed_trace);
}

TEST_CASE("inverse mean matrix scales inversely with the spectrum") {
    Rng rng(6);
    for (const auto& fn : sample_catalog(1)) {
        const auto lam = random_log_spectrum(4, 1e-1, 1e1, rng);
        auto scaled = lam;
        const double c = 3.7;
        for (double& x : scaled) x *= c;
        const Matrix t1 = inverse_mean_matrix(fn, Spectrum(lam));
        const Matrix t2 = inverse_mean_matrix(fn, Spectrum(scaled));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(t2(i, j).real() == Approx(t1(i, j).real() / c).epsilon(1e-12));
    }
}

TEST_CASE("positivity scans over claimed ranges") {
    SECTION("interpolation-to-harmonic family, t below one half") {
        const std::vector<double> params = {0.1, 0.2, 0.3, 0.4, 0.45};
        const auto rep = scan_positivity(Family::hansen, params, 4, 10, 0, 4);
        CHECK(rep.violations == 0);
        for (const auto& row : rep.rows) CHECK(row.claimed);
    }
    SECTION("harmonic rows are exploratory and record the failure honestly") {
        const std::vector<double> params = {0.0};
        const auto rep = scan_positivity(Family::harmonic, params, 3, 10, 0, 1);
        CHECK(rep.violations == 0);  // nothing claimed, nothing violated
        CHECK_FALSE(rep.rows[0].claimed);
        CHECK(rep.rows[0].worst_min_eig < 0.0);  // but the failure is recorded
    }
    SECTION("mean-matrix scan for the dual branch") {
        const std::vector<double> params = {0.6, 0.75, 0.9};
        const auto rep = scan_mean_matrix_positivity(Family::hansen, params, 4, 10, 0, 4);
        CHECK(rep.violations == 0);
        for (const auto& row : rep.rows) CHECK(row.claimed);
    }
    SECTION("scan rows are deterministic in the seed") {
        const std::vector<double> params = {0.25};
        const auto a = scan_positivity(Family::hansen, params, 4, 8, 5, 1);
        const auto b = scan_positivity(Family::hansen, params, 4, 8, 5, 4);
        CHECK(a.rows[0].worst_min_eig == b.rows[0].worst_min_eig);
        CHECK(a.rows[0].worst_lambda == b.rows[0].worst_lambda);
    }
}

TEST_CASE("pointwise inequality between the interpolation family and sqrt") {
    SECTION("closed-form check at t = 1/2, x = 4") {
        CHECK(MeanFunction(Family::wyd_efek, 0.5)(4.0) == Approx(2.25).epsilon(1e-14));
        CHECK(MeanFunction(Family::wyd_efek, 0.5)(4.0) >= 2.0);
    }
    SECTION("dense grid has no violations") {
        std::vector<double> ts;
        for (int i = 1; i <= 19; ++i) ts.push_back(0.05 * i);
        const auto xs = log_grid(1e-3, 1e3, 121);
        const auto rep = verify_wyd_sqrt_domination(ts, xs);
        CHECK(rep.violations == 0);
    }
    SECTION("parameter validation") {
        const std::vector<double> bad_t = {0.0};
        const std::vector<double> xs = {1.0};
        CHECK_THROWS_AS(verify_wyd_sqrt_domination(bad_t, xs), std::invalid_argument);
    }
}

TEST_CASE("sign analysis of the power-difference derivative numerator") {
    SECTION("vanishes at the endpoints") {
        const std::vector<double> lams = {1.0};
        const std::vector<double> ts = {};
        const auto rep = verify_power_diff_deriv_sign(lams, ts);
        CHECK(rep.violations == 0);  // only the endpoint checks ran
    }
    SECTION("strictly positive at the midpoint") {
        const double l = 1.0;
        const double g_half =
            std::sinh(0.5 * l) * std::sinh(-0.5 * l) + 0.25 * l * std::sinh(l);
        CHECK(g_half > 0.0);
        CHECK(g_half == Approx(0.25 * std::sinh(1.0) - std::pow(std::sinh(0.5), 2)).epsilon(1e-12));
    }
    SECTION("grid sweep stays nonnegative") {
        std::vector<double> ts(101);
        for (int i = 0; i < 101; ++i) ts[static_cast<std::size_t>(i)] = -2.0 + 5.0 * i / 100.0;
        const std::vector<double> lams = {0.3, 1.0, 2.0};
        const auto rep = verify_power_diff_deriv_sign(lams, ts);
        CHECK(rep.violations == 0);
    }
    SECTION("lambda = 0 is rejected") {
        const std::vector<double> lams = {0.0};
        const std::vector<double> ts = {0.5};
        CHECK_THROWS_AS(verify_power_diff_deriv_sign(lams, ts), std::invalid_argument);
    }
}
