#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "meanmat/io.hpp"

using namespace meanmat;

TEST_CASE("matrix JSON round trip is exact") {
    Rng rng(14);
    const Matrix m = random_hermitian(3, rng);
    const Matrix back = matrix_from_json(matrix_to_json(m));
    CHECK((back - m).max_abs() == 0.0);

    // plain-number data (real matrices) also parses
    const auto j = nlohmann::json::parse(R"({"rows":2,"cols":2,"data":[1,2,2,5]})");
    const Matrix r = matrix_from_json(j);
    CHECK(r(0, 1) == cplx(2.0));
    CHECK(r(1, 1) == cplx(5.0));
}

TEST_CASE("17-digit formatting round-trips doubles") {
    Rng rng(15);
    for (int k = 0; k < 200; ++k) {
        const double x = (rng.uniform() - 0.5) * std::exp(rng.uniform(-30.0, 30.0));
        CHECK(std::stod(fmt17(x)) == x);
    }
}

TEST_CASE("matrix CSV formatting") {
    Matrix m(2, 2, {1.0, cplx(0.0, -2.0), 0.5, 3.0});
    std::ostringstream os;
    matrix_to_csv(m, os);
    CHECK(os.str() == "1,0-2j\n0.5,3\n");
}

TEST_CASE("Kraus channel JSON round trip") {
    const KrausChannel ch = random_cptp(2, 3, 2, 77);
    const KrausChannel back = kraus_from_json(kraus_to_json(ch));
    REQUIRE(back.kraus().size() == ch.kraus().size());
    for (std::size_t i = 0; i < ch.kraus().size(); ++i)
        CHECK((back.kraus()[i] - ch.kraus()[i]).max_abs() == 0.0);
}

TEST_CASE("config parsing") {
    const Config cfg = Config::parse(
        "# scan definition\n"
        "kind = t_positivity\n"
        "family = hansen   # trailing comment\n"
        "param_lo = 0.05\n"
        "param_points = 20\n"
        "out = \"results.csv\"\n");
    CHECK(cfg.get_string("kind") == "t_positivity");
    CHECK(cfg.get_string("family") == "hansen");
    CHECK(cfg.get_double("param_lo") == 0.05);
    CHECK(cfg.get_long("param_points") == 20);
    CHECK(cfg.get_string("out") == "results.csv");
    CHECK(cfg.get_double("missing", 7.0) == 7.0);

    SECTION("unknown keys are rejected") {
        CHECK_THROWS_AS(cfg.require_known({"kind", "family"}), std::invalid_argument);
        CHECK_NOTHROW(
            cfg.require_known({"kind", "family", "param_lo", "param_points", "out"}));
    }
    SECTION("malformed inputs") {
        CHECK_THROWS_AS(Config::parse("novalue\n"), std::invalid_argument);
        CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), std::invalid_argument);
        CHECK_THROWS_AS(cfg.get_double("family"), std::invalid_argument);
        CHECK_THROWS_AS(cfg.get_string("nothere"), std::invalid_argument);
    }
}

TEST_CASE("scan report CSV has a header and one line per row") {
    const std::vector<double> params = {0.2, 0.3};
    const auto rep = scan_positivity(Family::hansen, params, 3, 4, 0, 2);
    std::ostringstream os;
    scan_report_to_csv(rep, os);
    const std::string text = os.str();
    CHECK(text.rfind("family,target,param", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);  // header + 2 rows
}

TEST_CASE("witness serialization carries the provenance") {
    SearchSpec spec{MeanFunction(Family::ando_mix), 3, 1e-3, 1.0,
                    SearchStrategy::grid, 2500, 4, SearchCriterion::min_eig};
    const auto w = find_negative_witness(spec);
    REQUIRE(w.has_value());
    const json j = witness_to_json(spec.fn, *w, spec.criterion);
    CHECK(j.at("fn") == "ando_mix");
    CHECK(j.at("criterion_value").get<double>() < 0.0);
    CHECK(j.at("seed_trace").get<std::string>().find("seed=4") != std::string::npos);
    std::ostringstream os;
    witness_to_csv(spec.fn, *w, spec.criterion, os);
    CHECK(os.str().rfind("fn,criterion", 0) == 0);
}
