#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "meanmat/superop.hpp"

using namespace meanmat;
using Catch::Approx;

TEST_CASE("mean map on matrix units of a diagonal D") {
    const Spectrum lam{0.5, 2.0, 7.0};
    const PositiveMatrix d = PositiveMatrix::diagonal(lam);
    const MeanFunction fn(Family::logarithmic);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Matrix out = apply_mean_map(fn, d, Matrix::unit(3, i, j));
            const double expected = fn.mean(lam[i], lam[j]);
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const cplx want = (k == i && l == j) ? cplx(expected) : cplx(0.0);
                    CHECK(std::abs(out(k, l) - want) <= 1e-12 * std::max(1.0, expected));
                }
        }
}

TEST_CASE("geometric mean map is two-sided conjugation by sqrt(D)") {
    Rng rng(31);
    const Matrix dmat = random_complex_psd(3, rng) + 0.4 * Matrix::identity(3);
    const PositiveMatrix d(dmat);
    const Matrix a = random_hermitian(3, rng);
    const Matrix root = d.power(0.5), iroot = d.power(-0.5);
    CHECK((apply_mean_map(MeanFunction(Family::geometric), d, a) - root * a * root).max_abs() <=
          1e-11 * std::max(1.0, a.max_abs()) * d.matrix().inf_norm());
    CHECK((apply_inverse_mean_map(MeanFunction(Family::geometric), d, a) - iroot * a * iroot)
              .max_abs() <= 1e-11 * std::max(1.0, a.max_abs()));
}

TEST_CASE("identity D leaves everything unchanged") {
    const PositiveMatrix d(Matrix::identity(4));
    Rng rng(1);
    const Matrix a = random_hermitian(4, rng);
    for (const auto& fn : sample_catalog(1))
        CHECK((apply_mean_map(fn, d, a) - a).max_abs() <= 1e-12);
}

TEST_CASE("mean map and inverse are mutually inverse across the catalog") {
    Rng rng(17);
    for (const auto& fn : sample_catalog(2)) {
        for (int rep = 0; rep < 4; ++rep) {
            const int n = 2 + rep % 3;
            const Matrix dmat = random_complex_psd(n, rng) + 0.3 * Matrix::identity(n);
            const PositiveMatrix d(dmat);
            const Matrix a = random_hermitian(n, rng);
            const Matrix back = apply_mean_map(fn, d, apply_inverse_mean_map(fn, d, a));
            CHECK((back - a).max_abs() <= 1e-11 * std::max(1.0, a.max_abs()));
        }
    }
}

TEST_CASE("inverse mean map: arithmetic on the all-ones matrix") {
    const PositiveMatrix d = PositiveMatrix::diagonal(Spectrum{1.0, 4.0});
    Matrix ones(2, 2, {1.0, 1.0, 1.0, 1.0});
    const Matrix out = apply_inverse_mean_map(MeanFunction(Family::arithmetic), d, ones);
    CHECK(out(0, 0).real() == Approx(1.0).epsilon(1e-14));
    CHECK(out(0, 1).real() == Approx(0.4).epsilon(1e-14));
    CHECK(out(1, 0).real() == Approx(0.4).epsilon(1e-14));
    CHECK(out(1, 1).real() == Approx(0.25).epsilon(1e-14));
}

TEST_CASE("mean map is positive for the Hilbert-Schmidt inner product") {
    Rng rng(23);
    for (const auto& fn :
         {MeanFunction(Family::arithmetic), MeanFunction(Family::wyd_efek, 0.3),
          MeanFunction(Family::tx_interp, 0.1), MeanFunction(Family::ando_mix)}) {
        const Matrix dmat = random_complex_psd(3, rng) + 0.3 * Matrix::identity(3);
        const PositiveMatrix d(dmat);
        for (int rep = 0; rep < 100; ++rep) {
            const Matrix a = random_hermitian(3, rng);
            CHECK(hs_inner(a, apply_mean_map(fn, d, a)).real() >= -1e-11 * a.fro_norm());
        }
    }
}

TEST_CASE("basis covariance: conjugating D conjugates the map") {
    Rng rng(41);
    const MeanFunction fn(Family::heinz, 0.3);
    // random unitary from the eigenvectors of a random Hermitian matrix
    const Matrix u = eig_herm(random_hermitian(3, rng)).vectors;
    const std::vector<double> lam = {0.4, 1.0, 3.0};
    const Matrix lam_mat = Matrix::diag(lam);
    const PositiveMatrix d_full(u * lam_mat * u.adjoint());
    const PositiveMatrix d_diag(lam_mat);
    const Matrix a = random_hermitian(3, rng);
    const Matrix via_full = apply_mean_map(fn, d_full, a);
    const Matrix via_diag = u * apply_mean_map(fn, d_diag, u.adjoint() * a * u) * u.adjoint();
    CHECK((via_full - via_diag).max_abs() <= 1e-11 * std::max(1.0, a.max_abs()));
}

TEST_CASE("hs_matrix representations") {
    SECTION("identity map") {
        const Matrix h = identity_map(2).hs_matrix();
        CHECK((h - Matrix::identity(4)).max_abs() == 0.0);
    }
    SECTION("two-sided multiplication X A Y agrees with kron(X, Y^T)") {
        Rng rng(2);
        Matrix x(3, 3), y(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                x(i, j) = rng.cnormal();
                y(i, j) = rng.cnormal();
            }
        const SuperOperator s(3, 3, [&x, &y](const Matrix& a) { return x * a * y; });
        const Matrix expected = Matrix::kron(x, y.transpose());
        CHECK((s.hs_matrix() - expected).max_abs() <= 1e-12 * expected.max_abs());
        // and applying via the matrix equals the action on a random input
        const Matrix a = random_hermitian(3, rng);
        const auto va = a.vec();
        const Matrix& h = s.hs_matrix();
        const Matrix img = s(a);
        const auto vi = img.vec();
        for (int r = 0; r < 9; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < 9; ++c) acc += h(r, c) * va[static_cast<std::size_t>(c)];
            CHECK(std::abs(acc - vi[static_cast<std::size_t>(r)]) <= 1e-12 * (1.0 + std::abs(acc)));
        }
    }
    SECTION("mean map of a diagonal D is diagonal in the unit basis") {
        const Spectrum lam{1.0, 5.0};
        const PositiveMatrix d = PositiveMatrix::diagonal(lam);
        const MeanFunction fn(Family::arithmetic);
        const Matrix h = mean_map(fn, d).hs_matrix();
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (r != c) CHECK(std::abs(h(r, c)) <= 1e-13);
        CHECK(h(0, 0).real() == Approx(1.0));          // m(1,1)
        CHECK(h(1, 1).real() == Approx(3.0));          // m(1,5)
        CHECK(h(3, 3).real() == Approx(5.0));          // m(5,5)
    }
}

TEST_CASE("choi matrices") {
    SECTION("identity map: rank-one projector scaled by n") {
        const Matrix c = choi_matrix(identity_map(2));
        const auto e = eig_herm(c);
        CHECK(e.values[3] == Approx(2.0).margin(1e-12));
        for (int k = 0; k < 3; ++k) CHECK(std::abs(e.values[k]) <= 1e-12);
        CHECK(psd_check(c).is_psd);
    }
    SECTION("transpose map is positive but not completely positive") {
        const SuperOperator transpose(2, 2, [](const Matrix& a) { return a.transpose(); });
        const auto rep = cp_check(transpose);
        CHECK_FALSE(rep.is_psd);
        CHECK(rep.min_eig == Approx(-1.0).margin(1e-12));
    }
    SECTION("Hermiticity-preservation is enforced") {
        const SuperOperator bad(2, 2, [](const Matrix& a) {
            Matrix r = a;
            r(0, 1) += cplx(0.0, 1.0) * a(0, 0);
            return r;
        });
        CHECK_THROWS_AS(choi_matrix(bad), std::invalid_argument);
    }
    SECTION("Hermiticity-preserving maps satisfy S(E_ij)* = S(E_ji)") {
        Rng rng(8);
        const Matrix dmat = random_complex_psd(3, rng) + 0.5 * Matrix::identity(3);
        const PositiveMatrix d(dmat);
        const SuperOperator s = inverse_mean_map(MeanFunction(Family::heinz, 0.25), d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK((s.basis_image(i, j).adjoint() - s.basis_image(j, i)).max_abs() <= 1e-12);
    }
}

TEST_CASE("complete positivity of the inverse mean map") {
    Rng rng(12);
    SECTION("logarithmic: CP at random D") {
        const Matrix dmat = random_complex_psd(3, rng) + 0.4 * Matrix::identity(3);
        const PositiveMatrix d(dmat);
        CHECK(cp_check(inverse_mean_map(MeanFunction(Family::logarithmic), d)).is_psd);
    }
    SECTION("arithmetic-harmonic mix: not CP at a witness spectrum") {
        // spectrum located by the search (ratios near (0.037, 0.012, 1))
        const PositiveMatrix d = PositiveMatrix::diagonal(Spectrum{0.0366, 0.0121, 1.0});
        CHECK_FALSE(cp_check(inverse_mean_map(MeanFunction(Family::ando_mix), d)).is_psd);
    }
    SECTION("geometric: the map and its inverse are both CP") {
        const Matrix dmat = random_complex_psd(3, rng) + 0.4 * Matrix::identity(3);
        const PositiveMatrix d(dmat);
        CHECK(cp_check(inverse_mean_map(MeanFunction(Family::geometric), d)).is_psd);
        CHECK(cp_check(mean_map(MeanFunction(Family::geometric), d)).is_psd);
    }
    SECTION("no other catalog function has both sides CP at a generic spectrum") {
        const Spectrum probe{0.05, 0.31, 1.0, 3.7};
        const PositiveMatrix d = PositiveMatrix::diagonal(probe);
        for (const char* name :
             {"arithmetic", "harmonic", "logarithmic", "identric", "ando_mix", "heinz:0.3",
              "hansen:0.25", "wyd_efek:0.3", "power_difference:0.25", "tx_interp:0.5",
              "stolarsky:0.5", "binomial:0.4"}) {
            const MeanFunction fn = MeanFunction::parse(name);
            const bool beta_cp = cp_check(inverse_mean_map(fn, d)).is_psd;
            const bool j_cp = cp_check(mean_map(fn, d)).is_psd;
            INFO(name);
            CHECK_FALSE((beta_cp && j_cp));
        }
    }
}

TEST_CASE("T-positivity and Choi positivity always agree") {
    SECTION("arithmetic at (1,2,3): both positive") {
        const auto r = hadamard_cp_equivalence(MeanFunction(Family::arithmetic), Spectrum{1, 2, 3});
        CHECK(r.agree);
        CHECK(r.t_report.is_psd);
        CHECK(r.choi_report.is_psd);
    }
    SECTION("mix family at the witness: both negative") {
        const auto r =
            hadamard_cp_equivalence(MeanFunction(Family::ando_mix), Spectrum{0.0366, 0.0121, 1.0});
        CHECK(r.agree);
        CHECK_FALSE(r.t_report.is_psd);
        CHECK_FALSE(r.choi_report.is_psd);
    }
    SECTION("100 random entrywise-positive symmetric matrices injected directly") {
        for (std::uint64_t s = 0; s < 100; ++s) {
            Rng rng = derived_rng(99, s);
            const int n = 2 + static_cast<int>(rng.next_u64() % 4);
            Matrix t(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const double v = rng.log_uniform(1e-2, 1e2);
                    t(i, j) = v;
                    t(j, i) = v;
                }
            const auto r = hadamard_cp_equivalence_direct(t);
            CHECK(r.agree);
        }
    }
}

TEST_CASE("random CPTP channels") {
    SECTION("scalar channel is the identity") {
        const KrausChannel ch = random_cptp(1, 1, 1, 4);
        CHECK(ch.trace_preservation_defect() <= 1e-12);
        Matrix rho(1, 1, {0.7});
        CHECK(ch.apply(rho)(0, 0).real() == Approx(0.7).epsilon(1e-14));
    }
    SECTION("trace preservation across shapes") {
        for (std::uint64_t seed : {0ULL, 1ULL, 7ULL}) {
            for (auto [ni, no, nk] : {std::tuple{2, 2, 1}, {2, 3, 2}, {3, 2, 4}, {4, 4, 3}}) {
                const KrausChannel ch = random_cptp(ni, no, nk, seed);
                CHECK(ch.trace_preservation_defect() <= 1e-12);
            }
        }
    }
    SECTION("deterministic in the seed") {
        const KrausChannel a = random_cptp(2, 3, 2, 42), b = random_cptp(2, 3, 2, 42);
        for (std::size_t k = 0; k < a.kraus().size(); ++k)
            CHECK((a.kraus()[k] - b.kraus()[k]).max_abs() == 0.0);
        const KrausChannel c = random_cptp(2, 3, 2, 43);
        CHECK((a.kraus()[0] - c.kraus()[0]).max_abs() > 0.0);
    }
    SECTION("infeasible shapes are rejected") {
        CHECK_THROWS_AS(random_cptp(3, 1, 2, 0), std::invalid_argument);
    }
    SECTION("channels are completely positive by construction") {
        const KrausChannel ch = random_cptp(3, 2, 3, 5);
        CHECK(cp_check(ch.superop()).is_psd);
    }
}

TEST_CASE("channel adjoints") {
    Rng rng(77);
    SECTION("unitary channel adjoint is the inverse conjugation") {
        const KrausChannel u = random_cptp(3, 3, 1, 11);  // single Kraus operator: a unitary
        const Matrix a = random_hermitian(3, rng);
        CHECK((u.apply_adjoint(u.apply(a)) - a).max_abs() <= 1e-12 * std::max(1.0, a.max_abs()));
    }
    SECTION("adjoint of adjoint returns the original map") {
        const KrausChannel ch = random_cptp(2, 3, 2, 19);
        const SuperOperator adj = adjoint_channel(ch);
        const SuperOperator back(2, 3, [&](const Matrix& m) {
            Matrix r(3, 3);
            for (const auto& k : ch.kraus()) r += k * m * k.adjoint();
            return r;
        });
        CHECK((back.hs_matrix() - ch.superop().hs_matrix()).max_abs() <= 1e-13);
        // HS matrix of the adjoint is the conjugate transpose
        CHECK((adj.hs_matrix() - ch.superop().hs_matrix().adjoint()).max_abs() <= 1e-13);
    }
    SECTION("adjoint pairing identity") {
        const KrausChannel ch = random_cptp(3, 2, 2, 23);
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix a = random_hermitian(3, rng);
            const Matrix b = random_hermitian(2, rng);
            const cplx lhs = hs_inner(ch.apply(a), b);
            const cplx rhs = hs_inner(a, ch.apply_adjoint(b));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("channel-monotonicity gap") {
    Rng rng(55);
    const Matrix dmat = random_complex_psd(3, rng) + 0.3 * Matrix::identity(3);
    const PositiveMatrix d(dmat);
    SECTION("identity channel gives a zero gap") {
        const KrausChannel id({Matrix::identity(3)});
        CHECK(std::abs(monotonicity_gap(MeanFunction(Family::logarithmic), d, id)) <= 1e-12);
        CHECK(std::abs(monotonicity_gap(MeanFunction(Family::binomial, -0.5), d, id)) <= 1e-12);
    }
    SECTION("standard monotone functions keep the gap nonnegative") {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const KrausChannel alpha = random_cptp(3, 2, 3, 1000 + s);
            CHECK(monotonicity_gap(MeanFunction(Family::logarithmic), d, alpha) >= -1e-8);
            CHECK(monotonicity_gap(MeanFunction(Family::stolarsky, -2.0), d, alpha) >= -1e-8);
        }
    }
    SECTION("exploratory families evaluate without assertion") {
        const KrausChannel alpha = random_cptp(3, 2, 3, 2024);
        const double gap = monotonicity_gap(MeanFunction(Family::ando_mix), d, alpha);
        CHECK(std::isfinite(gap));
    }
    SECTION("dimension mismatch is rejected") {
        const KrausChannel alpha = random_cptp(2, 2, 2, 3);
        CHECK_THROWS_AS(monotonicity_gap(MeanFunction(Family::logarithmic), d, alpha),
                        std::invalid_argument);
    }
    SECTION("channels with singular output are reported") {
        // K_i = E_{1,i} collapses everything onto E_11, so alpha(D) is singular
        std::vector<Matrix> ks;
        for (int i = 0; i < 3; ++i) ks.push_back(Matrix::unit(3, 0, i));
        const KrausChannel collapse(std::move(ks));
        CHECK(collapse.trace_preservation_defect() <= 1e-15);
        CHECK_THROWS_AS(monotonicity_gap(MeanFunction(Family::logarithmic), d, collapse),
                        DegenerateChannelError);
    }
}
