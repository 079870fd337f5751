// A short tour: build mean matrices for a few catalog functions, test their
// inverse matrices for positivity, and confirm the Choi-matrix route gives
// the same verdict.

#include <cstdio>

#include "meanmat/meanmat.hpp"

using namespace meanmat;

int main() {
    const Spectrum lam{0.5, 1.0, 2.0, 7.0};

    for (const char* name : {"arithmetic", "geometric", "logarithmic", "heinz:0.3",
                             "power_difference:1.5", "ando_mix"}) {
        const MeanFunction fn = MeanFunction::parse(name);
        const Matrix t = inverse_mean_matrix(fn, lam);
        const PsdReport psd = psd_check(t);
        const PsdReport choi = cp_check(hadamard_multiplier(t));
        std::printf("%-22s T min_eig % .3e  %s   Choi min_eig % .3e  %s\n", name, psd.min_eig,
                    psd.is_psd ? "PSD    " : "not PSD", choi.min_eig,
                    choi.is_psd ? "CP" : "not CP");
    }

    // the arithmetic-harmonic mix fails at some spectra; search for one
    SearchSpec spec{MeanFunction(Family::ando_mix), 3, 1e-3, 1.0,
                    SearchStrategy::hybrid, 20000, 1, SearchCriterion::min_eig};
    if (const auto w = find_negative_witness(spec)) {
        std::printf("\nando_mix witness: min_eig %.6f at lambda = (", w->criterion_value);
        for (std::size_t i = 0; i < w->lambdas.size(); ++i)
            std::printf("%s%.6g", i ? ", " : "", w->lambdas[i]);
        std::printf(")\n");
    }
    return 0;
}
