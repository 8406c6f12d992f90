#pragma once

#include <vector>

#include "siegel/hecke.hpp"
#include "siegel/pullback.hpp"

namespace siegel {

// dim M_k(Gamma_n) for even k: exact formulas for n <= 2; for n = 3 a table
// of the Tsuyumine generating function for 4 <= k <= 22. Returns 0 when unknown.
int known_dimension(int n, int k);

struct SpaceOptions {
    int known_dim = -1;  // -1: use known_dimension(); 0: rank stabilization only
    int max_diag = 2;
    int step = 1;
    int stable_rounds = 3;
    EnumOptions enumeration;
};
struct SpaceResult {
    int n = 0;
    int k = 0;
    GrowthReport growth;
    Bases bases;
};
SpaceResult compute_space(int n, int k, const SpaceOptions& opt = {});

FourierTable form_table(const PullbackForm& f, int n);

// Hecke eigenforms of the cusp space at p, probed on definite candidates.
std::vector<HeckeEigenData> cusp_eigenforms(const SpaceResult& space, long p, bool squares = true,
                                            int verify_rows = 0);

// Eigenforms of T(p) on the whole space (cusp forms and Eisenstein/Klingen
// series), probed on all candidates.
std::vector<HeckeEigenData> full_eigenforms(const SpaceResult& space, long p, bool squares = false);

// Values on the Gram index list, scaled so the first nonzero value in T-order is 1.
std::vector<TruncatedForm> eigen_truncations(const std::vector<HeckeEigenData>& eigen, const PullbackMatrix& pm);

}  // namespace siegel
