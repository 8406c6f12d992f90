#include "siegel/pipeline.hpp"

#include <algorithm>
#include <map>

namespace siegel {

int known_dimension(int n, int k) {
    if (k < 0 || k % 2 != 0) return 0;
    if (n == 1) {
        if (k == 2) return 0;
        return k / 12 + (k % 12 == 2 ? 0 : 1);
    }
    if (n == 2) {
        // 1 / ((1 - T^4)(1 - T^6)(1 - T^10)(1 - T^12)) on even weights
        int count = 0;
        for (int a = 0; 4 * a <= k; ++a)
            for (int b = 0; 4 * a + 6 * b <= k; ++b)
                for (int c = 0; 4 * a + 6 * b + 10 * c <= k; ++c)
                    if ((k - 4 * a - 6 * b - 10 * c) % 12 == 0) ++count;
        return count;
    }
    if (n == 3) {
        static const std::map<int, int> table{{0, 1},  {4, 1},  {6, 1},  {8, 1},   {10, 2}, {12, 4},
                                              {14, 3}, {16, 7}, {18, 8}, {20, 11}, {22, 15}};
        auto it = table.find(k);
        return it == table.end() ? 0 : it->second;
    }
    return 0;
}

SpaceResult compute_space(int n, int k, const SpaceOptions& opt) {
    if (n < 1 || n > 3) throw UsageError("degree must be 1, 2 or 3");
    if (k % 2 != 0 || k <= 2 * n + 1) throw UsageError("weight must be even and greater than 2n + 1");
    int known = opt.known_dim < 0 ? known_dimension(n, k) : opt.known_dim;
    int max_diag = opt.max_diag;
    if (n == 1) max_diag = std::max(max_diag, k / 12 + 2);
    SpaceResult r;
    r.n = n;
    r.k = k;
    r.growth = grow_gram(n, k, candidate_indices(n, max_diag), opt.step, known, opt.stable_rounds, opt.enumeration);
    r.bases = extract_bases(r.growth.pm);
    return r;
}

FourierTable form_table(const PullbackForm& f, int n) {
    return FourierTable::from_function(n, f.k, [f](const SemiIntegralIndex& t) { return NFElem(f(t)); });
}

std::vector<HeckeEigenData> cusp_eigenforms(const SpaceResult& space, long p, bool squares, int verify_rows) {
    std::vector<FourierTable> basis;
    for (auto& f : space.bases.cusp_forms) basis.push_back(form_table(f, space.n));
    std::vector<SemiIntegralIndex> probe;
    for (auto& t : candidate_indices(space.n, space.n == 1 ? space.k / 12 + 4 : 3))
        if (is_pd(t)) probe.push_back(t);
    return eigen_decompose(basis, probe, p, squares, verify_rows);
}

std::vector<HeckeEigenData> full_eigenforms(const SpaceResult& space, long p, bool squares) {
    std::vector<FourierTable> basis;
    for (auto& f : space.bases.full_forms) basis.push_back(form_table(f, space.n));
    int reach = space.n == 1 ? space.k / 12 + 4 : 3;
    return eigen_decompose(basis, candidate_indices(space.n, reach), p, squares);
}

std::vector<TruncatedForm> eigen_truncations(const std::vector<HeckeEigenData>& eigen, const PullbackMatrix& pm) {
    std::vector<TruncatedForm> out;
    for (auto& e : eigen) {
        TruncatedForm f;
        f.T = pm.T;
        for (auto& t : pm.T) f.values.push_back(e.form.coeff(t));
        NFElem lead(0);
        for (auto& v : f.values)
            if (v != NFElem(0)) {
                lead = v;
                break;
            }
        check_consistency(lead != NFElem(0), "eigenform vanishes on the Gram index list");
        for (auto& v : f.values) v = v / lead;
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace siegel
