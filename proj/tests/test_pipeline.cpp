#include "doctest.h"

#include <set>

#include "siegel/pipeline.hpp"

using namespace siegel;

namespace {

SemiIntegralIndex scalar(long t) { return SemiIntegralIndex::from_2t(IntMatrix(1, 1, {2 * t})); }

// monomials E_4^a E_6^b of weight k
int count_degree_one(int k) {
    int c = 0;
    for (int a = 0; 4 * a <= k; ++a)
        if ((k - 4 * a) % 6 == 0) ++c;
    return c;
}

}  // namespace

TEST_CASE("known dimensions") {
    for (int k = 4; k <= 40; k += 2) CHECK(known_dimension(1, k) == count_degree_one(k));
    CHECK(known_dimension(1, 2) == 0);
    CHECK(known_dimension(2, 10) == 2);
    CHECK(known_dimension(2, 20) == 5);
    CHECK(known_dimension(3, 12) == 4);
    CHECK(known_dimension(3, 14) == 3);
    CHECK(known_dimension(3, 24) == 0);
    CHECK(known_dimension(2, 7) == 0);
}

TEST_CASE("degree one, weight 12: Ramanujan's congruence in the constants c") {
    auto sp = compute_space(1, 12);
    CHECK(sp.bases.dim_M == 2);
    CHECK(sp.bases.dim_S == 1);
    auto eig = full_eigenforms(sp, 2);
    REQUIRE(eig.size() == 2);
    auto tr = eigen_truncations(eig, sp.growth.pm);
    for (auto& f : tr) {
        std::size_t first = 0;
        while (f.values[first] == NFElem(0)) ++first;
        CHECK(f.values[first] == NFElem(1));
    }
    auto c = solve_c(tr, sp.growth.pm);
    // the truncations reproduce the Gram matrix exactly
    const auto& M = sp.growth.pm.M;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) {
            NFElem s(0);
            for (std::size_t o = 0; o < tr.size(); ++o)
                s = s + c[o] * tr[o].values[static_cast<std::size_t>(i)] * tr[o].values[static_cast<std::size_t>(j)];
            CHECK(s == NFElem(M(i, j)));
        }
    bool saw691 = false;
    for (auto& h : congruence_scan(c, 12)) saw691 = saw691 || h.p == 691;
    CHECK(saw691);
    // eigenvalues 1 + 2^11 and tau(2)
    std::set<std::string> lam;
    for (auto& e : eig) lam.insert(e.lambda_T.str());
    CHECK(lam == std::set<std::string>{"2049", "-24"});
    CHECK(sp.bases.cusp_forms[0](scalar(2)) / sp.bases.cusp_forms[0](scalar(1)) == -24);
}

TEST_CASE("degree two, weight 20") {
    auto sp = compute_space(2, 20);
    CHECK(sp.bases.dim_M == 5);
    auto eig = cusp_eigenforms(sp, 2, false);
    int total = 0;
    for (auto& e : eig) total += e.field ? e.field->degree() : 1;
    CHECK(total == sp.bases.dim_S);
}

TEST_CASE("spaces reject bad weights") {
    CHECK_THROWS_AS(compute_space(3, 7), UsageError);
    CHECK_THROWS_AS(compute_space(4, 12), UsageError);
    CHECK_THROWS_AS(compute_space(2, 4), UsageError);
}
