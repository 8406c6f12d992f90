#include "doctest.h"

#include "siegel/eisenstein.hpp"
#include "siegel/euler.hpp"
#include "siegel/pullback.hpp"

using namespace siegel;

namespace {

BigRat q(long a, long b = 1) { return make_rat(BigInt(a), BigInt(b)); }

QMatrix k3_display(long p) {
    BigRat P(p);
    auto pw = [&](int e) { return rat_pow(P, e); };
    BigRat c = 3 * pw(3) - pw(2) - P - 1;
    QMatrix K(4, 4);
    K(0, 0) = 1 / pw(6);
    K(0, 1) = (pw(3) - 1) / pw(6);
    K(0, 2) = c / pw(4);
    K(0, 3) = (P - 1) * c / pw(4);
    K(1, 1) = 1 / pw(3);
    K(1, 2) = (pw(2) - 1) / pw(3);
    K(1, 3) = 2 * (P - 1) / P;
    K(2, 2) = 1 / P;
    K(2, 3) = (P - 1) / P;
    K(3, 3) = 1;
    return K;
}

BigRat eval_at(const LaurentPoly& f, const std::vector<BigRat>& x) {
    BigRat s = 0;
    for (auto& [e, c] : f.terms) {
        BigRat term = c;
        for (std::size_t i = 0; i < e.size(); ++i) term *= rat_pow(x[i], e[i]);
        s += term;
    }
    return s;
}

NFPoly linear(const BigRat& root) { return {NFElem(1), NFElem(-root)}; }

NFPoly eisenstein_standard(int n, int k, long p) {
    NFPoly f = linear(1);
    for (int i = 1; i <= n; ++i) {
        f = nfpoly_mul(f, linear(rat_pow(BigRat(p), k - i)));
        f = nfpoly_mul(f, linear(rat_pow(BigRat(p), i - k)));
    }
    return f;
}

SemiIntegralIndex scalar(long t) { return SemiIntegralIndex::from_2t(IntMatrix(1, 1, {2 * t})); }

// a_2 / a_1 of the unique normalized cusp form of weight w and degree one
BigRat elliptic_a2(int w) {
    std::vector<SemiIntegralIndex> T{scalar(0), scalar(1), scalar(2), scalar(3)};
    auto b = extract_bases(build_gram(T, w));
    REQUIRE(b.dim_S == 1);
    auto& f = b.cusp_forms[0];
    return f(scalar(2)) / f(scalar(1));
}

std::vector<NFElem> eigen_lambda(const FourierTable& f, const SemiIntegralIndex& t, long p) {
    int n = f.n();
    NFElem base = f.coeff(t);
    std::vector<NFElem> lam;
    for (int i = n; i >= 0; --i) lam.push_back(hecke_coefficient(f, t, HeckeOperator::Ti(p, i)) / base);
    return lam;
}

}  // namespace

TEST_CASE("K_3(p^2) from cosets matches the closed form") {
    for (long p : {2L, 3L}) CHECK(krieg_matrix(3, p) == k3_display(p));
    QMatrix K = krieg_matrix(3, 2);
    CHECK(K.row(0) == std::vector<BigRat>{q(1, 64), q(7, 64), q(17, 16), q(17, 16)});
    CHECK(K.row(1) == std::vector<BigRat>{q(0), q(1, 8), q(3, 8), q(1)});
}

TEST_CASE("K_n(p^2) shape") {
    for (int n = 1; n <= 3; ++n)
        for (long p : {2L, 3L}) {
            QMatrix K = krieg_matrix(n, p);
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j) {
                    if (j < i) CHECK(K(i, j) == 0);
                    else CHECK(K(i, j) > 0);
                }
            CHECK(K(n, n) == 1);
        }
    // degree two, p = 2, derived from the coset images
    QMatrix K2 = krieg_matrix(2, 2);
    CHECK(K2(0, 0) == q(1, 8));
    CHECK(K2(1, 1) == q(1, 2));
}

TEST_CASE("Pascal matrices") {
    CHECK(pascal_matrix(1) == QMatrix::identity(2));
    QMatrix P2(3, 3);
    P2(0, 0) = P2(1, 1) = P2(2, 2) = 1;
    P2(0, 2) = 2;
    CHECK(pascal_matrix(2) == P2);
    QMatrix P3 = QMatrix::identity(4);
    P3(0, 2) = 3;
    P3(1, 3) = 2;
    CHECK(pascal_matrix(3) == P3);
}

TEST_CASE("Eisenstein standard factors") {
    for (int n = 2; n <= 3; ++n) {
        int k = n == 2 ? 10 : 12;
        auto e = FourierTable::from_function(n, k, [k](const SemiIntegralIndex& t) { return NFElem(eis_coefficient(t, k)); });
        auto t = n == 2 ? SemiIntegralIndex::parse_2t("[[2,1],[1,2]]") : SemiIntegralIndex::parse_2t("[[2,1,1],[1,2,1],[1,1,2]]");
        auto lam = eigen_lambda(e, t, 2);
        auto f = standard_factor(lam, n, k, 2);
        CHECK(f.coeffs.size() == static_cast<std::size_t>(2 * n + 2));
        CHECK_MESSAGE(nfpoly_equal(f.coeffs, eisenstein_standard(n, k, 2)), nfpoly_str(f.coeffs));
        if (n == 3) {
            NFElem g = hecke_coefficient(e, t, HeckeOperator::T(2)) / e.coeff(t);
            auto gv = g_vector(lam, 3, 2);
            auto sp = spinor_factor_deg3(g, gv, 2);
            // alpha = (1, 2^11, 2^10, 2^9)
            std::vector<BigRat> a{1, rat_pow(BigRat(2), 11), rat_pow(BigRat(2), 10), rat_pow(BigRat(2), 9)};
            NFPoly expect{NFElem(1)};
            for (int mask = 0; mask < 8; ++mask) {
                BigRat root = a[0];
                for (int i = 0; i < 3; ++i)
                    if (mask >> i & 1) root *= a[static_cast<std::size_t>(i) + 1];
                expect = nfpoly_mul(expect, linear(root));
            }
            CHECK(nfpoly_equal(sp.coeffs, expect));
            auto num = satake_numeric_deg3(g, gv, k, 2);
            CHECK(num.spinor_dev < Real("1e-20"));
        }
    }
}

TEST_CASE("spinor table is a polynomial identity") {
    std::vector<std::vector<BigRat>> points{{q(2, 3), q(5), q(-1, 7), q(3, 2)}, {q(-4), q(1, 3), q(2), q(9, 5)}};
    for (auto& a : points) {
        BigRat g = eval_at(satake_g(3), a);
        std::vector<NFElem> gv;
        for (int l = 0; l <= 3; ++l) gv.emplace_back(eval_at(satake_gl(3, l), a));
        NFPoly expect{NFElem(1)};
        for (int mask = 0; mask < 8; ++mask) {
            BigRat root = a[0];
            for (int i = 0; i < 3; ++i)
                if (mask >> i & 1) root *= a[static_cast<std::size_t>(i) + 1];
            expect = nfpoly_mul(expect, linear(root));
        }
        auto sp = spinor_factor_deg3(NFElem(g), gv, 2);
        CHECK(nfpoly_equal(sp.coeffs, expect));
        for (int l = 0; l <= 3; ++l) {
            NFElem s = l % 2 ? -sp.coeffs[static_cast<std::size_t>(l)] : sp.coeffs[static_cast<std::size_t>(l)];
            NFElem s8 = l % 2 ? -sp.coeffs[static_cast<std::size_t>(8 - l)] : sp.coeffs[static_cast<std::size_t>(8 - l)];
            NFElem pw(1);
            for (int i = 0; i < 4 - l; ++i) pw = pw * gv[0];
            CHECK(s8 == pw * s);
        }
    }
}

TEST_CASE("unimodular degenerate parameters give (1 - X)^{2n+1}") {
    int n = 3, k = 12;
    long p = 2;
    // alpha = (2^15, 1, 1, 1): g_0(alpha) = p^{kn - <n>}
    std::vector<BigRat> a{rat_pow(BigRat(2), 15), 1, 1, 1};
    std::vector<NFElem> gv;
    for (int l = 0; l <= n; ++l) gv.emplace_back(eval_at(satake_gl(n, l), a));
    QMatrix K = krieg_matrix(n, p);
    std::vector<NFElem> lam(4, NFElem(0));
    for (int j = 0; j <= n; ++j)
        for (int l = 0; l <= n; ++l) lam[static_cast<std::size_t>(j)] = lam[static_cast<std::size_t>(j)] + gv[static_cast<std::size_t>(l)] * NFElem(K(l, j));
    NFPoly expect{NFElem(1)};
    for (int i = 0; i < 2 * n + 1; ++i) expect = nfpoly_mul(expect, linear(1));
    CHECK(nfpoly_equal(standard_factor(lam, n, k, p).coeffs, expect));
    lam[0] = lam[0] + NFElem(1);
    CHECK_THROWS_AS(standard_r(lam, n, k, p), ConsistencyError);
}

TEST_CASE("elliptic factors") {
    auto z = elliptic_shift_factor(NFElem(0), 20, 10, 2);
    CHECK(nfpoly_equal(z.coeffs, {NFElem(1), NFElem(0), NFElem(q(1, 2))}));
    auto f = elliptic_shift_factor(NFElem(456), 20, 10, 2);
    CHECK(nfpoly_equal(f.coeffs, {NFElem(1), NFElem(q(-456, 1024)), NFElem(q(1, 2))}));
    // Eisenstein-type parameter: a = 1 + p^{w-1} gives alpha = p^{w-1}
    auto e = elliptic_standard_factor(NFElem(1 + 2048), 12, 2);
    NFPoly expect = nfpoly_mul(nfpoly_mul(linear(1), linear(2048)), linear(q(1, 2048)));
    CHECK(nfpoly_equal(e.coeffs, expect));
}

TEST_CASE("degree-one eigenvalues from the pullback pipeline") {
    CHECK(elliptic_a2(12) == -24);
    CHECK(elliptic_a2(18) == -528);
}

TEST_CASE("Saito-Kurokawa lift chi_10") {
    int k = 10;
    auto T = candidate_indices(2, 2);
    auto b = extract_bases(build_gram(T, k));
    REQUIRE(b.dim_S == 1);
    auto pf = b.cusp_forms[0];
    auto chi = FourierTable::from_function(2, k, [pf](const SemiIntegralIndex& t) { return NFElem(pf(t)); });
    auto t = SemiIntegralIndex::parse_2t("[[2,1],[1,2]]");
    REQUIRE(chi.coeff(t) != NFElem(0));
    auto lam = eigen_lambda(chi, t, 2);
    auto st = standard_factor(lam, 2, k, 2);
    NFElem a(elliptic_a2(18));
    NFPoly expect = nfpoly_mul(linear(1), nfpoly_mul(elliptic_shift_factor(a, 18, k - 1, 2).coeffs,
                                                     elliptic_shift_factor(a, 18, k - 2, 2).coeffs));
    CHECK_MESSAGE(nfpoly_equal(st.coeffs, expect), nfpoly_str(st.coeffs) << " vs " << nfpoly_str(expect));
}
