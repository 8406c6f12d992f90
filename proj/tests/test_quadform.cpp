#include "doctest.h"

#include <random>

#include "siegel/quadform.hpp"

using namespace siegel;

namespace {

// Exhaustive check: does a x^2 + b y^2 = z^2 have a primitive solution
// modulo p^e for e = 3 + ord_p(4ab)?
int hilbert_oracle(long a, long b, long p) {
    int e = 3 + valuation64(4 * a * b, p);
    long mod = 1;
    for (int i = 0; i < e; ++i) mod *= p;
    std::vector<long> sq(static_cast<std::size_t>(mod));
    for (long x = 0; x < mod; ++x) sq[x] = (x * x) % mod;
    long am = ((a % mod) + mod) % mod, bm = ((b % mod) + mod) % mod;
    for (long x = 0; x < mod; ++x)
        for (long y = 0; y < mod; ++y) {
            long lhs = (am * sq[x] + bm * sq[y]) % mod;
            for (long z = 0; z < mod; ++z) {
                if (x % p == 0 && y % p == 0 && z % p == 0) continue;
                if (lhs == sq[z]) return 1;
            }
        }
    return -1;
}

IntMatrix random_unimodular(std::mt19937& rng, int n) {
    IntMatrix u = IntMatrix::identity(n);
    for (int s = 0; s < 6; ++s) {
        int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
        if (i == j) continue;
        u.add_col(i, j, static_cast<std::int64_t>(rng() % 3) - 1);
    }
    if (rng() % 2 && n > 1) u.swap_cols(0, n - 1);
    return u;
}

}  // namespace

TEST_CASE("definiteness") {
    CHECK(is_psd(SemiIntegralIndex::zero(3)));
    CHECK(!is_pd(SemiIntegralIndex::zero(3)));
    CHECK(is_pd(SemiIntegralIndex::parse_t("[[1,0],[0,1]]")));
    auto t = SemiIntegralIndex::parse_t("[[1,1],[1,1]]");
    CHECK(is_psd(t));
    CHECK(!is_pd(t));
    CHECK(!is_psd(SemiIntegralIndex::parse_t("[[1,2],[2,1]]")));
    CHECK(!is_psd(SemiIntegralIndex::parse_2t("[[0,1],[1,0]]")));
    CHECK_THROWS_AS(SemiIntegralIndex::parse_t("[[1/2,0],[0,1]]"), UsageError);
    CHECK_THROWS_AS(SemiIntegralIndex::parse_t("[[1,1/4],[1/4,1]]"), UsageError);
}

TEST_CASE("rank split") {
    auto r0 = rank_split(SemiIntegralIndex::zero(2));
    CHECK(r0.m == 0);
    auto r1 = rank_split(SemiIntegralIndex::parse_t("[[1,0],[0,0]]"));
    CHECK(r1.m == 1);
    CHECK(r1.u.two_t()(0, 0) == 2);
    auto r2 = rank_split(SemiIntegralIndex::parse_t("[[1,1],[1,1]]"));
    CHECK(r2.m == 1);
    CHECK(r2.u.two_t()(0, 0) == 2);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + trial % 4;
        int m = static_cast<int>(rng() % (n + 1));
        IntMatrix base(n, n);
        for (int i = 0; i < m; ++i) base(i, i) = 2 + 2 * static_cast<std::int64_t>(rng() % 3);
        if (m >= 2) base(0, 1) = base(1, 0) = 1;
        IntMatrix v = random_unimodular(rng, n);
        auto t = SemiIntegralIndex::from_2t(congruence(base, v));
        auto rs = rank_split(t);
        CHECK(rs.m == m);
        CHECK(std::abs(det64(rs.U)) == 1);
        CHECK(congruence(t.two_t(), rs.U) == direct_sum(rs.u.two_t(), IntMatrix(n - m, n - m)));
    }
}

TEST_CASE("discriminant split of indices") {
    auto e = discriminant_split(SemiIntegralIndex::zero(0));
    CHECK(e.fundamental == 1);
    CHECK(e.conductor == 1);
    auto d = discriminant_split(SemiIntegralIndex::parse_2t("[[2,0],[0,2]]"));
    CHECK(d.fundamental == -4);
    auto s = discriminant_split(SemiIntegralIndex::parse_2t(
        "[[2,1,1,0,1,2],[1,4,2,2,0,1],[1,2,4,2,0,0],[0,2,2,4,2,2],[1,0,0,2,4,2],[2,1,0,2,2,8]]"));
    CHECK(s.fundamental == -3);
    CHECK(s.conductor == 4);
    CHECK_THROWS_AS(discriminant_split(SemiIntegralIndex::parse_2t("[[2]]")), UsageError);
}

TEST_CASE("Hilbert symbol against the exhaustive congruence oracle") {
    CHECK(hilbert_symbol(BigRat(-1), BigRat(-1), 2) == -1);
    CHECK(hilbert_symbol(BigRat(2), BigRat(3), 3) == -1);
    CHECK(hilbert_symbol(BigRat(1), BigRat(7), 5) == 1);
    CHECK(hilbert_oracle(-1, -1, 2) == -1);
    CHECK(hilbert_oracle(2, 3, 3) == -1);
    const long vals[] = {-6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 12};
    for (long p : {2L, 3L, 5L}) {
        for (long a : vals)
            for (long b : vals) {
                if (p == 2 && (std::abs(a) > 7 || std::abs(b) > 7)) continue;
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(p);
                CHECK(hilbert_symbol(BigRat(a), BigRat(b), p) == hilbert_oracle(a, b, p));
            }
    }
}

TEST_CASE("Hilbert symbol algebra") {
    std::mt19937 rng(3);
    auto rnd = [&]() {
        long v = static_cast<long>(rng() % 200) - 100;
        return v == 0 ? 1L : v;
    };
    for (int i = 0; i < 300; ++i) {
        BigRat a(rnd()), a2 = make_rat(rnd(), std::abs(rnd())), b(rnd());
        for (long p : {2L, 3L, 5L, 7L, 11L}) {
            CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
            CHECK(hilbert_symbol(a * a2, b, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a2, b, p));
        }
        // product formula over p | 2ab and the real place
        BigRat abr = a * b;
        BigInt ab = abr.get_num() * abr.get_den() * 2;
        int prod = hilbert_symbol_real(a, b);
        for (auto& [p, e] : factor_big(ab)) prod *= hilbert_symbol(a, b, p.get_si());
        CHECK(prod == 1);
    }
}

TEST_CASE("Hasse invariant") {
    auto id = SemiIntegralIndex::parse_t("[[1,0,0],[0,1,0],[0,0,1]]");
    for (long p : {2L, 3L, 5L}) CHECK(hasse_invariant(id, p) == 1);
    QMatrix d(2, 2);
    d(0, 0) = 1;
    d(1, 1) = -1;
    int oracle = hilbert_oracle(1, 1, 2) * hilbert_oracle(1, -1, 2) * hilbert_oracle(-1, -1, 2);
    CHECK(oracle == -1);
    CHECK(hasse_invariant(d, 2) == oracle);
    d(0, 0) = 2;
    d(1, 1) = 3;
    oracle = hilbert_oracle(2, 2, 3) * hilbert_oracle(2, 3, 3) * hilbert_oracle(3, 3, 3);
    CHECK(oracle == 1);
    CHECK(hasse_invariant(d, 3) == oracle);
    std::mt19937 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + trial % 3;
        IntMatrix base(n, n);
        for (int i = 0; i < n; ++i) base(i, i) = 2 * (1 + static_cast<std::int64_t>(rng() % 4));
        base(0, 1) = base(1, 0) = 1;
        auto t = SemiIntegralIndex::from_2t(base);
        auto tv = t.transform(random_unimodular(rng, n));
        for (long p : {2L, 3L, 5L, 7L}) CHECK(hasse_invariant(t, p) == hasse_invariant(tv, p));
    }
}

TEST_CASE("reduce_index gives a class invariant") {
    auto a3 = SemiIntegralIndex::parse_2t("[[2,1,1],[1,2,1],[1,1,2]]");
    auto r = reduce_index(a3);
    CHECK(r.index.two_t().data() == std::vector<std::int64_t>{2, 1, 1, 1, 2, 1, 1, 1, 2});
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + trial % 3;
        IntMatrix base(n, n);
        for (int i = 0; i < n; ++i) base(i, i) = 2 * (1 + static_cast<std::int64_t>(rng() % 4));
        if (n > 1) base(0, 1) = base(1, 0) = static_cast<std::int64_t>(rng() % 3) - 1;
        if (rng() % 3 == 0) {
            for (int j = 0; j < n; ++j) base(n - 1, j) = base(j, n - 1) = 0;
        }
        auto t = SemiIntegralIndex::from_2t(base);
        auto tv = t.transform(random_unimodular(rng, n));
        auto r1 = reduce_index(t), r2 = reduce_index(tv);
        CHECK(r1.index == r2.index);
        CHECK(congruence(tv.two_t(), r2.transform) == r2.index.two_t());
    }
}
