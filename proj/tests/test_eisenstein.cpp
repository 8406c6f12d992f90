#include "doctest.h"

#include <array>
#include <functional>
#include <map>
#include <random>

#include "siegel/bernoulli.hpp"
#include "siegel/eisenstein.hpp"

using namespace siegel;

namespace {

const char* kWorked2t = "[[2,1,1,0,1,2],[1,4,2,2,0,1],[1,2,4,2,0,0],[0,2,2,4,2,2],[1,0,0,2,4,2],[2,1,0,2,2,8]]";

BigInt sigma(long n, int e) {
    BigInt s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += int_pow(BigInt(d), static_cast<unsigned long>(e));
    return s;
}

IntMatrix random_unimodular(std::mt19937& rng, int n) {
    IntMatrix u = IntMatrix::identity(n);
    for (int s = 0; s < 8; ++s) {
        int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
        if (i == j) continue;
        u.add_col(i, j, static_cast<std::int64_t>(rng() % 5) - 2);
    }
    if (rng() % 2 && n > 1) u.swap_cols(0, n - 1);
    return u;
}

// E8 vectors of norm <= 6 in doubled coordinates (entries of 2x).
std::vector<std::array<int, 8>> e8_vectors(int max_norm) {
    std::vector<std::array<int, 8>> out;
    std::array<int, 8> v{};
    // integral part: entries in {-2..2}, even sum
    std::function<void(int, int, int)> rec_int = [&](int i, int sum, int norm) {
        if (norm > 4 * max_norm) return;
        if (i == 8) {
            if (sum % 2 == 0) out.push_back(v);
            return;
        }
        for (int x = -2; x <= 2; ++x) {
            v[i] = 2 * x;
            rec_int(i + 1, sum + x, norm + 4 * x * x);
        }
    };
    rec_int(0, 0, 0);
    // half-integral part: entries in {+-1/2, +-3/2}, sum even
    std::function<void(int, int, int)> rec_half = [&](int i, int sum2, int norm) {
        if (norm > 4 * max_norm) return;
        if (i == 8) {
            if (sum2 % 4 == 0) out.push_back(v);
            return;
        }
        for (int x : {-3, -1, 1, 3}) {
            v[i] = x;
            rec_half(i + 1, sum2 + x, norm + x * x);
        }
    };
    rec_half(0, 0, 0);
    return out;
}

}  // namespace

TEST_CASE("normalizing constants") {
    CHECK(c_const(0, 12) == zeta_value(12));
    CHECK(c_const(1, 4) == make_rat(1, 240));
    for (int n = 1; n <= 3; ++n)
        for (int k : {8, 12, 16}) {
            BigRat expect = zeta_value(k) / BigRat(int_pow(BigInt(2), n));
            for (int i = 1; i <= n; ++i) expect *= zeta_value(2 * k - 2 * i);
            CHECK(c_const(2 * n, k) == expect);
        }
}

TEST_CASE("trivial and degree-one coefficients") {
    CHECK(eis_coefficient(SemiIntegralIndex::zero(3), 12) == 1);
    CHECK(eis_coefficient(SemiIntegralIndex::parse_2t("[[2]]"), 4) == 240);
    CHECK(dilated_coefficient(SemiIntegralIndex::zero(2), 12) == c_const(2, 12));
    for (int k = 4; k <= 16; k += 2)
        for (long n = 1; n <= 50; ++n) {
            auto t = SemiIntegralIndex::from_2t(IntMatrix(1, 1, {2 * n}));
            BigRat expect = BigRat(-2 * k) / bernoulli_number(k) * BigRat(sigma(n, k - 1));
            expect.canonicalize();
            CHECK(eis_coefficient(t, k) == expect);
        }
    CHECK_THROWS_AS(eis_coefficient(SemiIntegralIndex::parse_2t("[[2]]"), 5), UsageError);
    CHECK_THROWS_AS(eis_coefficient(SemiIntegralIndex::zero(3), 4), UsageError);
}

TEST_CASE("weight 4 degree 2 against the E8 theta series") {
    auto vecs = e8_vectors(6);
    std::map<int, std::vector<const std::array<int, 8>*>> by_norm;
    for (auto& v : vecs) {
        int nn = 0;
        for (int x : v) nn += x * x;
        by_norm[nn / 4].push_back(&v);  // norm in the usual scaling
    }
    CHECK(by_norm[2].size() == 240);
    CHECK(by_norm[4].size() == 2160);
    CHECK(by_norm[6].size() == 6720);
    // 2t = [[2a, b], [b, 2c]] counts pairs (x, y) with x.x = 2a, y.y = 2c, x.y = b
    int compared = 0;
    for (int a = 1; a <= 3; ++a)
        for (int c = a; c <= 3; ++c)
            for (int b = 0; b <= a; ++b) {
                if (4 * a * c - b * b < 0) continue;
                long count = 0;
                for (auto* x : by_norm[2 * a])
                    for (auto* y : by_norm[2 * c]) {
                        int ip = 0;
                        for (int i = 0; i < 8; ++i) ip += (*x)[i] * (*y)[i];
                        if (ip == 4 * b) ++count;
                    }
                auto t = SemiIntegralIndex::from_2t(IntMatrix(2, 2, {2 * a, b, b, 2 * c}));
                CHECK_MESSAGE(eis_coefficient(t, 4) == count, "2t=" << t.str());
                ++compared;
            }
    CHECK(compared >= 12);
}

TEST_CASE("worked example coefficient") {
    auto t = SemiIntegralIndex::parse_2t(kWorked2t);
    CHECK(eis_coefficient(t, 16) ==
          parse_rat("9780154654408147370255260881715200/13912726954911229324966739363569"));
}

TEST_CASE("Phi compatibility, genus invariance, memo transparency") {
    std::mt19937 rng(31);
    std::vector<SemiIntegralIndex> us;
    for (int trial = 0; trial < 40; ++trial) {
        int m = 1 + trial % 3;
        IntMatrix a(m, m);
        for (;;) {
            for (int i = 0; i < m; ++i) {
                a(i, i) = 2 * (1 + static_cast<std::int64_t>(rng() % 4));
                for (int j = i + 1; j < m; ++j) a(i, j) = a(j, i) = static_cast<std::int64_t>(rng() % 5) - 2;
            }
            if (is_positive_definite(a)) break;
        }
        us.push_back(SemiIntegralIndex::from_2t(a));
    }
    for (auto& u : us) {
        int m = u.n();
        int k = 12;
        BigRat base = eis_coefficient(u, k);
        for (int n = m + 1; n <= 4; ++n) {
            IntMatrix big = direct_sum(u.two_t(), IntMatrix(n - m, n - m));
            CHECK(eis_coefficient(SemiIntegralIndex::from_2t(big), k) == base);
            IntMatrix v = random_unimodular(rng, n);
            CHECK(eis_coefficient(SemiIntegralIndex::from_2t(congruence(big, v)), k) == base);
        }
        IntMatrix v = random_unimodular(rng, m);
        CHECK(eis_coefficient(u.transform(v), k) == base);
        eis_cache_enable(false);
        CHECK(eis_coefficient(u, k) == base);
        eis_cache_enable(true);
    }
    auto st = eis_cache_stats();
    CHECK(st.hits > 0);
    CHECK(st.entries > 0);
}

TEST_CASE("dilated coefficients are integral away from small primes") {
    int k = 12;
    for (int a = 1; a <= 3; ++a)
        for (int c = a; c <= 3; ++c)
            for (int b = 0; b <= a; ++b) {
                auto t = SemiIntegralIndex::from_2t(IntMatrix(2, 2, {2 * a, b, b, 2 * c}));
                CHECK(cvs_integral_at(dilated_coefficient(t, k), 2 * k - 1));
            }
    auto t3 = SemiIntegralIndex::parse_2t("[[2,1,1],[1,2,1],[1,1,2]]");
    CHECK(cvs_integral_at(dilated_coefficient(t3, k), 2 * k - 1));
}
