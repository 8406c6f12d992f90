#include "doctest.h"

#include "siegel/bernoulli.hpp"

using namespace siegel;

namespace {

// B_j(chi) straight from the generating function: expand
// sum_a chi(a) t e^{at} / (e^{ft} - 1) as a power series in t.
BigRat generating_oracle(long d, int j) {
    long f = d < 0 ? -d : d;
    int terms = j + 2;
    // 1 / (e^{ft} - 1) = (1/(f t)) * g(t), g(t) = ft / (e^{ft} - 1)
    std::vector<BigRat> den(static_cast<std::size_t>(terms) + 1);  // (e^{ft}-1)/(ft)
    BigRat fact = 1;
    for (int i = 0; i <= terms; ++i) {
        fact *= (i + 1);
        den[i] = rat_pow(BigRat(f), i) / fact;
    }
    std::vector<BigRat> g(static_cast<std::size_t>(terms) + 1);
    for (int i = 0; i <= terms; ++i) {
        BigRat s = (i == 0) ? BigRat(1) : BigRat(0);
        for (int l = 1; l <= i; ++l) s -= den[l] * g[i - l];
        g[i] = s / den[0];
    }
    // sum_a chi(a) e^{at} / f
    std::vector<BigRat> e(static_cast<std::size_t>(terms) + 1, BigRat(0));
    for (long a = 1; a <= f; ++a) {
        int c = kronecker(BigInt(d), BigInt(a));
        if (c == 0) continue;
        BigRat fa = 1;
        for (int i = 0; i <= terms; ++i) {
            if (i > 0) fa /= i;
            e[i] += BigRat(c) * rat_pow(BigRat(a), i) * fa / f;
        }
    }
    BigRat coef = 0;
    for (int i = 0; i <= j; ++i) coef += e[i] * g[j - i];
    BigRat jf = 1;
    for (int i = 2; i <= j; ++i) jf *= i;
    BigRat out = coef * jf;
    out.canonicalize();
    return out;
}

}  // namespace

TEST_CASE("Bernoulli numbers and zeta values") {
    CHECK(bernoulli_number(0) == 1);
    CHECK(bernoulli_number(1) == make_rat(-1, 2));
    CHECK(bernoulli_number(12) == make_rat(-691, 2730));
    CHECK(bernoulli_number(13) == 0);
    CHECK(zeta_value(2) == make_rat(-1, 12));
    CHECK(zeta_value(4) == make_rat(1, 120));
    CHECK(zeta_value(12) == make_rat(691, 32760));
    CHECK(bernoulli_polynomial(2) == parse_qpoly("1/6 - X + X^2"));
}

TEST_CASE("quadratic Bernoulli numbers") {
    CHECK(quad_bernoulli(QuadChar(BigInt(-4)), 1) == make_rat(-1, 2));
    CHECK(quad_bernoulli(QuadChar(BigInt(-3)), 1) == make_rat(-1, 3));
    CHECK(l_value(QuadChar(BigInt(-4)), 1) == make_rat(1, 2));
    CHECK(l_value(QuadChar(BigInt(-3)), 1) == make_rat(1, 3));
    CHECK(l_value(QuadChar::trivial(), 12) == make_rat(691, 32760));
    CHECK(quad_bernoulli(QuadChar::trivial(), 1) == make_rat(1, 2));
    for (int j = 2; j <= 40; ++j) CHECK(quad_bernoulli(QuadChar::trivial(), j) == bernoulli_number(j));
    for (long d : {-3L, -4L, -7L, -8L, 5L, 8L, 12L, -15L, 13L, -20L})
        for (int j = 1; j <= 9; ++j) CHECK(quad_bernoulli(QuadChar(BigInt(d)), j) == generating_oracle(d, j));
    // odd characters have vanishing even-index values and vice versa
    CHECK(quad_bernoulli(QuadChar(BigInt(-4)), 2) == 0);
    CHECK(quad_bernoulli(QuadChar(BigInt(5)), 3) == 0);
    CHECK_THROWS_AS(QuadChar(BigInt(-12 * 4)), UsageError);
    CHECK_THROWS_AS(QuadChar(BigInt(9)), UsageError);
    CHECK(is_fundamental_discriminant(BigInt(-3)));
    CHECK(is_fundamental_discriminant(BigInt(12)));
    CHECK(!is_fundamental_discriminant(BigInt(-12)));
    CHECK(!is_fundamental_discriminant(BigInt(4)));
}

TEST_CASE("Clausen-von Staudt predicate") {
    CHECK(cvs_integral_at(make_rat(1, 6), 23));
    CHECK(!cvs_integral_at(make_rat(1, 29), 23));
    CHECK(cvs_integral_at(make_rat(691, 32760), 23));
    CHECK(cvs_integral_at(BigRat(5), 2));
}
