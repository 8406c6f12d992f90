#include "doctest.h"

#include <random>

#include "siegel/arith.hpp"
#include "siegel/factor.hpp"
#include "siegel/matrix.hpp"
#include "siegel/numfield.hpp"
#include "siegel/poly.hpp"

using namespace siegel;

TEST_CASE("rationals stay in lowest terms") {
    BigRat a = make_rat(6, -4);
    CHECK(a.get_num() == -3);
    CHECK(a.get_den() == 2);
    CHECK(parse_rat("10/4") == make_rat(5, 2));
    CHECK(to_string(parse_rat(" -7/14 ")) == "-1/2");
    CHECK_THROWS_AS(parse_rat("1/0"), UsageError);
    CHECK_THROWS_AS(parse_rat("abc"), UsageError);
}

TEST_CASE("discriminant split") {
    auto s = discriminant_split(BigInt(-48));
    CHECK(s.fundamental == -3);
    CHECK(s.conductor == 4);
    s = discriminant_split(BigInt(-4));
    CHECK(s.fundamental == -4);
    CHECK(s.conductor == 1);
    s = discriminant_split(BigInt(32));
    CHECK(s.fundamental == 8);
    CHECK(s.conductor == 2);
    s = discriminant_split(BigInt(1));
    CHECK(s.fundamental == 1);
    s = discriminant_split(BigInt(-16 * 9));
    CHECK(s.fundamental == -4);
    CHECK(s.conductor == 6);
    s = discriminant_split(BigInt(12 * 25));
    CHECK(s.fundamental == 12);
    CHECK(s.conductor == 5);
}

TEST_CASE("factorization helpers") {
    auto f = factor_int(360);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::make_pair<std::int64_t, int>(2, 3));
    CHECK(f[2] == std::make_pair<std::int64_t, int>(5, 1));
    CHECK(is_prime(1000003));
    CHECK(!is_prime(1000001));
    auto big = factor_big(BigInt("1000000016000000063"));  // (1e9+7)(1e9+9)
    REQUIRE(big.size() == 2);
    CHECK(big[0].first == BigInt("1000000007"));
}

TEST_CASE("polynomial arithmetic and parsing") {
    QPoly p = parse_qpoly("1 + 24*X + 256*X^2 + 3072*X^3 + 16384*X^4");
    CHECK(p.degree() == 4);
    CHECK(p.coeff(3) == 3072);
    CHECK(p.str() == "1 + 24*X + 256*X^2 + 3072*X^3 + 16384*X^4");
    QPoly a = qpoly({1, 1}), b = qpoly({-1, 1});
    CHECK(a * b == qpoly({-1, 0, 1}));
    CHECK((a * b) / b == a);
    CHECK(poly_gcd(a * b, a * a) == a);
    CHECK(parse_qpoly("-X^2 + 1/2*X") == QPoly({BigRat(0), make_rat(1, 2), BigRat(-1)}));
}

TEST_CASE("matrices: determinant, inverse, charpoly, column reduction") {
    QMatrix m(3, 3);
    long vals[9] = {2, 1, 0, 1, 3, 1, 0, 1, 4};
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = vals[i];
    CHECK(determinant(m) == 18);
    CHECK(m * inverse(m) == QMatrix::identity(3));
    QPoly cp = charpoly(m);
    // x^3 - 9x^2 + 24x - 18
    CHECK(cp == qpoly({-18, 24, -9, 1}));
    // Cayley-Hamilton spot check via charpoly of a random integer matrix
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 5;
        QMatrix r(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r(i, j) = static_cast<long>(rng() % 11) - 5;
        QPoly c = charpoly(r);
        QMatrix acc(n, n);
        QMatrix pw = QMatrix::identity(n);
        for (int d = 0; d <= c.degree(); ++d) {
            acc = acc + c.coeff(d) * pw;
            pw = pw * r;
        }
        CHECK(acc == QMatrix(n, n));
    }
    QMatrix s(3, 4);
    long sv[12] = {1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 1, 1};
    for (int i = 0; i < 12; ++i) s(i / 4, i % 4) = sv[i];
    auto cr = rref_columns(s);
    CHECK(cr.rank == 2);
    CHECK(cr.pivot_rows == std::vector<int>{0, 2});
}

TEST_CASE("number field arithmetic") {
    auto K = std::make_shared<NumberField>(qpoly({-2, 0, 1}), "a");  // x^2 - 2
    NFElem a = NFElem::generator(K);
    NFElem one(1);
    CHECK(a * a == NFElem(2));
    NFElem x = a + one;
    CHECK(x.norm() == -1);
    CHECK(x.trace() == 2);
    CHECK(x * x.inverse() == one);
    CHECK(x.minpoly() == qpoly({-1, -2, 1}));
    auto L = std::make_shared<NumberField>(qpoly({-3, 0, 1}), "b");
    CHECK_THROWS_AS(a + NFElem::generator(L), UsageError);
}

TEST_CASE("factorization over Q") {
    // (x - 2049)(x^2 - 3x - 1)(x^2+1)^2
    QPoly f = qpoly({-2049, 1}) * qpoly({-1, -3, 1}) * qpoly({1, 0, 1}) * qpoly({1, 0, 1});
    auto fac = factor_rational(f);
    REQUIRE(fac.size() == 3);
    CHECK(fac[0].factor == qpoly({-2049, 1}));
    CHECK(fac[1].factor == qpoly({-1, -3, 1}));
    CHECK(fac[1].multiplicity == 1);
    CHECK(fac[2].factor == qpoly({1, 0, 1}));
    CHECK(fac[2].multiplicity == 2);
    CHECK(is_irreducible(qpoly({-2, 0, 0, 1})));
    CHECK(!is_irreducible(qpoly({4, 0, 0, 0, 1})));  // x^4+4 = (x^2+2x+2)(x^2-2x+2)
    // rational coefficients
    QPoly g = QPoly({make_rat(1, 4), BigRat(0), BigRat(1)}) * qpoly({3, 1});
    auto gf = factor_rational(g);
    REQUIRE(gf.size() == 2);
    CHECK(gf[1].factor == QPoly({make_rat(1, 4), BigRat(0), BigRat(1)}));
}

TEST_CASE("partial factorization") {
    BigInt n = BigInt("2054900054381") * 47 * 101;
    auto full = factor_partial(n, 0);
    CHECK(full.unfactored.empty());
    REQUIRE(full.primes.size() == 3);
    CHECK(full.primes[2].first == BigInt("2054900054381"));
    // product of two 30-digit primes resists a tiny budget
    BigInt p1("100000000000000000000000000319"), p2("100000000000000000000000000379");
    REQUIRE(mpz_probab_prime_p(p1.get_mpz_t(), 30));
    REQUIRE(mpz_probab_prime_p(p2.get_mpz_t(), 30));
    auto part = factor_partial(p1 * p2 * 12, 1000);
    REQUIRE(part.unfactored.size() == 1);
    CHECK(part.unfactored[0] == p1 * p2);
    CHECK(part.primes.size() == 2);
}
