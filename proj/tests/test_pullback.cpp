#include "doctest.h"

#include <set>

#include "siegel/eisenstein.hpp"
#include "siegel/pullback.hpp"

using namespace siegel;

namespace {

SemiIntegralIndex idx(const char* two_t) { return SemiIntegralIndex::parse_2t(two_t); }

SemiIntegralIndex scalar(long t) { return SemiIntegralIndex::from_2t(IntMatrix(1, 1, {2 * t})); }

std::set<IntMatrix> as_set(const std::vector<IntMatrix>& v) { return {v.begin(), v.end()}; }

// tau(1..N) from q prod (1 - q^n)^24
std::vector<BigInt> ramanujan_tau(int N) {
    std::vector<BigInt> c(static_cast<std::size_t>(N), 0);
    c[0] = 1;
    for (int n = 1; n < N; ++n)
        for (int rep = 0; rep < 24; ++rep)
            for (int i = N - 1; i >= n; --i) c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - n)];
    std::vector<BigInt> tau(static_cast<std::size_t>(N) + 1, 0);
    for (int i = 0; i < N; ++i) tau[static_cast<std::size_t>(i) + 1] = c[static_cast<std::size_t>(i)];
    return tau;
}

BigInt sigma(long n, int e) {
    BigInt s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += int_pow(BigInt(d), static_cast<unsigned long>(e));
    return s;
}

// all psd 2t of degree n with |entries| <= 2
std::vector<SemiIntegralIndex> small_forms(int n) {
    std::vector<SemiIntegralIndex> out;
    int cells = n * (n + 1) / 2;
    std::vector<int> v(static_cast<std::size_t>(cells), 0);
    std::function<void(int)> rec = [&](int c) {
        if (c == cells) {
            IntMatrix m(n, n);
            int e = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) m(i, j) = m(j, i) = v[static_cast<std::size_t>(e++)];
            if (is_psd(m)) out.push_back(SemiIntegralIndex::from_2t(m));
            return;
        }
        int e = 0;
        bool diag = false;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++e)
                if (e == c) diag = i == j;
        std::vector<int> vals = diag ? std::vector<int>{0, 2} : std::vector<int>{-2, -1, 0, 1, 2};
        for (int x : vals) {
            v[static_cast<std::size_t>(c)] = x;
            rec(c + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace

TEST_CASE("enumeration, tiny cases") {
    CHECK(count_R(scalar(0), scalar(0)) == 1);
    auto r = list_R(scalar(1), scalar(1));
    CHECK(r.size() == 5);
    std::set<std::int64_t> vals;
    for (auto& m : r) vals.insert(m(0, 0));
    CHECK(vals == std::set<std::int64_t>{-2, -1, 0, 1, 2});
    CHECK(count_R(scalar(0), scalar(3)) == 1);
    // r^2 <= 6 over half integers: 2r in [-4, 4]
    CHECK(count_R(scalar(2), scalar(3)) == 9);
}

TEST_CASE("refinements do not change the enumerated set") {
    EnumOptions off;
    off.refine = false;
    int pairs = 0;
    for (int n = 1; n <= 2; ++n) {
        auto forms = small_forms(n);
        for (auto& a : forms)
            for (auto& b : forms) {
                auto on = list_R(a, b);
                CHECK(as_set(on).size() == on.size());
                CHECK(as_set(on) == as_set(list_R(a, b, off)));
                ++pairs;
            }
    }
    auto ternary = candidate_indices(3, 1);
    for (auto& a : ternary)
        for (auto& b : ternary) {
            auto on = list_R(a, b);
            CHECK(as_set(on).size() == on.size());
            CHECK(as_set(on) == as_set(list_R(a, b, off)));
            ++pairs;
        }
    MESSAGE("pairs compared: " << pairs);
}

TEST_CASE("every emitted r gives a psd block") {
    auto a = idx("[[2,1,1],[1,2,1],[1,1,4]]");
    auto b = idx("[[2,0,1],[0,2,1],[1,1,2]]");
    std::uint64_t seen = 0;
    enumerate_R(a, b, [&](const IntMatrix& r) {
        CHECK(is_psd(block_index(a.two_t(), b.two_t(), r)));
        ++seen;
    });
    CHECK(seen == count_R(a, b));
    CHECK(seen > 0);
}

TEST_CASE("slices partition the enumeration") {
    auto a = idx("[[2,1,1],[1,4,2],[1,2,4]]");
    auto b = idx("[[2,1,0],[1,2,1],[0,1,4]]");
    std::uint64_t total = count_R(a, b);
    std::set<IntMatrix> all;
    std::uint64_t sum = 0;
    for (int s = 0; s < 3; ++s) sum += enumerate_R(a, b, [&](const IntMatrix& r) { all.insert(r); }, {}, s, 3);
    CHECK(sum == total);
    CHECK(all.size() == total);
    EnumOptions two;
    two.workers = 2;
    CHECK(count_R(a, b, two) == total);
}

TEST_CASE("pullback coefficients") {
    CHECK(pullback_coefficient(SemiIntegralIndex::zero(2), SemiIntegralIndex::zero(2), 12) == 1);
    // n = 1, t1 = t2 = (1): five degree-2 coefficients
    BigRat direct = 0;
    for (long r = -2; r <= 2; ++r)
        direct += eis_coefficient(SemiIntegralIndex::from_2t(IntMatrix(2, 2, {2, r, r, 2})), 12);
    CHECK(pullback_coefficient(scalar(1), scalar(1), 12) == direct);
    auto a = idx("[[2,1,1],[1,2,1],[1,1,2]]");
    auto b = idx("[[2,0,1],[0,2,1],[1,1,2]]");
    CHECK(pullback_coefficient(a, b, 12) == pullback_coefficient_direct(a, b, 12));
    CHECK(pullback_coefficient(a, b, 12) == pullback_coefficient(b, a, 12));
    auto c = idx("[[2,1],[1,4]]");
    auto d = idx("[[2,0],[0,2]]");
    CHECK(pullback_coefficient(c, d, 10) == pullback_coefficient_direct(c, d, 10));
    CHECK_THROWS_AS(pullback_coefficient(c, d, 5), UsageError);
}

TEST_CASE("multiplicities add up to the index count") {
    auto a = idx("[[2,1,1],[1,4,2],[1,2,4]]");
    auto b = idx("[[2,1,0],[1,2,1],[0,1,4]]");
    auto t = tally_genera(a, b);
    std::uint64_t sum = 0;
    for (auto& [k, g] : t.genera) sum += g.count;
    CHECK(sum == t.total);
    CHECK(t.total == count_R(a, b));
    EnumOptions two;
    two.workers = 2;
    auto t2 = tally_genera(a, b, two);
    CHECK(t2.total == t.total);
    CHECK(tally_value(t2, 12) == tally_value(t, 12));
}

TEST_CASE("candidate index order") {
    auto c = candidate_indices(2, 2);
    bool definite = false;
    for (auto& t : c) {
        if (t.det2t() != 0) definite = true;
        else CHECK(!definite);
    }
    CHECK(c.front() == SemiIntegralIndex::zero(2));
    CHECK(std::is_sorted(c.begin(), c.end(), index_order));
    auto t3 = candidate_indices(3, 1);
    CHECK(t3.front() == SemiIntegralIndex::zero(3));
}

TEST_CASE("degree one, weight 12") {
    std::vector<SemiIntegralIndex> T{scalar(0), scalar(1), scalar(2)};
    auto pm = build_gram(T, 12);
    CHECK(pm.M == pm.M.transpose());
    CHECK(pm.M(0, 0) == 1);
    CHECK(rank_of(pm.M) == 2);
    extend_gram(pm, {scalar(3), scalar(4)});
    CHECK(rank_of(pm.M) == 2);
    auto b = extract_bases(pm);
    CHECK(b.dim_M == 2);
    CHECK(b.dim_S == 1);
    auto tau = ramanujan_tau(6);
    for (int i = 0; i < 5; ++i) CHECK(b.cusp[0].values[static_cast<std::size_t>(i)] == NFElem(BigRat(tau[static_cast<std::size_t>(i)])));
    // the cusp column evaluated beyond T
    CHECK(b.cusp_forms[0](scalar(5)) == BigRat(tau[5]));
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(b.cusp_forms[0](pm.T[i]) == b.cusp[0].values[i].rational_value());

    // Garrett decomposition with E_12 and Delta
    TruncatedForm e12, delta;
    e12.T = delta.T = pm.T;
    BigRat ck = BigRat(65520) / 691;
    for (long n = 0; n < 5; ++n) {
        e12.values.emplace_back(n == 0 ? BigRat(1) : BigRat(ck * sigma(n, 11)));
        delta.values.emplace_back(BigRat(tau[static_cast<std::size_t>(n)]));
    }
    auto c = solve_c({e12, delta}, pm);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == NFElem(1));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(pm.M(i, j) == c[0].rational_value() * e12.values[static_cast<std::size_t>(i)].rational_value() *
                                    e12.values[static_cast<std::size_t>(j)].rational_value() +
                                c[1].rational_value() * tau[static_cast<std::size_t>(i)] * tau[static_cast<std::size_t>(j)]);
    MESSAGE("c(Delta) = " << c[1]);
    // a wrong eigenform cannot reproduce M
    TruncatedForm bad = delta;
    bad.values[2] = NFElem(BigRat(-23));
    CHECK_THROWS(solve_c({e12, bad}, pm));
}

TEST_CASE("degree two dimensions") {
    auto cand = candidate_indices(2, 2);
    // M_10: E_10 and chi_10; M_12: E_12, Klingen(Delta), chi_12
    auto g10 = grow_gram(2, 10, cand, 2, 2);
    auto b10 = extract_bases(g10.pm);
    CHECK(b10.dim_M == 2);
    CHECK(b10.dim_S == 1);
    auto g12 = grow_gram(2, 12, cand, 2, 3);
    auto b12 = extract_bases(g12.pm);
    CHECK(b12.dim_M == 3);
    CHECK(b12.dim_S == 1);
    for (auto& f : b12.cusp)
        for (int i = 0; i < g12.pm.singular_count(); ++i) CHECK(f.values[static_cast<std::size_t>(i)] == NFElem(0));
}

TEST_CASE("rank zero and trivial Gram matrices") {
    auto pm = build_gram({SemiIntegralIndex::zero(3)}, 12);
    CHECK(pm.M(0, 0) == 1);
    auto b = extract_bases(pm);
    CHECK(b.dim_M == 1);
    CHECK(b.dim_S == 0);
    PullbackMatrix empty;
    CHECK(extract_bases(empty).dim_M == 0);
    CHECK_THROWS_AS(build_gram({idx("[[2]]"), scalar(0)}, 12), UsageError);
}

TEST_CASE("prime valuations and congruence scan") {
    CHECK(congruence_scan({NFElem(BigRat(3)), NFElem(make_rat(5, 7))}, 2).size() == 1);
    CHECK(congruence_scan({NFElem(BigRat(3)), NFElem(make_rat(5, 7))}, 12).empty());
    auto hits = congruence_scan({NFElem(make_rat(1, 107)), NFElem(make_rat(3, 107)), NFElem(BigRat(5))}, 16);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].p == 107);
    CHECK(hits[0].pattern);
    CHECK(hits[0].negative.size() == 2);
    auto f = std::make_shared<const NumberField>(qpoly({-2, 0, 1}));
    NFElem th = NFElem::generator(f);
    NFElem x = NFElem(BigRat(1)) / (NFElem(BigRat(3)) + th);  // norm 7
    auto v = prime_valuations(x, 7);
    REQUIRE(v.has_value());
    REQUIRE(v->size() == 2);
    int neg = 0, zero = 0;
    for (auto& pv : *v) (pv.valuation == -1 ? neg : zero)++;
    CHECK(neg == 1);
    CHECK(zero == 1);
    auto inert = prime_valuations(NFElem(make_rat(1, 5)) * th, 5);  // x^2 - 2 is irreducible mod 5
    REQUIRE(inert.has_value());
    REQUIRE(inert->size() == 1);
    CHECK((*inert)[0].residue_degree == 2);
    CHECK((*inert)[0].valuation == -1);
    CHECK(!prime_valuations(th, 2).has_value());
    auto quad = congruence_scan({x, NFElem(make_rat(2, 7))}, 2);
    REQUIRE(quad.size() == 1);
    CHECK(quad[0].pattern);
}

TEST_CASE("prime valuations at large primes") {
    // a^2 = 17 and r^2 - 17 = 47 * 101 * 2054900054381
    auto f = std::make_shared<const NumberField>(qpoly({-17, 0, 1}));
    NFElem a = NFElem::generator(f);
    const long r = 98765432, p = 2054900054381;
    auto v = prime_valuations(a - NFElem(BigRat(r)), p);
    REQUIRE(v.has_value());
    REQUIRE(v->size() == 2);
    int sum = 0, ones = 0;
    for (auto& pv : *v) {
        sum += pv.valuation;
        ones += pv.valuation == 1;
    }
    CHECK(sum == 1);
    CHECK(ones == 1);
    auto w = prime_valuations(NFElem(BigRat(1)) / (a - NFElem(BigRat(r))), p);
    REQUIRE(w.has_value());
    int neg = 0;
    for (auto& pv : *w) neg += pv.valuation == -1;
    CHECK(neg == 1);
    auto hits = congruence_scan({NFElem(BigRat(1)) / (a - NFElem(BigRat(r))), NFElem(make_rat(1, p))}, 12);
    bool found = false;
    for (auto& h : hits)
        if (h.p == p) {
            found = true;
            CHECK(h.pattern);
        }
    CHECK(found);
}
