#include "siegel/acceptance.hpp"

#include <chrono>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "siegel/bernoulli.hpp"
#include "siegel/eisenstein.hpp"
#include "siegel/euler.hpp"
#include "siegel/fppoly.hpp"
#include "siegel/genus.hpp"
#include "siegel/pipeline.hpp"
#include "siegel/pullback.hpp"

namespace siegel {

namespace {

const char* kWorked2t = "[[2,1,1,0,1,2],[1,4,2,2,0,1],[1,2,4,2,0,0],[0,2,2,4,2,2],[1,0,0,2,4,2],[2,1,0,2,2,8]]";
const char* kWorkedSymbol = "4^{-2}_4 3^{-1}";
const char* kWorkedValue = "9780154654408147370255260881715200/13912726954911229324966739363569";
const char* kBenchT1 = "[[2,1,1],[1,4,2],[1,2,4]]";
const char* kBenchT2 = "[[8,4,4],[4,8,4],[4,4,8]]";
constexpr std::uint64_t kBenchCount = 6755849;

BigRat q(long a, long b = 1) { return make_rat(BigInt(a), BigInt(b)); }

SemiIntegralIndex scalar(long t) { return SemiIntegralIndex::from_2t(IntMatrix(1, 1, {2 * t})); }

BigInt sigma(long n, int e) {
    BigInt s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += int_pow(BigInt(d), static_cast<unsigned long>(e));
    return s;
}

int moebius(long n) {
    int m = 1;
    for (auto& [p, e] : factor_int(n)) {
        if (e > 1) return 0;
        m = -m;
    }
    return m;
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

// Cohen's function H(r, N) for N = 0, 3 mod 4, N > 0.
BigRat cohen_h(int r, long N) {
    auto split = discriminant_split(BigInt(-N));
    long f = split.conductor.get_si();
    QuadChar chi(split.fundamental);
    BigRat s = 0;
    for (long d = 1; d <= f; ++d) {
        if (f % d != 0) continue;
        int mu = moebius(d);
        if (mu == 0) continue;
        s += BigRat(mu * chi(d)) * BigRat(int_pow(BigInt(d), static_cast<unsigned long>(r - 1))) *
             BigRat(sigma(f / d, 2 * r - 1));
    }
    return l_value(chi, r) * s;
}

// Degree-two Eisenstein coefficient of 2t = [[2a, b], [b, 2c]] by the
// Maass/Cohen formula.
BigRat degree_two_oracle(long a, long b, long c, int k) {
    long e = gcd64(gcd64(a, b), c);
    long N = 4 * a * c - b * b;
    BigRat s = 0;
    for (long d = 1; d <= e; ++d)
        if (e % d == 0) s += BigRat(int_pow(BigInt(d), static_cast<unsigned long>(k - 1))) * cohen_h(k - 1, N / (d * d));
    return BigRat(2) / (zeta_value(k) * zeta_value(2 * k - 2)) * s;
}

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

QMatrix p3_display() {
    QMatrix P = QMatrix::identity(4);
    P(0, 2) = 3;
    P(1, 3) = 2;
    return P;
}

std::vector<NFElem> eigen_lambda(const FourierTable& f, const SemiIntegralIndex& t, long p) {
    NFElem base = f.coeff(t);
    std::vector<NFElem> lam;
    for (int i = f.n(); i >= 0; --i) lam.push_back(hecke_coefficient(f, t, HeckeOperator::Ti(p, i)) / base);
    return lam;
}

double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Degree-3 spaces and their eigenforms at p = 2, computed on first use.
struct DegreeThree {
    SpaceResult space;
    double seconds = 0;
    std::optional<std::vector<HeckeEigenData>> eigen;
};

DegreeThree& degree_three(int k) {
    static std::map<int, DegreeThree> cache;
    auto it = cache.find(k);
    if (it == cache.end()) {
        auto start = std::chrono::steady_clock::now();
        DegreeThree d;
        d.space = compute_space(3, k);
        d.seconds = elapsed(start);
        it = cache.emplace(k, std::move(d)).first;
    }
    return it->second;
}

const std::vector<HeckeEigenData>& degree_three_eigen(int k) {
    auto& d = degree_three(k);
    if (!d.eigen) d.eigen = cusp_eigenforms(d.space, 2);
    return *d.eigen;
}

// a_2 / a_1 of the normalized cusp form spanning S_w(SL_2(Z)).
BigRat elliptic_a2(int w) {
    auto sp = compute_space(1, w);
    if (sp.bases.dim_S != 1) throw ConsistencyError("expected a one-dimensional cusp space in weight " + std::to_string(w));
    auto& f = sp.bases.cusp_forms[0];
    return f(scalar(2)) / f(scalar(1));
}

bool spinor_symmetric(const EulerFactor& sp, const NFElem& g0) {
    for (int l = 0; l <= 3; ++l) {
        NFElem s = sp.coeffs[static_cast<std::size_t>(l)];
        NFElem s8 = sp.coeffs[static_cast<std::size_t>(8 - l)];
        if (l % 2) {
            s = -s;
            s8 = -s8;
        }
        NFElem pw(1);
        for (int i = 0; i < 4 - l; ++i) pw = pw * g0;
        if (s8 != pw * s) return false;
    }
    return true;
}

bool worked_example(std::string& detail) {
    auto t = SemiIntegralIndex::parse_2t(kWorked2t);
    auto s = genus_symbol(t.two_t());
    bool sym = symbols_equivalent(s, parse_symbol(kWorkedSymbol, s.det2t, s.rank));
    bool f2 = fp_polynomial(s, 2).poly == qpoly({1, 24, 256, 3072, 16384});
    bool f3 = fp_polynomial(s, 3).poly == qpoly({1});
    BigRat a = eis_coefficient(t, 16);
    bool coef = a == parse_rat(kWorkedValue);
    detail = "symbol " + format_symbol(s) + (sym ? "" : " (not equivalent)") + (f2 ? ", F_2 ok" : ", F_2 WRONG") +
             (f3 ? ", F_3 ok" : ", F_3 WRONG") + (coef ? ", a(t;E_16) ok" : ", a(t;E_16) = " + to_string(a));
    return sym && f2 && f3 && coef;
}

bool functional_equation(std::string& detail) {
    std::mt19937 rng(2024);
    int forms = 0, checks = 0, failures = 0, odd_rank = 0;
    while (forms < 240) {
        int n = 1 + static_cast<int>(rng() % 4);
        IntMatrix a(n, n);
        for (int i = 0; i < n; ++i) {
            a(i, i) = 2 * (1 + static_cast<std::int64_t>(rng() % 6));
            for (int j = i + 1; j < n; ++j) a(i, j) = a(j, i) = static_cast<std::int64_t>(rng() % 7) - 3;
        }
        if (!is_positive_definite(a)) continue;
        BigInt det = det_big(a);
        if (det > 500) continue;
        ++forms;
        if (n % 2) ++odd_rank;
        for (auto& [pb, e] : factor_big(det * 2)) {
            long p = pb.get_si();
            ++checks;
            if (!fe_check(fp_polynomial(a, p), n, fe_sign(a, p))) ++failures;
        }
    }
    detail = std::to_string(forms) + " forms (" + std::to_string(odd_rank) + " odd rank), " + std::to_string(checks) +
             " (u, p) identities, " + std::to_string(failures) + " failures";
    return forms >= 200 && failures == 0;
}

bool degree_one_oracle(std::string& detail) {
    int checks = 0, failures = 0;
    for (int k = 4; k <= 16; k += 2)
        for (long n = 1; n <= 50; ++n) {
            BigRat expect = BigRat(-2 * k) / bernoulli_number(k) * BigRat(sigma(n, k - 1));
            expect.canonicalize();
            ++checks;
            if (eis_coefficient(scalar(n), k) != expect) ++failures;
        }
    detail = std::to_string(checks) + " coefficients, " + std::to_string(failures) + " failures";
    return failures == 0;
}

bool phi_compatibility(std::string& detail) {
    // guard on the oracle itself: E_4 in degree two is the E8 theta series, 240 * 56 pairs at 2t = A2
    if (degree_two_oracle(1, 1, 1, 4) != 13440) {
        detail = "degree-two oracle fails its E8 check";
        return false;
    }
    struct Base {
        IntMatrix two_u;
        BigRat value;
    };
    std::mt19937 rng(77);
    int checks = 0, failures = 0;
    for (int k : {8, 10, 12}) {
        std::vector<Base> bases;
        for (long n = 1; n <= 8; ++n) {
            BigRat v = BigRat(-2 * k) / bernoulli_number(k) * BigRat(sigma(n, k - 1));
            v.canonicalize();
            bases.push_back({IntMatrix(1, 1, {2 * n}), v});
        }
        for (long a = 1; a <= 3; ++a)
            for (long c = a; c <= 3; ++c)
                for (long b = 0; b <= a; ++b)
                    if (4 * a * c - b * b > 0) bases.push_back({IntMatrix(2, 2, {2 * a, b, b, 2 * c}), degree_two_oracle(a, b, c, k)});
        for (auto& base : bases) {
            int m = base.two_u.rows();
            for (int n = m; n <= 4; ++n) {
                IntMatrix big = n == m ? base.two_u : direct_sum(base.two_u, IntMatrix(n - m, n - m));
                IntMatrix moved = congruence(big, random_unimodular(rng, n));
                for (auto& x : {big, moved}) {
                    ++checks;
                    if (eis_coefficient(SemiIntegralIndex::from_2t(x), k) != base.value) ++failures;
                }
            }
        }
    }
    detail = std::to_string(checks) + " embeddings against independent rank-1/rank-2 formulas, " +
             std::to_string(failures) + " failures";
    return failures == 0;
}

bool enumeration(std::string& detail) {
    auto t1 = SemiIntegralIndex::parse_2t(kBenchT1), t2 = SemiIntegralIndex::parse_2t(kBenchT2);
    auto start = std::chrono::steady_clock::now();
    std::uint64_t count = count_R(t1, t2);
    double secs = elapsed(start);

    EnumOptions off;
    off.refine = false;
    auto as_set = [](const std::vector<IntMatrix>& v) { return std::set<IntMatrix>(v.begin(), v.end()); };
    int pairs = 0, mismatches = 0;
    auto compare = [&](const std::vector<SemiIntegralIndex>& forms) {
        for (auto& a : forms)
            for (auto& b : forms) {
                auto on = list_R(a, b);
                auto s = as_set(on);
                ++pairs;
                if (s.size() != on.size() || s != as_set(list_R(a, b, off))) ++mismatches;
            }
    };
    for (int n = 1; n <= 2; ++n) {
        std::vector<SemiIntegralIndex> forms;
        int cells = n * (n + 1) / 2;
        std::vector<int> v(static_cast<std::size_t>(cells), -2);
        for (;;) {
            IntMatrix m(n, n);
            int e = 0;
            bool even_diag = true;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j, ++e) {
                    m(i, j) = m(j, i) = v[static_cast<std::size_t>(e)];
                    if (i == j && (m(i, i) < 0 || m(i, i) % 2)) even_diag = false;
                }
            if (even_diag && is_psd(m)) forms.push_back(SemiIntegralIndex::from_2t(m));
            int c = 0;
            while (c < cells && v[static_cast<std::size_t>(c)] == 2) v[static_cast<std::size_t>(c++)] = -2;
            if (c == cells) break;
            ++v[static_cast<std::size_t>(c)];
        }
        compare(forms);
    }
    compare(candidate_indices(3, 1));
    std::ostringstream os;
    os << "|R| = " << count << " in " << std::fixed << std::setprecision(1) << secs << " s; " << pairs
       << " pairs refinement-on vs off, " << mismatches << " mismatches";
    detail = os.str();
    return count == kBenchCount && mismatches == 0;
}

bool dimensions(std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    for (int k : {12, 14}) {
        auto& d = degree_three(k);
        const auto& b = d.space.bases;
        bool good = b.dim_S == 1 && b.dim_M == known_dimension(3, k) && d.seconds <= 3600;
        ok = ok && good;
        os << (k == 12 ? "" : "; ") << "k=" << k << ": dim M = " << b.dim_M << ", dim S = " << b.dim_S << " from |T| = "
           << d.space.growth.pm.T.size() << " (" << std::fixed << std::setprecision(0) << d.seconds << " s)";
    }
    detail = os.str();
    return ok;
}

bool miyawaki(std::string& detail) {
    BigRat a20 = elliptic_a2(20), a26 = elliptic_a2(26), a12 = elliptic_a2(12);
    bool inputs = a20 == 456 && a26 == -48 && a12 == -24;
    auto g12 = elliptic_standard_factor(NFElem(a12), 12, 2).coeffs;
    bool ok = inputs;
    std::ostringstream os;
    os << "a_2(f_20) = " << a20 << ", a_2(f_26) = " << a26 << ", a_2(g_12) = " << a12;
    for (int k : {12, 14}) {
        int w = k == 12 ? 20 : 26;
        NFElem a(k == 12 ? a20 : a26);
        NFPoly expect = nfpoly_mul(nfpoly_mul(elliptic_shift_factor(a, w, w / 2, 2).coeffs,
                                              elliptic_shift_factor(a, w, w / 2 - 1, 2).coeffs),
                                   g12);
        auto& eig = degree_three_eigen(k);
        bool match = eig.size() == 1 && nfpoly_equal(standard_factor(lambda_vector(eig[0]), 3, k, 2).coeffs, expect);
        ok = ok && match;
        os << "; F_" << k << (match ? " matches" : " DIFFERS");
    }
    detail = os.str();
    return ok;
}

bool euler_machinery(std::string& detail) {
    bool k_ok = krieg_matrix(3, 2) == k3_display(2) && krieg_matrix(3, 2)(0, 2) == q(17, 16);
    bool p_ok = pascal_matrix(3) == p3_display();
    int forms = 0, r0_fail = 0, sym_fail = 0;
    Real worst = 0;
    auto process = [&](const NFElem& g, const std::vector<NFElem>& lam, int k) {
        ++forms;
        auto r = standard_r(lam, 3, k, 2);  // throws unless r_0 = 1
        if (r[0] != NFElem(1)) ++r0_fail;
        auto gv = g_vector(lam, 3, 2);
        if (!spinor_symmetric(spinor_factor_deg3(g, gv, 2), gv[0])) ++sym_fail;
        if (g.is_rational()) worst = std::max(worst, satake_numeric_deg3(g, gv, k, 2).spinor_dev);
    };
    {
        int k = 12;
        auto e = FourierTable::from_function(3, k, [k](const SemiIntegralIndex& t) { return NFElem(eis_coefficient(t, k)); });
        auto t = SemiIntegralIndex::parse_2t("[[2,1,1],[1,2,1],[1,1,2]]");
        process(hecke_coefficient(e, t, HeckeOperator::T(2)) / e.coeff(t), eigen_lambda(e, t, 2), k);
    }
    for (int k : {12, 14})
        for (auto& e : degree_three_eigen(k)) process(e.lambda_T, lambda_vector(e), k);
    std::ostringstream os;
    os << "K_3(4) " << (k_ok ? "ok" : "WRONG") << ", P_3 " << (p_ok ? "ok" : "WRONG") << ", " << forms
       << " eigenforms: r_0 = 1 failures " << r0_fail << ", spinor symmetry failures " << sym_fail
       << ", numeric spinor deviation " << std::scientific << std::setprecision(2) << static_cast<double>(worst)
       << " (tolerance 1e-20)";
    detail = os.str();
    return k_ok && p_ok && r0_fail == 0 && sym_fail == 0 && worst < Real("1e-20");
}

bool integrality(std::string& detail) {
    const auto& pm = degree_three(12).space.growth.pm;
    BigRat c = c_const(6, 12);
    int cells = 0, bad = 0;
    long largest = 1;
    for (int i = 0; i < pm.M.rows(); ++i)
        for (int j = i; j < pm.M.cols(); ++j) {
            BigRat x = c * pm.M(i, j);
            ++cells;
            if (!cvs_integral_at(x, 23)) ++bad;
            for (auto& [p, e] : factor_big(rat_den(x))) largest = std::max(largest, p.get_si());
        }
    detail = std::to_string(cells) + " pullback sums, largest denominator prime " + std::to_string(largest) + ", " +
             std::to_string(bad) + " with a prime > 23";
    return bad == 0;
}

}  // namespace

std::vector<Criterion> acceptance_criteria() {
    return {
        {1, "worked example (symbol, F_p, a(t;E_16))", 10, true, worked_example},
        {2, "F_p functional equation suite", 300, true, functional_equation},
        {3, "degree-1 Eisenstein oracle", 60, true, degree_one_oracle},
        {4, "Phi-compatibility", 60, true, phi_compatibility},
        {5, "enumeration benchmark and refinement equality", 600, true, enumeration},
        {6, "dim S_12 = dim S_14 = 1 in degree 3", 7200, false, dimensions},
        {7, "Miyawaki factorizations at p = 2", 7200, false, miyawaki},
        {8, "Euler machinery (K_3, P_3, r_0, spinor)", 0, false, euler_machinery},
        {9, "integrality of dilated pullback sums, k = 12", 0, false, integrality},
    };
}

CriterionResult run_criterion(const Criterion& c) {
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budget = c.budget;
    auto start = std::chrono::steady_clock::now();
    try {
        r.pass = c.run(r.detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = elapsed(start);
    if (r.budget > 0 && r.seconds > r.budget) {
        r.pass = false;
        r.detail += " (over the time budget)";
    }
    return r;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  [" << r.detail << "]  "
       << std::fixed << std::setprecision(1) << r.seconds << " s";
    if (r.budget > 0) os << " / " << std::setprecision(0) << r.budget << " s";
    return os.str();
}

int run_acceptance(const std::vector<Criterion>& selection, std::ostream& out) {
    int failures = 0;
    for (auto& c : selection) {
        auto r = run_criterion(c);
        if (!r.pass) ++failures;
        out << format_result(r) << std::endl;
    }
    return failures;
}

}  // namespace siegel
