#include "siegel/bernoulli.hpp"

#include <map>
#include <mutex>

namespace siegel {

namespace {

std::mutex g_bern_mutex;
std::vector<BigRat> g_bern{BigRat(1)};

std::mutex g_quad_mutex;
std::map<std::pair<std::string, int>, BigRat> g_quad;

}  // namespace

BigRat bernoulli_number(int n) {
    if (n < 0) throw UsageError("Bernoulli index must be nonnegative");
    std::lock_guard<std::mutex> lock(g_bern_mutex);
    // sum_{k=0}^{m} C(m+1, k) B_k = 0
    while (static_cast<int>(g_bern.size()) <= n) {
        int m = static_cast<int>(g_bern.size());
        BigRat s = 0;
        for (int k = 0; k < m; ++k) s += BigRat(binomial(m + 1, k)) * g_bern[static_cast<std::size_t>(k)];
        g_bern.push_back(make_rat(rat_num(-s), rat_den(s) * (m + 1)));
    }
    return g_bern[static_cast<std::size_t>(n)];
}

QPoly bernoulli_polynomial(int n) {
    std::vector<BigRat> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(n - k)] = BigRat(binomial(n, k)) * bernoulli_number(k);
    return QPoly(c);
}

bool is_fundamental_discriminant(const BigInt& d) {
    if (d == 1) return true;
    if (d == 0) return false;
    auto split = discriminant_split(d);
    return split.conductor == 1 && split.fundamental == d;
}

QuadChar::QuadChar(const BigInt& d) : d_(d) {
    if (!is_fundamental_discriminant(d)) throw UsageError("not a fundamental discriminant: " + to_string(d));
    BigInt a = abs(d);
    if (!a.fits_slong_p()) throw UsageError("conductor too large");
    conductor_ = a.get_si();
}

BigRat zeta_value(int k) {
    if (k < 2) throw UsageError("zeta(1-k) needs k >= 2");
    BigRat b = bernoulli_number(k);
    return make_rat(rat_num(-b), rat_den(b) * k);
}

BigRat quad_bernoulli(const QuadChar& chi, int j) {
    if (j < 1) throw UsageError("quadratic Bernoulli index must be positive");
    auto key = std::make_pair(to_string(chi.discriminant()), j);
    {
        std::lock_guard<std::mutex> lock(g_quad_mutex);
        auto it = g_quad.find(key);
        if (it != g_quad.end()) return it->second;
    }
    long f = chi.conductor();
    // B_j(chi) = f^{j-1} sum_a chi(a) B_j(a/f) = sum_k C(j,k) B_k f^{k-1} S_{j-k},
    // with S_i = sum_{a=1}^f chi(a) a^i.
    std::vector<BigInt> S(static_cast<std::size_t>(j) + 1, BigInt(0));
    for (long a = 1; a <= f; ++a) {
        int c = chi(a);
        if (c == 0) continue;
        BigInt pw = 1;
        for (int i = 0; i <= j; ++i) {
            if (c > 0)
                S[static_cast<std::size_t>(i)] += pw;
            else
                S[static_cast<std::size_t>(i)] -= pw;
            pw *= a;
        }
    }
    BigRat total = 0;
    for (int k = 0; k <= j; ++k) {
        BigRat fk = rat_pow(BigRat(f), k - 1);
        total += BigRat(binomial(j, k)) * bernoulli_number(k) * fk * BigRat(S[static_cast<std::size_t>(j - k)]);
    }
    total.canonicalize();
    std::lock_guard<std::mutex> lock(g_quad_mutex);
    g_quad.emplace(key, total);
    return total;
}

BigRat l_value(const QuadChar& chi, int j) {
    BigRat b = quad_bernoulli(chi, j);
    return make_rat(rat_num(-b), rat_den(b) * j);
}

bool cvs_integral_at(const BigRat& x, long bound) {
    BigInt d = rat_den(x);
    for (auto& [p, e] : factor_big(d))
        if (p > bound) return false;
    return true;
}

}  // namespace siegel
