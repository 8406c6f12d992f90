#include "siegel/eisenstein.hpp"

#include <atomic>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "siegel/bernoulli.hpp"
#include "siegel/fppoly.hpp"

namespace siegel {

namespace {

std::shared_mutex g_mutex;
std::unordered_map<std::string, BigRat> g_cache;
std::atomic<std::size_t> g_hits{0}, g_misses{0};
std::atomic<bool> g_enabled{true};

void check_weight(int k, int n) {
    if (k % 2 != 0) throw UsageError("weight must be even");
    if (k <= n + 1) throw UsageError("weight must exceed degree + 1");
}

BigRat compute_definite(const GenusSymbol& s, int k) {
    int m = s.rank;
    BigRat value;
    if (m % 2 == 0) {
        BigInt d = (m / 2) % 2 == 0 ? s.det2t : BigInt(-s.det2t);
        auto split = discriminant_split(d);
        value = l_value(QuadChar(split.fundamental), k - m / 2);
        for (auto& [p, e] : factor_big(split.conductor)) {
            long pl = p.get_si();
            auto f = fp_polynomial(s, pl);
            value *= f.poly(rat_pow(BigRat(pl), k - m - 1));
        }
    } else {
        value = 1;
        for (auto& [p, e] : factor_big(s.det2t / 2)) {
            long pl = p.get_si();
            auto f = fp_polynomial(s, pl);
            value *= f.poly(rat_pow(BigRat(pl), k - m - 1));
        }
    }
    value /= c_const(m, k);
    value.canonicalize();
    return value;
}

}  // namespace

BigRat c_const(int m, int k) {
    if (m < 0) throw UsageError("rank must be nonnegative");
    BigRat c = zeta_value(k);
    for (int i = 1; i <= m / 2; ++i) c *= zeta_value(2 * k - 2 * i);
    c /= BigRat(int_pow(BigInt(2), static_cast<unsigned long>((m + 1) / 2)));
    c.canonicalize();
    return c;
}

std::string eis_key(const GenusSymbol& s, int k) { return genus_key(s) + "|k" + std::to_string(k); }

BigRat eis_coefficient_definite(const GenusSymbol& s, int k) {
    check_weight(k, s.rank);
    if (s.rank == 0) return BigRat(1);
    std::string key = eis_key(s, k);
    if (g_enabled) {
        std::shared_lock<std::shared_mutex> lock(g_mutex);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) {
            ++g_hits;
            return it->second;
        }
    }
    ++g_misses;
    BigRat v = compute_definite(s, k);
    if (g_enabled) {
        std::unique_lock<std::shared_mutex> lock(g_mutex);
        g_cache.emplace(key, v);
    }
    return v;
}

BigRat eis_coefficient_uncached(const GenusSymbol& s, int k) {
    check_weight(k, s.rank);
    if (s.rank == 0) return BigRat(1);
    return compute_definite(s, k);
}

BigRat eis_coefficient(const SemiIntegralIndex& t, int k) {
    if (!is_psd(t)) throw UsageError("index must be positive semidefinite");
    check_weight(k, t.n());
    auto rs = rank_split(t);
    if (rs.m == 0) return BigRat(1);
    return eis_coefficient_definite(genus_symbol(rs.u.two_t()), k);
}

BigRat dilated_coefficient(const SemiIntegralIndex& t, int k) {
    BigRat v = c_const(t.n(), k) * eis_coefficient(t, k);
    v.canonicalize();
    return v;
}

EisCacheStats eis_cache_stats() {
    std::shared_lock<std::shared_mutex> lock(g_mutex);
    return {g_hits.load(), g_misses.load(), g_cache.size()};
}

void eis_cache_clear() {
    std::unique_lock<std::shared_mutex> lock(g_mutex);
    g_cache.clear();
    g_hits = 0;
    g_misses = 0;
}

std::map<std::string, BigRat> eis_cache_snapshot() {
    std::shared_lock<std::shared_mutex> lock(g_mutex);
    return {g_cache.begin(), g_cache.end()};
}

void eis_cache_enable(bool on) { g_enabled = on; }

void eis_cache_put(const std::string& key, const BigRat& value) {
    std::unique_lock<std::shared_mutex> lock(g_mutex);
    g_cache[key] = value;
}

bool eis_cache_get(const std::string& key, BigRat& value) {
    std::shared_lock<std::shared_mutex> lock(g_mutex);
    auto it = g_cache.find(key);
    if (it == g_cache.end()) return false;
    value = it->second;
    return true;
}

}  // namespace siegel
