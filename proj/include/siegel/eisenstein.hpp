#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "siegel/arith.hpp"
#include "siegel/genus.hpp"
#include "siegel/quadform.hpp"

namespace siegel {

// c_k^{(m)} = 2^{-floor((m+1)/2)} zeta(1-k) prod_{i=1}^{floor(m/2)} zeta(1-2k+2i)
BigRat c_const(int m, int k);

// Coefficient of a positive definite u of rank m, from its genus symbol.
BigRat eis_coefficient_definite(const GenusSymbol& s, int k);
// Same value, bypassing the in-process memo.
BigRat eis_coefficient_uncached(const GenusSymbol& s, int k);
// a(t; E^n_k) for psd t of degree n. Requires k even and k > n + 1.
BigRat eis_coefficient(const SemiIntegralIndex& t, int k);
// c_k^{(n)} a(t; E^n_k)
BigRat dilated_coefficient(const SemiIntegralIndex& t, int k);

// Memo key for the definite part: canonical genus key plus weight.
std::string eis_key(const GenusSymbol& s, int k);

struct EisCacheStats {
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::size_t entries = 0;
};
EisCacheStats eis_cache_stats();
void eis_cache_clear();
void eis_cache_enable(bool on);
// Seeds or reads the memo table (used by the persistent store).
void eis_cache_put(const std::string& key, const BigRat& value);
bool eis_cache_get(const std::string& key, BigRat& value);
std::map<std::string, BigRat> eis_cache_snapshot();

}  // namespace siegel
