#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/genus.hpp"
#include "siegel/intmat.hpp"
#include "siegel/matrix.hpp"
#include "siegel/numfield.hpp"
#include "siegel/quadform.hpp"

namespace siegel {

struct EnumOptions {
    bool refine = true;  // quadratic tightening and column-bottom psd checks
    int workers = 1;
};

// Receives 2r (integer n x n) for each r in R(t1 x t2).
using RVisitor = std::function<void(const IntMatrix& two_r)>;

// Enumerates R(t1 x t2) = {r : [[t1, r], [r^T, t2]] >= 0}. The outermost loop
// value range is split round-robin into `slices`; only slice `slice` is visited.
std::uint64_t enumerate_R(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, const RVisitor& visit,
                          const EnumOptions& opt = {}, int slice = 0, int slices = 1);
std::uint64_t count_R(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, const EnumOptions& opt = {});
std::vector<IntMatrix> list_R(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, const EnumOptions& opt = {});

// 2 * [[t1, r], [r^T, t2]]
IntMatrix block_index(const IntMatrix& two_t1, const IntMatrix& two_t2, const IntMatrix& two_r);

// Genus multiplicities of the definite parts of the block indices.
struct GenusCount {
    GenusSymbol symbol;  // meaningless when rank == 0
    int rank = 0;
    std::uint64_t count = 0;
};
struct GenusTally {
    std::map<std::string, GenusCount> genera;  // keyed by genus_key (or "0" for the zero index)
    std::uint64_t total = 0;
    void merge(const GenusTally& other);
};
std::string tally_key(const IntMatrix& two_s, GenusCount& out);
GenusTally tally_genera(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, const EnumOptions& opt = {},
                        int slice = 0, int slices = 1);
BigRat tally_value(const GenusTally& tally, int k);

// sum over r in R(t1 x t2) of a([[t1, r], [r^T, t2]]; E^(2n)_k)
BigRat pullback_coefficient(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k,
                            const EnumOptions& opt = {});
// Same sum evaluated term by term with refinements off.
BigRat pullback_coefficient_direct(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k);

// Memoized pullback_coefficient keyed by the reduced unordered pair.
BigRat pullback_cached(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k, const EnumOptions& opt = {});
std::string pullback_key(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k);
void pullback_cache_clear();
void pullback_cache_put(const std::string& key, const BigRat& value);
bool pullback_cache_get(const std::string& key, BigRat& value);
std::size_t pullback_cache_size();
std::map<std::string, BigRat> pullback_cache_snapshot();

// Reduced psd indices of degree n: singular first (by rank, then trace), then
// definite by det(2t) and trace. All reduced forms with 2t diagonal <= 2*max_diag.
std::vector<SemiIntegralIndex> candidate_indices(int n, int max_diag);
bool index_order(const SemiIntegralIndex& a, const SemiIntegralIndex& b);

struct PullbackMatrix {
    int n = 0;
    int k = 0;
    std::vector<SemiIntegralIndex> T;
    QMatrix M;
    int singular_count() const;
};
PullbackMatrix build_gram(const std::vector<SemiIntegralIndex>& T, int k, const EnumOptions& opt = {});
// Appends indices (which must keep singular-first order) and fills new cells.
void extend_gram(PullbackMatrix& pm, const std::vector<SemiIntegralIndex>& more, const EnumOptions& opt = {});

struct TruncatedForm {
    std::vector<SemiIntegralIndex> T;
    std::vector<NFElem> values;
};

// A rational combination of pullback columns: f(t) = sum_j c_j * pullback(t, t_j).
struct PullbackForm {
    int k = 0;
    std::vector<SemiIntegralIndex> columns;
    std::vector<BigRat> weights;
    BigRat operator()(const SemiIntegralIndex& t) const;
};

struct Bases {
    std::vector<TruncatedForm> full;
    std::vector<TruncatedForm> cusp;
    std::vector<PullbackForm> full_forms;
    std::vector<PullbackForm> cusp_forms;
    int dim_M = 0;
    int dim_S = 0;
};
Bases extract_bases(const PullbackMatrix& pm);

// Grows T from the candidate list until the rank is stable for `stable_rounds`
// extensions and, when known_dim > 0, equals it.
struct GrowthReport {
    PullbackMatrix pm;
    std::vector<int> rank_history;
};
GrowthReport grow_gram(int n, int k, const std::vector<SemiIntegralIndex>& candidates, int step, int known_dim,
                       int stable_rounds = 3, const EnumOptions& opt = {}, std::size_t max_size = 0);

// Eigenforms grouped by Galois orbit: each entry is a truncation over Q[x]/(phi)
// standing for all conjugates. Solves M = sum over all conjugates c v v^T.
std::vector<NFElem> solve_c(const std::vector<TruncatedForm>& eigen, const PullbackMatrix& pm);

struct CongruenceEntry {
    int form = 0;          // eigenform orbit
    std::string ideal;     // prime of that orbit's field
    int residue_degree = 1;
    int valuation = 0;
};
struct CongruenceHit {
    long p = 0;
    std::vector<CongruenceEntry> negative;  // all primes over p with ord < 0
    bool pattern = false;  // exactly two embeddings with ord = -1, all others integral
    bool unsupported = false;  // some field ramified or non-integral at p
};
// Denominator primes are found with a bounded factorization. Composite
// cofactors it cannot split and primes above 2^62 are not analyzed; they go
// to `skipped` when given.
std::vector<CongruenceHit> congruence_scan(const std::vector<NFElem>& c, int k, std::vector<BigInt>* skipped = nullptr);

}  // namespace siegel
