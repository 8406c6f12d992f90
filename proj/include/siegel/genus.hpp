#pragma once

#include <string>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/intmat.hpp"

namespace siegel {

struct OddConstituent {
    int scale_exp = 0;
    int sign = 1;
    int dim = 0;
    friend bool operator==(const OddConstituent&, const OddConstituent&) = default;
};

struct TwoConstituent {
    int scale_exp = 0;
    int sign = 1;
    int dim = 0;
    bool type1 = false;  // diagonalizable (odd); false means even
    int oddity = 0;      // meaningful only for type1
    friend bool operator==(const TwoConstituent&, const TwoConstituent&) = default;
};

struct OddPart {
    long p = 0;
    std::vector<OddConstituent> constituents;
    friend bool operator==(const OddPart&, const OddPart&) = default;
};

// Local symbols of 2t at 2 and at every odd prime dividing det(2t).
struct GenusSymbol {
    BigInt det2t;
    int rank = 0;
    std::vector<TwoConstituent> two;
    std::vector<OddPart> odd;  // ascending primes
    friend bool operator==(const GenusSymbol&, const GenusSymbol&) = default;

    std::vector<long> primes() const;  // 2 followed by the odd primes
    const OddPart* odd_part(long p) const;
};

// Jordan decompositions of a nonsingular integer symmetric matrix.
std::vector<OddConstituent> jordan_odd(const IntMatrix& a, long p);
std::vector<TwoConstituent> jordan_two(const IntMatrix& a);

// Genus symbol of a positive definite 2t.
GenusSymbol genus_symbol(const IntMatrix& two_t);

// Compact text form: scale-1 constituents are omitted, since they are
// determined by det(2t) and the rank.
std::string format_symbol(const GenusSymbol& s);
// Full text form with every constituent.
std::string format_symbol_full(const GenusSymbol& s);
GenusSymbol parse_symbol(const std::string& text, const BigInt& det2t, int rank);

// Local symbols compared up to oddity fusion and sign walking at 2.
bool two_adic_equivalent(const std::vector<TwoConstituent>& a, const std::vector<TwoConstituent>& b);
bool symbols_equivalent(const GenusSymbol& a, const GenusSymbol& b);
// Canonical 2-adic data used for comparisons and cache keys.
std::vector<TwoConstituent> canonical_two_adic(const std::vector<TwoConstituent>& s);
std::string local_key(const GenusSymbol& s, long p);
std::string genus_key(const GenusSymbol& s);

// Block-diagonal integer matrix whose local symbol at p equals the given one.
IntMatrix local_representative(const GenusSymbol& s, long p);
IntMatrix two_adic_representative(const std::vector<TwoConstituent>& c);
IntMatrix odd_representative(const std::vector<OddConstituent>& c, long p);

// Validity of a single 2-adic constituent (dimension/sign/oddity compatibility).
bool two_constituent_valid(const TwoConstituent& c);
// Oddity formula for a positive definite form: the 2-adic oddity equals the
// rank plus the odd p-excesses mod 8.
bool oddity_formula_holds(const GenusSymbol& s);

}  // namespace siegel
