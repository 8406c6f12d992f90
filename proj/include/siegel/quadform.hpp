#pragma once

#include <string>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/intmat.hpp"
#include "siegel/matrix.hpp"

namespace siegel {

// Semi-integral symmetric t, stored through the integer matrix 2t
// (symmetric with even diagonal).
class SemiIntegralIndex {
public:
    SemiIntegralIndex() = default;
    static SemiIntegralIndex from_2t(const IntMatrix& two_t);
    static SemiIntegralIndex from_rational(const QMatrix& t);
    static SemiIntegralIndex zero(int n);
    // Parses "[[1,1/2],[1/2,1]]" as t.
    static SemiIntegralIndex parse_t(const std::string& text);
    // Parses "[[2,1],[1,2]]" as 2t.
    static SemiIntegralIndex parse_2t(const std::string& text);

    int n() const { return two_t_.rows(); }
    const IntMatrix& two_t() const { return two_t_; }
    QMatrix t() const;
    BigRat entry(int i, int j) const;
    std::int64_t det2t() const { return det64(two_t_); }
    SemiIntegralIndex transform(const IntMatrix& u) const;  // t[u] = u^T t u
    std::string str() const;  // prints 2t

    friend bool operator==(const SemiIntegralIndex& a, const SemiIntegralIndex& b) { return a.two_t_ == b.two_t_; }
    friend bool operator<(const SemiIntegralIndex& a, const SemiIntegralIndex& b) { return a.two_t_ < b.two_t_; }

private:
    explicit SemiIntegralIndex(IntMatrix m) : two_t_(std::move(m)) {}
    IntMatrix two_t_;
};

IntMatrix parse_int_matrix(const std::string& text);
QMatrix parse_rat_matrix(const std::string& text);
IntMatrix direct_sum(const IntMatrix& a, const IntMatrix& b);

bool is_psd(const SemiIntegralIndex& t);
bool is_pd(const SemiIntegralIndex& t);

struct RankSplit {
    SemiIntegralIndex u;  // positive definite, size m
    int m = 0;
    IntMatrix U;          // unimodular, U^T t U = u (+) 0
};
RankSplit rank_split(const SemiIntegralIndex& t);

// For even rank m: (-1)^{m/2} det(2u) = D f^2.
DiscriminantSplit discriminant_split(const SemiIntegralIndex& u);

int hilbert_symbol(const BigRat& a, const BigRat& b, long p);
// Real place (p = -1 convention).
int hilbert_symbol_real(const BigRat& a, const BigRat& b);
// h_p(u) = prod_{i <= j} (a_i, a_j)_p for a rational diagonalization of u.
int hasse_invariant(const SemiIntegralIndex& u, long p);
int hasse_invariant(const QMatrix& u, long p);
// Rational congruence diagonalization: diagonal entries of some P^T u P.
std::vector<BigRat> rational_diagonalization(const QMatrix& u);

// Canonical GL_n(Z) representative for n <= 3 (psd); returns index and the
// transform V with canonical = t[V].
struct ReducedIndex {
    SemiIntegralIndex index;
    IntMatrix transform;
};
ReducedIndex reduce_index(const SemiIntegralIndex& t);

}  // namespace siegel
