#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/intmat.hpp"
#include "siegel/numfield.hpp"
#include "siegel/quadform.hpp"

namespace siegel {

using CoefficientFn = std::function<NFElem(const SemiIntegralIndex&)>;

// Fourier coefficients keyed by reduced index. A table either holds explicit
// values (complete for definite indices with det(2t) <= bound) or computes
// missing ones on demand from a source function (bound < 0: unlimited).
class FourierTable {
public:
    FourierTable() = default;
    FourierTable(int n, int k);
    static FourierTable from_function(int n, int k, CoefficientFn source);

    int n() const { return n_; }
    int k() const { return k_; }
    long bound() const { return bound_; }
    void set_bound(long b) { bound_ = b; }

    NFElem coeff(const SemiIntegralIndex& t) const;
    void set(const SemiIntegralIndex& t, const NFElem& v);
    std::size_t stored() const;
    std::map<IntMatrix, NFElem> snapshot() const;

private:
    struct State;
    int n_ = 0;
    int k_ = 0;
    long bound_ = 0;
    std::shared_ptr<State> st_;
};

// Left cosets Gamma g of integral similitudes g = [[m D^{-T}, B], [0, D]] with
// m = p^power, D in row Hermite normal form and Y = D^T B symmetric.
struct CosetBlock {
    IntMatrix D;
    std::int64_t detD = 1;
    std::vector<IntMatrix> Y;
    std::vector<int> rank_mod_p;  // rank of g mod p, per Y
};
struct CosetSet {
    int n = 0;
    long p = 0;
    int power = 1;
    std::vector<CosetBlock> blocks;
    std::size_t count(int rank = -1) const;
};
const CosetSet& similitude_cosets(int n, long p, int power);
IntMatrix coset_matrix(const CosetSet& cs, const CosetBlock& b, std::size_t which);

// T(p) = Gamma diag(1_n, p 1_n) Gamma and
// T_i(p^2) = Gamma diag(1_{n-i}, p 1_i, p^2 1_{n-i}, p 1_i) Gamma.
struct HeckeOperator {
    long p = 2;
    int i = -1;  // -1 selects T(p)
    static HeckeOperator T(long p) { return {p, -1}; }
    static HeckeOperator Ti(long p, int i) { return {p, i}; }
    int power() const { return i < 0 ? 1 : 2; }
    std::string str() const;
};
std::size_t hecke_degree(int n, const HeckeOperator& op);

// a(t; T f) with the multiplier m(g)^{kn - <n>}.
NFElem hecke_coefficient(const FourierTable& f, const SemiIntegralIndex& t, const HeckeOperator& op);
FourierTable hecke_apply(const FourierTable& f, const HeckeOperator& op);
FourierTable hecke_T(const FourierTable& f, long p);
FourierTable hecke_Ti(const FourierTable& f, long p, int i);

// Laurent polynomial in x_0..x_n with rational coefficients.
struct LaurentPoly {
    int n = 0;
    std::map<std::vector<int>, BigRat> terms;
    LaurentPoly& add(const std::vector<int>& e, const BigRat& c);
    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const BigRat& s, const LaurentPoly& a);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.n == b.n && a.terms == b.terms; }
    std::string str() const;
};
// Weyl group orbit of a monomial: permutations of x_1..x_n and
// x_0 -> x_0 x_i, x_i -> x_i^{-1}.
std::vector<std::vector<int>> weyl_orbit(const std::vector<int>& e);
LaurentPoly weyl_sum(int n, const std::vector<int>& e);
bool weyl_invariant(const LaurentPoly& f);

// Satake image of T(p) or T_i(p^2) summed over its cosets:
// x_0^{e_0} (x_1/p)^{e_1} ... (x_n/p^n)^{e_n} per coset.
LaurentPoly satake_image(int n, const HeckeOperator& op);
// g = [x_0] and g_l = [x_0^2 x_1 ... x_{n-l}]
LaurentPoly satake_g(int n);
LaurentPoly satake_gl(int n, int l);

struct HeckeEigenData {
    FourierTable form;
    FieldPtr field;             // null for rational eigenforms
    std::vector<NFElem> coords;  // in the given basis
    NFElem lambda_T;
    std::vector<NFElem> lambda_T2;  // lambda(T_i(p^2)), i = 0..n; empty if not requested
    int multiplicity = 1;
};

// Eigenforms of T(p) on the span of the basis (rational tables), grouped by
// irreducible factors of the characteristic polynomial. The probe list must
// contain indices on which the basis truncations are independent.
std::vector<HeckeEigenData> eigen_decompose(const std::vector<FourierTable>& basis,
                                            const std::vector<SemiIntegralIndex>& probe, long p, bool squares = true,
                                            int verify_rows = 0);

}  // namespace siegel
