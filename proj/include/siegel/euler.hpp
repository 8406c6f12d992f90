#pragma once

#include <string>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/hecke.hpp"
#include "siegel/matrix.hpp"
#include "siegel/mpcomplex.hpp"
#include "siegel/numfield.hpp"

namespace siegel {

// Polynomial in X with coefficients in a number field, constant term first.
using NFPoly = std::vector<NFElem>;
NFPoly nfpoly_mul(const NFPoly& a, const NFPoly& b);
bool nfpoly_equal(const NFPoly& a, const NFPoly& b);
std::string nfpoly_str(const NFPoly& a);

struct EulerFactor {
    enum class Kind { Standard, Spinor, Elliptic };
    long p = 2;
    Kind kind = Kind::Standard;
    NFPoly coeffs;
};

// Omega[T_n(p^2) ... T_0(p^2)] = [g_0 ... g_n] K, read off the coset Satake
// images. Degrees 1..3.
QMatrix krieg_matrix(int n, long p);
QMatrix pascal_matrix(int n);

// [lambda(T_n(p^2)) ... lambda(T_0(p^2))] from eigendata indexed by i.
std::vector<NFElem> lambda_vector(const HeckeEigenData& e);
// g-vector [g_0(alpha) ... g_n(alpha)] = lambda K^{-1}
std::vector<NFElem> g_vector(const std::vector<NFElem>& lambda, int n, long p);
// [r_0 ... r_n] = p^{<n> - kn} g P; throws ConsistencyError unless r_0 = 1.
std::vector<NFElem> standard_r(const std::vector<NFElem>& lambda, int n, int k, long p);
EulerFactor standard_factor(const std::vector<NFElem>& lambda, int n, int k, long p);

// Degree-3 spinor factor from g(alpha) = lambda(T(p)) and the g-vector.
EulerFactor spinor_factor_deg3(const NFElem& g, const std::vector<NFElem>& gvec, long p);

// 1 - a p^{-c} X + p^{w-1-2c} X^2
EulerFactor elliptic_shift_factor(const NFElem& a, int w, int c, long p);
// (1 - X)(1 - (a^2/p^{w-1} - 2) X + X^2)
EulerFactor elliptic_standard_factor(const NFElem& a, int w, long p);

// Numerical Satake parameters of a rational degree-3 eigenvalue system and
// the largest relative deviation of the spinor product expansion from the
// s_l values (MPFR at `bits` precision).
struct SatakeNumeric {
    std::vector<Cx> alpha;  // alpha_0 .. alpha_n
    Real max_abs_dev = 0;   // max over i >= 1 of ||alpha_i| - 1|
    Real spinor_dev = 0;
};
SatakeNumeric satake_numeric_deg3(const NFElem& g, const std::vector<NFElem>& gvec, int k, long p,
                                  unsigned bits = 256);

}  // namespace siegel
