#pragma once

#include "siegel/arith.hpp"
#include "siegel/genus.hpp"
#include "siegel/intmat.hpp"
#include "siegel/poly.hpp"

namespace siegel {

struct FpResult {
    long p = 0;
    QPoly poly;     // integer coefficients, constant term 1
    int e_p = 0;    // degree
    int sign = 1;   // functional-equation sign
};

// Degree of F_p(u, X) predicted by the functional equation.
int fp_degree(int m, const BigInt& det2u, long p);

// F_p(u, X) for positive definite u of rank m >= 1. The genus-symbol form
// uses only the local constituents at p together with det(2u) and m.
FpResult fp_polynomial(const GenusSymbol& s, long p);
FpResult fp_polynomial(const IntMatrix& two_u, long p);

// gamma_p(u, X), the factor separating the local Siegel series from F_p.
QPoly siegel_gamma(int m, const BigInt& det2u, long p);

// Local density alpha_p(H_k, u) as a polynomial in X = p^{-k}.
QPoly local_density(const IntMatrix& two_u, long p);
// Primitive part of the same density.
QPoly primitive_density(const IntMatrix& two_u, long p);

// Sign in F_p(u, p^{-m-1}/X) = sign * (p^{(m+1)/2} X)^{-e} F_p(u, X); +1 for even m.
// two_u may be any matrix in the Z_p-class of 2u.
int fe_sign(const IntMatrix& two_u, long p);
// Checks the functional equation coefficientwise.
bool fe_check(const FpResult& r, int m, int sign);

}  // namespace siegel
