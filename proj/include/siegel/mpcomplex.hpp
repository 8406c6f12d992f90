#pragma once

#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "siegel/arith.hpp"

namespace siegel {

using Real = boost::multiprecision::mpfr_float;

struct Cx {
    Real re, im;
};
inline Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
inline Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
inline Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline Cx operator/(const Cx& a, const Cx& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline Real cabs(const Cx& a) { return sqrt(a.re * a.re + a.im * a.im); }
inline Real to_real(const BigRat& v) { return Real(v.get_num().get_str()) / Real(v.get_den().get_str()); }

// Approximate complex roots of sum a_i x^i (a_d != 0) by Aberth iteration at
// the current default precision; `bits` sets the stopping tolerance.
std::vector<Cx> approximate_roots(const std::vector<Real>& a, unsigned bits);

}  // namespace siegel
