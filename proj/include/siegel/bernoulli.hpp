#pragma once

#include "siegel/arith.hpp"
#include "siegel/poly.hpp"

namespace siegel {

// Ordinary Bernoulli numbers with B_1 = -1/2.
BigRat bernoulli_number(int n);
QPoly bernoulli_polynomial(int n);

bool is_fundamental_discriminant(const BigInt& d);

// Kronecker character (D/.) for D = 1 or a fundamental discriminant.
class QuadChar {
public:
    explicit QuadChar(const BigInt& d);
    static QuadChar trivial() { return QuadChar(BigInt(1)); }
    const BigInt& discriminant() const { return d_; }
    long conductor() const { return conductor_; }
    int operator()(const BigInt& n) const { return kronecker(d_, n); }
    int operator()(long n) const { return kronecker(d_, BigInt(n)); }

private:
    BigInt d_;
    long conductor_;
};

// zeta(1 - k) = -B_k / k for k >= 2.
BigRat zeta_value(int k);
// B_j(chi) from sum_{a=1}^f chi(a) t e^{at} / (e^{ft} - 1); B_1(chi_1) = 1/2.
BigRat quad_bernoulli(const QuadChar& chi, int j);
// L(chi, 1 - j) = -B_j(chi) / j.
BigRat l_value(const QuadChar& chi, int j);

// True iff no prime above `bound` divides the denominator of x.
bool cvs_integral_at(const BigRat& x, long bound);

}  // namespace siegel
