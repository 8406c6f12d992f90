#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace siegel {

using BigInt = mpz_class;
using BigRat = mpq_class;

// Raised for bad user input (malformed matrices, invalid symbols, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when an internal cross-check fails. Never swallowed.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

[[noreturn]] void consistency_failure(const std::string& what);

inline void check_consistency(bool ok, const std::string& what) {
    if (!ok) consistency_failure(what);
}

BigRat make_rat(const BigInt& num, const BigInt& den);
BigRat make_rat(long num, long den = 1);
std::string to_string(const BigInt& x);
std::string to_string(const BigRat& x);
BigRat parse_rat(std::string_view text);

bool is_integer(const BigRat& x);
BigInt rat_num(const BigRat& x);
BigInt rat_den(const BigRat& x);
BigRat rat_pow(const BigRat& x, long e);
BigInt int_pow(const BigInt& x, unsigned long e);
std::int64_t ipow64(std::int64_t p, int e);

// p-adic valuation; zero has valuation "infinity" reported as a large sentinel.
constexpr int kValInfinity = 1 << 28;
int valuation(const BigInt& x, long p);
int valuation(const BigRat& x, long p);
int valuation64(std::int64_t x, std::int64_t p);

bool is_prime(std::int64_t n);
std::vector<std::pair<std::int64_t, int>> factor_int(std::int64_t n);
std::vector<std::pair<BigInt, int>> factor_big(const BigInt& n);
// Factorization with at most rho_steps Pollard steps per composite; composite
// cofactors that resist are returned unfactored.
struct PartialFactorization {
    std::vector<std::pair<BigInt, int>> primes;
    std::vector<BigInt> unfactored;
};
PartialFactorization factor_partial(const BigInt& n, std::uint64_t rho_steps);
std::vector<std::int64_t> prime_divisors(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t n);

// Kronecker symbol (a/n) for arbitrary integers.
int kronecker(const BigInt& a, const BigInt& n);
int kronecker64(std::int64_t a, std::int64_t n);
int legendre64(std::int64_t a, std::int64_t p);

std::int64_t mod64(std::int64_t a, std::int64_t m);
std::int64_t inv_mod64(std::int64_t a, std::int64_t m);
std::int64_t gcd64(std::int64_t a, std::int64_t b);

// Checked 64-bit helpers; throw ConsistencyError on overflow.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

// Fundamental discriminant D and conductor f with d = D f^2 (d = 0 or 1 mod 4).
struct DiscriminantSplit {
    BigInt fundamental;
    BigInt conductor;
};
DiscriminantSplit discriminant_split(const BigInt& d);

BigInt binomial(long n, long k);

}  // namespace siegel
