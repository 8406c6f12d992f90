#include "siegel/arith.hpp"

#include <algorithm>
#include <cctype>

namespace siegel {

void consistency_failure(const std::string& what) {
    throw ConsistencyError("internal consistency check failed: " + what);
}

BigRat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw UsageError("zero denominator");
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

BigRat make_rat(long num, long den) { return make_rat(BigInt(num), BigInt(den)); }

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const BigRat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

BigRat parse_rat(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw UsageError("empty rational");
    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto strip_plus = [](std::string t) {
        if (!t.empty() && t[0] == '+') t.erase(0, 1);
        return t;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw UsageError("malformed rational: " + s);
        return BigRat(BigInt(strip_plus(s)));
    }
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    if (!valid_int(a) || !valid_int(b)) throw UsageError("malformed rational: " + s);
    return make_rat(BigInt(strip_plus(a)), BigInt(strip_plus(b)));
}

bool is_integer(const BigRat& x) { return x.get_den() == 1; }
BigInt rat_num(const BigRat& x) { return x.get_num(); }
BigInt rat_den(const BigRat& x) { return x.get_den(); }

BigInt int_pow(const BigInt& x, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
    return r;
}

BigRat rat_pow(const BigRat& x, long e) {
    if (e >= 0) {
        return make_rat(int_pow(x.get_num(), static_cast<unsigned long>(e)),
                        int_pow(x.get_den(), static_cast<unsigned long>(e)));
    }
    if (x == 0) throw UsageError("zero to a negative power");
    return make_rat(int_pow(x.get_den(), static_cast<unsigned long>(-e)),
                    int_pow(x.get_num(), static_cast<unsigned long>(-e)));
}

std::int64_t ipow64(std::int64_t p, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, p);
    return r;
}

int valuation(const BigInt& x, long p) {
    if (x == 0) return kValInfinity;
    BigInt t = abs(x);
    int v = 0;
    BigInt q, r;
    BigInt P(p);
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), P.get_mpz_t());
        if (r != 0) break;
        t = q;
        ++v;
    }
    return v;
}

int valuation(const BigRat& x, long p) {
    if (x == 0) return kValInfinity;
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

int valuation64(std::int64_t x, std::int64_t p) {
    if (x == 0) return kValInfinity;
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    BigInt N(static_cast<long>(n));
    return mpz_probab_prime_p(N.get_mpz_t(), 40) != 0;
}

std::int64_t mod64(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t inv_mod64(std::int64_t a, std::int64_t m) {
    std::int64_t r0 = mod64(a, m), r1 = m, s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw ConsistencyError("inverse does not exist");
    return mod64(s0, m);
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) consistency_failure("64-bit overflow in multiplication");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) consistency_failure("64-bit overflow in addition");
    return r;
}

namespace {

// A nontrivial factor of the composite n, or 0 once `budget` steps are spent
// (budget 0: unlimited).
BigInt pollard_rho(const BigInt& n, std::uint64_t budget) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    std::uint64_t steps = 0;
    for (unsigned long c = 1;; ++c) {
        BigInt x = 2, y = 2, d = 1, acc = 1;
        auto f = [&](const BigInt& v) {
            BigInt r = v * v + c;
            mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
            return r;
        };
        while (d == 1) {
            // gcds are batched over 32 steps; a batch that hits n is replayed one step at a time
            BigInt x0 = x, y0 = y;
            for (int i = 0; i < 32; ++i) {
                x = f(x);
                y = f(f(y));
                acc = acc * abs(x - y);
                mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), n.get_mpz_t());
            }
            steps += 32;
            mpz_gcd(d.get_mpz_t(), acc.get_mpz_t(), n.get_mpz_t());
            if (d == n) {
                x = x0;
                y = y0;
                d = 1;
                for (int i = 0; i < 32 && d == 1; ++i) {
                    x = f(x);
                    y = f(f(y));
                    BigInt diff = abs(x - y);
                    mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
                }
                break;
            }
            if (budget && steps >= budget && d == 1) return 0;
        }
        if (d != n && d != 1) return d;
        if (budget && steps >= budget) return 0;
    }
}

void factor_rec(const BigInt& n, std::vector<BigInt>& out, std::vector<BigInt>& rest, std::uint64_t budget) {
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        out.push_back(n);
        return;
    }
    BigInt d = pollard_rho(n, budget);
    if (d == 0) {
        rest.push_back(n);
        return;
    }
    factor_rec(d, out, rest, budget);
    factor_rec(n / d, out, rest, budget);
}

}  // namespace

PartialFactorization factor_partial(const BigInt& n0, std::uint64_t rho_steps) {
    if (n0 == 0) throw UsageError("cannot factor zero");
    BigInt n = abs(n0);
    std::vector<BigInt> primes;
    PartialFactorization res;
    for (long p = 2; p < 10000 && n > 1; ++p) {
        if (n < BigInt(p) * p) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
            primes.emplace_back(p);
            n /= p;
        }
    }
    factor_rec(n, primes, res.unfactored, rho_steps);
    std::sort(primes.begin(), primes.end());
    for (auto& p : primes) {
        if (!res.primes.empty() && res.primes.back().first == p)
            ++res.primes.back().second;
        else
            res.primes.emplace_back(p, 1);
    }
    std::sort(res.unfactored.begin(), res.unfactored.end());
    return res;
}

std::vector<std::pair<BigInt, int>> factor_big(const BigInt& n) { return factor_partial(n, 0).primes; }

std::vector<std::pair<std::int64_t, int>> factor_int(std::int64_t n) {
    std::vector<std::pair<std::int64_t, int>> res;
    if (n == 0) throw UsageError("cannot factor zero");
    if (n < 0) n = -n;
    if (n < (std::int64_t(1) << 40)) {
        for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
            if (n % p) continue;
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            res.emplace_back(p, e);
        }
        if (n > 1) res.emplace_back(n, 1);
        return res;
    }
    for (auto& [p, e] : factor_big(BigInt(static_cast<long>(n)))) res.emplace_back(p.get_si(), e);
    return res;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> res;
    for (auto& [p, e] : factor_int(n)) res.push_back(p);
    return res;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> res;
    if (n < 2) return res;
    std::vector<bool> sieve(static_cast<std::size_t>(n + 1), true);
    for (std::int64_t i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        res.push_back(i);
        for (std::int64_t j = i * i; j <= n; j += i) sieve[j] = false;
    }
    return res;
}

int kronecker(const BigInt& a, const BigInt& n) { return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t()); }

int kronecker64(std::int64_t a, std::int64_t n) {
    return kronecker(BigInt(static_cast<long>(a)), BigInt(static_cast<long>(n)));
}

int legendre64(std::int64_t a, std::int64_t p) { return kronecker64(mod64(a, p), p); }

DiscriminantSplit discriminant_split(const BigInt& d) {
    BigInt r = d % 4;
    if (r < 0) r += 4;
    if (d == 0 || (r != 0 && r != 1)) throw UsageError("not a discriminant: " + d.get_str());
    BigInt f = 1;
    BigInt D = d;
    for (auto& [p, e] : factor_big(d)) {
        if (p == 2) continue;
        int k = e / 2;
        D /= int_pow(p, static_cast<unsigned long>(2 * k));
        f *= int_pow(p, static_cast<unsigned long>(k));
    }
    for (;;) {
        if (D % 4 != 0) break;
        BigInt m = D / 4;
        BigInt mm = m % 4;
        if (mm < 0) mm += 4;
        if (mm != 0 && mm != 1) break;
        D = m;
        f *= 2;
    }
    check_consistency(D * f * f == d, "discriminant split");
    return {D, f};
}

BigInt binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

}  // namespace siegel
