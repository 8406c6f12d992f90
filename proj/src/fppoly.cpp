#include "siegel/fppoly.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "siegel/matrix.hpp"
#include "siegel/quadform.hpp"

namespace siegel {

namespace {

BigRat qpow(long p, long e) { return rat_pow(BigRat(p), e); }

// c * Y^d
QPoly mono(const BigRat& c, int d) { return QPoly::monomial(c, d); }

QPoly constant(long c) { return QPoly(BigRat(c)); }

int chi_at(int m, const BigInt& det2u, long p) {
    BigInt d = (m / 2) % 2 == 0 ? det2u : BigInt(-det2u);
    auto split = discriminant_split(d);
    return kronecker(split.fundamental, BigInt(p));
}

// Number of injective isometries of the quadratic space (Z^m / p, x^T a x / 2)
// into the hyperbolic space of dimension 2k over F_p, as a polynomial in Y = p^k.
QPoly embedding_count_odd(const IntMatrix& a, long p) {
    int m = a.rows();
    int r = 0, eps = 1;
    for (auto& c : jordan_odd(a, p))
        if (c.scale_exp == 0) {
            r = c.dim;
            eps = c.sign;
        }
    // Q = a/2 on the unit part; choose diagonal entries 1, ..., 1, w
    int eta_prod = eps * (r % 2 == 0 ? 1 : legendre64(2, p));
    long nonres = 2;
    while (legendre64(nonres, p) != -1) ++nonres;
    std::vector<long> diag(static_cast<std::size_t>(r), 1);
    if (r > 0 && eta_prod == -1) diag.back() = nonres;

    auto eta = [p](long x) { return legendre64(mod64(x, p), p); };
    QPoly count = constant(1);
    long P = 1;
    for (int j = 0; j < r; ++j) {
        long av = diag[static_cast<std::size_t>(j)];
        QPoly f;
        if (j % 2 == 0) {
            long sgn = (j / 2) % 2 == 0 ? 1 : -1;
            f = mono(qpow(p, -j - 1), 2) - mono(qpow(p, -j / 2 - 1) * eta(sgn * P), 1);
        } else {
            long sgn = ((j + 1) / 2) % 2 == 0 ? 1 : -1;
            f = mono(qpow(p, -j - 1), 2) + mono(qpow(p, -(j + 1) / 2) * eta(sgn * av * P), 1);
        }
        count *= f;
        P = (P * av) % p;
    }
    int d = m - r;
    for (int j = 0; j < d; ++j) {
        QPoly s;
        if (r % 2 == 0) {
            long sgn = (r / 2) % 2 == 0 ? 1 : -1;
            int e = eta(sgn * P);
            QPoly half = mono(qpow(p, -r / 2 - j), 1);
            s = (half - constant(e)) * (half * qpow(p, -1) + constant(e));
        } else {
            s = mono(qpow(p, -r - 2 * j - 1), 2) - constant(1);
        }
        count *= s * qpow(p, j);
    }
    return count;
}

QPoly embedding_count_two(const IntMatrix& a) {
    const long q = 2;
    int m = a.rows();
    int h = 0, eps = 1, delta = 0;
    for (auto& c : jordan_two(a)) {
        if (c.scale_exp == 0) {
            check_consistency(!c.type1, "unit constituent of an even lattice must be even");
            h = c.dim / 2;
            eps = c.sign;
        }
        if (c.scale_exp == 1 && c.type1) delta = 1;
    }
    int d0 = m - 2 * h - delta;
    QPoly count = constant(1);
    if (h > 0) {
        // |O^+(2k)| / |O^eps(2k - 2h)|
        count = mono(qpow(q, -h * (h + 1)), 2 * h) * (mono(BigRat(1), 1) - constant(1)) *
                (mono(qpow(q, -h), 1) + constant(eps));
        for (int s = 1; s <= h - 1; ++s) count *= mono(qpow(q, -2 * s), 2) - constant(1);
    }
    for (int j = 0; j < d0; ++j) {
        QPoly top = mono(qpow(q, -h - j), 1);
        count *= (top - constant(eps)) * (top * qpow(q, -1) + constant(eps)) * qpow(q, j);
    }
    if (delta) {
        QPoly f = mono(qpow(q, -2 * h - 2 * d0 - 1), 2) - mono(qpow(q, -h - d0 - 1) * eps, 1);
        count *= f * qpow(q, d0);
    }
    return count;
}

std::string local_class_key(const IntMatrix& a, long p) {
    std::ostringstream os;
    os << p << "|" << a.rows() << "|";
    if (p == 2) {
        for (auto& c : canonical_two_adic(jordan_two(a)))
            os << c.scale_exp << (c.sign > 0 ? "+" : "-") << c.dim << (c.type1 ? "I" : "II") << c.oddity << ".";
    } else {
        for (auto& c : jordan_odd(a, p)) os << c.scale_exp << (c.sign > 0 ? "+" : "-") << c.dim << ".";
    }
    return os.str();
}

IntMatrix class_representative(const IntMatrix& a, long p) {
    if (p == 2) return two_adic_representative(jordan_two(a));
    return odd_representative(jordan_odd(a, p), p);
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    __int128 r = static_cast<__int128>(a) * b % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

// Gram form restricted to the order-p part of the discriminant group.
struct DiscriminantP {
    IntMatrix basis;  // columns v_i, with v_i / p spanning the p-torsion of L#/L
    IntMatrix gram;   // basis^T a basis
};

DiscriminantP p_torsion(const IntMatrix& a, long p) {
    int m = a.rows();
    SmithForm sf = smith_form(a);
    std::vector<int> cols;
    for (int i = 0; i < m; ++i)
        if (sf.diag[static_cast<std::size_t>(i)] % p == 0) cols.push_back(i);
    std::vector<int> all_rows;
    for (int i = 0; i < m; ++i) all_rows.push_back(i);
    IntMatrix basis = sf.v.submatrix(all_rows, cols);
    return {basis, basis.transpose() * a * basis};
}

struct Isotropic {
    std::vector<std::vector<std::int64_t>> vecs;  // coordinate vectors over F_p
};

// All nonzero totally isotropic subspaces of the p-torsion, as RREF bases.
void isotropic_subspaces(const IntMatrix& g, long p, std::vector<Isotropic>& out) {
    int k = g.rows();
    std::int64_t mq = 2 * p * p, mb = p * p;
    auto form = [&](const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y, std::int64_t mod) {
        std::int64_t s = 0;
        for (int i = 0; i < k; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < k; ++j) {
                if (y[j] == 0) continue;
                s = (s + mulmod(mulmod(x[i], g(i, j), mod), y[j], mod)) % mod;
            }
        }
        return s;
    };
    for (int r = 1; r <= k; ++r) {
        // pivot sets as increasing sequences
        std::vector<int> piv(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) piv[i] = i;
        for (;;) {
            // free positions: for row i, columns > piv[i] that are not pivots
            std::vector<std::pair<int, int>> free;
            for (int i = 0; i < r; ++i)
                for (int c = piv[i] + 1; c < k; ++c)
                    if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.push_back({i, c});
            std::vector<std::int64_t> digits(free.size(), 0);
            for (;;) {
                std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(r),
                                                            std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
                for (int i = 0; i < r; ++i) rows[i][piv[i]] = 1;
                for (std::size_t f = 0; f < free.size(); ++f) rows[free[f].first][free[f].second] = digits[f];
                bool ok = true;
                for (int i = 0; i < r && ok; ++i) {
                    if (form(rows[i], rows[i], mq) != 0) ok = false;
                    for (int j = i + 1; j < r && ok; ++j)
                        if (form(rows[i], rows[j], mb) != 0) ok = false;
                }
                if (ok) out.push_back({rows});
                std::size_t f = 0;
                while (f < digits.size() && ++digits[f] == p) digits[f++] = 0;
                if (f == digits.size()) break;
            }
            int i = r - 1;
            while (i >= 0 && piv[i] == k - r + i) --i;
            if (i < 0) break;
            ++piv[i];
            for (int j = i + 1; j < r; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
}

IntMatrix overlattice_gram(const IntMatrix& a, long p, const IntMatrix& basis, const Isotropic& h) {
    int m = a.rows();
    int r = static_cast<int>(h.vecs.size());
    IntMatrix gens(m + r, m);
    for (int i = 0; i < m; ++i) gens(i, i) = p;
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < m; ++i) {
            std::int64_t s = 0;
            for (int c = 0; c < basis.cols(); ++c) s = checked_add(s, checked_mul(basis(i, c), h.vecs[j][c]));
            gens(m + j, i) = s;
        }
    IntMatrix b = hnf_rows(gens);
    check_consistency(b.rows() == m, "overlattice basis has full rank");
    IntMatrix g = b * a * b.transpose();
    IntMatrix out(m, m);
    std::int64_t p2 = p * p;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            check_consistency(g(i, j) % p2 == 0, "overlattice Gram matrix is integral");
            out(i, j) = g(i, j) / p2;
        }
    for (int i = 0; i < m; ++i) check_consistency(out(i, i) % 2 == 0, "overlattice is even");
    return out;
}

std::mutex g_density_mutex;
std::map<std::string, QPoly> g_density_cache;

QPoly density_rec(const IntMatrix& a0, long p) {
    std::string key = local_class_key(a0, p);
    {
        std::lock_guard<std::mutex> lock(g_density_mutex);
        auto it = g_density_cache.find(key);
        if (it != g_density_cache.end()) return it->second;
    }
    IntMatrix a = class_representative(a0, p);
    int m = a.rows();
    QPoly alpha = primitive_density(a, p);
    DiscriminantP dp = p_torsion(a, p);
    if (dp.basis.cols() > 0) {
        std::vector<Isotropic> subs;
        isotropic_subspaces(dp.gram, p, subs);
        // w = p^{m+1} X^2
        QPoly w = mono(qpow(p, m + 1), 2);
        for (auto& h : subs) {
            int r = static_cast<int>(h.vecs.size());
            IntMatrix ah = overlattice_gram(a, p, dp.basis, h);
            BigRat mu = qpow(p, static_cast<long>(r) * (r - 1) / 2);
            if (r % 2 == 1) mu = -mu;
            alpha -= poly_pow(w, r) * density_rec(ah, p) * mu;
        }
    }
    std::lock_guard<std::mutex> lock(g_density_mutex);
    g_density_cache.emplace(key, alpha);
    return alpha;
}

}  // namespace

int fp_degree(int m, const BigInt& det2u, long p) {
    if (m % 2 == 1) {
        BigInt half = det2u / 2;
        check_consistency(half * 2 == det2u, "det(2u) is even for odd rank");
        return valuation(half, p);
    }
    int chi = chi_at(m, det2u, p);
    long num = valuation(det2u, p) - 1 - (p == 2 ? 1 : 0);
    long fl = num >= 0 ? num / 2 : -((-num + 1) / 2);
    return static_cast<int>(2 * (fl + chi * chi));
}

QPoly siegel_gamma(int m, const BigInt& det2u, long p) {
    QPoly g = qpoly({1, -1});
    for (int i = 1; i <= m / 2; ++i) g *= constant(1) - mono(qpow(p, 2 * i), 2);
    if (m % 2 == 0) {
        int chi = chi_at(m, det2u, p);
        if (chi != 0) {
            QPoly den = constant(1) - mono(qpow(p, m / 2) * chi, 1);
            QPoly quo, rem;
            g.divmod(den, quo, rem);
            check_consistency(rem.is_zero(), "gamma factor division");
            g = quo;
        }
    }
    return g;
}

QPoly primitive_density(const IntMatrix& two_u, long p) {
    int m = two_u.rows();
    QPoly count = p == 2 ? embedding_count_two(two_u) : embedding_count_odd(two_u, p);
    check_consistency(count.degree() <= 2 * m, "embedding count degree");
    return count.reversed(2 * m) * qpow(p, static_cast<long>(m) * (m + 1) / 2);
}

QPoly local_density(const IntMatrix& two_u, long p) {
    if (!is_prime(p)) throw UsageError("local density needs a prime");
    if (!two_u.is_symmetric() || !is_positive_definite(two_u)) throw UsageError("2u must be symmetric positive definite");
    for (int i = 0; i < two_u.rows(); ++i)
        if (two_u(i, i) % 2 != 0) throw UsageError("2u must have even diagonal");
    return density_rec(two_u, p);
}

int fe_sign(const IntMatrix& two_u, long p) {
    int m = two_u.rows();
    if (m % 2 == 0) return 1;
    QMatrix u(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) u(i, j) = make_rat(two_u(i, j), 2);
    BigRat detu = make_rat(det_big(two_u), int_pow(BigInt(2), static_cast<unsigned long>(m)));
    BigRat second = ((m - 1) / 2) % 2 == 0 ? detu : BigRat(-detu);
    int s = hilbert_symbol(detu, second, p);
    if (((static_cast<long>(m) * m - 1) / 8) % 2 == 1) s *= hilbert_symbol(BigRat(-1), BigRat(-1), p);
    return s * hasse_invariant(u, p);
}

bool fe_check(const FpResult& r, int m, int sign) {
    int e = r.e_p;
    if (r.poly.degree() != e) return false;
    // a_{e-j} = sign * p^{(m+1)(e/2 - j)} a_j
    for (int j = 0; j <= e; ++j) {
        long twice = static_cast<long>(m + 1) * (e - 2 * j);
        if (twice % 2 != 0) return false;
        BigRat lhs = r.poly.coeff(e - j);
        BigRat rhs = r.poly.coeff(j) * qpow(r.p, twice / 2) * sign;
        if (lhs != rhs) return false;
    }
    return true;
}

namespace {

FpResult fp_from_local(const IntMatrix& rep, int m, const BigInt& det2u, long p) {
    FpResult res;
    res.p = p;
    res.e_p = fp_degree(m, det2u, p);
    res.sign = fe_sign(rep, p);
    BigInt twodet = det2u * 2;
    if (!mpz_divisible_ui_p(twodet.get_mpz_t(), static_cast<unsigned long>(p))) {
        res.poly = constant(1);
        check_consistency(res.e_p == 0, "F_p is constant away from 2 det(2u)");
        return res;
    }
    QPoly alpha = density_rec(rep, p);
    QPoly quo, rem;
    alpha.divmod(siegel_gamma(m, det2u, p), quo, rem);
    check_consistency(rem.is_zero(), "local density divisible by gamma_p");
    for (auto& c : quo.coeffs()) check_consistency(is_integer(c), "F_p has integer coefficients");
    check_consistency(quo.coeff(0) == 1, "F_p has constant term 1");
    res.poly = quo;
    check_consistency(fe_check(res, m, res.sign), "F_p satisfies the functional equation");
    return res;
}

}  // namespace

FpResult fp_polynomial(const IntMatrix& two_u, long p) {
    if (!is_prime(p)) throw UsageError("F_p needs a prime p");
    if (!two_u.is_symmetric() || !is_positive_definite(two_u)) throw UsageError("2u must be symmetric positive definite");
    for (int i = 0; i < two_u.rows(); ++i)
        if (two_u(i, i) % 2 != 0) throw UsageError("2u must have even diagonal");
    return fp_from_local(two_u, two_u.rows(), det_big(two_u), p);
}

FpResult fp_polynomial(const GenusSymbol& s, long p) {
    if (!is_prime(p)) throw UsageError("F_p needs a prime p");
    if (s.rank < 1) throw UsageError("F_p needs positive rank");
    IntMatrix rep = local_representative(s, p);
    check_consistency(rep.rows() == s.rank, "local representative has the symbol's rank");
    return fp_from_local(rep, s.rank, s.det2t, p);
}

}  // namespace siegel
