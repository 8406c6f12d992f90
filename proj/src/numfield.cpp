#include "siegel/numfield.hpp"

#include <algorithm>
#include <sstream>

namespace siegel {

NumberField::NumberField(QPoly modulus, std::string var) : modulus_(std::move(modulus)), var_(std::move(var)) {
    if (modulus_.degree() < 1) throw UsageError("number field modulus must have positive degree");
    modulus_ = modulus_.monic();
    int d = degree();
    // Newton identities for the power sums of the roots.
    std::vector<BigRat> e(static_cast<std::size_t>(d) + 1);  // elementary symmetric
    for (int i = 0; i <= d; ++i) {
        BigRat c = modulus_.coeff(d - i);
        e[static_cast<std::size_t>(i)] = (i % 2 == 0) ? c : BigRat(-c);
    }
    traces_.assign(static_cast<std::size_t>(2 * d), BigRat(0));
    traces_[0] = d;
    for (int k = 1; k < 2 * d; ++k) {
        BigRat s = 0;
        for (int i = 1; i <= std::min(k - 1, d); ++i) {
            BigRat term = e[static_cast<std::size_t>(i)] * traces_[static_cast<std::size_t>(k - i)];
            s += (i % 2 == 1) ? term : BigRat(-term);
        }
        if (k <= d) {
            BigRat term = e[static_cast<std::size_t>(k)] * k;
            s += (k % 2 == 1) ? term : BigRat(-term);
        }
        traces_[static_cast<std::size_t>(k)] = s;
    }
}

NFElem::NFElem(FieldPtr f, const QPoly& rep) : f_(std::move(f)) {
    if (!f_) {
        if (rep.degree() > 0) throw UsageError("non-constant element without a field");
        c_ = {rep.coeff(0)};
        return;
    }
    QPoly r = rep % f_->modulus();
    c_.assign(static_cast<std::size_t>(f_->degree()), BigRat(0));
    for (int i = 0; i <= r.degree(); ++i) c_[static_cast<std::size_t>(i)] = r.coeff(i);
}

NFElem NFElem::generator(const FieldPtr& f) { return NFElem(f, QPoly::x()); }

bool NFElem::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

BigRat NFElem::rational_value() const {
    if (!is_rational()) throw UsageError("element is not rational: " + str());
    return c_[0];
}

FieldPtr NFElem::common(const NFElem& a, const NFElem& b) {
    if (!a.f_) return b.f_;
    if (!b.f_) return a.f_;
    if (a.f_ != b.f_ && a.f_->modulus() != b.f_->modulus())
        throw UsageError("arithmetic between elements of different number fields");
    return a.f_;
}

NFElem NFElem::lifted(const FieldPtr& f) const {
    if (!f || f_) return *this;
    return NFElem(f, QPoly(c_[0]));
}

NFElem operator+(const NFElem& a, const NFElem& b) {
    FieldPtr f = NFElem::common(a, b);
    NFElem x = a.lifted(f), y = b.lifted(f);
    for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
    return x;
}

NFElem NFElem::operator-() const {
    NFElem r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

NFElem operator-(const NFElem& a, const NFElem& b) { return a + (-b); }

NFElem operator*(const NFElem& a, const NFElem& b) {
    FieldPtr f = NFElem::common(a, b);
    if (!f) return NFElem(a.c_[0] * b.c_[0]);
    if (!a.f_) {
        NFElem r = b;
        for (auto& v : r.c_) v *= a.c_[0];
        return r;
    }
    if (!b.f_) {
        NFElem r = a;
        for (auto& v : r.c_) v *= b.c_[0];
        return r;
    }
    return NFElem(f, a.rep() * b.rep());
}

QMatrix NFElem::mult_matrix() const {
    if (!f_) {
        QMatrix m(1, 1);
        m(0, 0) = c_[0];
        return m;
    }
    int d = f_->degree();
    QMatrix m(d, d);
    for (int j = 0; j < d; ++j) {
        NFElem col(f_, rep() * QPoly::monomial(BigRat(1), j));
        for (int i = 0; i < d; ++i) m(i, j) = col.c_[static_cast<std::size_t>(i)];
    }
    return m;
}

NFElem NFElem::inverse() const {
    if (*this == NFElem(0)) throw UsageError("division by zero in number field");
    if (!f_) return NFElem(BigRat(1) / c_[0]);
    QMatrix m = mult_matrix();
    std::vector<BigRat> e1(static_cast<std::size_t>(f_->degree()), BigRat(0));
    e1[0] = 1;
    auto sol = solve_linear(m, e1);
    check_consistency(sol.has_value(), "number field inverse");
    return NFElem(f_, QPoly(*sol));
}

NFElem operator/(const NFElem& a, const NFElem& b) { return a * b.inverse(); }

bool operator==(const NFElem& a, const NFElem& b) {
    if (!a.f_ || !b.f_) {
        const NFElem& s = a.f_ ? b : a;
        const NFElem& o = a.f_ ? a : b;
        if (!o.is_rational()) return false;
        return o.c_[0] == s.c_[0];
    }
    return a.c_ == b.c_;
}

BigRat NFElem::trace() const {
    if (!f_) return c_[0];
    BigRat t = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) t += c_[i] * f_->power_traces()[i];
    return t;
}

BigRat NFElem::norm() const { return determinant(mult_matrix()); }

QPoly NFElem::minpoly() const {
    QPoly cp = charpoly(mult_matrix());
    QPoly g = poly_gcd(cp, cp.derivative());
    return (cp / g).monic();
}

std::string NFElem::str() const {
    if (!f_) return to_string(c_[0]);
    return QPoly(c_).str(f_->var());
}

std::ostream& operator<<(std::ostream& os, const NFElem& e) { return os << e.str(); }

}  // namespace siegel

namespace siegel {

namespace {

using ModPoly = std::vector<std::int64_t>;  // low degree first, over F_p

void mp_trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ModPoly mp_mod(ModPoly a, const ModPoly& b, std::int64_t p) {
    std::int64_t inv = inv_mod64(b.back(), p);
    mp_trim(a);
    while (a.size() >= b.size()) {
        std::int64_t f = static_cast<std::int64_t>(static_cast<__int128>(a.back()) * inv % p);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = mod64(a[shift + i] - static_cast<std::int64_t>(static_cast<__int128>(f) * b[i] % p), p);
        mp_trim(a);
    }
    return a;
}

std::size_t mp_gcd_degree(ModPoly a, ModPoly b, std::int64_t p) {
    mp_trim(a);
    mp_trim(b);
    while (!b.empty()) {
        ModPoly r = mp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? 0 : a.size() - 1;
}

ModPoly mp_gcd(ModPoly a, ModPoly b, std::int64_t p) {
    mp_trim(a);
    mp_trim(b);
    while (!b.empty()) {
        ModPoly r = mp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        std::int64_t inv = inv_mod64(a.back(), p);
        for (auto& c : a) c = static_cast<std::int64_t>(static_cast<__int128>(c) * inv % p);
    }
    return a;
}

ModPoly mp_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& m, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = static_cast<std::int64_t>((static_cast<__int128>(a[i]) * b[j] + c[i + j]) % p);
    return mp_mod(c, m, p);
}

// (x + shift)^e mod m
ModPoly mp_powmod(std::int64_t shift, std::int64_t e, const ModPoly& m, std::int64_t p) {
    ModPoly result = mp_mod({1}, m, p), base = mp_mod({mod64(shift, p), 1}, m, p);
    while (e > 0) {
        if (e & 1) result = mp_mulmod(result, base, m, p);
        base = mp_mulmod(base, base, m, p);
        e >>= 1;
    }
    return result;
}

ModPoly mp_sub_const(ModPoly a, std::int64_t c, std::int64_t p) {
    if (a.empty()) a.push_back(0);
    a[0] = mod64(a[0] - c, p);
    mp_trim(a);
    return a;
}

// Roots of a product of distinct linear factors g (monic), by random splitting.
void mp_split_roots(const ModPoly& g, std::int64_t p, std::int64_t& seed, std::vector<std::int64_t>& out) {
    if (g.size() <= 1) return;
    if (g.size() == 2) {
        out.push_back(mod64(-g[0], p));
        return;
    }
    for (;;) {
        seed = (seed + 1) % p;
        ModPoly h = mp_gcd(g, mp_sub_const(mp_powmod(seed, (p - 1) / 2, g, p), 1, p), p);
        if (h.size() > 1 && h.size() < g.size()) {
            ModPoly rest = g;
            // g / h by long division
            ModPoly q(g.size() - h.size() + 1, 0);
            for (std::size_t i = q.size(); i-- > 0;) {
                q[i] = rest[i + h.size() - 1];
                for (std::size_t j = 0; j < h.size(); ++j)
                    rest[i + j] = mod64(rest[i + j] - static_cast<std::int64_t>(static_cast<__int128>(q[i]) * h[j] % p), p);
            }
            mp_split_roots(h, p, seed, out);
            mp_split_roots(q, p, seed, out);
            return;
        }
    }
}

// Roots in F_p of a squarefree f, ascending.
std::vector<std::int64_t> mp_roots(const ModPoly& f, std::int64_t p) {
    std::vector<std::int64_t> out;
    if (p == 2) {
        for (std::int64_t r = 0; r < 2; ++r) {
            std::int64_t acc = 0;
            for (std::size_t i = f.size(); i-- > 0;) acc = (acc * r + f[i]) % 2;
            if (acc == 0) out.push_back(r);
        }
        return out;
    }
    ModPoly m = f;
    mp_trim(m);
    ModPoly xp = mp_sub_const(mp_powmod(0, p, m, p), 0, p);
    if (xp.size() < 2) xp.resize(2, 0);
    xp[1] = mod64(xp[1] - 1, p);
    mp_trim(xp);
    ModPoly g = mp_gcd(m, xp, p);
    std::int64_t seed = 0;
    mp_split_roots(g, p, seed, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::optional<std::vector<PrimeIdealValuation>> prime_valuations(const NFElem& x, long p) {
    if (x == NFElem(0)) throw UsageError("valuation of zero");
    if (!x.field() || x.field()->degree() == 1) {
        BigRat v = x.field() ? x.rep().coeff(0) : x.rational_value();
        return std::vector<PrimeIdealValuation>{{"(" + std::to_string(p) + ")", 1, valuation(v, p)}};
    }
    if (p > (std::int64_t(1) << 62)) throw UsageError("prime too large for valuation search");
    const QPoly& phi = x.field()->modulus();
    int d = phi.degree();
    ModPoly fp(static_cast<std::size_t>(d) + 1), dfp(static_cast<std::size_t>(d));
    std::vector<BigInt> zc(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) {
        if (valuation(phi.coeff(i), p) < 0) return std::nullopt;
        BigInt num = rat_num(phi.coeff(i)), den = rat_den(phi.coeff(i));
        BigInt pN = int_pow(BigInt(p), 80);
        BigInt dinv;
        mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pN.get_mpz_t());
        zc[static_cast<std::size_t>(i)] = (num * dinv) % pN;
        BigInt r = zc[static_cast<std::size_t>(i)] % p;
        fp[static_cast<std::size_t>(i)] = mod64(r.get_si(), p);
    }
    for (int i = 1; i <= d; ++i) dfp[static_cast<std::size_t>(i - 1)] = mod64(fp[static_cast<std::size_t>(i)] * i, p);
    if (mp_gcd_degree(fp, dfp, p) != 0) return std::nullopt;
    const int N = 80;
    BigInt pN = int_pow(BigInt(p), N);
    auto eval_mod = [&](const std::vector<BigInt>& c, const BigInt& r) {
        BigInt acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * r + *it) % pN;
        if (acc < 0) acc += pN;
        return acc;
    };
    std::vector<BigInt> dz(static_cast<std::size_t>(d));
    for (int i = 1; i <= d; ++i) dz[static_cast<std::size_t>(i - 1)] = zc[static_cast<std::size_t>(i)] * i;
    // element as (integral polynomial) / den
    QPoly rep = x.rep();
    BigInt den = 1;
    for (auto& c : rep.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<BigInt> ac;
    for (auto& c : rep.coeffs()) ac.push_back(rat_num(c * den));
    int vden = valuation(den, p);
    std::vector<PrimeIdealValuation> out;
    int root_sum = 0, roots = 0;
    for (std::int64_t r0 : mp_roots(fp, p)) {
        // Newton lift of the simple root
        BigInt r = r0;
        for (int it = 0; it < 8; ++it) {
            BigInt fv = eval_mod(zc, r), dv = eval_mod(dz, r), inv;
            mpz_invert(inv.get_mpz_t(), dv.get_mpz_t(), pN.get_mpz_t());
            r = ((r - fv * inv) % pN + pN) % pN;
        }
        BigInt av = eval_mod(ac, r);
        int v = av == 0 ? N : valuation(av, p);
        if (v >= N) throw ConsistencyError("valuation exceeds lifting precision");
        out.push_back({"(" + std::to_string(p) + ", " + x.field()->var() + " - " + std::to_string(r0) + ")", 1, v - vden});
        root_sum += v - vden;
        ++roots;
    }
    if (roots < d) {
        int f = d - roots;
        if (f > 3) return std::nullopt;  // cofactor could split further
        int vn = valuation(x.norm(), p) - root_sum;
        check_consistency(vn % f == 0, "residue degree does not divide norm valuation");
        out.push_back({"(" + std::to_string(p) + ")_" + std::to_string(f), f, vn / f});
    }
    return out;
}

}  // namespace siegel
