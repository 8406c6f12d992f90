#include "siegel/factor.hpp"

#include <algorithm>
#include <complex>
#include <functional>

#include "siegel/mpcomplex.hpp"

namespace siegel {

namespace {

std::vector<BigInt> int_coeffs(const QPoly& p) {
    std::vector<BigInt> c;
    for (auto& v : p.coeffs()) {
        check_consistency(v.get_den() == 1, "expected integer polynomial");
        c.push_back(v.get_num());
    }
    return c;
}

// Factor a monic square-free integer polynomial.
std::vector<QPoly> factor_monic_integer(const QPoly& h) {
    std::vector<QPoly> out;
    if (h.degree() <= 1) {
        if (h.degree() == 1) out.push_back(h);
        return out;
    }
    std::vector<BigInt> coef = int_coeffs(h);
    std::size_t maxbits = 0;
    for (auto& c : coef) maxbits = std::max(maxbits, mpz_sizeinbase(c.get_mpz_t(), 2));
    unsigned bits = static_cast<unsigned>(128 + 4 * maxbits + 16 * static_cast<std::size_t>(h.degree()));
    boost::multiprecision::mpfr_float::default_precision(bits * 3 / 10 + 10);
    std::vector<Real> rc;
    for (auto& c : coef) rc.emplace_back(c.get_str());
    std::vector<Cx> roots = approximate_roots(rc, bits);

    QPoly rem = h;
    std::vector<bool> used(roots.size(), false);
    auto try_subset = [&](const std::vector<int>& idx) -> bool {
        // expand prod (x - r_i)
        std::vector<Cx> p{{Real(1), Real(0)}};
        for (int i : idx) {
            std::vector<Cx> q(p.size() + 1, Cx{Real(0), Real(0)});
            for (std::size_t j = 0; j < p.size(); ++j) {
                q[j + 1] = q[j + 1] + p[j];
                q[j] = q[j] - p[j] * roots[static_cast<std::size_t>(i)];
            }
            p = std::move(q);
        }
        std::vector<BigRat> ic;
        for (auto& c : p) {
            if (abs(c.im) > Real(0.25)) return false;
            Real r = round(c.re);
            if (abs(c.re - r) > Real(0.25)) return false;
            BigInt z;
            mpfr_get_z(z.get_mpz_t(), r.backend().data(), MPFR_RNDN);
            ic.emplace_back(z);
        }
        QPoly cand(ic);
        QPoly q, r;
        rem.divmod(cand, q, r);
        if (!r.is_zero()) return false;
        out.push_back(cand);
        rem = q;
        for (int i : idx) used[static_cast<std::size_t>(i)] = true;
        return true;
    };

    int n = static_cast<int>(roots.size());
    for (int size = 1; 2 * size <= rem.degree(); ++size) {
        bool found = true;
        while (found && 2 * size <= rem.degree()) {
            found = false;
            std::vector<int> free;
            for (int i = 0; i < n; ++i)
                if (!used[static_cast<std::size_t>(i)]) free.push_back(i);
            std::vector<int> pick;
            std::function<bool(int)> rec = [&](int start) -> bool {
                if (static_cast<int>(pick.size()) == size) return try_subset(pick);
                for (int i = start; i < static_cast<int>(free.size()); ++i) {
                    pick.push_back(free[static_cast<std::size_t>(i)]);
                    if (rec(i + 1)) return true;
                    pick.pop_back();
                }
                return false;
            };
            found = rec(0);
        }
    }
    if (rem.degree() >= 1) out.push_back(rem);
    return out;
}

}  // namespace

std::vector<Cx> approximate_roots(const std::vector<Real>& a, unsigned bits) {
    int d = static_cast<int>(a.size()) - 1;
    Real bound = 1;
    for (int i = 0; i < d; ++i) bound = std::max(bound, Real(1 + abs(a[static_cast<std::size_t>(i)])));
    std::vector<Cx> z(static_cast<std::size_t>(d));
    Real pi;
    mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
    for (int i = 0; i < d; ++i) {
        Real ang = 2 * pi * (Real(i) + Real(0.3)) / d + Real(0.4);
        Real rad = bound * Real(0.5) + Real(0.1) * Real(i + 1) / d;
        z[static_cast<std::size_t>(i)] = {rad * cos(ang), rad * sin(ang)};
    }
    auto eval = [&](const Cx& x, Cx& pv, Cx& dv) {
        pv = {a[static_cast<std::size_t>(d)], Real(0)};
        dv = {Real(0), Real(0)};
        for (int i = d - 1; i >= 0; --i) {
            dv = dv * x + pv;
            pv = pv * x + Cx{a[static_cast<std::size_t>(i)], Real(0)};
        }
    };
    Real tol = pow(Real(2), -static_cast<int>(bits) + 16);
    for (int iter = 0; iter < 2000 + 50 * static_cast<int>(bits); ++iter) {
        Real maxstep = 0;
        for (int i = 0; i < d; ++i) {
            Cx pv, dv;
            eval(z[static_cast<std::size_t>(i)], pv, dv);
            if (pv.re == 0 && pv.im == 0) continue;
            Cx ratio = pv / dv;
            Cx sum{Real(0), Real(0)};
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                Cx diff = z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
                sum = sum + Cx{Real(1), Real(0)} / diff;
            }
            Cx denom = Cx{Real(1), Real(0)} - ratio * sum;
            Cx step = ratio / denom;
            z[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] - step;
            Real s = cabs(step) / (1 + cabs(z[static_cast<std::size_t>(i)]));
            if (s > maxstep) maxstep = s;
        }
        if (maxstep < tol) break;
    }
    return z;
}

std::vector<QPoly> squarefree_decomposition(const QPoly& f0) {
    if (f0.is_zero()) throw UsageError("cannot decompose zero polynomial");
    QPoly f = f0.monic();
    std::vector<QPoly> res;
    // Yun's algorithm
    QPoly a = poly_gcd(f, f.derivative());
    QPoly b = f / a;
    QPoly c = f.derivative() / a;
    QPoly d = c - b.derivative();
    while (b.degree() >= 1) {
        QPoly g = poly_gcd(b, d);
        res.push_back(g);
        b = b / g;
        c = d / g;
        d = c - b.derivative();
    }
    while (!res.empty() && res.back().degree() == 0) res.pop_back();
    return res;
}

std::vector<QFactor> factor_rational(const QPoly& f) {
    if (f.is_zero()) throw UsageError("cannot factor zero polynomial");
    std::vector<QFactor> out;
    auto parts = squarefree_decomposition(f);
    for (std::size_t m = 0; m < parts.size(); ++m) {
        const QPoly& g = parts[m];
        if (g.degree() < 1) continue;
        BigInt L = 1;
        for (auto& v : g.coeffs()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), v.get_den_mpz_t());
        int d = g.degree();
        // h(x) = L^d g(x / L), monic with integer coefficients
        std::vector<BigRat> hc;
        for (int i = 0; i <= d; ++i) hc.push_back(g.coeff(i) * BigRat(int_pow(L, static_cast<unsigned long>(d - i))));
        QPoly h(hc);
        for (auto& fac : factor_monic_integer(h)) {
            // back-substitute x -> L x and make monic
            QPoly back = fac.scale_var(BigRat(L)).monic();
            out.push_back({back, static_cast<int>(m) + 1});
        }
    }
    // verify the product
    QPoly prod(BigRat(1));
    for (auto& q : out) prod *= poly_pow(q.factor, q.multiplicity);
    check_consistency(prod == f.monic(), "factorization product");
    std::sort(out.begin(), out.end(), [](const QFactor& a, const QFactor& b) {
        if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
        for (int i = a.factor.degree(); i >= 0; --i)
            if (a.factor.coeff(i) != b.factor.coeff(i)) return a.factor.coeff(i) < b.factor.coeff(i);
        return a.multiplicity < b.multiplicity;
    });
    return out;
}

bool is_irreducible(const QPoly& f) {
    if (f.degree() < 1) return false;
    auto fac = factor_rational(f);
    return fac.size() == 1 && fac[0].multiplicity == 1;
}

}  // namespace siegel
