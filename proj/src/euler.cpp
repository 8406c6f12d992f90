#include "siegel/euler.hpp"

#include <sstream>

namespace siegel {

NFPoly nfpoly_mul(const NFPoly& a, const NFPoly& b) {
    if (a.empty() || b.empty()) return {};
    NFPoly c(a.size() + b.size() - 1, NFElem(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = c[i + j] + a[i] * b[j];
    return c;
}

bool nfpoly_equal(const NFPoly& a, const NFPoly& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        NFElem x = i < a.size() ? a[i] : NFElem(0);
        NFElem y = i < b.size() ? b[i] : NFElem(0);
        if (x != y) return false;
    }
    return true;
}

std::string nfpoly_str(const NFPoly& a) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == NFElem(0)) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << a[i].str() << ")";
        if (i > 0) os << "*X^" << i;
    }
    return first ? "0" : os.str();
}

QMatrix krieg_matrix(int n, long p) {
    if (n < 1 || n > 3) throw UsageError("K_n(p^2) is available for degrees 1..3");
    QMatrix K(n + 1, n + 1);
    std::vector<LaurentPoly> gl;
    for (int l = 0; l <= n; ++l) gl.push_back(satake_gl(n, l));
    for (int j = 0; j <= n; ++j) {
        LaurentPoly img = satake_image(n, HeckeOperator::Ti(p, n - j));
        LaurentPoly rebuilt;
        rebuilt.n = n;
        for (int l = 0; l <= n; ++l) {
            std::vector<int> e(static_cast<std::size_t>(n) + 1, 0);
            e[0] = 2;
            for (int i = 1; i <= n - l; ++i) e[static_cast<std::size_t>(i)] = 1;
            auto it = img.terms.find(e);
            K(l, j) = it == img.terms.end() ? BigRat(0) : it->second;
            rebuilt = rebuilt + K(l, j) * gl[static_cast<std::size_t>(l)];
        }
        check_consistency(rebuilt == img, "Satake image outside the span of g_0..g_n");
    }
    return K;
}

QMatrix pascal_matrix(int n) {
    if (n < 1) throw UsageError("degree must be positive");
    QMatrix P(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; j += 2) P(i, j) = BigRat(binomial(n - i, (j - i) / 2));
    return P;
}

std::vector<NFElem> lambda_vector(const HeckeEigenData& e) {
    if (e.lambda_T2.empty()) throw UsageError("eigendata lacks T_i(p^2) eigenvalues");
    return {e.lambda_T2.rbegin(), e.lambda_T2.rend()};
}

namespace {

std::vector<NFElem> row_times(const std::vector<NFElem>& v, const QMatrix& m) {
    std::vector<NFElem> out(static_cast<std::size_t>(m.cols()), NFElem(0));
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0) out[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(j)] + NFElem(m(i, j)) * v[static_cast<std::size_t>(i)];
    return out;
}

std::vector<NFElem> r_from_g(const std::vector<NFElem>& gvec, int n, int k, long p) {
    NFElem scale(rat_pow(BigRat(p), n * (n + 1) / 2 - k * n));
    auto r = row_times(gvec, pascal_matrix(n));
    for (auto& x : r) x = scale * x;
    return r;
}

NFPoly r_polynomial(const std::vector<NFElem>& r, int n) {
    NFPoly q(static_cast<std::size_t>(2 * n + 1), NFElem(0));
    for (int l = 0; l <= 2 * n; ++l) {
        NFElem v = r[static_cast<std::size_t>(l <= n ? l : 2 * n - l)];
        q[static_cast<std::size_t>(l)] = l % 2 ? -v : v;
    }
    return q;
}

std::vector<NFElem> spinor_s(const NFElem& g, const std::vector<NFElem>& gv) {
    const NFElem &g0 = gv[0], &g1 = gv[1], &g2 = gv[2], &g3 = gv[3];
    std::vector<NFElem> s(9);
    s[0] = NFElem(1);
    s[1] = g;
    s[2] = NFElem(4) * g0 + NFElem(2) * g1 + g2;
    s[3] = g * (g0 + g1);
    s[4] = NFElem(2) * g0 * g0 + NFElem(4) * g0 * g1 + g0 * g3 + g1 * g1;
    NFElem pw(1);
    for (int l = 3; l >= 0; --l) {
        pw = pw * g0;
        s[static_cast<std::size_t>(8 - l)] = pw * s[static_cast<std::size_t>(l)];
    }
    return s;
}

}  // namespace

std::vector<NFElem> g_vector(const std::vector<NFElem>& lambda, int n, long p) {
    if (static_cast<int>(lambda.size()) != n + 1) throw UsageError("lambda vector needs n + 1 entries");
    return row_times(lambda, inverse(krieg_matrix(n, p)));
}

std::vector<NFElem> standard_r(const std::vector<NFElem>& lambda, int n, int k, long p) {
    auto r = r_from_g(g_vector(lambda, n, p), n, k, p);
    check_consistency(r[0] == NFElem(1), "r_0 != 1: inconsistent T_i(p^2) eigenvalues");
    return r;
}

EulerFactor standard_factor(const std::vector<NFElem>& lambda, int n, int k, long p) {
    EulerFactor f;
    f.p = p;
    f.kind = EulerFactor::Kind::Standard;
    f.coeffs = nfpoly_mul({NFElem(1), NFElem(-1)}, r_polynomial(standard_r(lambda, n, k, p), n));
    return f;
}

EulerFactor spinor_factor_deg3(const NFElem& g, const std::vector<NFElem>& gvec, long p) {
    if (gvec.size() != 4) throw UsageError("spinor factor needs the degree-3 g-vector");
    auto s = spinor_s(g, gvec);
    EulerFactor f;
    f.p = p;
    f.kind = EulerFactor::Kind::Spinor;
    for (std::size_t l = 0; l < s.size(); ++l) f.coeffs.push_back(l % 2 ? -s[l] : s[l]);
    return f;
}

EulerFactor elliptic_shift_factor(const NFElem& a, int w, int c, long p) {
    EulerFactor f;
    f.p = p;
    f.kind = EulerFactor::Kind::Elliptic;
    f.coeffs = {NFElem(1), -(NFElem(rat_pow(BigRat(p), -c)) * a), NFElem(rat_pow(BigRat(p), w - 1 - 2 * c))};
    return f;
}

EulerFactor elliptic_standard_factor(const NFElem& a, int w, long p) {
    NFElem t = a * a * NFElem(rat_pow(BigRat(p), 1 - w)) - NFElem(2);
    EulerFactor f;
    f.p = p;
    f.kind = EulerFactor::Kind::Standard;
    f.coeffs = nfpoly_mul({NFElem(1), NFElem(-1)}, {NFElem(1), -t, NFElem(1)});
    return f;
}

SatakeNumeric satake_numeric_deg3(const NFElem& g, const std::vector<NFElem>& gvec, int k, long p, unsigned bits) {
    if (gvec.size() != 4) throw UsageError("numerical Satake parameters need the degree-3 g-vector");
    for (auto& v : gvec)
        if (!v.is_rational()) throw UsageError("numerical Satake parameters need rational eigenvalues");
    if (!g.is_rational()) throw UsageError("numerical Satake parameters need rational eigenvalues");
    unsigned saved = Real::default_precision();
    Real::default_precision(bits * 3 / 10 + 10);

    auto q = r_polynomial(r_from_g(gvec, 3, k, p), 3);
    std::vector<Real> a;
    for (auto& c : q) a.push_back(to_real(c.rational_value()));
    Real lead = a.back();
    for (auto& c : a) c /= lead;
    auto z = approximate_roots(a, bits);
    // roots of prod (1 - alpha X)(1 - alpha^{-1} X) are alpha^{+-1}; pair them
    std::vector<bool> used(z.size(), false);
    std::vector<Cx> alpha{Cx{Real(0), Real(0)}};
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        Cx inv = Cx{Real(1), Real(0)} / z[i];
        std::size_t best = z.size();
        Real bd = 0;
        for (std::size_t j = 0; j < z.size(); ++j)
            if (!used[j] && (best == z.size() || cabs(z[j] - inv) < bd)) {
                best = j;
                bd = cabs(z[j] - inv);
            }
        check_consistency(best < z.size(), "unpaired Satake root");
        used[best] = true;
        alpha.push_back(inv);
    }
    check_consistency(alpha.size() == 4, "expected three Satake parameter pairs");
    Cx prod{Real(1), Real(0)};
    for (std::size_t i = 1; i < 4; ++i) prod = prod * (Cx{Real(1), Real(0)} + alpha[i]);
    alpha[0] = Cx{to_real(g.rational_value()), Real(0)} / prod;

    SatakeNumeric out;
    for (std::size_t i = 1; i < 4; ++i) {
        Real d = abs(cabs(alpha[i]) - 1);
        if (d > out.max_abs_dev) out.max_abs_dev = d;
    }
    std::vector<Cx> poly{Cx{Real(1), Real(0)}};
    for (int mask = 0; mask < 8; ++mask) {
        Cx root = alpha[0];
        for (int i = 0; i < 3; ++i)
            if (mask >> i & 1) root = root * alpha[static_cast<std::size_t>(i) + 1];
        std::vector<Cx> next(poly.size() + 1, Cx{Real(0), Real(0)});
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] = next[j] + poly[j];
            next[j + 1] = next[j + 1] - poly[j] * root;
        }
        poly = std::move(next);
    }
    auto exact = spinor_factor_deg3(g, gvec, p).coeffs;
    for (std::size_t l = 0; l < exact.size(); ++l) {
        Real e = to_real(exact[l].rational_value());
        Real scale = abs(e) > 1 ? abs(e) : Real(1);
        Real dev = cabs(poly[l] - Cx{e, Real(0)}) / scale;
        if (dev > out.spinor_dev) out.spinor_dev = dev;
    }
    out.alpha = std::move(alpha);
    Real::default_precision(saved);
    return out;
}

}  // namespace siegel
