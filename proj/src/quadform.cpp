#include "siegel/quadform.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <sstream>

namespace siegel {

namespace {

// Splits "[[a,b],[c,d]]" into rows of tokens.
std::vector<std::vector<std::string>> split_matrix(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw UsageError("matrix must look like [[...],[...]]");
    std::vector<std::vector<std::string>> rows;
    if (s == "[]") return rows;
    std::size_t i = 1;
    while (i < s.size() - 1) {
        if (s[i] == ',') {
            ++i;
            continue;
        }
        if (s[i] != '[') throw UsageError("malformed matrix near position " + std::to_string(i));
        auto close = s.find(']', i);
        if (close == std::string::npos) throw UsageError("unterminated matrix row");
        std::string body = s.substr(i + 1, close - i - 1);
        std::vector<std::string> row;
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) throw UsageError("empty matrix entry");
            row.push_back(tok);
        }
        rows.push_back(row);
        i = close + 1;
    }
    for (auto& r : rows)
        if (r.size() != rows.size()) throw UsageError("matrix must be square");
    return rows;
}

}  // namespace

IntMatrix parse_int_matrix(const std::string& text) {
    auto rows = split_matrix(text);
    int n = static_cast<int>(rows.size());
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            BigRat v = parse_rat(rows[i][j]);
            if (!is_integer(v) || !v.get_num().fits_slong_p()) throw UsageError("expected integer entry: " + rows[i][j]);
            m(i, j) = v.get_num().get_si();
        }
    return m;
}

QMatrix parse_rat_matrix(const std::string& text) {
    auto rows = split_matrix(text);
    int n = static_cast<int>(rows.size());
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = parse_rat(rows[i][j]);
    return m;
}

IntMatrix direct_sum(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

SemiIntegralIndex SemiIntegralIndex::from_2t(const IntMatrix& two_t) {
    if (two_t.rows() != two_t.cols()) throw UsageError("index must be square");
    if (!two_t.is_symmetric()) throw UsageError("index must be symmetric");
    for (int i = 0; i < two_t.rows(); ++i)
        if (two_t(i, i) % 2 != 0) throw UsageError("2t must have even diagonal");
    return SemiIntegralIndex(two_t);
}

SemiIntegralIndex SemiIntegralIndex::from_rational(const QMatrix& t) {
    int n = t.rows();
    if (t.cols() != n) throw UsageError("index must be square");
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            BigRat v = t(i, j) * 2;
            if (!is_integer(v) || !v.get_num().fits_slong_p()) throw UsageError("2t must be integral");
            m(i, j) = v.get_num().get_si();
        }
    return from_2t(m);
}

SemiIntegralIndex SemiIntegralIndex::zero(int n) { return SemiIntegralIndex(IntMatrix(n, n)); }

SemiIntegralIndex SemiIntegralIndex::parse_t(const std::string& text) { return from_rational(parse_rat_matrix(text)); }

SemiIntegralIndex SemiIntegralIndex::parse_2t(const std::string& text) { return from_2t(parse_int_matrix(text)); }

QMatrix SemiIntegralIndex::t() const {
    QMatrix m(n(), n());
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j) m(i, j) = make_rat(two_t_(i, j), 2);
    return m;
}

BigRat SemiIntegralIndex::entry(int i, int j) const { return make_rat(two_t_(i, j), 2); }

SemiIntegralIndex SemiIntegralIndex::transform(const IntMatrix& u) const {
    return SemiIntegralIndex(congruence(two_t_, u));
}

std::string SemiIntegralIndex::str() const { return two_t_.str(); }

bool is_psd(const SemiIntegralIndex& t) { return is_psd(t.two_t()); }
bool is_pd(const SemiIntegralIndex& t) { return is_positive_definite(t.two_t()); }

RankSplit rank_split(const SemiIntegralIndex& t) {
    if (!is_psd(t)) throw UsageError("rank_split requires a positive semidefinite index");
    int n = t.n();
    RankSplit res;
    IntMatrix ker = integer_kernel(t.two_t());
    int k = ker.cols();
    res.m = n - k;
    res.U = (k == 0) ? IntMatrix::identity(n) : complete_to_unimodular(ker);
    IntMatrix full = congruence(t.two_t(), res.U);
    std::vector<int> idx;
    for (int i = 0; i < res.m; ++i) idx.push_back(i);
    IntMatrix u = full.submatrix(idx, idx);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((i >= res.m || j >= res.m) && full(i, j) != 0) consistency_failure("rank split left a nonzero border");
    res.u = SemiIntegralIndex::from_2t(u);
    check_consistency(is_pd(res.u), "rank split produced a non-definite part");
    return res;
}

DiscriminantSplit discriminant_split(const SemiIntegralIndex& u) {
    int m = u.n();
    if (m % 2 != 0) throw UsageError("discriminant_split requires even rank");
    if (m == 0) return {1, 1};
    BigInt d = det_big(u.two_t());
    if ((m / 2) % 2 == 1) d = -d;
    return discriminant_split(d);
}

namespace {

// x = p^v * unit; returns unit as an integer residue class representative
// through numerator * denominator (valid for Legendre symbols and mod 8).
void split_p(const BigRat& x, long p, int& v, BigInt& unit) {
    v = valuation(x, p);
    BigInt num = x.get_num(), den = x.get_den();
    BigInt P(p);
    while (v > 0 && mpz_divisible_p(num.get_mpz_t(), P.get_mpz_t())) num /= P;
    while (v < 0 && mpz_divisible_p(den.get_mpz_t(), P.get_mpz_t())) den /= P;
    unit = num * den;
}

int legendre_big(const BigInt& a, long p) {
    BigInt r = a % p;
    if (r < 0) r += p;
    return kronecker(r, BigInt(p));
}

}  // namespace

int hilbert_symbol(const BigRat& a, const BigRat& b, long p) {
    if (a == 0 || b == 0) throw UsageError("Hilbert symbol of zero");
    if (p == -1) return hilbert_symbol_real(a, b);
    int alpha, beta;
    BigInt u, v;
    split_p(a, p, alpha, u);
    split_p(b, p, beta, v);
    if (p != 2) {
        int s = 1;
        if ((alpha % 2 != 0) && (beta % 2 != 0) && ((p - 1) / 2) % 2 == 1) s = -s;
        if (beta % 2 != 0) s *= legendre_big(u, p);
        if (alpha % 2 != 0) s *= legendre_big(v, p);
        return s;
    }
    auto m8 = [](const BigInt& x) {
        BigInt r = x % 8;
        if (r < 0) r += 8;
        return static_cast<int>(r.get_si());
    };
    int u8 = m8(u), v8 = m8(v);
    int eps_u = ((u8 - 1) / 2) % 2, eps_v = ((v8 - 1) / 2) % 2;
    int om_u = ((u8 * u8 - 1) / 8) % 2, om_v = ((v8 * v8 - 1) / 8) % 2;
    int e = eps_u * eps_v + (alpha & 1) * om_v + (beta & 1) * om_u;
    return (e % 2 == 0) ? 1 : -1;
}

int hilbert_symbol_real(const BigRat& a, const BigRat& b) { return (a < 0 && b < 0) ? -1 : 1; }

std::vector<BigRat> rational_diagonalization(const QMatrix& u0) {
    QMatrix u = u0;
    int n = u.rows();
    std::vector<BigRat> diag;
    for (int k = 0; k < n; ++k) {
        if (u(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (u(i, i) != 0) {
                    piv = i;
                    break;
                }
            if (piv >= 0) {
                for (int j = 0; j < n; ++j) std::swap(u(k, j), u(piv, j));
                for (int j = 0; j < n; ++j) std::swap(u(j, k), u(j, piv));
            } else {
                int j0 = -1;
                for (int j = k + 1; j < n; ++j)
                    if (u(k, j) != 0) {
                        j0 = j;
                        break;
                    }
                if (j0 < 0) {
                    diag.push_back(0);
                    continue;
                }
                // e_k <- e_k + e_j0
                for (int j = 0; j < n; ++j) u(k, j) += u(j0, j);
                for (int j = 0; j < n; ++j) u(j, k) += u(j, j0);
            }
        }
        BigRat p = u(k, k);
        diag.push_back(p);
        for (int i = k + 1; i < n; ++i) {
            if (u(i, k) == 0) continue;
            BigRat f = u(i, k) / p;
            for (int j = k; j < n; ++j) u(i, j) -= f * u(k, j);
            for (int j = k; j < n; ++j) u(j, i) = u(i, j);
        }
    }
    return diag;
}

int hasse_invariant(const QMatrix& u, long p) {
    auto d = rational_diagonalization(u);
    for (auto& x : d)
        if (x == 0) throw UsageError("Hasse invariant of a degenerate form");
    int h = 1;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i; j < d.size(); ++j) h *= hilbert_symbol(d[i], d[j], p);
    return h;
}

int hasse_invariant(const SemiIntegralIndex& u, long p) { return hasse_invariant(u.t(), p); }

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Pairwise size reduction; returns transform W with a[W] reduced.
IntMatrix greedy_reduce(IntMatrix& a) {
    int n = a.rows();
    IntMatrix w = IntMatrix::identity(n);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j || a(j, j) == 0) continue;
                // b_i -= q b_j with q = round(a_ij / a_jj)
                std::int64_t num = a(i, j), den = a(j, j);
                std::int64_t q = floor_div(2 * num + den, 2 * den);
                if (q == 0) continue;
                std::int64_t newii = a(i, i) - 2 * q * a(i, j) + q * q * a(j, j);
                if (newii >= a(i, i)) continue;
                a.add_col(i, j, -q);
                a.add_row(i, j, -q);
                w.add_col(i, j, -q);
                changed = true;
            }
    }
    return w;
}

IntMatrix adjugate_diag_bounds(const IntMatrix& a, std::vector<std::int64_t>& adj_diag) {
    int n = a.rows();
    adj_diag.assign(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i) {
        std::vector<int> idx;
        for (int j = 0; j < n; ++j)
            if (j != i) idx.push_back(j);
        adj_diag[static_cast<std::size_t>(i)] = det64(a.submatrix(idx, idx));
    }
    return a;
}

std::int64_t norm_of(const IntMatrix& a, const std::vector<std::int64_t>& x) {
    int n = a.rows();
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += x[i] * a(i, j) * x[j];
    return s;
}

// Canonical key ordering: diagonal ascending, then off-diagonals descending.
std::vector<std::int64_t> canon_key(const IntMatrix& g) {
    std::vector<std::int64_t> k;
    int n = g.rows();
    for (int i = 0; i < n; ++i) k.push_back(g(i, i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) k.push_back(-g(i, j));
    return k;
}

ReducedIndex reduce_definite(const SemiIntegralIndex& u) {
    int n = u.n();
    if (n == 0) return {u, IntMatrix(0, 0)};
    if (n == 1) return {u, IntMatrix::identity(1)};
    IntMatrix a = u.two_t();
    IntMatrix w0 = greedy_reduce(a);
    std::int64_t bound = 0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, a(i, i));
    std::int64_t det = det64(a);
    std::vector<std::int64_t> adj;
    adjugate_diag_bounds(a, adj);
    std::vector<std::int64_t> lim(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::int64_t x = 0;
        while ((x + 1) * (x + 1) * det <= bound * adj[static_cast<std::size_t>(i)]) ++x;
        lim[static_cast<std::size_t>(i)] = x;
    }
    std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> vecs;
    std::vector<std::int64_t> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = -lim[i];
    for (;;) {
        bool nonzero = false;
        for (auto v : x)
            if (v) nonzero = true;
        if (nonzero) {
            std::int64_t nm = norm_of(a, x);
            if (nm <= bound) vecs.emplace_back(nm, x);
        }
        int i = 0;
        while (i < n && x[i] == lim[i]) {
            x[i] = -lim[i];
            ++i;
        }
        if (i == n) break;
        ++x[i];
    }
    std::sort(vecs.begin(), vecs.end());
    // successive minima
    std::vector<std::int64_t> lambda;
    {
        QMatrix span(0, n);
        std::vector<std::vector<BigRat>> rows;
        int rank = 0;
        for (auto& [nm, v] : vecs) {
            if (rank == n) break;
            QMatrix m(static_cast<int>(rows.size()) + 1, n);
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (int j = 0; j < n; ++j) m(static_cast<int>(r), j) = rows[r][static_cast<std::size_t>(j)];
            for (int j = 0; j < n; ++j) m(static_cast<int>(rows.size()), j) = v[static_cast<std::size_t>(j)];
            if (rank_of(m) > rank) {
                std::vector<BigRat> rv;
                for (auto c : v) rv.emplace_back(static_cast<long>(c));
                rows.push_back(rv);
                ++rank;
                lambda.push_back(nm);
            }
        }
        check_consistency(rank == n, "successive minima search incomplete");
    }
    std::vector<std::vector<std::vector<std::int64_t>>> cand(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (auto& [nm, v] : vecs)
            if (nm == lambda[static_cast<std::size_t>(i)]) cand[static_cast<std::size_t>(i)].push_back(v);
    IntMatrix best_g, best_b;
    std::vector<std::int64_t> best_key;
    IntMatrix b(n, n);
    std::vector<int> pick(static_cast<std::size_t>(n), 0);
    std::function<void(int)> rec = [&](int level) {
        if (level == n) {
            std::int64_t d = det64(b);
            if (d != 1 && d != -1) return;
            IntMatrix g = congruence(a, b);
            auto key = canon_key(g);
            if (best_key.empty() || key < best_key) {
                best_key = key;
                best_g = g;
                best_b = b;
            }
            return;
        }
        for (auto& v : cand[static_cast<std::size_t>(level)]) {
            for (int r = 0; r < n; ++r) b(r, level) = v[static_cast<std::size_t>(r)];
            rec(level + 1);
        }
    };
    rec(0);
    check_consistency(!best_key.empty(), "no successive-minima basis found");
    return {SemiIntegralIndex::from_2t(best_g), w0 * best_b};
}

}  // namespace

ReducedIndex reduce_index(const SemiIntegralIndex& t) {
    if (t.n() > 3) throw UsageError("reduce_index supports n <= 3");
    RankSplit rs = rank_split(t);
    ReducedIndex r = reduce_definite(rs.u);
    int n = t.n(), m = rs.m;
    IntMatrix v = IntMatrix::identity(n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) v(i, j) = r.transform(i, j);
    IntMatrix total = rs.U * v;
    IntMatrix canon = direct_sum(r.index.two_t(), IntMatrix(n - m, n - m));
    check_consistency(congruence(t.two_t(), total) == canon, "reduce_index transform");
    return {SemiIntegralIndex::from_2t(canon), total};
}

}  // namespace siegel
