#include "siegel/hecke.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>

#include "siegel/factor.hpp"
#include "siegel/matrix.hpp"

namespace siegel {

struct FourierTable::State {
    std::mutex mu;
    std::map<IntMatrix, NFElem> values;
    CoefficientFn source;
};

FourierTable::FourierTable(int n, int k) : n_(n), k_(k), st_(std::make_shared<State>()) {}

FourierTable FourierTable::from_function(int n, int k, CoefficientFn source) {
    FourierTable t(n, k);
    t.bound_ = -1;
    t.st_->source = std::move(source);
    return t;
}

namespace {

IntMatrix table_key(const SemiIntegralIndex& t) {
    if (t.n() <= 3) return reduce_index(t).index.two_t();
    return t.two_t();
}

}  // namespace

NFElem FourierTable::coeff(const SemiIntegralIndex& t) const {
    if (!st_) throw UsageError("empty Fourier table");
    if (t.n() != n_) throw UsageError("index degree does not match the table");
    IntMatrix key = table_key(t);
    {
        std::lock_guard<std::mutex> lock(st_->mu);
        auto it = st_->values.find(key);
        if (it != st_->values.end()) return it->second;
    }
    if (!st_->source) {
        std::int64_t d = det64(key);
        throw UsageError("Fourier table truncation insufficient: index " + SemiIntegralIndex::from_2t(key).str() +
                         " with det(2t) = " + std::to_string(d) + " is missing (table bound " +
                         std::to_string(bound_) + ", need bound >= " + std::to_string(d) + ")");
    }
    NFElem v = st_->source(SemiIntegralIndex::from_2t(key));
    std::lock_guard<std::mutex> lock(st_->mu);
    st_->values.emplace(key, v);
    return v;
}

void FourierTable::set(const SemiIntegralIndex& t, const NFElem& v) {
    if (!st_) throw UsageError("empty Fourier table");
    std::lock_guard<std::mutex> lock(st_->mu);
    st_->values[table_key(t)] = v;
}

std::size_t FourierTable::stored() const {
    std::lock_guard<std::mutex> lock(st_->mu);
    return st_->values.size();
}

std::map<IntMatrix, NFElem> FourierTable::snapshot() const {
    std::lock_guard<std::mutex> lock(st_->mu);
    return st_->values;
}

std::size_t CosetSet::count(int rank) const {
    std::size_t c = 0;
    for (auto& b : blocks)
        for (int r : b.rank_mod_p)
            if (rank < 0 || r == rank) ++c;
    return c;
}

namespace {

int rank_mod(const IntMatrix& g, long p) {
    int r = g.rows(), c = g.cols();
    std::vector<std::vector<std::int64_t>> a(static_cast<std::size_t>(r), std::vector<std::int64_t>(static_cast<std::size_t>(c)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) a[i][j] = mod64(g(i, j), p);
    int rank = 0;
    for (int col = 0; col < c && rank < r; ++col) {
        int piv = -1;
        for (int i = rank; i < r; ++i)
            if (a[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[rank]);
        std::int64_t inv = inv_mod64(a[rank][col], p);
        for (int i = 0; i < r; ++i) {
            if (i == rank || a[i][col] == 0) continue;
            std::int64_t f = a[i][col] * inv % p;
            for (int j = col; j < c; ++j) a[i][j] = mod64(a[i][j] - f * a[rank][j], p);
        }
        ++rank;
    }
    return rank;
}

// adjugate of a small integer matrix: adj(D) = det(D) D^{-1}
IntMatrix adjugate(const IntMatrix& d) {
    int n = d.rows();
    IntMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> rows, cols;
            for (int a = 0; a < n; ++a)
                if (a != j) rows.push_back(a);
            for (int b = 0; b < n; ++b)
                if (b != i) cols.push_back(b);
            std::int64_t minor = det64(d.submatrix(rows, cols));
            adj(i, j) = ((i + j) % 2 == 0) ? minor : -minor;
        }
    return adj;
}

std::vector<IntMatrix> hermite_forms(int n, long p, int power) {
    std::int64_t m = ipow64(p, power);
    std::vector<IntMatrix> out;
    IntMatrix d(n, n);
    std::vector<std::pair<int, int>> offs;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) offs.emplace_back(i, j);
    std::function<void(int)> diag = [&](int i) {
        if (i == n) {
            std::function<void(std::size_t)> off = [&](std::size_t e) {
                if (e == offs.size()) {
                    // m D^{-1} integral
                    IntMatrix adj = adjugate(d);
                    std::int64_t det = det64(d);
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            if ((m * adj(a, b)) % det != 0) return;
                    out.push_back(d);
                    return;
                }
                auto [a, b] = offs[e];
                for (std::int64_t v = 0; v < d(b, b); ++v) {
                    d(a, b) = v;
                    off(e + 1);
                }
                d(a, b) = 0;
            };
            off(0);
            return;
        }
        for (int e = 0; e <= power; ++e) {
            d(i, i) = ipow64(p, e);
            diag(i + 1);
        }
    };
    diag(0);
    return out;
}

int sym_index(int n, int a, int b) {
    if (a > b) std::swap(a, b);
    int e = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++e)
            if (i == a && j == b) return e;
    return -1;
}

IntMatrix sym_from_coords(int n, const std::vector<std::int64_t>& y) {
    IntMatrix Y(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) Y(a, b) = Y(b, a) = y[static_cast<std::size_t>(sym_index(n, a, b))];
    return Y;
}

CosetBlock build_block(int n, long p, int power, const IntMatrix& D) {
    std::int64_t m = ipow64(p, power);
    int N = n * (n + 1) / 2;
    CosetBlock blk;
    blk.D = D;
    blk.detD = det64(D);
    IntMatrix adjT = adjugate(D).transpose();
    // L_Y = {y : adj(D)^T Y = 0 mod det D}
    IntMatrix K(n * n, N + n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int row = i * n + j;
            for (int k = 0; k < n; ++k) K(row, sym_index(n, k, j)) += adjT(i, k);
            K(row, N + row) = -blk.detD;
        }
    IntMatrix ker = integer_kernel(K);
    IntMatrix gens(ker.cols(), N);
    for (int c = 0; c < ker.cols(); ++c)
        for (int e = 0; e < N; ++e) gens(c, e) = ker(e, c);
    IntMatrix hn = hnf_rows(gens);
    IntMatrix LY(N, N);
    int r = 0;
    for (int i = 0; i < hn.rows() && r < N; ++i) {
        bool zero = true;
        for (int e = 0; e < N; ++e)
            if (hn(i, e) != 0) zero = false;
        if (zero) continue;
        for (int e = 0; e < N; ++e) LY(r, e) = hn(i, e);
        ++r;
    }
    check_consistency(r == N, "coset lattice rank");
    // L_0 = {D^T S D}
    IntMatrix L0(N, N);
    int row = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b, ++row) {
            IntMatrix S(n, n);
            S(a, b) = S(b, a) = 1;
            IntMatrix img = D.transpose() * S * D;
            for (int x = 0; x < n; ++x)
                for (int y = x; y < n; ++y) L0(row, sym_index(n, x, y)) = img(x, y);
        }
    // L0 = X LY
    QMatrix qLY(N, N), qL0(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            qLY(i, j) = BigRat(static_cast<long>(LY(i, j)));
            qL0(i, j) = BigRat(static_cast<long>(L0(i, j)));
        }
    QMatrix qX = qL0 * inverse(qLY);
    IntMatrix X(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            check_consistency(is_integer(qX(i, j)), "coset sublattice containment");
            X(i, j) = rat_num(qX(i, j)).get_si();
        }
    // box representatives of Z^N / (row space of X) in triangular form
    IntMatrix H = hnf_rows(X);
    const IntMatrix& W = LY;
    std::vector<std::int64_t> s(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) s[static_cast<std::size_t>(i)] = std::llabs(H(i, i));
    std::vector<std::int64_t> c(static_cast<std::size_t>(N), 0);
    while (true) {
        std::vector<std::int64_t> y(static_cast<std::size_t>(N), 0);
        for (int i = 0; i < N; ++i)
            for (int e = 0; e < N; ++e) y[static_cast<std::size_t>(e)] += c[static_cast<std::size_t>(i)] * W(i, e);
        IntMatrix Y = sym_from_coords(n, y);
        // B = D^{-T} Y
        IntMatrix num = adjT * Y;
        IntMatrix B(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                check_consistency(num(a, b) % blk.detD == 0, "coset B integrality");
                B(a, b) = num(a, b) / blk.detD;
            }
        IntMatrix g(2 * n, 2 * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                g(a, b) = m * adjT(a, b) / blk.detD;
                g(a, n + b) = B(a, b);
                g(n + a, n + b) = D(a, b);
            }
        blk.Y.push_back(Y);
        blk.rank_mod_p.push_back(rank_mod(g, p));
        int i = 0;
        while (i < N) {
            if (++c[static_cast<std::size_t>(i)] < s[static_cast<std::size_t>(i)]) break;
            c[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == N) break;
    }
    return blk;
}

}  // namespace

const CosetSet& similitude_cosets(int n, long p, int power) {
    static std::mutex mu;
    static std::map<std::tuple<int, long, int>, std::unique_ptr<CosetSet>> cache;
    if (n < 1 || n > 3) throw UsageError("Hecke operators support degrees 1..3");
    if (power < 1 || power > 2) throw UsageError("similitude power must be 1 or 2");
    if (!is_prime(p)) throw UsageError("Hecke operators need a prime");
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, p, power);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto cs = std::make_unique<CosetSet>();
    cs->n = n;
    cs->p = p;
    cs->power = power;
    for (auto& D : hermite_forms(n, p, power)) cs->blocks.push_back(build_block(n, p, power, D));
    return *cache.emplace(key, std::move(cs)).first->second;
}

IntMatrix coset_matrix(const CosetSet& cs, const CosetBlock& b, std::size_t which) {
    int n = cs.n;
    std::int64_t m = ipow64(cs.p, cs.power);
    IntMatrix adjT = adjugate(b.D).transpose();
    IntMatrix num = adjT * b.Y[which];
    IntMatrix g(2 * n, 2 * n);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            g(a, c) = m * adjT(a, c) / b.detD;
            g(a, n + c) = num(a, c) / b.detD;
            g(n + a, n + c) = b.D(a, c);
        }
    return g;
}

std::string HeckeOperator::str() const {
    if (i < 0) return "T(" + std::to_string(p) + ")";
    return "T_" + std::to_string(i) + "(" + std::to_string(p) + "^2)";
}

namespace {

int op_rank(int n, const HeckeOperator& op) {
    if (op.i < 0) return -1;
    if (op.i > n) throw UsageError("T_i(p^2) needs 0 <= i <= n");
    return n - op.i;
}

QPoly cyclotomic(long m) {
    QPoly num = QPoly::monomial(BigRat(1), static_cast<int>(m)) - QPoly(BigRat(1));
    for (long d = 1; d < m; ++d)
        if (m % d == 0) num = num / cyclotomic(d);
    return num;
}

}  // namespace

std::size_t hecke_degree(int n, const HeckeOperator& op) {
    return similitude_cosets(n, op.p, op.power()).count(op_rank(n, op));
}

NFElem hecke_coefficient(const FourierTable& f, const SemiIntegralIndex& t, const HeckeOperator& op) {
    int n = f.n();
    if (t.n() != n) throw UsageError("index degree does not match the table");
    const CosetSet& cs = similitude_cosets(n, op.p, op.power());
    int want = op_rank(n, op);
    std::int64_t m = ipow64(op.p, op.power());
    QPoly phi = cyclotomic(m);
    const IntMatrix& tt = t.two_t();
    NFElem total(0);
    for (auto& blk : cs.blocks) {
        // 2t_D = D (2t') D^T / m must be even integral
        IntMatrix s = blk.D * tt * blk.D.transpose();
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b) {
                if (s(a, b) % m != 0) ok = false;
                else if (a == b && (s(a, b) / m) % 2 != 0) ok = false;
            }
        if (!ok) continue;
        std::vector<long> counts(static_cast<std::size_t>(m), 0);
        bool any = false;
        for (std::size_t y = 0; y < blk.Y.size(); ++y) {
            if (want >= 0 && blk.rank_mod_p[y] != want) continue;
            const IntMatrix& Y = blk.Y[y];
            std::int64_t tr = 0;
            for (int a = 0; a < n; ++a) {
                tr += (tt(a, a) / 2) * Y(a, a);
                for (int b = a + 1; b < n; ++b) tr += tt(a, b) * Y(a, b);
            }
            counts[static_cast<std::size_t>(mod64(tr, m))]++;
            any = true;
        }
        if (!any) continue;
        std::vector<BigRat> pc;
        for (long c : counts) pc.emplace_back(c);
        QPoly red = QPoly(pc) % phi;
        check_consistency(red.degree() <= 0, "Hecke phase sum is not rational");
        BigRat phase = red.coeff(0);
        if (phase == 0) continue;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s(a, b) /= m;
        NFElem val = f.coeff(SemiIntegralIndex::from_2t(s));
        BigRat scale = phase / rat_pow(BigRat(static_cast<long>(blk.detD)), f.k());
        total = total + NFElem(scale) * val;
    }
    int e = f.k() * n - n * (n + 1) / 2;
    BigRat mult = rat_pow(BigRat(static_cast<long>(m)), e);
    return NFElem(mult) * total;
}

FourierTable hecke_apply(const FourierTable& f, const HeckeOperator& op) {
    FourierTable g = FourierTable::from_function(f.n(), f.k(), [f, op](const SemiIntegralIndex& t) {
        return hecke_coefficient(f, t, op);
    });
    if (f.bound() >= 0) {
        long mn = static_cast<long>(ipow64(ipow64(op.p, op.power()), f.n()));
        g.set_bound(f.bound() / mn);
    }
    return g;
}

FourierTable hecke_T(const FourierTable& f, long p) { return hecke_apply(f, HeckeOperator::T(p)); }
FourierTable hecke_Ti(const FourierTable& f, long p, int i) { return hecke_apply(f, HeckeOperator::Ti(p, i)); }

LaurentPoly& LaurentPoly::add(const std::vector<int>& e, const BigRat& c) {
    if (static_cast<int>(e.size()) != n + 1) throw UsageError("Laurent monomial size");
    BigRat& v = terms[e];
    v += c;
    if (v == 0) terms.erase(e);
    return *this;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (auto& [e, c] : b.terms) r.add(e, c);
    return r;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    r.n = a.n;
    for (auto& [ea, ca] : a.terms)
        for (auto& [eb, cb] : b.terms) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add(e, ca * cb);
        }
    return r;
}

LaurentPoly operator*(const BigRat& s, const LaurentPoly& a) {
    LaurentPoly r;
    r.n = a.n;
    if (s == 0) return r;
    for (auto& [e, c] : a.terms) r.terms[e] = s * c;
    return r;
}

std::string LaurentPoly::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) os << "*x" << i << "^" << e[i];
    }
    return first ? "0" : os.str();
}

std::vector<std::vector<int>> weyl_orbit(const std::vector<int>& e) {
    int n = static_cast<int>(e.size()) - 1;
    std::set<std::vector<int>> seen{e};
    std::vector<std::vector<int>> queue{e};
    for (std::size_t q = 0; q < queue.size(); ++q) {
        auto cur = queue[q];
        std::vector<std::vector<int>> next;
        for (int i = 1; i <= n; ++i) {
            auto t = cur;
            t[static_cast<std::size_t>(i)] = cur[0] - cur[static_cast<std::size_t>(i)];
            next.push_back(t);
            for (int j = i + 1; j <= n; ++j) {
                auto s = cur;
                std::swap(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
                next.push_back(s);
            }
        }
        for (auto& x : next)
            if (seen.insert(x).second) queue.push_back(x);
    }
    return {seen.begin(), seen.end()};
}

LaurentPoly weyl_sum(int n, const std::vector<int>& e) {
    LaurentPoly r;
    r.n = n;
    for (auto& x : weyl_orbit(e)) r.add(x, BigRat(1));
    return r;
}

bool weyl_invariant(const LaurentPoly& f) {
    for (auto& [e, c] : f.terms)
        for (auto& x : weyl_orbit(e)) {
            auto it = f.terms.find(x);
            if (it == f.terms.end() || it->second != c) return false;
        }
    return true;
}

LaurentPoly satake_image(int n, const HeckeOperator& op) {
    const CosetSet& cs = similitude_cosets(n, op.p, op.power());
    int want = op_rank(n, op);
    LaurentPoly r;
    r.n = n;
    for (auto& blk : cs.blocks) {
        std::vector<int> e(static_cast<std::size_t>(n) + 1);
        e[0] = op.power();
        long weight = 0;
        for (int i = 1; i <= n; ++i) {
            int v = valuation64(blk.D(i - 1, i - 1), op.p);
            e[static_cast<std::size_t>(i)] = v;
            weight += static_cast<long>(i) * v;
        }
        long cnt = 0;
        for (int rk : blk.rank_mod_p)
            if (want < 0 || rk == want) ++cnt;
        if (cnt == 0) continue;
        r.add(e, BigRat(cnt) / rat_pow(BigRat(op.p), weight));
    }
    return r;
}

LaurentPoly satake_g(int n) {
    std::vector<int> e(static_cast<std::size_t>(n) + 1, 0);
    e[0] = 1;
    return weyl_sum(n, e);
}

LaurentPoly satake_gl(int n, int l) {
    std::vector<int> e(static_cast<std::size_t>(n) + 1, 0);
    e[0] = 2;
    for (int i = 1; i <= n - l; ++i) e[static_cast<std::size_t>(i)] = 1;
    return weyl_sum(n, e);
}

std::vector<HeckeEigenData> eigen_decompose(const std::vector<FourierTable>& basis,
                                            const std::vector<SemiIntegralIndex>& probe, long p, bool squares,
                                            int verify_rows) {
    int d = static_cast<int>(basis.size());
    if (d == 0) return {};
    int n = basis[0].n(), k = basis[0].k();
    // rows on which the truncations are independent
    std::vector<int> rows;
    std::vector<std::vector<BigRat>> vals;
    QMatrix acc(0, d);
    for (std::size_t i = 0; i < probe.size() && static_cast<int>(rows.size()) < d; ++i) {
        std::vector<BigRat> row;
        for (auto& b : basis) row.push_back(b.coeff(probe[i]).rational_value());
        QMatrix trial(static_cast<int>(rows.size()) + 1, d);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (int c = 0; c < d; ++c) trial(static_cast<int>(r), c) = vals[r][static_cast<std::size_t>(c)];
        for (int c = 0; c < d; ++c) trial(static_cast<int>(rows.size()), c) = row[static_cast<std::size_t>(c)];
        if (rank_of(trial) == static_cast<int>(rows.size()) + 1) {
            rows.push_back(static_cast<int>(i));
            vals.push_back(row);
        }
    }
    if (static_cast<int>(rows.size()) < d) throw UsageError("probe indices do not separate the basis");
    QMatrix V(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) V(r, c) = vals[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    QMatrix Vinv = inverse(V);
    std::vector<int> extra;
    for (std::size_t i = 0; i < probe.size() && static_cast<int>(extra.size()) < verify_rows; ++i)
        if (std::find(rows.begin(), rows.end(), static_cast<int>(i)) == rows.end()) extra.push_back(static_cast<int>(i));

    auto op_matrix = [&](const HeckeOperator& op) {
        QMatrix W(d, d);
        for (int c = 0; c < d; ++c)
            for (int r = 0; r < d; ++r)
                W(r, c) = hecke_coefficient(basis[static_cast<std::size_t>(c)], probe[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])], op)
                              .rational_value();
        QMatrix A = Vinv * W;
        for (int i : extra)
            for (int c = 0; c < d; ++c) {
                BigRat lhs = hecke_coefficient(basis[static_cast<std::size_t>(c)], probe[static_cast<std::size_t>(i)], op).rational_value();
                BigRat rhs = 0;
                for (int b = 0; b < d; ++b)
                    rhs += A(b, c) * basis[static_cast<std::size_t>(b)].coeff(probe[static_cast<std::size_t>(i)]).rational_value();
                check_consistency(lhs == rhs, "span is not stable under " + op.str() + " at " + probe[static_cast<std::size_t>(i)].str());
            }
        return A;
    };

    QMatrix A = op_matrix(HeckeOperator::T(p));
    std::vector<QMatrix> A2;
    if (squares)
        for (int i = 0; i <= n; ++i) A2.push_back(op_matrix(HeckeOperator::Ti(p, i)));

    auto to_nf = [](const QMatrix& q) {
        Matrix<NFElem> m(q.rows(), q.cols());
        for (int i = 0; i < q.rows(); ++i)
            for (int j = 0; j < q.cols(); ++j) m(i, j) = NFElem(q(i, j));
        return m;
    };

    std::vector<HeckeEigenData> out;
    for (auto& fac : factor_rational(charpoly(A))) {
        FieldPtr F;
        NFElem theta;
        if (fac.factor.degree() == 1) {
            theta = NFElem(BigRat(-fac.factor.coeff(0) / fac.factor.coeff(1)));
        } else {
            F = std::make_shared<const NumberField>(fac.factor);
            theta = NFElem::generator(F);
        }
        Matrix<NFElem> shifted = to_nf(A);
        for (int i = 0; i < d; ++i) shifted(i, i) = shifted(i, i) - theta;
        auto ker = kernel_basis(shifted);
        if (static_cast<int>(ker.size()) != fac.multiplicity) throw ConsistencyError("Hecke matrix is not diagonalizable");
        for (auto& u : ker) {
            // normalize: first nonzero coefficient in probe order is 1
            NFElem lead(0);
            for (auto& t : probe) {
                NFElem s(0);
                for (int b = 0; b < d; ++b) s = s + u[static_cast<std::size_t>(b)] * basis[static_cast<std::size_t>(b)].coeff(t);
                if (!(s == NFElem(0))) {
                    lead = s;
                    break;
                }
            }
            check_consistency(!(lead == NFElem(0)), "eigenform vanishes on the probe list");
            for (auto& x : u) x = x / lead;
            HeckeEigenData ed;
            ed.field = F;
            ed.coords = u;
            ed.lambda_T = theta;
            ed.multiplicity = fac.multiplicity;
            std::vector<FourierTable> bcopy = basis;
            ed.form = FourierTable::from_function(n, k, [bcopy, u](const SemiIntegralIndex& t) {
                NFElem s(0);
                for (std::size_t b = 0; b < bcopy.size(); ++b) s = s + u[b] * bcopy[b].coeff(t);
                return s;
            });
            ed.form.set_bound(basis[0].bound());
            int lead_c = 0;
            while (u[static_cast<std::size_t>(lead_c)] == NFElem(0)) ++lead_c;
            for (auto& Ai : A2) {
                auto Au = to_nf(Ai).apply(u);
                NFElem lam = Au[static_cast<std::size_t>(lead_c)] / u[static_cast<std::size_t>(lead_c)];
                for (int b = 0; b < d; ++b)
                    check_consistency(Au[static_cast<std::size_t>(b)] == lam * u[static_cast<std::size_t>(b)],
                                      "T_i(p^2) does not preserve the T(p) eigenspace");
                ed.lambda_T2.push_back(lam);
            }
            out.push_back(std::move(ed));
        }
    }
    return out;
}

}  // namespace siegel
