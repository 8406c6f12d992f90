#include "siegel/pullback.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include "siegel/eisenstein.hpp"
#include "siegel/factor.hpp"

namespace siegel {

namespace {

constexpr int kMaxBlock = 8;

using Wide = __int128;

// Determinant of the principal submatrix of s on idx (fraction-free, exact).
std::int64_t principal_det(const std::array<std::int64_t, kMaxBlock * kMaxBlock>& s, int stride, const int* idx,
                           int m) {
    Wide a[kMaxBlock][kMaxBlock];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a[i][j] = s[static_cast<std::size_t>(idx[i] * stride + idx[j])];
    Wide prev = 1;
    int sign = 1;
    for (int c = 0; c < m; ++c) {
        int piv = -1;
        for (int i = c; i < m; ++i)
            if (a[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            for (int j = 0; j < m; ++j) std::swap(a[piv][j], a[c][j]);
            sign = -sign;
        }
        for (int i = c + 1; i < m; ++i) {
            for (int j = c + 1; j < m; ++j) a[i][j] = (a[c][c] * a[i][j] - a[i][c] * a[c][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[c][c];
    }
    return static_cast<std::int64_t>(sign * a[m - 1][m - 1]);
}

// Symmetric fraction-free elimination; zero pivots must come with zero rows.
bool principal_psd(const std::array<std::int64_t, kMaxBlock * kMaxBlock>& s, int stride, const int* idx, int m) {
    Wide a[kMaxBlock][kMaxBlock];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a[i][j] = s[static_cast<std::size_t>(idx[i] * stride + idx[j])];
    bool alive[kMaxBlock];
    for (int i = 0; i < m; ++i) alive[i] = true;
    Wide prev = 1;
    for (int p = 0; p < m; ++p) {
        if (a[p][p] < 0) return false;
        if (a[p][p] == 0) {
            for (int q = p + 1; q < m; ++q)
                if (alive[q] && a[p][q] != 0) return false;
            alive[p] = false;
            continue;
        }
        for (int q = p + 1; q < m; ++q) {
            if (!alive[q]) continue;
            for (int r = q; r < m; ++r) {
                if (!alive[r]) continue;
                a[q][r] = (a[p][p] * a[q][r] - a[q][p] * a[p][r]) / prev;
                a[r][q] = a[q][r];
            }
        }
        prev = a[p][p];
        alive[p] = false;
    }
    return true;
}

std::int64_t isqrt64(std::int64_t x) {
    if (x <= 0) return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

class Enumerator {
public:
    Enumerator(const IntMatrix& a, const IntMatrix& c, bool refine, const RVisitor& visit, int slice, int slices)
        : n_(a.rows()), refine_(refine), visit_(visit), slice_(slice), slices_(slices), r_(n_, n_) {
        N_ = 2 * n_;
        s_.fill(0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                s_[at(i, j)] = a(i, j);
                s_[at(n_ + i, n_ + j)] = c(i, j);
            }
        for (int i = 0; i < N_; ++i) all_[i] = i;
    }

    std::uint64_t run() {
        if (n_ == 0) {
            if (slice_ == 0) {
                visit_(r_);
                return 1;
            }
            return 0;
        }
        place(0);
        return count_;
    }

private:
    std::size_t at(int i, int j) const { return static_cast<std::size_t>(i * N_ + j); }

    void set(int i, int j, std::int64_t v) {
        s_[at(i, n_ + j)] = v;
        s_[at(n_ + j, i)] = v;
        r_(i, j) = v;
    }

    // s-tilde for entry (i, j): rows 0..i of the first block and 0..j of the second.
    int tilde(int i, int j, int* idx) const {
        int m = 0;
        for (int a = 0; a <= i; ++a) idx[m++] = a;
        for (int b = 0; b <= j; ++b) idx[m++] = n_ + b;
        return m;
    }

    void place(int pos) {
        if (pos == n_ * n_) {
            if (!refine_ && !principal_psd(s_, N_, all_.data(), N_)) return;
            ++count_;
            visit_(r_);
            return;
        }
        int j = pos / n_, i = pos % n_;
        std::int64_t bound = isqrt64(s_[at(i, i)] * s_[at(n_ + j, n_ + j)]);
        std::int64_t lo = -bound, hi = bound;
        int idx[kMaxBlock];
        int m = tilde(i, j, idx);
        if (refine_ && m > 2) {
            set(i, j, 0);
            std::int64_t f0 = principal_det(s_, N_, idx, m);
            set(i, j, 1);
            std::int64_t f1 = principal_det(s_, N_, idx, m);
            set(i, j, -1);
            std::int64_t fm = principal_det(s_, N_, idx, m);
            // f(r) = alpha r^2 + beta r + f0 with alpha = -det a
            std::int64_t alpha2 = f1 + fm - 2 * f0;  // 2 alpha
            std::int64_t beta2 = f1 - fm;             // 2 beta
            if (alpha2 < 0) {
                auto f = [&](std::int64_t r) {
                    return static_cast<Wide>(alpha2) * r * r + static_cast<Wide>(beta2) * r + 2 * static_cast<Wide>(f0);
                };
                double al = static_cast<double>(alpha2) / 2, be = static_cast<double>(beta2) / 2;
                double disc = be * be - 4 * al * static_cast<double>(f0);
                double center = -be / (2 * al);
                double half = disc > 0 ? std::sqrt(disc) / (2 * -al) : 0;
                auto c0 = static_cast<std::int64_t>(std::floor(center));
                std::int64_t best = f(c0) >= f(c0 + 1) ? c0 : c0 + 1;
                if (f(best) < 0) {
                    set(i, j, 0);
                    return;
                }
                // floating estimates, then exact adjustment on the concave f
                std::int64_t clo = std::min(best, static_cast<std::int64_t>(std::ceil(center - half)));
                std::int64_t chi = std::max(best, static_cast<std::int64_t>(std::floor(center + half)));
                while (f(clo) < 0) ++clo;
                while (f(clo - 1) >= 0) --clo;
                while (f(chi) < 0) --chi;
                while (f(chi + 1) >= 0) ++chi;
                lo = std::max(lo, clo);
                hi = std::min(hi, chi);
            }
        }
        std::int64_t k = 0;
        for (std::int64_t v = lo; v <= hi; ++v, ++k) {
            if (pos == 0 && k % slices_ != slice_) continue;
            set(i, j, v);
            if (refine_ && i == n_ - 1) {
                int jdx[kMaxBlock];
                int mm = tilde(n_ - 1, j, jdx);
                if (!principal_psd(s_, N_, jdx, mm)) continue;
            }
            place(pos + 1);
        }
        set(i, j, 0);
    }

    int n_, N_;
    bool refine_;
    const RVisitor& visit_;
    int slice_, slices_;
    IntMatrix r_;
    std::array<std::int64_t, kMaxBlock * kMaxBlock> s_{};
    std::array<int, kMaxBlock> all_{};
    std::uint64_t count_ = 0;
};

void check_pair(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2) {
    if (t1.n() != t2.n()) throw UsageError("pullback indices must have equal degree");
    if (2 * t1.n() > kMaxBlock) throw UsageError("pullback supports degree <= 4");
    if (!is_psd(t1) || !is_psd(t2)) throw UsageError("pullback indices must be positive semidefinite");
}

}  // namespace

std::uint64_t enumerate_R(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, const RVisitor& visit,
                          const EnumOptions& opt, int slice, int slices) {
    check_pair(t1, t2);
    if (slices < 1 || slice < 0 || slice >= slices) throw UsageError("bad slice");
    Enumerator e(t1.two_t(), t2.two_t(), opt.refine, visit, slice, slices);
    return e.run();
}

std::uint64_t count_R(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, const EnumOptions& opt) {
    int w = std::max(1, opt.workers);
    if (w == 1) return enumerate_R(t1, t2, [](const IntMatrix&) {}, opt);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(w), 0);
    std::vector<std::thread> pool;
    for (int s = 0; s < w; ++s)
        pool.emplace_back([&, s] { counts[static_cast<std::size_t>(s)] = enumerate_R(t1, t2, [](const IntMatrix&) {}, opt, s, w); });
    for (auto& th : pool) th.join();
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

std::vector<IntMatrix> list_R(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, const EnumOptions& opt) {
    std::vector<IntMatrix> out;
    enumerate_R(t1, t2, [&](const IntMatrix& r) { out.push_back(r); }, opt);
    return out;
}

IntMatrix block_index(const IntMatrix& a, const IntMatrix& c, const IntMatrix& r) {
    int n = a.rows();
    IntMatrix s(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            s(i, j) = a(i, j);
            s(n + i, n + j) = c(i, j);
            s(i, n + j) = r(i, j);
            s(n + j, i) = r(i, j);
        }
    return s;
}

void GenusTally::merge(const GenusTally& other) {
    for (auto& [key, g] : other.genera) {
        auto it = genera.find(key);
        if (it == genera.end())
            genera.emplace(key, g);
        else
            it->second.count += g.count;
    }
    total += other.total;
}

std::string tally_key(const IntMatrix& two_s, GenusCount& out) {
    IntMatrix u = two_s;
    if (det64(two_s) == 0) {
        auto rs = rank_split(SemiIntegralIndex::from_2t(two_s));
        if (rs.m == 0) {
            out.rank = 0;
            return "0";
        }
        u = rs.u.two_t();
    }
    out.rank = u.rows();
    out.symbol = genus_symbol(u);
    return genus_key(out.symbol);
}

GenusTally tally_genera(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, const EnumOptions& opt, int slice,
                        int slices) {
    const IntMatrix& a = t1.two_t();
    const IntMatrix& c = t2.two_t();
    auto one = [&](int s, int ns) {
        GenusTally t;
        enumerate_R(
            t1, t2,
            [&](const IntMatrix& r) {
                GenusCount g;
                std::string key = tally_key(block_index(a, c, r), g);
                auto it = t.genera.find(key);
                if (it == t.genera.end()) {
                    g.count = 1;
                    t.genera.emplace(std::move(key), std::move(g));
                } else {
                    it->second.count++;
                }
                t.total++;
            },
            opt, s, ns);
        return t;
    };
    int w = std::max(1, opt.workers);
    if (w == 1) return one(slice, slices);
    // worker u handles sub-slice u of this slice
    std::vector<GenusTally> parts(static_cast<std::size_t>(w));
    std::vector<std::thread> pool;
    for (int u = 0; u < w; ++u)
        pool.emplace_back([&, u] { parts[static_cast<std::size_t>(u)] = one(slice + u * slices, slices * w); });
    for (auto& th : pool) th.join();
    GenusTally total;
    for (auto& p : parts) total.merge(p);
    return total;
}

BigRat tally_value(const GenusTally& tally, int k) {
    BigRat sum = 0;
    for (auto& [key, g] : tally.genera) {
        if (g.rank == 0)
            sum += BigRat(static_cast<unsigned long>(g.count));
        else
            sum += BigRat(static_cast<unsigned long>(g.count)) * eis_coefficient_definite(g.symbol, k);
    }
    sum.canonicalize();
    return sum;
}

namespace {

void check_pullback_weight(int k, int n) {
    if (k % 2 != 0 || k <= 2 * n + 1) throw UsageError("pullback needs even k > 2n + 1");
}

}  // namespace

BigRat pullback_coefficient(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k, const EnumOptions& opt) {
    check_pair(t1, t2);
    check_pullback_weight(k, t1.n());
    return tally_value(tally_genera(t1, t2, opt), k);
}

BigRat pullback_coefficient_direct(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k) {
    check_pair(t1, t2);
    check_pullback_weight(k, t1.n());
    EnumOptions off;
    off.refine = false;
    BigRat sum = 0;
    enumerate_R(
        t1, t2,
        [&](const IntMatrix& r) {
            sum += eis_coefficient(SemiIntegralIndex::from_2t(block_index(t1.two_t(), t2.two_t(), r)), k);
        },
        off);
    sum.canonicalize();
    return sum;
}

}  // namespace siegel

namespace siegel {

namespace {

std::mutex g_pb_mutex;
std::map<std::string, BigRat> g_pb_cache;

SemiIntegralIndex canonical(const SemiIntegralIndex& t) {
    if (t.n() > 3) return t;
    return reduce_index(t).index;
}

long trace2(const SemiIntegralIndex& t) {
    long s = 0;
    for (int i = 0; i < t.n(); ++i) s += t.two_t()(i, i);
    return s;
}

}  // namespace

std::string pullback_key(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k) {
    std::string a = canonical(t1).str(), b = canonical(t2).str();
    if (b < a) std::swap(a, b);
    return a + "x" + b + "|" + std::to_string(k);
}

BigRat pullback_cached(const SemiIntegralIndex& t1, const SemiIntegralIndex& t2, int k, const EnumOptions& opt) {
    std::string key = pullback_key(t1, t2, k);
    {
        std::lock_guard<std::mutex> lock(g_pb_mutex);
        auto it = g_pb_cache.find(key);
        if (it != g_pb_cache.end()) return it->second;
    }
    BigRat v = pullback_coefficient(t1, t2, k, opt);
    std::lock_guard<std::mutex> lock(g_pb_mutex);
    g_pb_cache.emplace(key, v);
    return v;
}

void pullback_cache_clear() {
    std::lock_guard<std::mutex> lock(g_pb_mutex);
    g_pb_cache.clear();
}

void pullback_cache_put(const std::string& key, const BigRat& value) {
    std::lock_guard<std::mutex> lock(g_pb_mutex);
    auto [it, fresh] = g_pb_cache.emplace(key, value);
    if (!fresh) check_consistency(it->second == value, "pullback cache collision for " + key);
}

bool pullback_cache_get(const std::string& key, BigRat& value) {
    std::lock_guard<std::mutex> lock(g_pb_mutex);
    auto it = g_pb_cache.find(key);
    if (it == g_pb_cache.end()) return false;
    value = it->second;
    return true;
}

std::map<std::string, BigRat> pullback_cache_snapshot() {
    std::lock_guard<std::mutex> lock(g_pb_mutex);
    return g_pb_cache;
}

std::size_t pullback_cache_size() {
    std::lock_guard<std::mutex> lock(g_pb_mutex);
    return g_pb_cache.size();
}

bool index_order(const SemiIntegralIndex& a, const SemiIntegralIndex& b) {
    std::int64_t da = a.det2t(), db = b.det2t();
    bool sa = da == 0, sb = db == 0;
    if (sa != sb) return sa;
    if (sa) {
        int ra = int_rank(a.two_t()), rb = int_rank(b.two_t());
        if (ra != rb) return ra < rb;
    } else if (da != db) {
        return da < db;
    }
    long ta = trace2(a), tb = trace2(b);
    if (ta != tb) return ta < tb;
    return a.two_t() < b.two_t();
}

std::vector<SemiIntegralIndex> candidate_indices(int n, int max_diag) {
    if (n < 1 || n > 3) throw UsageError("candidate indices support 1 <= n <= 3");
    std::set<IntMatrix> seen;
    std::vector<SemiIntegralIndex> out;
    IntMatrix m(n, n);
    std::vector<std::pair<int, int>> offs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) offs.emplace_back(i, j);
    std::function<void(int)> diag = [&](int i) {
        if (i == n) {
            std::function<void(std::size_t)> off = [&](std::size_t e) {
                if (e == offs.size()) {
                    if (!is_psd(m)) return;
                    auto t = SemiIntegralIndex::from_2t(m);
                    auto r = reduce_index(t).index;
                    if (seen.insert(r.two_t()).second) out.push_back(r);
                    return;
                }
                auto [a, b] = offs[e];
                std::int64_t lim = m(a, a) / 2;
                for (std::int64_t v = -lim; v <= lim; ++v) {
                    m(a, b) = m(b, a) = v;
                    off(e + 1);
                }
                m(a, b) = m(b, a) = 0;
            };
            off(0);
            return;
        }
        for (std::int64_t d = (i == 0 ? 0 : m(i - 1, i - 1) / 2); d <= max_diag; ++d) {
            m(i, i) = 2 * d;
            diag(i + 1);
        }
        m(i, i) = 0;
    };
    diag(0);
    std::sort(out.begin(), out.end(), index_order);
    return out;
}

int PullbackMatrix::singular_count() const {
    int s = 0;
    for (auto& t : T)
        if (t.det2t() == 0) ++s;
    return s;
}

namespace {

void fill_cells(PullbackMatrix& pm, int from, const EnumOptions& opt) {
    int m = static_cast<int>(pm.T.size());
    std::vector<std::pair<int, int>> cells;
    for (int j = from; j < m; ++j)
        for (int i = 0; i <= j; ++i) cells.emplace_back(i, j);
    EnumOptions inner = opt;
    inner.workers = 1;
    auto work = [&](std::size_t start, std::size_t step) {
        for (std::size_t c = start; c < cells.size(); c += step) {
            auto [i, j] = cells[c];
            BigRat v = pullback_cached(pm.T[static_cast<std::size_t>(i)], pm.T[static_cast<std::size_t>(j)], pm.k, inner);
            pm.M(i, j) = v;
            pm.M(j, i) = v;
        }
    };
    int w = std::max(1, opt.workers);
    if (w == 1) {
        work(0, 1);
        return;
    }
    std::vector<std::thread> pool;
    for (int u = 0; u < w; ++u) pool.emplace_back(work, static_cast<std::size_t>(u), static_cast<std::size_t>(w));
    for (auto& th : pool) th.join();
}

void check_order(const std::vector<SemiIntegralIndex>& T) {
    bool definite_seen = false;
    for (auto& t : T) {
        if (t.det2t() != 0)
            definite_seen = true;
        else if (definite_seen)
            throw UsageError("index list must put singular indices first");
    }
}

}  // namespace

PullbackMatrix build_gram(const std::vector<SemiIntegralIndex>& T, int k, const EnumOptions& opt) {
    if (T.empty()) throw UsageError("empty index list");
    PullbackMatrix pm;
    pm.n = T[0].n();
    pm.k = k;
    extend_gram(pm, T, opt);
    return pm;
}

void extend_gram(PullbackMatrix& pm, const std::vector<SemiIntegralIndex>& more, const EnumOptions& opt) {
    int old = static_cast<int>(pm.T.size());
    std::vector<SemiIntegralIndex> all = pm.T;
    for (auto& t : more) {
        if (t.n() != pm.n) throw UsageError("index degree mismatch");
        all.push_back(t);
    }
    check_order(all);
    int m = static_cast<int>(all.size());
    QMatrix M(m, m);
    for (int i = 0; i < old; ++i)
        for (int j = 0; j < old; ++j) M(i, j) = pm.M(i, j);
    pm.T = std::move(all);
    pm.M = std::move(M);
    fill_cells(pm, old, opt);
}

BigRat PullbackForm::operator()(const SemiIntegralIndex& t) const {
    BigRat sum = 0;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (weights[j] == 0) continue;
        sum += weights[j] * pullback_cached(t, columns[j], k);
    }
    sum.canonicalize();
    return sum;
}

Bases extract_bases(const PullbackMatrix& pm) {
    Bases b;
    int m = static_cast<int>(pm.T.size());
    if (m == 0) return b;
    // greedy choice of independent columns, left to right
    std::vector<int> J;
    std::vector<std::vector<BigRat>> reduced;
    std::vector<int> lead;
    for (int j = 0; j < m; ++j) {
        std::vector<BigRat> v = pm.M.col(j);
        for (std::size_t r = 0; r < reduced.size(); ++r) {
            BigRat f = v[static_cast<std::size_t>(lead[r])];
            if (f == 0) continue;
            for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] -= f * reduced[r][static_cast<std::size_t>(i)];
        }
        int piv = -1;
        for (int i = 0; i < m; ++i)
            if (v[static_cast<std::size_t>(i)] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        BigRat inv = 1 / v[static_cast<std::size_t>(piv)];
        for (auto& x : v) x *= inv;
        for (std::size_t r = 0; r < reduced.size(); ++r) {
            BigRat f = reduced[r][static_cast<std::size_t>(piv)];
            if (f == 0) continue;
            for (int i = 0; i < m; ++i) reduced[r][static_cast<std::size_t>(i)] -= f * v[static_cast<std::size_t>(i)];
        }
        reduced.push_back(std::move(v));
        lead.push_back(piv);
        J.push_back(j);
    }
    int d = static_cast<int>(J.size());
    b.dim_M = d;
    if (d == 0) return b;
    std::vector<int> rows(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
    QMatrix MJ = pm.M.submatrix(rows, J);
    ColumnReduction cr = rref_columns(MJ);
    check_consistency(cr.rank == d, "column reduction rank");
    int s = pm.singular_count();
    std::vector<SemiIntegralIndex> cols;
    for (int j : J) cols.push_back(pm.T[static_cast<std::size_t>(j)]);
    for (int c = 0; c < d; ++c) {
        int prow = cr.pivot_rows[static_cast<std::size_t>(c)];
        BigRat scale = 1 / cr.echelon(prow, c);
        TruncatedForm tf;
        tf.T = pm.T;
        for (int i = 0; i < m; ++i) {
            BigRat v = cr.echelon(i, c) * scale;
            v.canonicalize();
            tf.values.emplace_back(v);
        }
        PullbackForm pf;
        pf.k = pm.k;
        pf.columns = cols;
        for (int l = 0; l < d; ++l) {
            BigRat w = cr.transform(l, c) * scale;
            w.canonicalize();
            pf.weights.push_back(w);
        }
        bool cusp = prow >= s;
        if (cusp)
            for (int i = 0; i < s; ++i) check_consistency(cr.echelon(i, c) == 0, "cusp column vanishes on singular rows");
        b.full.push_back(tf);
        b.full_forms.push_back(pf);
        if (cusp) {
            b.cusp.push_back(tf);
            b.cusp_forms.push_back(pf);
        }
    }
    b.dim_S = static_cast<int>(b.cusp.size());
    return b;
}

GrowthReport grow_gram(int n, int k, const std::vector<SemiIntegralIndex>& candidates, int step, int known_dim,
                       int stable_rounds, const EnumOptions& opt, std::size_t max_size) {
    if (step < 1) throw UsageError("step must be positive");
    GrowthReport rep;
    rep.pm.n = n;
    rep.pm.k = k;
    std::size_t next = 0;
    int stable = 0;
    while (next < candidates.size() && (max_size == 0 || rep.pm.T.size() < max_size)) {
        std::vector<SemiIntegralIndex> more;
        for (int s = 0; s < step && next < candidates.size(); ++s) more.push_back(candidates[next++]);
        extend_gram(rep.pm, more, opt);
        int r = rank_of(rep.pm.M);
        if (!rep.rank_history.empty() && r == rep.rank_history.back())
            ++stable;
        else
            stable = 0;
        rep.rank_history.push_back(r);
        if (known_dim > 0) check_consistency(r <= known_dim, "Gram rank exceeds the known dimension");
        if (stable >= stable_rounds && (known_dim <= 0 || r == known_dim)) break;
    }
    return rep;
}

namespace {

FieldPtr form_field(const TruncatedForm& f) {
    for (auto& v : f.values)
        if (v.field()) return v.field();
    return nullptr;
}

}  // namespace

std::vector<NFElem> solve_c(const std::vector<TruncatedForm>& eigen, const PullbackMatrix& pm) {
    int m = static_cast<int>(pm.T.size());
    std::vector<FieldPtr> fields;
    std::vector<int> offset;
    int unknowns = 0;
    for (auto& f : eigen) {
        if (static_cast<int>(f.values.size()) != m) throw UsageError("truncation length does not match T");
        FieldPtr F = form_field(f);
        fields.push_back(F);
        offset.push_back(unknowns);
        unknowns += F ? F->degree() : 1;
    }
    // M_ab = sum_o sum_i x_{o,i} Tr(theta^i v_a v_b)
    int eqs = m * (m + 1) / 2;
    QMatrix A(eqs, unknowns);
    std::vector<BigRat> rhs;
    int row = 0;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b, ++row) {
            rhs.push_back(pm.M(a, b));
            for (std::size_t o = 0; o < eigen.size(); ++o) {
                NFElem prod = eigen[o].values[static_cast<std::size_t>(a)] * eigen[o].values[static_cast<std::size_t>(b)];
                int deg = fields[o] ? fields[o]->degree() : 1;
                for (int i = 0; i < deg; ++i) {
                    NFElem term = prod;
                    if (i > 0) {
                        NFElem th = NFElem::generator(fields[o]);
                        for (int e = 0; e < i; ++e) term = term * th;
                    }
                    BigRat tr = fields[o] ? NFElem(fields[o], term.rep()).trace() : term.rational_value();
                    A(row, offset[o] + i) = tr;
                }
            }
        }
    if (rank_of(A) != unknowns) throw UsageError("eigen truncations do not determine the constants c");
    auto x = solve_linear(A, rhs);
    if (!x) throw ConsistencyError("M is not of the form sum c v v^T for the given eigenforms");
    std::vector<NFElem> c;
    for (std::size_t o = 0; o < eigen.size(); ++o) {
        int deg = fields[o] ? fields[o]->degree() : 1;
        std::vector<BigRat> coords;
        for (int i = 0; i < deg; ++i) coords.push_back((*x)[static_cast<std::size_t>(offset[o] + i)]);
        NFElem v = fields[o] ? NFElem(fields[o], QPoly(coords)) : NFElem(coords[0]);
        check_consistency(!(v == NFElem(0)), "vanishing Garrett constant");
        c.push_back(v);
    }
    return c;
}

std::vector<CongruenceHit> congruence_scan(const std::vector<NFElem>& c, int k, std::vector<BigInt>* skipped) {
    std::set<long> primes;
    std::set<BigInt> rest;
    auto collect = [&](const BigInt& d) {
        auto f = factor_partial(d, 4000000);
        for (auto& [q, e] : f.primes) {
            if (q > BigInt(std::int64_t(1) << 62))
                rest.insert(q);
            else
                primes.insert(q.get_si());
        }
        rest.insert(f.unfactored.begin(), f.unfactored.end());
    };
    for (auto& x : c) {
        collect(rat_den(x.field() ? x.norm() : x.rational_value()));
        QPoly rep = x.rep();
        for (auto& co : rep.coeffs()) collect(rat_den(co));
    }
    if (skipped) skipped->assign(rest.begin(), rest.end());
    std::vector<CongruenceHit> out;
    for (long p : primes) {
        if (p <= 2 * k - 1) continue;
        CongruenceHit hit;
        hit.p = p;
        int minus_one = 0;
        bool other_negative = false;
        for (std::size_t o = 0; o < c.size(); ++o) {
            auto vals = prime_valuations(c[o], p);
            if (!vals) {
                hit.unsupported = true;
                continue;
            }
            for (auto& pv : *vals) {
                if (pv.valuation >= 0) continue;
                hit.negative.push_back({static_cast<int>(o), pv.ideal, pv.residue_degree, pv.valuation});
                if (pv.valuation == -1)
                    minus_one += pv.residue_degree;
                else
                    other_negative = true;
            }
        }
        if (hit.negative.empty() && !hit.unsupported) continue;
        hit.pattern = !other_negative && minus_one == 2;
        out.push_back(hit);
    }
    return out;
}

}  // namespace siegel
