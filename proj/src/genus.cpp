#include "siegel/genus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace siegel {

namespace {

// Residue arithmetic modulo M = p^N, either in 64 bits (with 128-bit
// products) or with GMP integers when M is too large.
struct Mod64 {
    using Z = std::int64_t;
    Z M;
    Z red(__int128 v) const {
        __int128 r = v % M;
        if (r < 0) r += M;
        return static_cast<Z>(r);
    }
    Z from(std::int64_t v) const { return red(v); }
    Z mul(Z a, Z b) const { return red(static_cast<__int128>(a) * b); }
    Z add(Z a, Z b) const { return red(static_cast<__int128>(a) + b); }
    Z sub(Z a, Z b) const { return red(static_cast<__int128>(a) - b); }
    static bool is_zero(Z a) { return a == 0; }
    int val(Z a, long p) const {
        if (a == 0) return kValInfinity;
        int v = 0;
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        return v;
    }
    Z div_pow(Z a, long p, int e) const {
        for (int i = 0; i < e; ++i) a /= p;
        return a;
    }
    Z inv(Z a) const { return inv_mod64(a, M); }
    long small(Z a, long m) const { return static_cast<long>(a % m); }
};

struct ModBig {
    using Z = BigInt;
    BigInt M;
    Z red(const BigInt& v) const {
        BigInt r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), M.get_mpz_t());
        return r;
    }
    Z from(std::int64_t v) const { return red(BigInt(static_cast<long>(v))); }
    Z mul(const Z& a, const Z& b) const { return red(a * b); }
    Z add(const Z& a, const Z& b) const { return red(a + b); }
    Z sub(const Z& a, const Z& b) const { return red(a - b); }
    static bool is_zero(const Z& a) { return a == 0; }
    int val(const Z& a, long p) const { return valuation(a, p); }
    Z div_pow(Z a, long p, int e) const {
        for (int i = 0; i < e; ++i) a /= p;
        return a;
    }
    Z inv(const Z& a) const {
        BigInt r;
        if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), M.get_mpz_t())) consistency_failure("non-invertible residue");
        return r;
    }
    long small(const Z& a, long m) const {
        BigInt r;
        mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
        return r.get_si();
    }
};

struct Block {
    int e;          // scale exponent
    bool two_by_two;
    long unit_det;  // det of the unit part mod p (odd p) or mod 8 (p = 2)
    long unit;      // for 1x1 blocks: the unit mod 8 (p = 2)
};

template <class R>
std::vector<Block> eliminate(const IntMatrix& a, long p, int N, const R& ring) {
    using Z = typename R::Z;
    int n = a.rows();
    std::vector<std::vector<Z>> m(static_cast<std::size_t>(n), std::vector<Z>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = ring.from(a(i, j));
    std::vector<int> live;
    for (int i = 0; i < n; ++i) live.push_back(i);
    std::vector<Block> blocks;
    long small_mod = (p == 2) ? 8 : p;
    while (!live.empty()) {
        int best = kValInfinity;
        for (int i : live)
            for (int j : live) best = std::min(best, ring.val(m[i][j], p));
        if (best >= N) consistency_failure("Jordan decomposition ran out of precision");
        int piv = -1;
        for (int i : live)
            if (ring.val(m[i][i], p) == best) {
                piv = i;
                break;
            }
        if (piv < 0 && p != 2) {
            // e_i <- e_i + e_j turns an off-diagonal minimum into a diagonal one
            int bi = -1, bj = -1;
            for (int i : live)
                for (int j : live)
                    if (i != j && bi < 0 && ring.val(m[i][j], p) == best) {
                        bi = i;
                        bj = j;
                    }
            for (int k : live) m[bi][k] = ring.add(m[bi][k], m[bj][k]);
            for (int k : live) m[k][bi] = ring.add(m[k][bi], m[k][bj]);
            piv = bi;
            check_consistency(ring.val(m[piv][piv], p) == best, "odd Jordan pivot");
        }
        if (piv >= 0) {
            Z pv = m[piv][piv];
            Z u = ring.div_pow(pv, p, best);
            Z uinv = ring.inv(u);
            std::vector<int> rest;
            for (int i : live)
                if (i != piv) rest.push_back(i);
            for (int i : rest) {
                Z c = ring.mul(ring.div_pow(m[i][piv], p, best), uinv);
                if (R::is_zero(c)) continue;
                for (int k : rest) m[i][k] = ring.sub(m[i][k], ring.mul(c, m[piv][k]));
            }
            long us = ring.small(u, small_mod);
            blocks.push_back({best, false, us, us});
            live = rest;
            continue;
        }
        // p = 2 with all diagonal valuations > best: 2x2 even block
        int bi = -1, bj = -1;
        for (int i : live)
            for (int j : live)
                if (i != j && bi < 0 && ring.val(m[i][j], p) == best) {
                    bi = i;
                    bj = j;
                }
        Z al = ring.div_pow(m[bi][bi], p, best), be = ring.div_pow(m[bi][bj], p, best),
          ga = ring.div_pow(m[bj][bj], p, best);
        Z det = ring.sub(ring.mul(al, ga), ring.mul(be, be));
        Z dinv = ring.inv(det);
        // P'^{-1} = adj / det with adj = [[ga, -be], [-be, al]]
        std::vector<int> rest;
        for (int i : live)
            if (i != bi && i != bj) rest.push_back(i);
        std::vector<Z> ci(rest.size()), cj(rest.size());
        for (std::size_t r = 0; r < rest.size(); ++r) {
            int i = rest[r];
            Z x = ring.div_pow(m[i][bi], p, best), y = ring.div_pow(m[i][bj], p, best);
            // row vector (x, y) times P'^{-1}
            ci[r] = ring.mul(ring.sub(ring.mul(x, ga), ring.mul(y, be)), dinv);
            cj[r] = ring.mul(ring.sub(ring.mul(y, al), ring.mul(x, be)), dinv);
        }
        for (std::size_t r = 0; r < rest.size(); ++r)
            for (int k : rest) {
                int i = rest[r];
                Z sub = ring.add(ring.mul(ci[r], m[bi][k]), ring.mul(cj[r], m[bj][k]));
                m[i][k] = ring.sub(m[i][k], sub);
            }
        blocks.push_back({best, true, ring.small(det, 8), 0});
        live = rest;
    }
    return blocks;
}

std::vector<Block> jordan_blocks(const IntMatrix& a, long p) {
    if (a.rows() != a.cols() || !a.is_symmetric()) throw UsageError("Jordan decomposition needs a symmetric matrix");
    BigInt det = det_big(a);
    if (det == 0) throw UsageError("Jordan decomposition of a singular matrix");
    int v = valuation(det, p);
    int N = v + (p == 2 ? 3 : 1) + 1;
    BigInt M = int_pow(BigInt(p), static_cast<unsigned long>(N));
    if (M < BigInt(static_cast<long>(1) << 62)) return eliminate(a, p, N, Mod64{M.get_si()});
    return eliminate(a, p, N, ModBig{M});
}

int mod8_sign(long d) {
    long r = ((d % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
}

}  // namespace

std::vector<OddConstituent> jordan_odd(const IntMatrix& a, long p) {
    if (p == 2 || !is_prime(p)) throw UsageError("jordan_odd needs an odd prime");
    auto blocks = jordan_blocks(a, p);
    std::map<int, std::pair<int, long>> by_scale;  // e -> (dim, product of units mod p)
    for (auto& b : blocks) {
        auto& s = by_scale[b.e];
        if (s.first == 0) s.second = 1;
        s.first += 1;
        s.second = (s.second * b.unit_det) % p;
    }
    std::vector<OddConstituent> out;
    for (auto& [e, s] : by_scale) out.push_back({e, legendre64(s.second, p), s.first});
    return out;
}

std::vector<TwoConstituent> jordan_two(const IntMatrix& a) {
    auto blocks = jordan_blocks(a, 2);
    std::map<int, TwoConstituent> by_scale;
    std::map<int, long> dets;
    for (auto& b : blocks) {
        auto& c = by_scale[b.e];
        c.scale_exp = b.e;
        if (!dets.count(b.e)) dets[b.e] = 1;
        dets[b.e] = (dets[b.e] * b.unit_det) % 8;
        if (b.two_by_two) {
            c.dim += 2;
        } else {
            c.dim += 1;
            c.type1 = true;
            c.oddity = (c.oddity + static_cast<int>(b.unit)) % 8;
        }
    }
    std::vector<TwoConstituent> out;
    for (auto& [e, c] : by_scale) {
        TwoConstituent x = c;
        x.sign = mod8_sign(dets[e]);
        if (!x.type1) x.oddity = 0;
        out.push_back(x);
    }
    return out;
}

std::vector<long> GenusSymbol::primes() const {
    std::vector<long> ps{2};
    for (auto& o : odd) ps.push_back(o.p);
    return ps;
}

const OddPart* GenusSymbol::odd_part(long p) const {
    for (auto& o : odd)
        if (o.p == p) return &o;
    return nullptr;
}

GenusSymbol genus_symbol(const IntMatrix& two_t) {
    if (!two_t.is_symmetric()) throw UsageError("2t must be symmetric");
    if (!is_positive_definite(two_t)) throw UsageError("genus symbol needs a positive definite 2t");
    for (int i = 0; i < two_t.rows(); ++i)
        if (two_t(i, i) % 2 != 0) throw UsageError("2t must have even diagonal");
    GenusSymbol s;
    s.det2t = det_big(two_t);
    s.rank = two_t.rows();
    s.two = jordan_two(two_t);
    for (auto& [p, e] : factor_big(s.det2t)) {
        if (p == 2) continue;
        long pl = p.get_si();
        s.odd.push_back({pl, jordan_odd(two_t, pl)});
    }
    check_consistency(oddity_formula_holds(s), "genus symbol violates the oddity formula");
    return s;
}

// ---------------------------------------------------------------- printing

namespace {

std::string scale_str(long p, int e) { return to_string(int_pow(BigInt(p), static_cast<unsigned long>(e))); }

std::string sign_dim(int sign, int dim) { return std::string(sign > 0 ? "+" : "-") + std::to_string(dim); }

void append_odd(std::vector<std::string>& toks, long p, const OddConstituent& c, bool full) {
    if (c.scale_exp == 0 && !full) return;
    toks.push_back(scale_str(p, c.scale_exp) + "^{" + sign_dim(c.sign, c.dim) + "}");
}

void append_two(std::vector<std::string>& toks, const TwoConstituent& c, bool full) {
    if (c.scale_exp == 0 && !full) return;
    std::string t = scale_str(2, c.scale_exp) + "^{" + sign_dim(c.sign, c.dim) + "}";
    if (c.type1) t += "_" + std::to_string(c.oddity);
    toks.push_back(t);
}

std::string join(const std::vector<std::string>& toks) {
    std::string out;
    for (auto& t : toks) {
        if (!out.empty()) out += " ";
        out += t;
    }
    return out;
}

std::string format_impl(const GenusSymbol& s, bool full) {
    std::vector<std::string> toks;
    for (auto& c : s.two) append_two(toks, c, full);
    for (auto& o : s.odd)
        for (auto& c : o.constituents) append_odd(toks, o.p, c, full);
    return join(toks);
}

}  // namespace

std::string format_symbol(const GenusSymbol& s) { return format_impl(s, false); }
std::string format_symbol_full(const GenusSymbol& s) { return format_impl(s, true); }

// ----------------------------------------------------------------- parsing

namespace {

struct Token {
    BigInt q;
    int sign;
    int dim;
    bool has_oddity;
    int oddity;
};

std::string normalize_minus(const std::string& text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        // U+2212 MINUS SIGN is E2 88 92 in UTF-8
        if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x88 &&
            static_cast<unsigned char>(text[i + 2]) == 0x92) {
            out.push_back('-');
            i += 2;
            continue;
        }
        out.push_back(text[i]);
    }
    return out;
}

Token parse_token(const std::string& tok) {
    Token t{};
    auto caret = tok.find('^');
    if (caret == std::string::npos || caret == 0) throw UsageError("malformed constituent: " + tok);
    std::string qs = tok.substr(0, caret);
    for (char c : qs)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw UsageError("malformed scale in: " + tok);
    t.q = BigInt(qs);
    if (t.q < 1) throw UsageError("scale must be positive: " + tok);
    std::string rest = tok.substr(caret + 1);
    std::string exp;
    std::size_t pos = 0;
    if (!rest.empty() && rest[0] == '{') {
        auto close = rest.find('}');
        if (close == std::string::npos) throw UsageError("unterminated exponent in: " + tok);
        exp = rest.substr(1, close - 1);
        pos = close + 1;
    } else {
        while (pos < rest.size() && rest[pos] != '_') ++pos;
        exp = rest.substr(0, pos);
    }
    if (exp.empty()) throw UsageError("missing exponent in: " + tok);
    t.sign = 1;
    std::size_t i = 0;
    if (exp[0] == '+' || exp[0] == '-') {
        t.sign = exp[0] == '-' ? -1 : 1;
        i = 1;
    }
    std::string ds = exp.substr(i);
    if (ds.empty()) throw UsageError("missing dimension in: " + tok);
    for (char c : ds)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw UsageError("malformed dimension in: " + tok);
    t.dim = std::stoi(ds);
    if (t.dim < 0) throw UsageError("negative dimension in: " + tok);
    t.has_oddity = false;
    if (pos < rest.size()) {
        if (rest[pos] != '_') throw UsageError("unexpected text in: " + tok);
        std::string od = rest.substr(pos + 1);
        if (!od.empty() && od.front() == '{' && od.back() == '}') od = od.substr(1, od.size() - 2);
        if (od.empty()) throw UsageError("missing oddity in: " + tok);
        for (char c : od)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw UsageError("malformed oddity in: " + tok);
        t.has_oddity = true;
        t.oddity = std::stoi(od) % 8;
    }
    return t;
}

// q = p^e with p prime; q == 1 gives p = 0.
std::pair<long, int> prime_power(const BigInt& q, const std::string& tok) {
    if (q == 1) return {0, 0};
    auto f = factor_big(q);
    if (f.size() != 1) throw UsageError("scale is not a prime power: " + tok);
    return {f[0].first.get_si(), f[0].second};
}

long unit_part_mod(const BigInt& d, long p, long m) {
    BigInt x = abs(d);
    while (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p))) x /= p;
    if (d < 0) x = -x;
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(m));
    return r.get_si();
}

}  // namespace

bool two_constituent_valid(const TwoConstituent& c) {
    if (c.dim < 0) return false;
    if (!c.type1) return c.dim % 2 == 0;
    if (c.dim == 0) return false;
    if ((c.oddity - c.dim) % 2 != 0) return false;
    if (c.dim >= 3) return true;
    const int units[4] = {1, 3, 5, 7};
    if (c.dim == 1) {
        for (int u : units)
            if (mod8_sign(u) == c.sign && u == c.oddity) return true;
        return false;
    }
    for (int u : units)
        for (int w : units)
            if (mod8_sign(u * w) == c.sign && (u + w) % 8 == c.oddity) return true;
    return false;
}

bool oddity_formula_holds(const GenusSymbol& s) {
    int total = 0;
    for (auto& c : s.two) {
        if (c.type1) total += c.oddity;
        if (c.scale_exp % 2 == 1 && c.sign == -1) total += 4;
    }
    for (auto& op : s.odd)
        for (auto& c : op.constituents) {
            // p-excess: n (q - 1) + 4 for odd-power scales with sign -1
            std::int64_t qm = 1;
            for (int i = 0; i < c.scale_exp; ++i) qm = (qm * op.p) % 8;
            total -= static_cast<int>(((qm - 1 + 8) % 8) * c.dim % 8);
            if (c.scale_exp % 2 == 1 && c.sign == -1) total -= 4;
        }
    return ((total - s.rank) % 8 + 8) % 8 == 0;
}

GenusSymbol parse_symbol(const std::string& text0, const BigInt& det2t, int rank) {
    if (det2t <= 0) throw UsageError("det(2t) must be positive");
    if (rank < 1) throw UsageError("rank must be positive");
    std::string text = normalize_minus(text0);
    std::vector<std::string> toks;
    {
        std::istringstream is(text);
        std::string t;
        while (is >> t) toks.push_back(t);
    }
    std::vector<long> needed{2};
    for (auto& [p, e] : factor_big(det2t))
        if (p != 2) needed.push_back(p.get_si());
    std::vector<std::pair<long, Token>> parsed;
    std::vector<std::size_t> pending;  // scale-1 tokens awaiting a prime
    for (auto& ts : toks) {
        Token t = parse_token(ts);
        auto [p, e] = prime_power(t.q, ts);
        parsed.push_back({p, t});
        if (p == 0) {
            pending.push_back(parsed.size() - 1);
            continue;
        }
        // a run of scale-1 tokens ends with the unit constituent of p; earlier
        // ones belong to the preceding primes that have no other constituent
        auto it = std::find(needed.begin(), needed.end(), p);
        if (it == needed.end()) throw UsageError("symbol mentions prime " + std::to_string(p) + " not dividing 2*det(2t)");
        auto pos = static_cast<std::ptrdiff_t>(it - needed.begin());
        for (std::size_t r = 0; r < pending.size(); ++r) {
            std::ptrdiff_t target = pos - static_cast<std::ptrdiff_t>(pending.size() - 1 - r);
            if (target < 0) throw UsageError("too many scale-1 constituents");
            parsed[pending[r]].first = needed[static_cast<std::size_t>(target)];
        }
        pending.clear();
    }
    if (!pending.empty()) throw UsageError("scale-1 constituent must be followed by a constituent of its prime");

    GenusSymbol s;
    s.det2t = det2t;
    s.rank = rank;
    std::map<long, std::vector<Token>> by_prime;
    for (auto& [p, t] : parsed) by_prime[p].push_back(t);

    for (long p : needed) {
        std::vector<Token> ts = by_prime.count(p) ? by_prime[p] : std::vector<Token>{};
        std::map<int, Token> by_e;
        for (auto& t : ts) {
            int e = valuation(t.q, p);
            if (t.q == 1) e = 0;
            if (by_e.count(e)) throw UsageError("repeated scale in symbol");
            by_e[e] = t;
        }
        int used_dim = 0;
        BigInt pe = 1;
        int sign_prod = 1;
        int det_val = 0;
        for (auto& [e, t] : by_e) {
            used_dim += t.dim;
            det_val += e * t.dim;
            if (e > 0) sign_prod *= t.sign;
        }
        if (det_val != valuation(det2t, p)) throw UsageError("symbol is incompatible with det(2t) at p=" + std::to_string(p));
        int unit_sign;
        if (p == 2)
            unit_sign = mod8_sign(unit_part_mod(det2t, 2, 8));
        else
            unit_sign = legendre64(unit_part_mod(det2t, p, p), p);
        int sign_total = unit_sign;
        if (!by_e.count(0)) {
            int d0 = rank - used_dim;
            if (d0 < 0) throw UsageError("symbol dimensions exceed the rank");
            Token t{1, sign_total * sign_prod, d0, false, 0};
            if (d0 > 0) by_e[0] = t;
            if (d0 == 0 && sign_total * sign_prod != 1) throw UsageError("signs incompatible with det(2t)");
        } else {
            if (used_dim != rank) throw UsageError("symbol dimensions do not add up to the rank");
            if (by_e[0].sign * sign_prod != sign_total) throw UsageError("signs incompatible with det(2t)");
        }
        int total_dim = 0;
        for (auto& [e, t] : by_e) total_dim += t.dim;
        if (total_dim != rank) throw UsageError("symbol dimensions do not add up to the rank");
        if (p == 2) {
            for (auto& [e, t] : by_e) {
                if (t.dim == 0) continue;
                TwoConstituent c{e, t.sign, t.dim, t.has_oddity, t.has_oddity ? t.oddity : 0};
                if (e == 0 && c.type1) throw UsageError("2t must be even: the scale-1 constituent at 2 must be even");
                if (!two_constituent_valid(c)) throw UsageError("invalid 2-adic constituent");
                s.two.push_back(c);
            }
        } else {
            OddPart op{p, {}};
            for (auto& [e, t] : by_e) {
                if (t.dim == 0) continue;
                if (t.has_oddity) throw UsageError("oddity given for an odd prime");
                op.constituents.push_back({e, t.sign, t.dim});
            }
            s.odd.push_back(op);
        }
    }
    if (!oddity_formula_holds(s)) throw UsageError("symbol violates the oddity formula");
    return s;
}

// --------------------------------------------------------------- canonical

std::vector<TwoConstituent> canonical_two_adic(const std::vector<TwoConstituent>& s) {
    if (s.empty()) return s;
    int maxe = 0;
    for (auto& c : s) maxe = std::max(maxe, c.scale_exp);
    // fill every scale 0..maxe; missing scales are zero-dimensional and even
    std::vector<TwoConstituent> f(static_cast<std::size_t>(maxe) + 1);
    for (int e = 0; e <= maxe; ++e) f[static_cast<std::size_t>(e)] = {e, 1, 0, false, 0};
    for (auto& c : s) {
        f[static_cast<std::size_t>(c.scale_exp)] = c;
        if (!c.type1) f[static_cast<std::size_t>(c.scale_exp)].oddity = 0;
    }
    int L = static_cast<int>(f.size());
    // compartments: maximal runs of consecutive type I constituents
    std::vector<std::vector<int>> comps;
    for (int i = 0; i < L; ++i) {
        if (!f[i].type1) continue;
        if (i > 0 && f[i - 1].type1)
            comps.back().push_back(i);
        else
            comps.push_back({i});
    }
    // oddity fusion
    for (auto& c : comps) {
        int o = 0;
        for (int i : c) {
            o += f[i].oddity;
            f[i].oddity = 0;
        }
        f[c[0]].oddity = ((o % 8) + 8) % 8;
    }
    // trains: adjacent constituents share a train when one of them is type I
    std::vector<std::vector<int>> trains;
    for (int i = 0; i < L; ++i) {
        if (i > 0 && (f[i - 1].type1 || f[i].type1))
            trains.back().push_back(i);
        else
            trains.push_back({i});
    }
    // sign walking towards the start of each train
    for (auto& tr : trains) {
        for (int k = static_cast<int>(tr.size()) - 1; k >= 1; --k) {
            int t1 = tr[static_cast<std::size_t>(k)];
            if (f[t1].sign != -1) continue;
            f[t1].sign = 1;
            f[t1 - 1].sign = -f[t1 - 1].sign;
            for (auto& c : comps) {
                bool hit = std::find(c.begin(), c.end(), t1) != c.end() ||
                           std::find(c.begin(), c.end(), t1 - 1) != c.end();
                if (hit) f[c[0]].oddity = (f[c[0]].oddity + 4) % 8;
            }
        }
    }
    return f;
}

bool two_adic_equivalent(const std::vector<TwoConstituent>& a, const std::vector<TwoConstituent>& b) {
    auto strip = [](std::vector<TwoConstituent> v) {
        while (!v.empty() && v.back().dim == 0) v.pop_back();
        return v;
    };
    return strip(canonical_two_adic(a)) == strip(canonical_two_adic(b));
}

bool symbols_equivalent(const GenusSymbol& a, const GenusSymbol& b) {
    if (a.det2t != b.det2t || a.rank != b.rank) return false;
    if (a.odd != b.odd) return false;
    return two_adic_equivalent(a.two, b.two);
}

std::string local_key(const GenusSymbol& s, long p) {
    std::ostringstream os;
    os << "m" << s.rank << ":p" << p << ":";
    if (p == 2) {
        for (auto& c : canonical_two_adic(s.two)) {
            if (c.dim == 0 && c.sign == 1 && !c.type1) {
                os << c.scale_exp << ".";
                continue;
            }
            os << c.scale_exp << (c.sign > 0 ? "+" : "-") << c.dim << (c.type1 ? "I" : "II") << c.oddity << ".";
        }
    } else {
        const OddPart* op = s.odd_part(p);
        if (op)
            for (auto& c : op->constituents) os << c.scale_exp << (c.sign > 0 ? "+" : "-") << c.dim << ".";
        else
            os << "0+" << s.rank << ".";
    }
    return os.str();
}

std::string genus_key(const GenusSymbol& s) {
    std::string k = "d" + to_string(s.det2t);
    for (long p : s.primes()) k += "|" + local_key(s, p);
    return k;
}

// ---------------------------------------------------------- representatives

IntMatrix odd_representative(const std::vector<OddConstituent>& cs, long p) {
    int n = 0;
    for (auto& c : cs) n += c.dim;
    IntMatrix a(n, n);
    long nonres = 2;
    while (legendre64(nonres, p) != -1) ++nonres;
    int pos = 0;
    for (auto& c : cs) {
        std::int64_t q = ipow64(p, c.scale_exp);
        // entries 2 q w_i with Legendre(prod 2 w_i) = sign
        int base = legendre64(ipow64(2, c.dim % 2 == 0 ? 0 : 1), p);
        std::int64_t last = (base == c.sign) ? 1 : nonres;
        for (int i = 0; i < c.dim; ++i) {
            std::int64_t w = (i == c.dim - 1) ? last : 1;
            a(pos + i, pos + i) = checked_mul(2 * q, w);
        }
        pos += c.dim;
    }
    return a;
}

IntMatrix two_adic_representative(const std::vector<TwoConstituent>& cs) {
    int n = 0;
    for (auto& c : cs) n += c.dim;
    IntMatrix a(n, n);
    int pos = 0;
    for (auto& c : cs) {
        if (!two_constituent_valid(c)) throw UsageError("invalid 2-adic constituent");
        std::int64_t q = ipow64(2, c.scale_exp);
        if (!c.type1) {
            for (int b = 0; b < c.dim / 2; ++b) {
                bool use_e = (c.sign == -1 && b == 0);
                int i = pos + 2 * b;
                a(i, i) = use_e ? 2 * q : 0;
                a(i + 1, i + 1) = use_e ? 2 * q : 0;
                a(i, i + 1) = a(i + 1, i) = q;
            }
        } else {
            if (c.scale_exp == 0) throw UsageError("odd scale-1 constituent cannot occur in 2t");
            std::vector<int> units(static_cast<std::size_t>(c.dim), 1);
            int free = std::min(c.dim, 3);
            int fixed_sum = c.dim - free;
            bool found = false;
            const int choices[4] = {1, 3, 5, 7};
            std::vector<int> idx(static_cast<std::size_t>(free), 0);
            for (int code = 0; code < (1 << (2 * free)) && !found; ++code) {
                int sum = fixed_sum, prod = 1;
                for (int k = 0; k < free; ++k) {
                    int u = choices[(code >> (2 * k)) & 3];
                    idx[static_cast<std::size_t>(k)] = u;
                    sum += u;
                    prod = (prod * u) % 8;
                }
                if (sum % 8 == c.oddity && mod8_sign(prod) == c.sign) {
                    for (int k = 0; k < free; ++k) units[static_cast<std::size_t>(fixed_sum + k)] = idx[static_cast<std::size_t>(k)];
                    found = true;
                }
            }
            if (!found) throw UsageError("no diagonal realization of a 2-adic constituent");
            for (int i = 0; i < c.dim; ++i) a(pos + i, pos + i) = q * units[static_cast<std::size_t>(i)];
        }
        pos += c.dim;
    }
    return a;
}

IntMatrix local_representative(const GenusSymbol& s, long p) {
    if (p == 2) return two_adic_representative(s.two);
    const OddPart* op = s.odd_part(p);
    if (!op) return odd_representative({{0, 1, s.rank}}, p);
    return odd_representative(op->constituents, p);
}

}  // namespace siegel
