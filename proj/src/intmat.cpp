#include "siegel/intmat.hpp"

#include <sstream>

namespace siegel {

namespace {

std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) consistency_failure("64-bit overflow in integer matrix arithmetic");
    return static_cast<std::int64_t>(v);
}

}  // namespace

IntMatrix::IntMatrix(int rows, int cols, std::vector<std::int64_t> data) : r_(rows), c_(cols), a_(std::move(data)) {
    if (static_cast<int>(a_.size()) != rows * cols) throw UsageError("matrix data size mismatch");
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
    IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = (*this)(rows[i], cols[j]);
    return m;
}

bool IntMatrix::is_symmetric() const {
    if (r_ != c_) return false;
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < i; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

bool IntMatrix::is_zero() const {
    for (auto v : a_)
        if (v) return false;
    return true;
}

void IntMatrix::swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMatrix::swap_cols(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < r_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

void IntMatrix::add_row(int i, int j, std::int64_t f) {
    if (f == 0) return;
    for (int k = 0; k < c_; ++k) (*this)(i, k) = checked_add((*this)(i, k), checked_mul(f, (*this)(j, k)));
}

void IntMatrix::add_col(int i, int j, std::int64_t f) {
    if (f == 0) return;
    for (int k = 0; k < r_; ++k) (*this)(k, i) = checked_add((*this)(k, i), checked_mul(f, (*this)(k, j)));
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.c_ != b.r_) throw UsageError("matrix dimension mismatch");
    IntMatrix m(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
        for (int j = 0; j < b.c_; ++j) {
            __int128 s = 0;
            for (int k = 0; k < a.c_; ++k) s += static_cast<__int128>(a(i, k)) * b(k, j);
            m(i, j) = narrow(s);
        }
    return m;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix m = a;
    for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = checked_add(m.a_[i], b.a_[i]);
    return m;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix m = a;
    for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = checked_add(m.a_[i], -b.a_[i]);
    return m;
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < r_; ++i) {
        if (i) os << ",";
        os << "[";
        for (int j = 0; j < c_; ++j) {
            if (j) os << ",";
            os << (*this)(i, j);
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

IntMatrix congruence(const IntMatrix& a, const IntMatrix& u) { return u.transpose() * a * u; }

BigInt det_big(const IntMatrix& a) {
    int n = a.rows();
    if (n != a.cols()) throw UsageError("determinant of non-square matrix");
    if (n == 0) return 1;
    std::vector<BigInt> m(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] = static_cast<long>(a(i, j));
    auto at = [&](int i, int j) -> BigInt& { return m[static_cast<std::size_t>(i) * n + j]; };
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (at(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                at(i, j) = at(k, k) * at(i, j) - at(i, k) * at(k, j);
                mpz_divexact(at(i, j).get_mpz_t(), at(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        prev = at(k, k);
    }
    return sign * at(n - 1, n - 1);
}

std::int64_t det64(const IntMatrix& a) {
    int n = a.rows();
    if (n != a.cols()) throw UsageError("determinant of non-square matrix");
    if (n == 0) return 1;
    std::int64_t m[16][16];
    if (n > 16) {
        BigInt d = det_big(a);
        if (!d.fits_slong_p()) consistency_failure("determinant exceeds 64 bits");
        return d.get_si();
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = a(i, j);
    std::int64_t prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m[k][j], m[piv][j]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                __int128 v = static_cast<__int128>(m[k][k]) * m[i][j] - static_cast<__int128>(m[i][k]) * m[k][j];
                m[i][j] = narrow(v / prev);
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

namespace {

struct BigMat {
    int r, c;
    std::vector<BigInt> a;
    BigMat(int rows, int cols) : r(rows), c(cols), a(static_cast<std::size_t>(rows) * cols) {}
    BigInt& at(int i, int j) { return a[static_cast<std::size_t>(i) * c + j]; }
    void swap_rows(int i, int j) {
        for (int k = 0; k < c; ++k) std::swap(at(i, k), at(j, k));
    }
    void swap_cols(int i, int j) {
        for (int k = 0; k < r; ++k) std::swap(at(k, i), at(k, j));
    }
    void add_row(int i, int j, const BigInt& f) {
        for (int k = 0; k < c; ++k) at(i, k) += f * at(j, k);
    }
    void add_col(int i, int j, const BigInt& f) {
        for (int k = 0; k < r; ++k) at(k, i) += f * at(k, j);
    }
    static BigMat identity(int n) {
        BigMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    IntMatrix to_int() {
        IntMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                if (!at(i, j).fits_slong_p()) consistency_failure("Smith transform exceeds 64 bits");
                m(i, j) = at(i, j).get_si();
            }
        return m;
    }
};

}  // namespace

SmithForm smith_form(const IntMatrix& a) {
    int n = a.rows(), m = a.cols();
    SmithForm res;
    BigMat s(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) s.at(i, j) = static_cast<long>(a(i, j));
    BigMat u = BigMat::identity(n), v = BigMat::identity(m);
    int t = 0;
    while (t < n && t < m) {
        int pi = -1, pj = -1;
        BigInt best = 0;
        for (int i = t; i < n; ++i)
            for (int j = t; j < m; ++j) {
                BigInt x = abs(s.at(i, j));
                if (x != 0 && (best == 0 || x < best)) {
                    best = x;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < n; ++i) {
                if (s.at(i, t) == 0) continue;
                BigInt q;
                mpz_fdiv_q(q.get_mpz_t(), s.at(i, t).get_mpz_t(), s.at(t, t).get_mpz_t());
                BigInt mq = -q;
                s.add_row(i, t, mq);
                u.add_row(i, t, mq);
                if (s.at(i, t) != 0) {
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    clean = false;
                }
            }
            for (int j = t + 1; j < m; ++j) {
                if (s.at(t, j) == 0) continue;
                BigInt q;
                mpz_fdiv_q(q.get_mpz_t(), s.at(t, j).get_mpz_t(), s.at(t, t).get_mpz_t());
                BigInt mq = -q;
                s.add_col(j, t, mq);
                v.add_col(j, t, mq);
                if (s.at(t, j) != 0) {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    clean = false;
                }
            }
            if (clean) {
                for (int i = t + 1; i < n && clean; ++i)
                    for (int j = t + 1; j < m; ++j)
                        if (!mpz_divisible_p(s.at(i, j).get_mpz_t(), s.at(t, t).get_mpz_t())) {
                            s.add_row(t, i, 1);
                            u.add_row(t, i, 1);
                            clean = false;
                            break;
                        }
            }
        }
        if (s.at(t, t) < 0) {
            for (int j = 0; j < m; ++j) s.at(t, j) = -s.at(t, j);
            for (int j = 0; j < n; ++j) u.at(t, j) = -u.at(t, j);
        }
        ++t;
    }
    res.s = s.to_int();
    res.u = u.to_int();
    res.v = v.to_int();
    for (int i = 0; i < std::min(n, m); ++i) res.diag.push_back(res.s(i, i));
    return res;
}

int int_rank(const IntMatrix& a) {
    auto sf = smith_form(a);
    int r = 0;
    for (auto d : sf.diag)
        if (d != 0) ++r;
    return r;
}

IntMatrix integer_kernel(const IntMatrix& a) {
    // Row-reduce [a^T | I]; rows whose left part vanishes span the kernel.
    int n = a.cols(), r = a.rows();
    IntMatrix aug(n, r + n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < r; ++j) aug(i, j) = a(j, i);
        aug(i, r + i) = 1;
    }
    IntMatrix h = hnf_rows(aug);
    std::vector<std::vector<std::int64_t>> ker;
    for (int i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (int j = 0; j < r; ++j)
            if (h(i, j) != 0) zero = false;
        if (!zero) continue;
        std::vector<std::int64_t> v;
        for (int j = 0; j < n; ++j) v.push_back(h(i, r + j));
        ker.push_back(v);
    }
    IntMatrix out(n, static_cast<int>(ker.size()));
    for (std::size_t k = 0; k < ker.size(); ++k)
        for (int i = 0; i < n; ++i) out(i, static_cast<int>(k)) = ker[k][static_cast<std::size_t>(i)];
    return out;
}

namespace {

// Inverse of a unimodular matrix via exact integer elimination.
IntMatrix unimodular_inverse(const IntMatrix& u) {
    int n = u.rows();
    auto sf = smith_form(u);
    for (auto d : sf.diag)
        if (d != 1) consistency_failure("matrix is not unimodular");
    // sf.u * u * sf.v = I  =>  u^{-1} = sf.v * sf.u
    return sf.v * sf.u;
    (void)n;
}

}  // namespace

IntMatrix complete_to_unimodular(const IntMatrix& cols) {
    int n = cols.rows(), k = cols.cols();
    auto sf = smith_form(cols);
    for (int i = 0; i < k; ++i)
        if (sf.diag[static_cast<std::size_t>(i)] != 1) consistency_failure("lattice is not saturated");
    IntMatrix w = unimodular_inverse(sf.u);
    IntMatrix out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n - k; ++j) out(i, j) = w(i, k + j);
        for (int j = 0; j < k; ++j) out(i, n - k + j) = w(i, j);
    }
    return out;
}

IntMatrix hnf_rows(const IntMatrix& a0) {
    IntMatrix a = a0;
    int n = a.rows(), m = a.cols();
    int row = 0;
    for (int col = 0; col < m && row < n; ++col) {
        // Euclid on column col among rows >= row
        for (;;) {
            int piv = -1;
            std::int64_t best = 0;
            for (int i = row; i < n; ++i) {
                std::int64_t x = a(i, col) < 0 ? -a(i, col) : a(i, col);
                if (x != 0 && (best == 0 || x < best)) {
                    best = x;
                    piv = i;
                }
            }
            if (piv < 0) break;
            a.swap_rows(row, piv);
            bool done = true;
            for (int i = row + 1; i < n; ++i) {
                if (a(i, col) == 0) continue;
                a.add_row(i, row, -(a(i, col) / a(row, col)));
                if (a(i, col) != 0) done = false;
            }
            if (done) break;
        }
        if (a(row, col) == 0) continue;
        if (a(row, col) < 0)
            for (int j = 0; j < m; ++j) a(row, j) = -a(row, j);
        for (int i = 0; i < row; ++i) {
            std::int64_t q = a(i, col) / a(row, col);
            if (mod64(a(i, col), a(row, col)) != a(i, col) - q * a(row, col)) --q;
            a.add_row(i, row, -q);
        }
        ++row;
    }
    IntMatrix out(row, m);
    for (int i = 0; i < row; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = a(i, j);
    return out;
}

namespace {

// Symmetric Bareiss elimination with positive diagonal pivots.
// Returns 1 for positive definite, 0 for psd singular, -1 for not psd.
int definiteness(const IntMatrix& a) {
    int n = a.rows();
    if (n != a.cols()) throw UsageError("not square");
    std::int64_t m[16][16];
    if (n > 16) throw UsageError("matrix too large");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = a(i, j);
    int idx[16];
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::int64_t prev = 1;
    int k = 0;
    bool singular = false;
    for (; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i) {
            std::int64_t d = m[idx[i]][idx[i]];
            if (d < 0) return -1;
            if (d > 0 && piv < 0) piv = i;
        }
        if (piv < 0) {
            for (int i = k; i < n; ++i)
                for (int j = k; j < n; ++j)
                    if (m[idx[i]][idx[j]] != 0) return -1;
            singular = true;
            break;
        }
        std::swap(idx[k], idx[piv]);
        std::int64_t p = m[idx[k]][idx[k]];
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                __int128 v = static_cast<__int128>(p) * m[idx[i]][idx[j]] -
                             static_cast<__int128>(m[idx[i]][idx[k]]) * m[idx[k]][idx[j]];
                m[idx[i]][idx[j]] = narrow(v / prev);
            }
        prev = p;
    }
    return singular ? 0 : 1;
}

int definiteness_big(const IntMatrix& a) {
    int n = a.rows();
    std::vector<std::vector<BigInt>> m(static_cast<std::size_t>(n), std::vector<BigInt>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = static_cast<long>(a(i, j));
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[i] = i;
    BigInt prev = 1;
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i) {
            const BigInt& d = m[idx[i]][idx[i]];
            if (d < 0) return -1;
            if (d > 0 && piv < 0) piv = i;
        }
        if (piv < 0) {
            for (int i = k; i < n; ++i)
                for (int j = k; j < n; ++j)
                    if (m[idx[i]][idx[j]] != 0) return -1;
            return 0;
        }
        std::swap(idx[k], idx[piv]);
        BigInt p = m[idx[k]][idx[k]];
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[idx[i]][idx[j]] = (p * m[idx[i]][idx[j]] - m[idx[i]][idx[k]] * m[idx[k]][idx[j]]) / prev;
        prev = p;
    }
    return 1;
}

int definiteness_any(const IntMatrix& a) {
    try {
        return definiteness(a);
    } catch (const ConsistencyError&) {
        return definiteness_big(a);
    }
}

}  // namespace

bool is_psd(const IntMatrix& a) { return definiteness_any(a) >= 0; }
bool is_positive_definite(const IntMatrix& a) { return definiteness_any(a) == 1; }

}  // namespace siegel
