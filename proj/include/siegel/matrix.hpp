#pragma once

#include <optional>
#include <string>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/poly.hpp"

namespace siegel {

template <class R>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, R(0)) {}
    Matrix(int rows, int cols, const R& fill)
        : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = R(1);
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    R& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    const R& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

    Matrix transpose() const {
        Matrix t(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.c_ != b.r_) throw UsageError("matrix dimension mismatch");
        Matrix m(a.r_, b.c_);
        for (int i = 0; i < a.r_; ++i)
            for (int k = 0; k < a.c_; ++k) {
                const R& x = a(i, k);
                if (x == R(0)) continue;
                for (int j = 0; j < b.c_; ++j) m(i, j) = m(i, j) + x * b(k, j);
            }
        return m;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        Matrix m = a;
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = m.a_[i] + b.a_[i];
        return m;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        Matrix m = a;
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = m.a_[i] - b.a_[i];
        return m;
    }
    friend Matrix operator*(const R& s, const Matrix& a) {
        Matrix m = a;
        for (auto& v : m.a_) v = s * v;
        return m;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }

    std::vector<R> row(int i) const {
        return std::vector<R>(a_.begin() + static_cast<std::ptrdiff_t>(i) * c_,
                              a_.begin() + static_cast<std::ptrdiff_t>(i + 1) * c_);
    }
    std::vector<R> col(int j) const {
        std::vector<R> v;
        for (int i = 0; i < r_; ++i) v.push_back((*this)(i, j));
        return v;
    }

    Matrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
        Matrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = (*this)(rows[i], cols[j]);
        return m;
    }

    std::vector<R> apply(const std::vector<R>& v) const {
        std::vector<R> out(static_cast<std::size_t>(r_), R(0));
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out[i] = out[i] + (*this)(i, j) * v[static_cast<std::size_t>(j)];
        return out;
    }

private:
    int r_ = 0, c_ = 0;
    std::vector<R> a_;
};

using QMatrix = Matrix<BigRat>;

// Row echelon data from Gaussian elimination over a field.
template <class R>
struct Echelon {
    Matrix<R> reduced;          // reduced row echelon form
    std::vector<int> pivots;    // pivot column per nonzero row
    int rank = 0;
};

template <class R>
Echelon<R> row_echelon(Matrix<R> m) {
    Echelon<R> e;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < m.rows(); ++i)
            if (!(m(i, col) == R(0))) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
        R inv = R(1) / m(row, col);
        for (int j = 0; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == R(0)) continue;
            R f = m(i, col);
            for (int j = 0; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(row, j);
        }
        e.pivots.push_back(col);
        ++row;
    }
    e.rank = row;
    e.reduced = std::move(m);
    return e;
}

template <class R>
int rank_of(const Matrix<R>& m) {
    return row_echelon(m).rank;
}

// Basis of the right kernel {x : m x = 0}, as columns.
template <class R>
std::vector<std::vector<R>> kernel_basis(const Matrix<R>& m) {
    auto e = row_echelon(m);
    std::vector<bool> is_piv(static_cast<std::size_t>(m.cols()), false);
    for (int p : e.pivots) is_piv[static_cast<std::size_t>(p)] = true;
    std::vector<std::vector<R>> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_piv[static_cast<std::size_t>(f)]) continue;
        std::vector<R> v(static_cast<std::size_t>(m.cols()), R(0));
        v[static_cast<std::size_t>(f)] = R(1);
        for (int r = 0; r < e.rank; ++r) v[static_cast<std::size_t>(e.pivots[r])] = -e.reduced(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve m x = b; nullopt when inconsistent. Free variables set to zero.
template <class R>
std::optional<std::vector<R>> solve_linear(const Matrix<R>& m, const std::vector<R>& b) {
    Matrix<R> aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[static_cast<std::size_t>(i)];
    }
    auto e = row_echelon(aug);
    for (int p : e.pivots)
        if (p == m.cols()) return std::nullopt;
    std::vector<R> x(static_cast<std::size_t>(m.cols()), R(0));
    for (int r = 0; r < e.rank; ++r) x[static_cast<std::size_t>(e.pivots[r])] = e.reduced(r, m.cols());
    return x;
}

template <class R>
R determinant(Matrix<R> m) {
    if (m.rows() != m.cols()) throw UsageError("determinant of non-square matrix");
    int n = m.rows();
    R det = R(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (!(m(i, c) == R(0))) {
                piv = i;
                break;
            }
        if (piv < 0) return R(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            det = -det;
        }
        det = det * m(c, c);
        R inv = R(1) / m(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (m(i, c) == R(0)) continue;
            R f = m(i, c) * inv;
            for (int j = c; j < n; ++j) m(i, j) = m(i, j) - f * m(c, j);
        }
    }
    return det;
}

template <class R>
Matrix<R> inverse(const Matrix<R>& m) {
    int n = m.rows();
    Matrix<R> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = R(1);
    }
    auto e = row_echelon(aug);
    if (e.rank < n || e.pivots[static_cast<std::size_t>(n - 1)] != n - 1) throw UsageError("singular matrix");
    Matrix<R> inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

// Characteristic polynomial det(x I - m) via Hessenberg reduction.
template <class R>
Poly<R> charpoly(Matrix<R> h) {
    int n = h.rows();
    for (int m = 1; m < n - 1; ++m) {
        int piv = -1;
        for (int i = m; i < n; ++i)
            if (!(h(i, m - 1) == R(0))) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != m) {
            for (int j = 0; j < n; ++j) std::swap(h(piv, j), h(m, j));
            for (int i = 0; i < n; ++i) std::swap(h(i, piv), h(i, m));
        }
        R inv = R(1) / h(m, m - 1);
        for (int i = m + 1; i < n; ++i) {
            if (h(i, m - 1) == R(0)) continue;
            R f = h(i, m - 1) * inv;
            for (int j = 0; j < n; ++j) h(i, j) = h(i, j) - f * h(m, j);
            for (int j = 0; j < n; ++j) h(j, m) = h(j, m) + f * h(j, i);
        }
    }
    std::vector<Poly<R>> p(static_cast<std::size_t>(n) + 1);
    p[0] = Poly<R>(R(1));
    Poly<R> xpoly = Poly<R>::monomial(R(1), 1);
    for (int m = 1; m <= n; ++m) {
        p[m] = (xpoly - Poly<R>(h(m - 1, m - 1))) * p[m - 1];
        R t = R(1);
        for (int i = 1; i < m; ++i) {
            t = t * h(m - i, m - i - 1);
            p[m] = p[m] - Poly<R>(t * h(m - i - 1, m - 1)) * p[m - i - 1];
        }
    }
    return p[n];
}

// Column reduction of the input into column echelon form. Returns the
// column operation matrix C (m * C = echelon) and the pivot rows.
struct ColumnReduction {
    QMatrix echelon;
    QMatrix transform;
    std::vector<int> pivot_rows;
    int rank = 0;
};

ColumnReduction rref_columns(const QMatrix& m);

std::string matrix_str(const QMatrix& m);

}  // namespace siegel
