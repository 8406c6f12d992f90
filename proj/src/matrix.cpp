#include "siegel/matrix.hpp"

#include <sstream>

namespace siegel {

ColumnReduction rref_columns(const QMatrix& m) {
    // Work on the transpose: rows of t are columns of m, scaled to integers.
    int nr = m.rows(), nc = m.cols();
    std::vector<std::vector<BigInt>> t(static_cast<std::size_t>(nc), std::vector<BigInt>(static_cast<std::size_t>(nr)));
    std::vector<std::vector<BigRat>> tr(static_cast<std::size_t>(nc), std::vector<BigRat>(static_cast<std::size_t>(nc)));
    for (int j = 0; j < nc; ++j) {
        BigInt l = 1;
        for (int i = 0; i < nr; ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (int i = 0; i < nr; ++i) {
            BigRat v = m(i, j) * l;
            t[j][i] = v.get_num();
        }
        tr[j][j] = BigRat(l);
    }
    auto normalize = [&](int j) {
        BigInt g = 0;
        for (auto& v : t[j]) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g > 1) {
            for (auto& v : t[j]) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
            for (auto& v : tr[j]) v /= g;
        }
    };
    ColumnReduction res;
    int piv_col = 0;
    for (int row = 0; row < nr && piv_col < nc; ++row) {
        int sel = -1;
        for (int j = piv_col; j < nc; ++j)
            if (t[j][row] != 0) {
                sel = j;
                break;
            }
        if (sel < 0) continue;
        std::swap(t[sel], t[piv_col]);
        std::swap(tr[sel], tr[piv_col]);
        normalize(piv_col);
        const BigInt p = t[piv_col][row];
        for (int j = 0; j < nc; ++j) {
            if (j == piv_col || t[j][row] == 0) continue;
            BigInt a = t[j][row];
            BigInt g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
            BigInt pa = p / g, aa = a / g;
            for (int i = 0; i < nr; ++i) t[j][i] = pa * t[j][i] - aa * t[piv_col][i];
            for (int i = 0; i < nc; ++i) tr[j][i] = BigRat(pa) * tr[j][i] - BigRat(aa) * tr[piv_col][i];
            normalize(j);
        }
        res.pivot_rows.push_back(row);
        ++piv_col;
    }
    res.rank = piv_col;
    res.echelon = QMatrix(nr, nc);
    res.transform = QMatrix(nc, nc);
    for (int j = 0; j < nc; ++j) {
        for (int i = 0; i < nr; ++i) res.echelon(i, j) = BigRat(t[j][i]);
        for (int i = 0; i < nc; ++i) res.transform(i, j) = tr[j][i];
    }
    check_consistency(m * res.transform == res.echelon, "column reduction transform");
    return res;
}

std::string matrix_str(const QMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < m.rows(); ++i) {
        if (i) os << ", ";
        os << "[";
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ", ";
            os << to_string(m(i, j));
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace siegel
