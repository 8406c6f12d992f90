#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siegel/arith.hpp"

namespace siegel {

// Small dense integer matrix with overflow-checked arithmetic.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}
    IntMatrix(int rows, int cols, std::vector<std::int64_t> data);
    static IntMatrix identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    std::int64_t& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    std::int64_t operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    const std::vector<std::int64_t>& data() const { return a_; }

    IntMatrix transpose() const;
    IntMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;
    bool is_symmetric() const;
    bool is_zero() const;
    void swap_rows(int i, int j);
    void swap_cols(int i, int j);
    // row_i += f * row_j, and the column analogue
    void add_row(int i, int j, std::int64_t f);
    void add_col(int i, int j, std::int64_t f);

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }
    friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }
    friend bool operator<(const IntMatrix& a, const IntMatrix& b) {
        if (a.r_ != b.r_) return a.r_ < b.r_;
        if (a.c_ != b.c_) return a.c_ < b.c_;
        return a.a_ < b.a_;
    }

    std::string str() const;

private:
    int r_ = 0, c_ = 0;
    std::vector<std::int64_t> a_;
};

// U^t A U for square A.
IntMatrix congruence(const IntMatrix& a, const IntMatrix& u);

BigInt det_big(const IntMatrix& a);
std::int64_t det64(const IntMatrix& a);
int int_rank(const IntMatrix& a);

// Smith normal form: u * a * v = s with s diagonal, s_ii | s_(i+1)(i+1), s_ii >= 0.
struct SmithForm {
    IntMatrix u, v, s;
    std::vector<std::int64_t> diag;
};
SmithForm smith_form(const IntMatrix& a);

// Columns form a basis of the integer kernel {x in Z^n : a x = 0}.
IntMatrix integer_kernel(const IntMatrix& a);

// Unimodular U whose last k columns span the saturated lattice spanned by the
// columns of `cols` (which must have rank k and be saturated).
IntMatrix complete_to_unimodular(const IntMatrix& cols);

// Row-style Hermite normal form of the lattice spanned by the rows of a.
IntMatrix hnf_rows(const IntMatrix& a);

bool is_psd(const IntMatrix& a);
bool is_positive_definite(const IntMatrix& a);

}  // namespace siegel
