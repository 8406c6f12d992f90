#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "siegel/arith.hpp"

namespace siegel {

// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
template <class R>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<R> c) : c_(std::move(c)) { trim(); }
    Poly(const R& constant) : c_{constant} { trim(); }  // NOLINT(google-explicit-constructor)

    static Poly monomial(const R& coeff, int deg) {
        std::vector<R> c(static_cast<std::size_t>(deg) + 1, zero_like(coeff));
        c[static_cast<std::size_t>(deg)] = coeff;
        return Poly(std::move(c));
    }
    static Poly x() { return monomial(R(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<R>& coeffs() const { return c_; }
    R coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return R(0);
        return c_[static_cast<std::size_t>(i)];
    }
    R leading() const { return c_.empty() ? R(0) : c_.back(); }

    template <class S>
    S eval(const S& x) const {
        S acc = S(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + S(*it);
        return acc;
    }
    R operator()(const R& x) const { return eval<R>(x); }

    Poly operator-() const {
        std::vector<R> c = c_;
        for (auto& v : c) v = -v;
        return Poly(std::move(c));
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += -o; }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<R> c(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend Poly operator*(const Poly& a, const R& s) {
        std::vector<R> c = a.c_;
        for (auto& v : c) v = v * s;
        return Poly(std::move(c));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Euclidean division over a field.
    void divmod(const Poly& d, Poly& q, Poly& r) const {
        if (d.is_zero()) throw UsageError("polynomial division by zero");
        r = *this;
        if (degree() < d.degree()) {
            q = Poly();
            return;
        }
        std::vector<R> qc(static_cast<std::size_t>(degree() - d.degree() + 1), R(0));
        R lead = d.leading();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int shift = r.degree() - d.degree();
            R f = r.leading() / lead;
            qc[static_cast<std::size_t>(shift)] = f;
            std::vector<R> rc = r.c_;
            for (int i = 0; i <= d.degree(); ++i)
                rc[static_cast<std::size_t>(i + shift)] =
                    rc[static_cast<std::size_t>(i + shift)] - f * d.c_[static_cast<std::size_t>(i)];
            rc.pop_back();
            r = Poly(std::move(rc));
        }
        q = Poly(std::move(qc));
    }
    friend Poly operator/(const Poly& a, const Poly& b) {
        Poly q, r;
        a.divmod(b, q, r);
        return q;
    }
    friend Poly operator%(const Poly& a, const Poly& b) {
        Poly q, r;
        a.divmod(b, q, r);
        return r;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<R> c(c_.size() - 1, R(0));
        for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * R(static_cast<long>(i));
        return Poly(std::move(c));
    }

    Poly monic() const {
        if (is_zero()) return *this;
        R inv = R(1) / leading();
        return *this * inv;
    }

    // p(c x)
    Poly scale_var(const R& s) const {
        std::vector<R> c = c_;
        R pw = R(1);
        for (auto& v : c) {
            v = v * pw;
            pw = pw * s;
        }
        return Poly(std::move(c));
    }

    // x^d p(1/x) for d >= degree
    Poly reversed(int d) const {
        std::vector<R> c(static_cast<std::size_t>(d) + 1, R(0));
        for (int i = 0; i <= degree(); ++i) c[static_cast<std::size_t>(d - i)] = c_[static_cast<std::size_t>(i)];
        return Poly(std::move(c));
    }

    Poly truncated(int deg) const {
        std::vector<R> c;
        for (int i = 0; i <= deg && i <= degree(); ++i) c.push_back(c_[static_cast<std::size_t>(i)]);
        return Poly(std::move(c));
    }

    std::string str(const std::string& var = "X") const;

private:
    static R zero_like(const R&) { return R(0); }
    void trim() {
        while (!c_.empty() && c_.back() == R(0)) c_.pop_back();
    }
    std::vector<R> c_;
};

template <class R>
Poly<R> poly_gcd(Poly<R> a, Poly<R> b) {
    while (!b.is_zero()) {
        Poly<R> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

template <class R>
Poly<R> poly_pow(const Poly<R>& a, int e) {
    Poly<R> r(R(1));
    for (int i = 0; i < e; ++i) r *= a;
    return r;
}

using QPoly = Poly<BigRat>;

std::string format_rat_coeff_term(const BigRat& c, int deg, const std::string& var, bool first);

template <class R>
std::string Poly<R>::str(const std::string& var) const {
    std::ostringstream os;
    if (is_zero()) return "0";
    bool first = true;
    for (int i = 0; i <= degree(); ++i) {
        const R& c = c_[static_cast<std::size_t>(i)];
        if (c == R(0)) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        if (i == 1) os << "*" << var;
        if (i > 1) os << "*" << var << "^" << i;
    }
    return os.str();
}

template <>
std::string Poly<BigRat>::str(const std::string& var) const;

QPoly qpoly(std::initializer_list<long> coeffs);
QPoly parse_qpoly(const std::string& text, const std::string& var = "X");

}  // namespace siegel
