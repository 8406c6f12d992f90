#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/matrix.hpp"
#include "siegel/poly.hpp"

namespace siegel {

// Q(theta) with theta a root of a monic irreducible rational polynomial.
class NumberField {
public:
    explicit NumberField(QPoly modulus, std::string var = "a");
    int degree() const { return modulus_.degree(); }
    const QPoly& modulus() const { return modulus_; }
    const std::string& var() const { return var_; }
    // Trace of theta^i for i < 2*degree, used for the trace form.
    const std::vector<BigRat>& power_traces() const { return traces_; }

private:
    QPoly modulus_;
    std::string var_;
    std::vector<BigRat> traces_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

// Element of a number field. A null field means a rational scalar that
// adapts to whatever field it meets.
class NFElem {
public:
    NFElem() : c_{BigRat(0)} {}
    NFElem(long v) : c_{BigRat(v)} {}            // NOLINT(google-explicit-constructor)
    NFElem(const BigRat& v) : c_{v} {}           // NOLINT(google-explicit-constructor)
    NFElem(FieldPtr f, const QPoly& rep);
    static NFElem generator(const FieldPtr& f);

    const FieldPtr& field() const { return f_; }
    bool is_rational() const;
    BigRat rational_value() const;  // throws unless is_rational()
    QPoly rep() const { return QPoly(c_); }
    BigRat trace() const;
    BigRat norm() const;
    QPoly minpoly() const;
    // Matrix of multiplication by this element in the power basis.
    QMatrix mult_matrix() const;

    friend NFElem operator+(const NFElem& a, const NFElem& b);
    friend NFElem operator-(const NFElem& a, const NFElem& b);
    friend NFElem operator*(const NFElem& a, const NFElem& b);
    friend NFElem operator/(const NFElem& a, const NFElem& b);
    NFElem operator-() const;
    NFElem inverse() const;
    friend bool operator==(const NFElem& a, const NFElem& b);
    friend bool operator!=(const NFElem& a, const NFElem& b) { return !(a == b); }

    std::string str() const;

private:
    static FieldPtr common(const NFElem& a, const NFElem& b);
    NFElem lifted(const FieldPtr& f) const;
    FieldPtr f_;
    std::vector<BigRat> c_;
};

std::ostream& operator<<(std::ostream& os, const NFElem& e);

struct PrimeIdealValuation {
    std::string ideal;   // "(p, a - r)" for degree-one primes, "(p)_f" otherwise
    int residue_degree = 1;
    int valuation = 0;
};
// Valuations of a nonzero x at the primes above p. Needs the modulus to be
// p-integral and squarefree mod p; returns nullopt otherwise.
std::optional<std::vector<PrimeIdealValuation>> prime_valuations(const NFElem& x, long p);

}  // namespace siegel
