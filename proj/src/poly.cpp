#include "siegel/poly.hpp"

#include <cctype>

namespace siegel {

template <>
std::string Poly<BigRat>::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (int i = 0; i <= degree(); ++i) {
        const BigRat& c = c_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        BigRat a = abs(c);
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += (c < 0) ? " - " : " + ";
        }
        first = false;
        bool unit = (a == 1);
        if (i == 0 || !unit) out += to_string(a);
        if (i >= 1) {
            if (!unit) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

QPoly qpoly(std::initializer_list<long> coeffs) {
    std::vector<BigRat> c;
    for (long v : coeffs) c.emplace_back(v);
    return QPoly(std::move(c));
}

QPoly parse_qpoly(const std::string& text, const std::string& var) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw UsageError("empty polynomial");
    QPoly result;
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        std::string term = s.substr(i, j - i);
        if (term.empty()) throw UsageError("malformed polynomial: " + text);
        BigRat coeff = 1;
        int deg = 0;
        auto pos = term.find(var);
        if (pos == std::string::npos) {
            coeff = parse_rat(term);
        } else {
            std::string cpart = term.substr(0, pos);
            if (!cpart.empty()) {
                if (cpart.back() != '*') throw UsageError("malformed polynomial term: " + term);
                cpart.pop_back();
                coeff = parse_rat(cpart);
            }
            std::string rest = term.substr(pos + var.size());
            if (rest.empty()) {
                deg = 1;
            } else {
                if (rest[0] != '^') throw UsageError("malformed polynomial term: " + term);
                deg = std::stoi(rest.substr(1));
                if (deg < 0) throw UsageError("negative exponent: " + term);
            }
        }
        result += QPoly::monomial(coeff * sign, deg);
        i = j;
    }
    return result;
}

}  // namespace siegel
