#pragma once

#include <map>
#include <string>
#include <vector>

#include "kudla/imquad.hpp"

namespace kudla {

// Monomial: symbol -> rational exponent (half-integer powers of q occur in the Euler tables)
using Monomial = std::map<std::string, Q>;

// Finite sum of rational multiples of monomials. Symbols may carry a torsion order
// (e.g. eps(q)^2 = 1 at a ramified prime), applied by reduce().
class Laurent {
public:
    Laurent() = default;
    Laurent(const Q& c);
    Laurent(long c) : Laurent(Q(c)) {}
    static Laurent sym(const std::string& s, const Q& e = 1);

    Laurent& operator+=(const Laurent& o);
    Laurent& operator-=(const Laurent& o);
    Laurent& operator*=(const Laurent& o);
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    friend Laurent operator*(Laurent a, const Laurent& b) { return a *= b; }
    Laurent operator-() const;
    Laurent pow(long e) const;  // negative e only for monomials

    // exponents of symbols with a torsion order are reduced into [0, order)
    Laurent reduce(const std::map<std::string, long>& orders) const;
    // coefficient of s^e, as a Laurent polynomial in the remaining symbols
    Laurent coeff(const std::string& s, const Q& e) const;
    Q max_exponent(const std::string& s) const;
    // every term is divisible by s^e with nonnegative exponents in the listed integral symbols
    bool divisible_by(const std::string& s, const Q& e, const std::vector<std::string>& integral) const;

    bool is_zero() const { return t_.empty(); }
    bool operator==(const Laurent& o) const { return t_ == o.t_; }
    const std::map<Monomial, Q>& terms() const { return t_; }
    std::string str() const;

private:
    std::map<Monomial, Q> t_;
    void add_term(const Monomial& m, const Q& c);
};

}  // namespace kudla
