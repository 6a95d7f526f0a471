#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kudla/imquad.hpp"

namespace kudla {

struct PrecisionError : std::runtime_error {
    long required;
    PrecisionError(const std::string& what, long req) : std::runtime_error(what), required(req) {}
};

// Element of Z_p known modulo p^N (absolute precision).
struct Zp {
    long p = 2;
    long N = 0;
    Z v = 0;

    Zp() = default;
    Zp(long p_, long N_, const Z& x);
    static Zp from_q(long p, long N, const Q& x);

    Z modulus() const;
    long valuation() const;  // capped at N
    bool is_unit() const { return valuation() == 0; }
    bool is_zero() const { return valuation() >= N; }

    Zp operator+(const Zp& o) const;
    Zp operator-(const Zp& o) const;
    Zp operator-() const;
    Zp operator*(const Zp& o) const;
    Zp operator/(const Zp& o) const;  // o must be a unit unless exact division is possible
    Zp& operator+=(const Zp& o) { return *this = *this + o; }
    Zp& operator-=(const Zp& o) { return *this = *this - o; }
    Zp& operator*=(const Zp& o) { return *this = *this * o; }
    Zp inv() const;
    Zp pow(const Z& e) const;
    Zp pow(long e) const { return pow(Z(e)); }
    Zp lift(long newN) const;       // same residue, declared at higher precision (caller vouches)
    Zp reduce(long newN) const;     // drop precision
    Zp div_p(long k) const;         // exact division by p^k

    // congruence to the common precision, or to prec if given
    bool eq(const Zp& o, long prec = -1) const;
    std::string str() const;
};

Zp teichmuller(long p, const Z& u, long N);
Zp log_p(const Zp& x);        // x = 1 mod p
Zp exp_p(const Zp& x);        // v(x) >= 1 (p odd)
Zp one_unit(const Zp& x);     // <x> = x / omega(x)

// iota_p: K -> Q_p determined by the prime above p with tau = -root mod P.
struct PadicEmbedding {
    long p;
    long N;
    Zp tau;
    static PadicEmbedding make(const Field& F, long p, long N);
    Zp operator()(const KElem& x) const;
};

// gamma = 1 + p; s(a) = log_p <a> / log_p gamma
Zp gamma_exponent(const Zp& a);

// Truncated power series in T over Z_p mod p^N, degree < MT.
struct LambdaElem {
    long p = 5;
    long N = 30;
    long MT = 12;
    std::vector<Zp> c;

    LambdaElem() = default;
    LambdaElem(long p_, long N_, long MT_);
    static LambdaElem constant(long p, long N, long MT, const Zp& a);
    static LambdaElem T(long p, long N, long MT);
    // (1+T)^s for s in Z_p
    static LambdaElem one_plus_T_pow(long p, long N, long MT, const Zp& s);

    LambdaElem operator+(const LambdaElem& o) const;
    LambdaElem operator-(const LambdaElem& o) const;
    LambdaElem operator*(const LambdaElem& o) const;
    LambdaElem scale(const Zp& a) const;
    bool operator==(const LambdaElem& o) const;
    bool is_zero() const;
    std::string str() const;
};

// P_{k,eps}: T -> gamma^k * eps(gamma) - 1. Only the trivial wild character is evaluable
// in Z_p; a nontrivial eps needs a ramified extension and is refused.
struct ArithmeticPoint {
    long k = 2;
    long eps_order_exp = 0;  // eps(gamma) a primitive p^r-th root of unity, r = this
    long eps_index = 0;
};

struct PointValue {
    Zp value;
    long precision;  // digits that are certified
};

PointValue arithmetic_point_eval(const LambdaElem& L, const ArithmeticPoint& P, long required = -1);
Zp gamma_pow(long p, long N, long k);

}  // namespace kudla
