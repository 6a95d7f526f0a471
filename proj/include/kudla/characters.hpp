#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kudla/ball.hpp"
#include "kudla/imquad.hpp"
#include "kudla/padic.hpp"

namespace kudla {

// alg * e(angle), angle in Q/Z
struct CharValue {
    KElem alg;
    Q angle = 0;
    bool zero = false;

    CharValue operator*(const CharValue& o) const;
    CharValue inv() const;
    CBall to_complex(const Field& F) const;
    // folds e(angle) into alg when it is a root of unity of K
    std::optional<KElem> in_field(const Field& F) const;
};

// e(j/m) as an element of K when m divides w_K
std::optional<KElem> root_of_unity_in_k(const Field& F, const Q& angle);

// Fixes the identification of complex and p-adic (p-1)-th roots of unity:
// e(1/(p-1)) <-> teichmuller(g), with g chosen so roots of unity of K match iota_p.
struct RootIdent {
    long p = 5;
    long g = 2;
    long N = 30;
    Zp tg;
    static RootIdent make(const Field& F, const PadicEmbedding& iota);
    Zp root(const Q& angle) const;   // iota_p(e(angle)), angle denominator dividing p-1
    long dlog(long x) const;         // index of x mod p relative to g
};

struct HeckeChar {
    Field F;
    Ideal cond = Ideal::unit();
    std::vector<Ideal> cond_primes;
    long a = 0, b = 0;
    std::function<Q(const KElem&)> fin;  // integral mu coprime to cond -> angle; empty means trivial
    long modulus = 1;                    // class reps are coprime to this
    ClassGroup G;
    std::vector<long> branch;            // root choice per class-group basis element
    std::vector<int> basis;              // class indices of the basis
    std::vector<long> orders;
    std::vector<CBall> class_val;        // value on G.reps[i]

    // construction checks unit compatibility and fills class values
    static HeckeChar make(const Field& F, long a, long b, const Ideal& cond,
                          std::function<Q(const KElem&)> fin, std::vector<long> branch = {},
                          long modulus = 1);

    long weight() const { return b - a; }
    bool coprime(const Ideal& A) const;
    Q fin_angle(const KElem& mu) const;
    CharValue principal_value(const KElem& mu) const;
    std::optional<CharValue> eval_exact(const Ideal& A) const;
    CBall eval(const Ideal& A) const;
    CharValue eval_or_throw(const Ideal& A) const;
};

HeckeChar trivial_char(const Field& F, long modulus = 1);
HeckeChar norm_char(const Field& F, long modulus = 1);
// weight k unitary, infinity type (-k/2, k/2), unramified
HeckeChar unramified_weight_char(const Field& F, long k, std::vector<long> branch = {}, long modulus = 1);
// class group character given by root choices along the class-group basis
HeckeChar class_char(const Field& F, std::vector<long> branch, long modulus = 1);
// type (m, 0) character for CM forms; finite part on the ramified prime when units force it
HeckeChar cm_char(const Field& F, long m, long modulus = 1);
HeckeChar char_mul(const HeckeChar& x, const HeckeChar& y);
HeckeChar char_inv(const HeckeChar& x);
HeckeChar char_pow(const HeckeChar& x, long e);

// p-adic realization (class number one)
struct PadicHeckeChar {
    HeckeChar base;
    PadicEmbedding iota;
    RootIdent roots;

    Zp eval(const Ideal& A) const;
    Zp eval_principal_value(const CharValue& v) const;
    // idele with principal part mu (coprime to p f), uniformizer powers at primes away from p f,
    // and local units at P, Pbar
    struct Idele {
        std::optional<KElem> principal;
        std::vector<std::pair<Ideal, long>> primes;
        std::optional<Zp> at_P, at_Pbar;
    };
    Zp eval_idele(const Idele& x) const;
};

PadicHeckeChar to_padic(const HeckeChar& phi, long p, long N);

// alpha: infinity type (1,0), conductor P, finite type omega_P^{-1}
HeckeChar alpha_char(const Field& F, long p, long modulus = 1);
HeckeChar alpha_bar_char(const Field& F, long p, long modulus = 1);

// Lambda-adic family Xi = chi_{k0} alpha^{k0/2} alphabar^{-k0/2} A^{-1} Abar (class number one)
struct LambdaHeckeChar {
    HeckeChar chi0;
    long k0 = 0;
    long p = 5, N = 30, MT = 12;
    PadicEmbedding iota;
    RootIdent roots;
    // sign of the square-root branch on the tautological factors; -1 is the wrong branch
    int branch_sign = 1;

    LambdaElem eval(const Ideal& B) const;
};

LambdaHeckeChar xi_family(const HeckeChar& chi0, long p, long N, long MT);
HeckeChar specialize_xi(const LambdaHeckeChar& Xi, const ArithmeticPoint& P);

}  // namespace kudla
