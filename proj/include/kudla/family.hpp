#pragma once

#include <string>
#include <vector>

#include "kudla/characters.hpp"
#include "kudla/lift.hpp"
#include "kudla/padic.hpp"
#include "kudla/qexp.hpp"

namespace kudla {

// Ordinary CM family through theta_cm(psi0), psi0 = cm_char(F, m0). The coefficients live in
// Lambda with the variable read at the weight w of the member: T -> gamma^w - 1.
// a_n = sum over N(A) = n, P not dividing A, of psi0(A) <iota mu>^{-w0} (1+T)^{s(iota mu)}, A = (mu).
struct CMHidaFamily {
    Field F;
    HeckeChar psi0;
    long m0 = 0;
    long w0 = 0;  // m0 + 1
    long p = 0, N = 0, MT = 0;
    PadicEmbedding iota;
    DirChar chi;
    long level = 1;  // level of the p-stabilized members
    std::vector<LambdaElem> a;
    long prec() const { return static_cast<long>(a.size()) - 1; }
};

CMHidaFamily cm_hida_family(const Field& F, long m0, long p, long N, long MT, long prec);
// the member of weight w (w = w0 mod p-1); coefficients reduced to the certified precision
QExp<Zp> specialize_family(const CMHidaFamily& Fm, long w);

LambdaElem lambda_inv(const LambdaElem& x);
// d^{w + extra - 1} for the member of weight w: omega(d)^{w0} (1+T)^{s(d)} d^{extra - 1}
LambdaElem universal_power(const CMHidaFamily& Fm, long d, long extra);

// Fm star g: the q-expansion product with iota(g)
std::vector<LambdaElem> star_convolve(const CMHidaFamily& Fm, const QExp<KElem>& g);
// T_n on a product with a form g of weight wg and character chig, at the given level
std::vector<LambdaElem> lambda_hecke(const CMHidaFamily& Fm, const std::vector<LambdaElem>& c, long n, long wg,
                                     const DirChar& chig, long level, long out_prec);

struct LambdaFJEntry {
    int class_index = 0;
    long n = 0;
    int b_index = 0;
    Ideal b;
    KElem tau;                  // formal symbol: tau_{a,b} is never realized p-adically
    LambdaElem char_factor;     // (a) Xi^{-1}(b), variable at weight k
    LambdaElem weight_factor;   // (b) <N b>^{k/2} omega^{j/2}(N b), variable at weight k
    // (c) [m][i]: q^i coefficient of T_n(Fm star theta_m), variable at weight k-1
    std::vector<std::vector<LambdaElem>> hecke;
};

struct LambdaFJ {
    CMHidaFamily family;
    LambdaHeckeChar Xi;
    long j = 0, r = 1, M = 0, J = 0;
    int weight_branch = 1;  // -1 takes the other square root in (b)
    std::vector<LambdaFJEntry> entries;
};

// entries for every class representative a, 1 <= n <= nmax, every b; J + 1 coefficients of each slice
LambdaFJ lambda_fj(const CMHidaFamily& Fm, const LambdaHeckeChar& Xi, long j, long r, long nmax, long M, long J,
                   int weight_branch = 1);

struct FactorFailure {
    size_t entry = 0;
    char factor = 'a';
    long m = -1, i = -1;
    std::string detail;
};

struct SpecializationCertificate {
    long k = 0;
    long precision = 0;  // digits compared (minimum over all values)
    long compared = 0;
    std::vector<FactorFailure> failures;
    bool ok() const { return failures.empty() && compared > 0; }
    char first_failing_factor() const;
};

// each factor at P_k (P_{k-1} for the Hecke data) against an independent classical computation:
// specialize_xi for (a), rational powers of N(b) for (b), p_stabilize(theta_cm) times the
// classical theta slices through hecke_Tn for (c)
SpecializationCertificate specialize_fj(const LambdaFJ& L, long k, long required);

// x_i -> limit with v(x_i - limit) >= i + 1 + shift coefficientwise
struct SerreLimitReport {
    std::vector<long> digits;  // min valuation of x_i - limit over the coefficients
    bool converges = false;
    long first_bad = -1;
};
SerreLimitReport serre_limit_check(const std::vector<std::vector<Zp>>& seq, const std::vector<Zp>& limit,
                                   long shift = 0);

}  // namespace kudla
