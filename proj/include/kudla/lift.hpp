#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kudla/ball.hpp"
#include "kudla/characters.hpp"
#include "kudla/imquad.hpp"
#include "kudla/laurent.hpp"
#include "kudla/qexp.hpp"
#include "kudla/theta.hpp"

namespace kudla {

struct UnsupportedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- eigenvalues and Euler factors, symbolic in
//   q, a (a_q), ab (conjugate of a_q), e = eps(Q), h = chi(Q), x
// with eps(Qbar) = e^{-1} and chi(Qbar) = h^{-1} (both characters are trivial on (q)).
// At a ramified prime e and h have order 2; at an inert prime both are 1.

Laurent lifted_eigenvalue_naive_sym(Split s, long k, bool conj_prime = false);
// the Corollary's table as printed
Laurent lifted_eigenvalue_sym(Split s, long k);
// lambda^naive * N(Q)^{k/2-1}
Laurent lifted_eigenvalue_normalized_sym(Split s, long k);
// p^2 eps(pbar) a_p
Laurent lifted_eigenvalue_p_sym();
std::map<std::string, long> torsion_orders(Split s);

enum class EulerTable { literal, corrected };
// P_Q(x); the corrected table exchanges N and N^{1/2} in the inert and ramified rows
Laurent shintani_euler(Split s, long k, EulerTable t);
// local factor of L(f_K x eps chi^{-1}, xi, s+k/2) L(eps^{-2} xi, s+1) in x = xi(Q) N^{-s-1}
Laurent base_change_product(Split s, long k);

struct EulerCheck {
    bool ok = false;
    Laurent lhs, rhs;
};
EulerCheck euler_factorization_check(Split s, long k, EulerTable t);

struct DivisibilityCheck {
    bool ok = false;
    Laurent value;
};
// q | lambda(Q) term by term, with a, e, h treated as integral (character values as formal units)
DivisibilityCheck never_ordinary_check(Split s, long k);

// exact values for class number one, eps trivial; a_q in K
KElem lifted_eigenvalue_naive(const Field& F, long q, const KElem& aq, const HeckeChar& chi, long k);
KElem lifted_eigenvalue(const Field& F, long q, const KElem& aq, const HeckeChar& chi, long k);
KElem lifted_eigenvalue_p(const Field& F, long p, const KElem& ap);

// ---- multiplicity lemma at a split prime, in split coordinates mod p
struct MultiplicityReport {
    long p = 0, r = 0;
    long vectors = 0;       // X in L'/pL' with X mod L in T
    long isotropic = 0;     // of those, p | (X, X)
    long exceptions = 0;    // vectors violating the dichotomy
    std::map<long, long> m_hist;  // value of m -> count
    long sum_m = 0;
    long sum_images = 0;    // sum over coset representatives of #(image cap T-vectors)
    std::vector<std::vector<long>> sample_exceptions;  // (x1,x2,x3,y1,y2,y3,m)
    bool ok() const { return exceptions == 0 && sum_m == sum_images; }
};
// X = [x, y]: x in Z_p + p^r Z_p + Z_p (coordinate x2 is the coefficient of p^r), y in Z_p^3,
// both in the original coordinates; the pairing is (X,X) = y^T J_1 x
long multiplicity(long p, long r, const std::vector<long>& X);
MultiplicityReport lemma_check(long p, long r);
bool in_T(long p, long r, const std::vector<long>& X);
long pairing_mod_p(long p, const std::vector<long>& X);

// ---- Fourier-Jacobi coefficients of the p-modified lift
struct LiftData {
    Field F;
    QExp<KElem> f;  // weight k-1, character omega_K
    long k = 6;
    long p = 0;
    long r = 1;
    HeckeChar eps;
    HeckeChar chi;
    long qprec = 0;  // q-precision after T_n
};

struct FJCoefficient {
    Ideal a;
    long n = 0;
    std::vector<CBall> taylor;  // coefficients of w^m, m <= M
    std::optional<std::vector<KElem>> algebraic_core;
    long omega_power = 0;  // formal Omega_0 grading
};

struct FJExpansion {
    long k = 0, p = 0, r = 0, D = 0, M = 0, N = 0;
    std::map<std::pair<int, long>, FJCoefficient> table;
    long omega_power = 0;
};

// class representatives b coprime to p with a * bbar = Z + Z tau
struct BRep {
    Ideal b;
    KElem tau;
};
std::vector<BRep> b_representatives(const LiftData& L, const Ideal& a);
// the lattice delta * conj(P^r b)
Ideal theta_lattice(const LiftData& L, const Ideal& b);

FJCoefficient fj_p_modified(const LiftData& L, const Ideal& a, long n, long M);
// closed form of the same coefficient at arbitrary w via the slash expression of T_n;
// the value is returned scaled as in ThetaSum
ThetaSum fj_eval(const LiftData& L, const Ideal& a, long n, const CBall& w);

struct TraceData {
    // (index of b among b_representatives, m) -> expansion of the trace of f * theta slice m
    std::map<std::pair<int, long>, QExp<CBall>> slices;
};
FJCoefficient fj_level1(const LiftData& L, const Ideal& a, long n, long M, const TraceData* trace);

FJExpansion fj_table(const LiftData& L, long N, long M);

enum class OmegaMode { formal, numeric };
FJExpansion arithmetic_normalize(const FJExpansion& E, OmegaMode mode, const CBall* omega0 = nullptr);

// t_{lambda a}(lambda w) against lambda^{-k} t_a(w) and lambdabar^{-k} t_a(w), same n,
// with the representatives for lambda a taken as b / lambdabar
struct CompatReport {
    bool holds_lambda = false;
    bool holds_lambda_bar = false;
    double max_rad = 0;
};
CompatReport fj_compatibility(const LiftData& L, const Ideal& a, long n, long M, const KElem& lambda);

// literal quasi-periodicity g(w+s) = psi(s) e(-r delta sbar (w + s/2)) g(w), psi(s) = +-1,
// at translates s in a, r = n / N(a)
struct ShimuraReport {
    int translates = 0;
    int passed = 0;
    double max_dev = 0;    // max over s of min_{psi=+-1} |ratio/predicted - psi|
    double max_rad = 0;
    double r_fit_min = 0, r_fit_max = 0;  // r fitted from |ratio|
    bool ok(double tol) const { return passed == translates && max_rad <= tol; }
};
ShimuraReport shimura_check(const LiftData& L, const Ideal& a, long n, const CBall& w, int translates, double tol);

}  // namespace kudla
