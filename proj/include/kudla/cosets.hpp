#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "kudla/ball.hpp"
#include "kudla/qexp.hpp"

namespace kudla {

struct Mat2 {
    long a = 1, b = 0, c = 0, d = 1;

    long det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 mod(long M) const;
    // (d b; -c -a), defined for det < 0
    Mat2 flip() const { return {d, b, -c, -a}; }
    Mat2 adj() const { return {d, -b, -c, a}; }
    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator<(const Mat2& o) const;
};

// X = u H with u in SL2(Z), H = (g b; 0 e), g, e > 0, 0 <= b < e; needs det X > 0
struct RowHermite {
    Mat2 u, H;
};
RowHermite row_hermite(const Mat2& X);

// an element of SL2(Z) congruent to g mod M (g has determinant 1 mod M)
Mat2 lift_sl2(const Mat2& g, long M);

struct EnumerationBudget : std::length_error {
    long required;
    EnumerationBudget(const std::string& w, long r) : std::length_error(w), required(r) {}
};

struct CosetCertificate {
    long n = 0, M = 0;
    long index = 0;         // [Gamma_1(M) : Gamma(M)]
    long expected = 0;      // (q+1) index for q prime to M, q index for q | M, index for n = 1
    long side_a = 0;        // H^{=-n} / Gamma(M), via gamma -> gamma''
    long side_b = 0;        // Gamma(M) \ Gamma_1(M) diag(1,n) Gamma_1(M)
    long duplicates = 0;    // distinct right classes mapping to one left class
    bool sets_equal = false;
    bool b_in_a = false;    // the double coset side is contained in the congruence side
    long parts = 0;         // residues h with H_h^{=-n} nonempty
    bool decomposition = false;  // every residue lies in T and the parts add up
    bool ok() const { return sets_equal && duplicates == 0 && decomposition && side_a == expected; }
};

// M = p^r |D|; refuses when M^4 sigma(n) exceeds the budget
CosetCertificate coset_identity_check(long n, long p, long r, long D, long budget = 200'000'000);

// right cosets Gamma_1(N) \ SL2(Z), one small representative per bottom row mod N
std::vector<Mat2> gamma1_coset_reps(long N);
bool in_gamma1(const Mat2& g, long N);

// sum over the coset representatives of (g |_k gamma)(tau) for g on Gamma_1(N)
CBall trace_eval(const QExp<CBall>& g, long k, long N, const CBall& tau, double max_tail = 1e-30);
// (c tau + d)^{-k} g(gamma tau)
CBall slash_eval(const QExp<CBall>& g, long k, const Mat2& gamma, const CBall& tau, double max_tail = 1e-30);

}  // namespace kudla
