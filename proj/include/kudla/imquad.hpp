#pragma once

#include <gmpxx.h>

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kudla {

using Z = mpz_class;
using Q = mpq_class;

inline Q qq(long a, long b) {
    Q r(a, b);
    r.canonicalize();
    return r;
}

// K = Q(sqrt d), O_K = Z + Z tau with tau^2 - t tau + n = 0.
struct Field {
    long d = -1;
    long D = -4;
    int t = 0;
    long n = 1;
    int w = 4;
    int h = 1;

    static Field make(long d);
    bool operator==(const Field& o) const { return d == o.d; }
};

// x + y tau
struct KElem {
    Q x, y;
    int t = 0;
    long n = 1;

    KElem() = default;
    KElem(const Field& F, Q x_, Q y_ = 0) : x(std::move(x_)), y(std::move(y_)), t(F.t), n(F.n) {}

    static KElem tau(const Field& F) { return KElem(F, 0, 1); }

    bool is_zero() const { return sgn(x) == 0 && sgn(y) == 0; }
    bool is_integral() const { return x.get_den() == 1 && y.get_den() == 1; }
    bool is_rational() const { return sgn(y) == 0; }

    KElem conj() const;
    Q norm() const { return x * x + t * x * y + n * y * y; }
    Q trace() const { return 2 * x + t * y; }
    KElem inv() const;

    KElem operator-() const;
    KElem& operator+=(const KElem& o);
    KElem& operator-=(const KElem& o);
    KElem& operator*=(const KElem& o);
    KElem& operator*=(const Q& c);

    friend KElem operator+(KElem a, const KElem& b) { return a += b; }
    friend KElem operator-(KElem a, const KElem& b) { return a -= b; }
    friend KElem operator*(KElem a, const KElem& b) { return a *= b; }
    friend KElem operator*(KElem a, const Q& c) { return a *= c; }
    friend KElem operator*(const Q& c, KElem a) { return a *= c; }
    friend KElem operator/(const KElem& a, const KElem& b) { return a * b.inv(); }

    bool operator==(const KElem& o) const { return x == o.x && y == o.y; }
    bool operator!=(const KElem& o) const { return !(*this == o); }

    KElem pow(long e) const;
    std::complex<double> embed() const;
    std::string str() const;
};

// Embedding of tau: real part, and imaginary part squared (exact), for ball code.
Q tau_re(const Field& F);
Q tau_im2(const Field& F);

// Fractional ideal scale * (a Z + (b + tau) Z), 0 <= b < a, a | N(b + tau).
struct Ideal {
    Q scale = 1;
    long a = 1;
    long b = 0;

    static Ideal unit() { return {}; }
    static Ideal from_gens(const Field& F, const std::vector<KElem>& gens);
    static Ideal principal(const Field& F, const KElem& g) { return from_gens(F, {g}); }

    Q norm() const { return scale * scale * a; }
    KElem basis0(const Field& F) const { return KElem(F, scale * a, 0); }
    KElem basis1(const Field& F) const { return KElem(F, scale * b, scale); }
    bool contains(const Field& F, const KElem& x) const;
    bool is_integral() const;

    bool operator==(const Ideal& o) const { return scale == o.scale && a == o.a && b == o.b; }
    bool operator<(const Ideal& o) const;
    std::string str() const;
};

Ideal ideal_mul(const Field& F, const Ideal& A, const Ideal& B);
Ideal ideal_conj(const Field& F, const Ideal& A);
Ideal ideal_inv(const Field& F, const Ideal& A);
Ideal ideal_pow(const Field& F, const Ideal& A, long e);
Ideal ideal_scale(const Field& F, const Ideal& A, const KElem& lambda);
Q ideal_norm(const Ideal& A);

// Valuation of A at the prime P (P integral prime ideal).
long ideal_valuation(const Field& F, const Ideal& A, const Ideal& P);

// Elements of the lattice with norm exactly target.
std::vector<KElem> elements_of_norm(const Field& F, const Ideal& A, const Q& target);
// Generator of A if principal.
std::optional<KElem> principal_generator(const Field& F, const Ideal& A);
// Units of O_K.
std::vector<KElem> units(const Field& F);

struct Form {
    long a, b, c;
    bool operator==(const Form& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const Form& o) const;
};

Form reduce_form(Form f);
std::vector<Form> reduced_forms(long D);
Form ideal_form(const Field& F, const Ideal& A);
Ideal form_ideal(const Field& F, const Form& f);

struct ClassGroup {
    std::vector<Ideal> reps;
    std::vector<Form> forms;
    std::vector<std::vector<int>> table;
    int identity = 0;

    int size() const { return static_cast<int>(reps.size()); }
    int index_of(const Field& F, const Ideal& A) const;
    int inverse(int i) const;
};

ClassGroup class_group(const Field& F, long m = 1);

enum class Split { split, inert, ramified };

struct PrimeSplit {
    long q = 0;
    Split kind = Split::inert;
    Ideal P;     // the fixed prime above q (equal to (q) when inert)
    Ideal Pbar;  // conjugate, equal to P unless split
    long root = 0;  // b with P = (q, b + tau) for degree-one primes
};

PrimeSplit prime_split(const Field& F, long q);
long kronecker(long D, long q);

struct CMBasis {
    KElem lambda;
    KElem tau;
    Ideal normalized;
};

CMBasis ideal_to_cm_basis(const Field& F, const Ideal& C);

// product of prime ideals to integer powers
Ideal ide(const Field& F, const std::vector<std::pair<Ideal, long>>& vals);

bool is_squarefree(long m);
bool is_prime(long q);
long mod(long a, long m);

}  // namespace kudla
