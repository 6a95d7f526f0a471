#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kudla/ball.hpp"
#include "kudla/characters.hpp"
#include "kudla/imquad.hpp"
#include "kudla/padic.hpp"
#include "kudla/shells.hpp"

namespace kudla {

long kronecker_symbol(long D, long n);

// Dirichlet character with values in {-1, 0, 1}
struct DirChar {
    long modulus = 1;
    std::vector<int> v{1};

    int operator()(long n) const { return v[mod(n, modulus)]; }
    static DirChar trivial(long modulus = 1);
    static DirChar kronecker_char(long D);
    DirChar operator*(const DirChar& o) const;
    bool operator==(const DirChar& o) const;
};

// |c_n| <= C * max(n,1)^A for all n >= 0
struct Growth {
    Q C = 1;
    Q A = 0;
};

Growth growth_add(const Growth& a, const Growth& b);
Growth growth_mul(const Growth& a, const Growth& b);

inline Q ring_from(const Q&, const Z& n) { return Q(n); }
inline KElem ring_from(const KElem& proto, const Z& n) {
    KElem r = proto;
    r.x = Q(n);
    r.y = 0;
    return r;
}
inline CBall ring_from(const CBall&, const Z& n) { return CBall(RBall(Q(n))); }
inline Zp ring_from(const Zp& proto, const Z& n) { return Zp(proto.p, proto.N, n); }

inline bool ring_is_zero(const Q& x) { return sgn(x) == 0; }
inline bool ring_is_zero(const KElem& x) { return x.is_zero(); }
inline bool ring_is_zero(const Zp& x) { return x.is_zero(); }

// q-expansion sum_{n <= N} c_n q^n, implicitly multiplied by (2 pi i)^period
template <class R>
struct QExp {
    std::vector<R> c;
    long weight = 0;
    long level = 1;
    DirChar chi;
    long period = 0;
    std::optional<Growth> growth;

    long prec() const { return static_cast<long>(c.size()) - 1; }
    R zero() const { return ring_from(c.at(0), 0); }
};

template <class R>
QExp<R> qexp_truncate(const QExp<R>& f, long N) {
    if (N > f.prec()) throw PrecisionError("q-expansion shorter than requested", N);
    QExp<R> r = f;
    r.c.resize(N + 1);
    return r;
}

template <class R>
QExp<R> qexp_add(const QExp<R>& f, const QExp<R>& g) {
    if (f.period != g.period) throw std::invalid_argument("adding expansions with different period grading");
    QExp<R> r = f;
    long N = std::min(f.prec(), g.prec());
    r.c.resize(N + 1);
    for (long n = 0; n <= N; ++n) r.c[n] = f.c[n] + g.c[n];
    if (f.growth && g.growth)
        r.growth = growth_add(*f.growth, *g.growth);
    else
        r.growth.reset();
    return r;
}

template <class R>
QExp<R> qexp_scale(const QExp<R>& f, const R& s) {
    QExp<R> r = f;
    for (auto& x : r.c) x = x * s;
    r.growth.reset();
    return r;
}

// product of modular forms: weights add, characters multiply, level is the lcm
template <class R>
QExp<R> qexp_mul(const QExp<R>& f, const QExp<R>& g) {
    long N = std::min(f.prec(), g.prec());
    QExp<R> r;
    r.c.assign(N + 1, f.zero());
    for (long i = 0; i <= N; ++i) {
        if (ring_is_zero(f.c[i])) continue;
        for (long j = 0; i + j <= N; ++j) r.c[i + j] = r.c[i + j] + f.c[i] * g.c[j];
    }
    r.weight = f.weight + g.weight;
    r.level = std::lcm(f.level, g.level);
    r.chi = f.chi * g.chi;
    r.period = f.period + g.period;
    if (f.growth && g.growth) r.growth = growth_mul(*f.growth, *g.growth);
    return r;
}

// (T_n g)_j = sum_{d | (n, j)} chi(d) d^{w-1} g_{nj/d^2}; the character vanishes on d not prime to the level
template <class R>
QExp<R> hecke_Tn(const QExp<R>& g, long n, long out_prec = -1) {
    if (n < 1) throw std::invalid_argument("Hecke index must be positive");
    long avail = g.prec() / n;
    if (out_prec < 0) out_prec = avail;
    if (out_prec > avail) throw PrecisionError("hecke_Tn needs more coefficients", n * out_prec);
    QExp<R> r = g;
    r.c.assign(out_prec + 1, g.zero());
    for (long j = 0; j <= out_prec; ++j) {
        R acc = g.zero();
        long m = j == 0 ? n : std::gcd(n, j);
        for (long d = 1; d <= m; ++d) {
            if (n % d != 0 || (j != 0 && j % d != 0)) continue;
            int x = g.chi(d);
            if (std::gcd(d, g.level) != 1) x = 0;
            if (x == 0) continue;
            Z dw;
            mpz_ui_pow_ui(dw.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(g.weight - 1));
            R term = g.c[n * j / (d * d)];
            acc = acc + term * ring_from(g.c[0], x * dw);
        }
        r.c[j] = acc;
    }
    if (g.growth) {
        // d(n) n^{w-1} (nj)^A with d(n) <= 2 sqrt(n)
        Growth G = *g.growth;
        Z nw;
        mpz_ui_pow_ui(nw.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(std::max(0L, g.weight - 1)));
        long ceilA = static_cast<long>(std::ceil(G.A.get_d())) + 1;
        Z nA;
        mpz_ui_pow_ui(nA.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(ceilA));
        G.C = G.C * 2 * Q(nw) * Q(nA);
        r.growth = G;
    }
    return r;
}

// U_q: c_n -> c_{qn}
template <class R>
QExp<R> hecke_Uq(const QExp<R>& g, long q) {
    QExp<R> r = g;
    long N = g.prec() / q;
    r.c.resize(N + 1);
    for (long n = 0; n <= N; ++n) r.c[n] = g.c[q * n];
    r.growth.reset();
    return r;
}

// f(q z)
template <class R>
QExp<R> qexp_Vq(const QExp<R>& g, long q) {
    QExp<R> r = g;
    for (auto& x : r.c) x = g.zero();
    for (long n = 0; n * q <= g.prec(); ++n) r.c[n * q] = g.c[n];
    r.level = g.level * q;
    return r;
}

template <class S, class R, class Fn>
QExp<S> qexp_map(const QExp<R>& f, Fn fn) {
    QExp<S> r;
    r.c.reserve(f.c.size());
    for (const auto& x : f.c) r.c.push_back(fn(x));
    r.weight = f.weight;
    r.level = f.level;
    r.chi = f.chi;
    r.period = f.period;
    r.growth = f.growth;
    return r;
}

QExp<CBall> to_ball(const Field& F, const QExp<KElem>& f);
QExp<Zp> to_padic(const PadicEmbedding& iota, const QExp<KElem>& f);

// sum_{m <= M} w^m * slice_m(q); slice m carries (2 pi i)^m symbolically when twopii
template <class R>
struct JacobiExp {
    std::vector<QExp<R>> slices;
    bool twopii = true;
    long M() const { return static_cast<long>(slices.size()) - 1; }
    long N() const { return slices.at(0).prec(); }
};

// theta_A(w, tau) = sum_{a in A} e(N(a)/N(A) tau + a w), exact slices a^m/m!
JacobiExp<KElem> intrinsic_theta(const Field& F, const Ideal& A, long M, long N, Kernel k = Kernel::automatic);
// slice m scaled by lambda^m, i.e. theta(lambda w, tau)
JacobiExp<KElem> jacobi_rescale(const JacobiExp<KElem>& J, const KElem& lambda);
// m! times the m-th slice; weight m+1, character of K/Q, level |D|
QExp<KElem> theta_deriv(const Field& F, const JacobiExp<KElem>& J, long m);

struct EigenformData {
    Field F;
    long weight = 0;
    long level = 1;
    DirChar chi;
    std::map<long, KElem> a;  // prime -> a_q
    std::optional<HeckeChar> psi;
};

struct CMForm {
    EigenformData data;
    QExp<KElem> q;
};

// sum over integral ideals of psi(A) q^{N(A)}, psi of infinity type (m, 0); exact for class number one
CMForm theta_cm(const HeckeChar& psi, long N);

struct PStabilized {
    QExp<Zp> q;
    Zp alpha, beta;
    long p = 0;
};

// unit root of X^2 - a X + p^{w-1} by Newton iteration
Zp unit_root(const Zp& a, long p, long w);
PStabilized p_stabilize(const CMForm& f, const PadicEmbedding& iota);

// U_p^{m!} on a finite U_p-stable space: basis expansions, U_p matrix (columns are images),
// coordinates of g. The matrix is checked against the expansions to the available precision.
struct OrdinaryResult {
    QExp<Zp> q;
    std::vector<Zp> coords;
    long m = 0;  // first m with U_p^{m!} v = U_p^{(m-1)!} v to precision
};
OrdinaryResult ordinary_projector(const std::vector<QExp<Zp>>& basis, const std::vector<std::vector<Zp>>& Up,
                                  const std::vector<Zp>& coords, long p, long max_m = 400);

struct TailError : std::runtime_error {
    double tail;
    TailError(const std::string& w, double t) : std::runtime_error(w), tail(t) {}
};

// sum c_n e(n tau0) with the tail bounded by the growth certificate; (2 pi i)^period materialized
CBall eval_cm(const QExp<CBall>& g, const CBall& tau0, double max_tail = 1e-15);
CBall eval_cm(const Field& F, const QExp<KElem>& g, const CBall& tau0, double max_tail = 1e-15);

Q bernoulli(long n);
// E_{p-1} normalized with constant term 1
QExp<Q> eisenstein(long k, long N);

}  // namespace kudla
