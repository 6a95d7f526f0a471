#include "kudla/padic.hpp"

#include <algorithm>
#include <sstream>

namespace kudla {

namespace {

Z ppow(long p, long e) {
    Z r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::max(0L, e)));
    return r;
}

Z zmod(const Z& a, const Z& m) {
    Z r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

long vp_long(long n, long p) {
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

long vp_factorial(long n, long p) {
    long v = 0;
    for (long q = p; q <= n; q *= p) v += n / q;
    return v;
}

}  // namespace

Zp::Zp(long p_, long N_, const Z& x) : p(p_), N(N_), v(zmod(x, ppow(p_, N_))) {}

Zp Zp::from_q(long p, long N, const Q& x) {
    Z den = x.get_den();
    if (den % p == 0) throw std::domain_error("rational not p-integral");
    Z m = ppow(p, N), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    return Zp(p, N, x.get_num() * inv);
}

Z Zp::modulus() const { return ppow(p, N); }

long Zp::valuation() const {
    if (sgn(v) == 0) return N;
    Z t = v;
    long k = 0;
    while (t % p == 0) {
        t /= p;
        ++k;
    }
    return k;
}

Zp Zp::operator+(const Zp& o) const { return Zp(p, std::min(N, o.N), v + o.v); }
Zp Zp::operator-(const Zp& o) const { return Zp(p, std::min(N, o.N), v - o.v); }
Zp Zp::operator-() const { return Zp(p, N, -v); }
Zp Zp::operator*(const Zp& o) const { return Zp(p, std::min(N, o.N), v * o.v); }

Zp Zp::inv() const {
    if (!is_unit()) throw std::domain_error("inverse of a non-unit");
    Z r;
    Z m = modulus();
    mpz_invert(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return Zp(p, N, r);
}

Zp Zp::operator/(const Zp& o) const {
    long k = o.valuation();
    if (k == 0) return *this * o.inv();
    if (k >= o.N) throw std::domain_error("division by p-adic zero");
    if (valuation() < k) throw std::domain_error("quotient not integral");
    return div_p(k) * o.div_p(k).inv();
}

Zp Zp::pow(const Z& e) const {
    if (sgn(e) < 0) return inv().pow(Z(-e));
    Z r;
    Z m = modulus();
    mpz_powm(r.get_mpz_t(), v.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return Zp(p, N, r);
}

Zp Zp::lift(long newN) const { return Zp(p, newN, v); }
Zp Zp::reduce(long newN) const { return Zp(p, std::min(N, newN), v); }

Zp Zp::div_p(long k) const {
    if (k == 0) return *this;
    if (valuation() < k) throw std::domain_error("not divisible by p^k");
    return Zp(p, N - k, v / ppow(p, k));
}

bool Zp::eq(const Zp& o, long prec) const {
    long n = std::min(N, o.N);
    if (prec >= 0) n = std::min(n, prec);
    Z m = ppow(p, n);
    return zmod(v - o.v, m) == 0;
}

std::string Zp::str() const {
    std::ostringstream os;
    os << v.get_str() << " mod " << p << "^" << N;
    return os.str();
}

Zp teichmuller(long p, const Z& u, long N) {
    if (u % p == 0) throw std::domain_error("teichmuller of a non-unit");
    Zp x(p, N, u);
    for (long i = 0; i < N; ++i) x = x.pow(Z(p));
    return x;
}

Zp log_p(const Zp& x) {
    long p = x.p;
    Zp u = x - Zp(p, x.N, 1);
    if (u.valuation() < 1) throw std::domain_error("log_p needs x = 1 mod p");
    long N = x.N;
    long terms = N + 4;
    while (terms - vp_long(terms, p) < N) ++terms;
    long G = 0;
    for (long q = p; q <= terms; q *= p) ++G;
    long W = N + G;
    Z mod = ppow(p, W + G);
    Z pw = 1, acc = 0;
    Z ux = u.v;
    for (long n = 1; n <= terms; ++n) {
        pw = zmod(pw * ux, mod);
        long e = vp_long(n, p);
        long m = n;
        for (long i = 0; i < e; ++i) m /= p;
        Z t = pw / ppow(p, e);
        Z inv;
        Z mW = ppow(p, W);
        Z mm = m;
        mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), mW.get_mpz_t());
        t = zmod(t * inv, mW);
        if (n % 2 == 1)
            acc += t;
        else
            acc -= t;
    }
    return Zp(p, N, acc);
}

Zp exp_p(const Zp& x) {
    long p = x.p;
    if (x.valuation() < 1) throw std::domain_error("exp_p needs v(x) >= 1");
    long N = x.N;
    long terms = 2;
    while ((terms * (p - 2)) < (N + 2) * (p - 1)) ++terms;
    long G = vp_factorial(terms, p) + 2;
    Z mod = ppow(p, N + G);
    Z pw = 1, fact = 1, acc = 1;
    for (long n = 1; n <= terms; ++n) {
        pw = zmod(pw * x.v, mod);
        fact *= n;
        long e = vp_factorial(n, p);
        Z num = pw / ppow(p, e);
        Z den = fact / ppow(p, e);
        Z inv;
        Z mN = ppow(p, N);
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mN.get_mpz_t());
        acc += num * inv;
    }
    return Zp(p, N, acc);
}

Zp one_unit(const Zp& x) { return x * teichmuller(x.p, x.v, x.N).inv(); }

PadicEmbedding PadicEmbedding::make(const Field& F, long p, long N) {
    auto s = prime_split(F, p);
    if (s.kind != Split::split) throw std::invalid_argument("p must split in K");
    Zp X(p, N, -s.root);
    for (long i = 0; i < N + 2; ++i) {
        Zp f = X * X - Zp(p, N, F.t) * X + Zp(p, N, F.n);
        Zp df = Zp(p, N, 2) * X - Zp(p, N, F.t);
        X = X - f * df.inv();
    }
    return {p, N, X};
}

Zp PadicEmbedding::operator()(const KElem& x) const {
    return Zp::from_q(p, N, x.x) + Zp::from_q(p, N, x.y) * tau;
}

Zp gamma_exponent(const Zp& a) {
    long p = a.p;
    Zp hi = a.lift(a.N + 1);
    Zp la = log_p(one_unit(hi));
    Zp lg = log_p(Zp(p, a.N + 1, 1 + p));
    return (la / lg).reduce(a.N);
}

LambdaElem::LambdaElem(long p_, long N_, long MT_) : p(p_), N(N_), MT(MT_), c(MT_, Zp(p_, N_, 0)) {}

LambdaElem LambdaElem::constant(long p, long N, long MT, const Zp& a) {
    LambdaElem L(p, N, MT);
    L.c[0] = a.reduce(N);
    return L;
}

LambdaElem LambdaElem::T(long p, long N, long MT) {
    LambdaElem L(p, N, MT);
    if (MT > 1) L.c[1] = Zp(p, N, 1);
    return L;
}

LambdaElem LambdaElem::one_plus_T_pow(long p, long N, long MT, const Zp& s) {
    // binom(s, i) loses v_p(i!) digits; caller supplies s with guard digits
    LambdaElem L(p, N, MT);
    long W = s.N;
    Z mod = ppow(p, W);
    Z num = 1, fact = 1;
    for (long i = 0; i < MT; ++i) {
        if (i > 0) {
            num = zmod(num * (s.v - (i - 1)), mod);
            fact *= i;
        }
        long e = vp_factorial(i, p);
        if (W - e < N) throw PrecisionError("binomial series needs more guard digits", N + e);
        Z n2 = num;
        Z f2 = fact;
        // num is divisible by p^e as an exact binomial numerator only modulo p^W
        Z pe = ppow(p, e);
        if (zmod(n2, pe) != 0) throw std::logic_error("binomial numerator not divisible");
        n2 /= pe;
        f2 /= pe;
        Z inv;
        Z mN = ppow(p, N);
        mpz_invert(inv.get_mpz_t(), f2.get_mpz_t(), mN.get_mpz_t());
        L.c[i] = Zp(p, N, n2 * inv);
    }
    return L;
}

LambdaElem LambdaElem::operator+(const LambdaElem& o) const {
    LambdaElem r(p, std::min(N, o.N), std::min(MT, o.MT));
    for (long i = 0; i < r.MT; ++i) r.c[i] = (c[i] + o.c[i]).reduce(r.N);
    return r;
}

LambdaElem LambdaElem::operator-(const LambdaElem& o) const {
    LambdaElem r(p, std::min(N, o.N), std::min(MT, o.MT));
    for (long i = 0; i < r.MT; ++i) r.c[i] = (c[i] - o.c[i]).reduce(r.N);
    return r;
}

LambdaElem LambdaElem::operator*(const LambdaElem& o) const {
    LambdaElem r(p, std::min(N, o.N), std::min(MT, o.MT));
    for (long i = 0; i < r.MT; ++i)
        for (long j = 0; i + j < r.MT; ++j) r.c[i + j] = (r.c[i + j] + c[i] * o.c[j]).reduce(r.N);
    return r;
}

LambdaElem LambdaElem::scale(const Zp& a) const {
    LambdaElem r = *this;
    for (auto& x : r.c) x = (x * a).reduce(N);
    return r;
}

bool LambdaElem::operator==(const LambdaElem& o) const {
    if (MT != o.MT) return false;
    for (long i = 0; i < MT; ++i)
        if (!c[i].eq(o.c[i])) return false;
    return true;
}

bool LambdaElem::is_zero() const {
    for (const auto& x : c)
        if (!x.is_zero()) return false;
    return true;
}

std::string LambdaElem::str() const {
    std::ostringstream os;
    os << "[p=" << p << " N=" << N << " MT=" << MT << "]";
    for (long i = 0; i < MT; ++i) os << " " << c[i].v.get_str();
    return os.str();
}

Zp gamma_pow(long p, long N, long k) { return Zp(p, N, 1 + p).pow(Z(k)); }

PointValue arithmetic_point_eval(const LambdaElem& L, const ArithmeticPoint& P, long required) {
    if (P.eps_order_exp != 0 && P.eps_index != 0)
        throw std::domain_error("wild character of nontrivial order is not evaluable over Z_p");
    Zp t = gamma_pow(L.p, L.N, P.k) - Zp(L.p, L.N, 1);
    long vt = t.valuation();
    long cert = std::min(L.N, L.MT * vt);
    if (required > cert) {
        long need = (required + vt - 1) / vt;
        throw PrecisionError("truncation too short for the requested precision", need);
    }
    Zp acc(L.p, L.N, 0);
    for (long i = L.MT - 1; i >= 0; --i) acc = acc * t + L.c[i];
    return {acc.reduce(cert), cert};
}

}  // namespace kudla
