#include "kudla/characters.hpp"

#include <numeric>
#include <set>
#include <stdexcept>

namespace kudla {

namespace {

Q frac(const Q& x) {
    Z f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Q r = x - Q(f);
    r.canonicalize();
    return r;
}

long zmodl(const Z& a, long m) {
    Z r;
    Z mm = m;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), mm.get_mpz_t());
    return r.get_si();
}

std::vector<long> prime_factors(long n) {
    std::vector<long> out;
    n = std::labs(n);
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) out.push_back(n);
    return out;
}

std::vector<Ideal> primes_above(const Field& F, long q) {
    auto s = prime_split(F, q);
    if (s.kind == Split::split) return {s.P, s.Pbar};
    return {s.P};
}

std::vector<Ideal> primes_dividing(const Field& F, const Ideal& A) {
    std::vector<Ideal> out;
    Q nm = A.norm();
    for (long q : prime_factors(Z(nm.get_num() * nm.get_den()).get_si()))
        for (const auto& P : primes_above(F, q))
            if (ideal_valuation(F, A, P) != 0) out.push_back(P);
    return out;
}

// lcm of integral ideals through their prime factorizations
Ideal ideal_lcm(const Field& F, const Ideal& A, const Ideal& B) {
    std::vector<std::pair<Ideal, long>> f;
    std::set<std::pair<long, long>> seen;
    auto add = [&](const Ideal& P) {
        if (!seen.insert({P.a, Z(P.scale.get_num()).get_si()}).second) return;
        long e = std::max(ideal_valuation(F, A, P), ideal_valuation(F, B, P));
        if (e > 0) f.push_back({P, e});
    };
    for (const auto& P : primes_dividing(F, A)) add(P);
    for (const auto& P : primes_dividing(F, B)) add(P);
    return ide(F, f);
}

KElem zeta_w(const Field& F) {
    if (F.w == 2) return KElem(F, -1);
    // tau = i for d = -1, tau = e(1/6) for d = -3
    return KElem::tau(F);
}

// (log z + 2 pi i branch) / e, exponentiated
CBall root_of(const CBall& z, long e, long branch) {
    RBall lr = z.abs2().log() / RBall(2);
    RBall arg = z.im.atan2(z.re) + RBall(2) * RBall::pi() * RBall(branch);
    RBall ee(e);
    CBall r = CBall::expi(arg / ee);
    RBall mod = (lr / ee).exp();
    return CBall(r.re * mod, r.im * mod);
}

long residue_mod_P(const Field& F, const KElem& mu, long p) {
    auto s = prime_split(F, p);
    // tau = -root mod P
    Z den = mu.x.get_den() * mu.y.get_den();
    if (den % p == 0) throw std::domain_error("element not integral at P");
    Z num = Q(mu.x * den).get_num() - Q(mu.y * den).get_num() * s.root;
    long n = zmodl(num, p), dd = zmodl(den, p);
    for (long i = 1; i < p; ++i)
        if ((dd * i) % p == 1) return (n * i) % p;
    throw std::logic_error("unreachable");
}

}  // namespace

std::optional<KElem> root_of_unity_in_k(const Field& F, const Q& angle) {
    Q f = frac(angle);
    long m = Z(f.get_den()).get_si();
    if (F.w % m != 0) return std::nullopt;
    long j = Z(f.get_num()).get_si() * (F.w / m);
    return zeta_w(F).pow(j);
}

CharValue CharValue::operator*(const CharValue& o) const {
    CharValue r;
    r.zero = zero || o.zero;
    r.alg = alg * o.alg;
    r.angle = frac(angle + o.angle);
    return r;
}

CharValue CharValue::inv() const {
    if (zero) throw std::domain_error("inverse of a zero character value");
    return {alg.inv(), frac(-angle), false};
}

CBall CharValue::to_complex(const Field& F) const {
    if (zero) return CBall(0);
    return CBall::from_k(F, alg) * CBall::expi(RBall(2) * RBall::pi() * RBall(angle));
}

std::optional<KElem> CharValue::in_field(const Field& F) const {
    if (zero) return KElem(F, 0);
    auto z = root_of_unity_in_k(F, angle);
    if (!z) return std::nullopt;
    return alg * *z;
}

RootIdent RootIdent::make(const Field& F, const PadicEmbedding& iota) {
    long p = iota.p;
    if ((p - 1) % F.w != 0) throw std::invalid_argument("w_K does not divide p - 1");
    Zp zw = iota(zeta_w(F));
    for (long g = 2; g < p; ++g) {
        bool prim = true;
        long x = 1;
        for (long i = 1; i < p - 1; ++i) {
            x = x * g % p;
            if (x == 1) prim = false;
        }
        if (!prim) continue;
        Zp tg = teichmuller(p, g, iota.N);
        if (tg.pow((p - 1) / F.w).eq(zw)) return {p, g, iota.N, tg};
    }
    throw std::logic_error("no compatible primitive root");
}

Zp RootIdent::root(const Q& angle) const {
    Q f = frac(angle);
    long m = Z(f.get_den()).get_si();
    if ((p - 1) % m != 0) throw std::domain_error("root of unity not in Q_p");
    return tg.pow(Z(f.get_num()).get_si() * ((p - 1) / m));
}

long RootIdent::dlog(long x) const {
    x = mod(x, p);
    if (x == 0) throw std::domain_error("dlog of zero");
    long y = 1;
    for (long i = 0; i < p - 1; ++i) {
        if (y == x) return i;
        y = y * g % p;
    }
    throw std::logic_error("dlog failed");
}

HeckeChar HeckeChar::make(const Field& F, long a, long b, const Ideal& cond,
                          std::function<Q(const KElem&)> fin, std::vector<long> branch, long modulus) {
    HeckeChar X;
    X.F = F;
    X.a = a;
    X.b = b;
    X.cond = cond;
    X.fin = std::move(fin);
    X.cond_primes = primes_dividing(F, cond);
    long cn = Z(cond.norm().get_num()).get_si();
    X.modulus = std::lcm(modulus, cn);
    for (const auto& u : units(F)) {
        auto v = X.principal_value(u).in_field(F);
        if (!v || *v != KElem(F, 1))
            throw std::invalid_argument("character is not trivial on units (unit compatibility fails)");
    }
    X.G = class_group(F, X.modulus);
    int h = X.G.size();
    X.class_val.assign(h, CBall(1));
    if (h == 1) return X;

    // basis of the class group by greedy maximal quotient order
    std::map<int, std::vector<long>> H{{X.G.identity, {}}};
    auto gpow = [&](int x, long e) {
        int r = X.G.identity;
        for (long i = 0; i < e; ++i) r = X.G.table[r][x];
        return r;
    };
    while (static_cast<int>(H.size()) < h) {
        long best_e = 0;
        int best = -1;
        for (int x = 0; x < h; ++x) {
            if (H.count(x)) continue;
            long e = 1;
            for (int y = x; !H.count(y); y = X.G.table[y][x]) ++e;
            // only elements whose order equals their quotient order split off
            if (e > best_e && gpow(x, e) == X.G.identity) {
                best_e = e;
                best = x;
            }
        }
        if (best < 0) throw std::logic_error("class group basis construction failed");
        std::map<int, std::vector<long>> H2;
        for (const auto& [y, c] : H) {
            int z = y;
            for (long i = 0; i < best_e; ++i) {
                auto cc = c;
                cc.push_back(i);
                H2[z] = cc;
                z = X.G.table[z][best];
            }
        }
        H = std::move(H2);
        X.basis.push_back(best);
        X.orders.push_back(best_e);
    }
    size_t r = X.basis.size();
    X.branch = std::move(branch);
    X.branch.resize(r, 0);
    for (auto& c : H) c.second.resize(r, 0);

    std::vector<CBall> gen_val(r);
    for (size_t j = 0; j < r; ++j) {
        Ideal R = X.G.reps[X.basis[j]];
        auto mu = principal_generator(F, ideal_pow(F, R, X.orders[j]));
        if (!mu) throw std::logic_error("power of class representative not principal");
        gen_val[j] = root_of(X.principal_value(*mu).to_complex(F), X.orders[j], X.branch[j]);
    }
    for (int c = 0; c < h; ++c) {
        const auto& n = H.at(c);
        Ideal M = ideal_inv(F, X.G.reps[c]);
        CBall v(1);
        for (size_t j = 0; j < r; ++j) {
            M = ideal_mul(F, M, ideal_pow(F, X.G.reps[X.basis[j]], n[j]));
            v *= gen_val[j].pow(n[j]);
        }
        auto nu = principal_generator(F, M);
        if (!nu) throw std::logic_error("class decomposition not principal");
        X.class_val[c] = v / X.principal_value(*nu).to_complex(F);
    }
    return X;
}

bool HeckeChar::coprime(const Ideal& A) const {
    for (const auto& P : cond_primes)
        if (ideal_valuation(F, A, P) != 0) return false;
    return true;
}

Q HeckeChar::fin_angle(const KElem& mu) const {
    if (!fin) return 0;
    Z m;
    mpz_lcm(m.get_mpz_t(), mu.x.get_den_mpz_t(), mu.y.get_den_mpz_t());
    if (m == 1) return frac(fin(mu));
    Z cn = cond.norm().get_num();
    Z g;
    mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), cn.get_mpz_t());
    if (g != 1) throw std::domain_error("denominator meets the conductor");
    return frac(fin(mu * Q(m)) - fin(KElem(F, Q(m))));
}

CharValue HeckeChar::principal_value(const KElem& mu) const {
    return {mu.pow(a) * mu.conj().pow(b), fin_angle(mu), false};
}

std::optional<CharValue> HeckeChar::eval_exact(const Ideal& A) const {
    if (!coprime(A)) return CharValue{KElem(F, 0), 0, true};
    if (G.size() > 1 && G.index_of(F, A) != G.identity) return std::nullopt;
    auto g = principal_generator(F, A);
    if (!g) throw std::logic_error("identity class ideal without generator");
    return principal_value(*g);
}

CBall HeckeChar::eval(const Ideal& A) const {
    if (!coprime(A)) return CBall(0);
    int c = G.index_of(F, A);
    auto nu = principal_generator(F, ideal_mul(F, A, ideal_inv(F, G.reps[c])));
    if (!nu) throw std::logic_error("quotient by class representative not principal");
    return class_val[c] * principal_value(*nu).to_complex(F);
}

CharValue HeckeChar::eval_or_throw(const Ideal& A) const {
    auto v = eval_exact(A);
    if (!v) throw std::domain_error("value on a non-principal class is not in the field");
    return *v;
}

HeckeChar trivial_char(const Field& F, long modulus) {
    return HeckeChar::make(F, 0, 0, Ideal::unit(), {}, {}, modulus);
}

HeckeChar norm_char(const Field& F, long modulus) {
    return HeckeChar::make(F, 1, 1, Ideal::unit(), {}, {}, modulus);
}

HeckeChar unramified_weight_char(const Field& F, long k, std::vector<long> branch, long modulus) {
    if (k % 2 != 0) throw std::invalid_argument("weight must be even");
    return HeckeChar::make(F, -k / 2, k / 2, Ideal::unit(), {}, std::move(branch), modulus);
}

HeckeChar class_char(const Field& F, std::vector<long> branch, long modulus) {
    return HeckeChar::make(F, 0, 0, Ideal::unit(), {}, std::move(branch), modulus);
}

HeckeChar cm_char(const Field& F, long m, long modulus) {
    if (m % F.w == 0) return HeckeChar::make(F, m, 0, Ideal::unit(), {}, {}, modulus);
    if (F.w == 2 && F.D % 2 != 0 && is_prime(-F.D)) {
        long q = -F.D;
        auto s = prime_split(F, q);
        // Legendre symbol of the residue mod the ramified prime
        auto leg = [F, q](const KElem& mu) {
            long r = residue_mod_P(F, mu, q);
            long e = (q - 1) / 2, acc = 1, base = r;
            while (e) {
                if (e & 1) acc = acc * base % q;
                base = base * base % q;
                e >>= 1;
            }
            return acc == 1 ? Q(0) : qq(1, 2);
        };
        return HeckeChar::make(F, m, 0, s.P, leg, {}, modulus);
    }
    throw std::invalid_argument("no type (m,0) character of prime conductor compatible with the units");
}

namespace {

HeckeChar rebuild(const HeckeChar& base, const std::function<CBall(const Ideal&)>& val) {
    HeckeChar r = base;
    for (int c = 0; c < r.G.size(); ++c) r.class_val[c] = val(r.G.reps[c]);
    return r;
}

}  // namespace

HeckeChar char_mul(const HeckeChar& x, const HeckeChar& y) {
    const Field& F = x.F;
    Ideal c = ideal_lcm(F, x.cond, y.cond);
    auto fx = x, fy = y;
    std::function<Q(const KElem&)> fin;
    if (x.fin || y.fin) fin = [fx, fy](const KElem& mu) { return fx.fin_angle(mu) + fy.fin_angle(mu); };
    HeckeChar r = HeckeChar::make(F, x.a + y.a, x.b + y.b, c, fin, {}, std::lcm(x.modulus, y.modulus));
    if (r.G.size() == 1) return r;
    return rebuild(r, [&](const Ideal& A) { return x.eval(A) * y.eval(A); });
}

HeckeChar char_inv(const HeckeChar& x) {
    auto fx = x;
    std::function<Q(const KElem&)> fin;
    if (x.fin) fin = [fx](const KElem& mu) { return -fx.fin_angle(mu); };
    HeckeChar r = HeckeChar::make(x.F, -x.a, -x.b, x.cond, fin, {}, x.modulus);
    if (r.G.size() == 1) return r;
    return rebuild(r, [&](const Ideal& A) { return CBall(1) / x.eval(A); });
}

HeckeChar char_pow(const HeckeChar& x, long e) {
    HeckeChar base = e < 0 ? char_inv(x) : x;
    HeckeChar r = trivial_char(x.F, x.modulus);
    for (long i = 0; i < std::labs(e); ++i) r = char_mul(r, base);
    return r;
}

PadicHeckeChar to_padic(const HeckeChar& phi, long p, long N) {
    if (phi.F.h != 1) throw std::domain_error("p-adic realization is implemented for class number one");
    auto iota = PadicEmbedding::make(phi.F, p, N);
    return {phi, iota, RootIdent::make(phi.F, iota)};
}

Zp PadicHeckeChar::eval_principal_value(const CharValue& v) const {
    if (v.zero) return Zp(iota.p, iota.N, 0);
    return iota(v.alg) * roots.root(v.angle);
}

Zp PadicHeckeChar::eval(const Ideal& A) const { return eval_principal_value(base.eval_or_throw(A)); }

Zp PadicHeckeChar::eval_idele(const Idele& x) const {
    const Field& F = base.F;
    long p = iota.p;
    Zp val(p, iota.N, 1);
    if (x.principal) {
        const KElem& mu = *x.principal;
        Ideal M = Ideal::principal(F, mu);
        if (M.norm().get_num() % p == 0 || M.norm().get_den() % p == 0 || !base.coprime(M))
            throw std::domain_error("principal part must be coprime to p and the conductor");
        val *= eval(M);
        val *= roots.root(-base.fin_angle(mu));
        val *= iota(mu).pow(-base.a) * iota(mu.conj()).pow(-base.b);
    }
    if (!x.primes.empty()) {
        for (const auto& [P, e] : x.primes) {
            (void)e;
            if (P.norm().get_num() % p == 0 || !base.coprime(P))
                throw std::domain_error("prime part must avoid p and the conductor");
        }
        val *= eval(ide(F, x.primes));
    }
    // local unit at P (or Pbar): pick mu = u mod P^c, 1 at the other conductor primes
    auto local = [&](const Zp& u, bool at_pbar) {
        if (!u.is_unit()) throw std::domain_error("local component must be a unit");
        long c = iota.N;
        Z pc = u.modulus();
        Zp t1 = iota.tau, t2 = Zp(p, iota.N, F.t) - iota.tau;
        if (at_pbar) std::swap(t1, t2);
        // x + y t1 = u, x + y t2 = 1 (mod p^c)
        Zp y = (u - Zp(p, c, 1)) / (t1 - t2);
        Zp xx = u - y * t1;
        Z X = xx.v, Y = y.v, M = pc;
        for (const auto& P : base.cond_primes) {
            long q = P.a == 1 ? Z(P.scale.get_num()).get_si() : P.a;
            if (q == p) continue;
            Z qe = 1;
            for (long i = 0; i < 2 * ideal_valuation(F, base.cond, P) + 2; ++i) qe *= q;
            Z inv;
            mpz_invert(inv.get_mpz_t(), M.get_mpz_t(), qe.get_mpz_t());
            // X = 1 mod qe, Y = 0 mod qe
            X = X + M * Z(((1 - X) * inv) % qe);
            Y = Y + M * Z(((0 - Y) * inv) % qe);
            M *= qe;
        }
        KElem mu(F, Q(X), Q(Y));
        Zp v = roots.root(-base.fin_angle(mu));
        return v * u.pow(at_pbar ? -base.b : -base.a);
    };
    if (x.at_P) val *= local(*x.at_P, false);
    if (x.at_Pbar) val *= local(*x.at_Pbar, true);
    return val;
}

HeckeChar alpha_char(const Field& F, long p, long modulus) {
    auto iota = PadicEmbedding::make(F, p, 4);
    auto roots = RootIdent::make(F, iota);
    auto s = prime_split(F, p);
    auto fin = [F, p, roots](const KElem& mu) { return qq(-roots.dlog(residue_mod_P(F, mu, p)), p - 1); };
    return HeckeChar::make(F, 1, 0, s.P, fin, {}, std::lcm(modulus, p));
}

HeckeChar alpha_bar_char(const Field& F, long p, long modulus) {
    auto iota = PadicEmbedding::make(F, p, 4);
    auto roots = RootIdent::make(F, iota);
    auto s = prime_split(F, p);
    auto fin = [F, p, roots](const KElem& mu) {
        return qq(-roots.dlog(residue_mod_P(F, mu.conj(), p)), p - 1);
    };
    return HeckeChar::make(F, 0, 1, s.Pbar, fin, {}, std::lcm(modulus, p));
}

LambdaHeckeChar xi_family(const HeckeChar& chi0, long p, long N, long MT) {
    const Field& F = chi0.F;
    if (F.h != 1) throw std::domain_error("Lambda-adic characters are implemented for class number one");
    long k0 = chi0.weight();
    if (k0 % 2 != 0 || chi0.a != -k0 / 2) throw std::invalid_argument("chi0 must have infinity type (-k/2, k/2)");
    LambdaHeckeChar X;
    X.chi0 = chi0;
    X.k0 = k0;
    X.p = p;
    X.N = N;
    X.MT = MT;
    long guard = 2;
    for (long q = p; q <= MT; q *= p) guard += MT / q;
    X.iota = PadicEmbedding::make(F, p, N + guard);
    X.roots = RootIdent::make(F, X.iota);
    return X;
}

LambdaElem LambdaHeckeChar::eval(const Ideal& B) const {
    const Field& F = chi0.F;
    auto mu = principal_generator(F, B);
    if (!mu) throw std::logic_error("ideal without generator");
    Zp im = iota(*mu), imb = iota(mu->conj());
    if (!im.is_unit() || !imb.is_unit()) throw std::domain_error("ideal must be coprime to p");
    PadicHeckeChar c0{chi0, iota, roots};
    Zp v = c0.eval(B);
    Zp al = one_unit(im), alb = one_unit(imb);
    v = v * al.pow(k0 / 2) * alb.pow(-k0 / 2);
    Zp sb = gamma_exponent(im), sbb = gamma_exponent(imb);
    Zp half = Zp(p, iota.N, 2).inv();
    Zp e = (sbb - sb) * half;
    if (branch_sign < 0) e = -e;
    auto L = LambdaElem::one_plus_T_pow(p, N, MT, e);
    return L.scale(v.reduce(N));
}

HeckeChar specialize_xi(const LambdaHeckeChar& Xi, const ArithmeticPoint& P) {
    if (P.eps_order_exp != 0 && P.eps_index != 0)
        throw std::domain_error("specialization at a nontrivial wild character is not supported");
    long k = P.k;
    if ((k - Xi.k0) % 2 != 0) throw std::invalid_argument("k - k0 must be even");
    const Field& F = Xi.chi0.F;
    long p = Xi.p;
    long e = (k - Xi.k0) / 2;
    Ideal cond = Xi.chi0.cond;
    auto s = prime_split(F, p);
    bool ramified = mod(e, p - 1) != 0;
    if (ramified) cond = ideal_mul(F, cond, ideal_mul(F, s.P, s.Pbar));
    auto chi0 = Xi.chi0;
    auto roots = Xi.roots;
    std::function<Q(const KElem&)> fin;
    if (ramified || chi0.fin)
        fin = [F, p, e, chi0, roots, ramified](const KElem& mu) {
            Q a = chi0.fin_angle(mu);
            if (!ramified) return a;
            long i1 = roots.dlog(residue_mod_P(F, mu, p));
            long i2 = roots.dlog(residue_mod_P(F, mu.conj(), p));
            // alpha^{-e} alphabar^{e}
            return Q(a + qq(e * i1, p - 1) - qq(e * i2, p - 1));
        };
    return HeckeChar::make(F, -k / 2, k / 2, cond, fin, {}, std::lcm(Xi.chi0.modulus, p));
}

}  // namespace kudla
