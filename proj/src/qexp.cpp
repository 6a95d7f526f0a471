#include "kudla/qexp.hpp"

#include <cmath>

namespace kudla {

long kronecker_symbol(long D, long n) {
    if (n <= 0) throw std::invalid_argument("kronecker_symbol needs n > 0");
    long r = 1;
    for (long q = 2; q * q <= n; ++q)
        while (n % q == 0) {
            r *= kronecker(D, q);
            n /= q;
        }
    if (n > 1) r *= kronecker(D, n);
    return r;
}

DirChar DirChar::trivial(long modulus) {
    DirChar c;
    c.modulus = modulus;
    c.v.assign(modulus, 0);
    for (long n = 0; n < modulus; ++n) c.v[n] = std::gcd(n, modulus) == 1 ? 1 : 0;
    return c;
}

DirChar DirChar::kronecker_char(long D) {
    DirChar c;
    c.modulus = std::labs(D);
    c.v.assign(c.modulus, 0);
    for (long n = 1; n < c.modulus; ++n) c.v[n] = static_cast<int>(kronecker_symbol(D, n));
    return c;
}

DirChar DirChar::operator*(const DirChar& o) const {
    DirChar c;
    c.modulus = std::lcm(modulus, o.modulus);
    c.v.assign(c.modulus, 0);
    for (long n = 0; n < c.modulus; ++n) c.v[n] = (*this)(n) * o(n);
    return c;
}

bool DirChar::operator==(const DirChar& o) const {
    long m = std::lcm(modulus, o.modulus);
    for (long n = 0; n < m; ++n)
        if ((*this)(n) != o(n)) return false;
    return true;
}

Growth growth_add(const Growth& a, const Growth& b) { return {a.C + b.C, std::max(a.A, b.A)}; }

// sum_{i <= n} max(i,1)^A1 max(n-i,1)^A2 <= (n+1) max(n,1)^{A1+A2} <= 2 max(n,1)^{A1+A2+1}
Growth growth_mul(const Growth& a, const Growth& b) { return {2 * a.C * b.C, a.A + b.A + 1}; }

QExp<CBall> to_ball(const Field& F, const QExp<KElem>& f) {
    return qexp_map<CBall>(f, [&](const KElem& x) { return CBall::from_k(F, x); });
}

QExp<Zp> to_padic(const PadicEmbedding& iota, const QExp<KElem>& f) {
    auto r = qexp_map<Zp>(f, [&](const KElem& x) { return iota(x); });
    r.growth.reset();
    return r;
}

namespace {

Q factorial(long m) {
    Z f = 1;
    for (long i = 2; i <= m; ++i) f *= i;
    return Q(f);
}

Q qpow(const Q& x, long e) {
    Q r = 1;
    for (long i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace

JacobiExp<KElem> intrinsic_theta(const Field& F, const Ideal& A, long M, long N, Kernel k) {
    if (M < 0 || N < 0) throw std::invalid_argument("negative truncation");
    KElem w0 = A.basis0(F), w1 = A.basis1(F);
    Q NA = A.norm();
    Q qa = w0.norm() / NA, qb = (w0 * w1.conj()).trace() / NA, qc = w1.norm() / NA;
    if (qa.get_den() != 1 || qb.get_den() != 1 || qc.get_den() != 1) throw std::logic_error("norm form not integral");
    QuadForm2 f{qa.get_num().get_si(), qb.get_num().get_si(), qc.get_num().get_si()};
    auto shells = shell_vectors(f, N, k);
    JacobiExp<KElem> J;
    J.slices.resize(M + 1);
    KElem zero(F, 0);
    for (long m = 0; m <= M; ++m) {
        auto& s = J.slices[m];
        s.c.assign(N + 1, zero);
        s.weight = m + 1;
        s.level = std::labs(F.D);
        s.chi = DirChar::kronecker_char(F.D);
        s.period = m;
        Q big = NA > 1 ? NA : Q(1);
        s.growth = Growth{12 * qpow(big, (m + 1) / 2) / factorial(m), Q(m + 1, 2)};
    }
    for (long n = 0; n <= N; ++n)
        for (const auto& [u, v] : shells[n]) {
            KElem a = w0 * Q(u) + w1 * Q(v);
            KElem pw(F, 1);
            for (long m = 0; m <= M; ++m) {
                J.slices[m].c[n] += pw * (1 / factorial(m));
                pw = pw * a;
            }
        }
    return J;
}

JacobiExp<KElem> jacobi_rescale(const JacobiExp<KElem>& J, const KElem& lambda) {
    JacobiExp<KElem> R = J;
    KElem pw = ring_from(J.slices[0].c[0], 1);
    Q nl = lambda.norm();
    Q big = nl > 1 ? nl : Q(1);
    for (long m = 0; m <= J.M(); ++m) {
        for (auto& x : R.slices[m].c) x = x * pw;
        if (R.slices[m].growth) R.slices[m].growth->C *= qpow(big, (m + 1) / 2);
        pw = pw * lambda;
    }
    return R;
}

QExp<KElem> theta_deriv(const Field& F, const JacobiExp<KElem>& J, long m) {
    if (m < 0 || m > J.M()) throw std::out_of_range("theta_deriv: slice index out of range");
    auto r = J.slices[m];
    Q f = factorial(m);
    for (auto& x : r.c) x = x * f;
    if (r.growth) r.growth->C *= f;
    r.weight = m + 1;
    r.level = std::labs(F.D);
    r.chi = DirChar::kronecker_char(F.D);
    return r;
}

CMForm theta_cm(const HeckeChar& psi, long N) {
    const Field& F = psi.F;
    if (psi.b != 0 || psi.a < 0) throw std::invalid_argument("theta_cm needs infinity type (m, 0)");
    if (F.h != 1) throw std::domain_error("exact CM expansions are implemented for class number one");
    long m = psi.a;
    CMForm f;
    auto& q = f.q;
    KElem zero(F, 0);
    q.c.assign(N + 1, zero);
    for (long n = 1; n <= N; ++n)
        for (long s = 1; s * s <= n; ++s) {
            if (n % (s * s) != 0) continue;
            long a = n / (s * s);
            for (long b = 0; b < a; ++b) {
                if (KElem(F, b, 1).norm().get_num() % a != 0) continue;
                Ideal I{Q(s), a, b};
                auto v = psi.eval_or_throw(I).in_field(F);
                if (!v) throw std::domain_error("character value outside K");
                q.c[n] += *v;
            }
        }
    long cn = Z(psi.cond.norm().get_num()).get_si();
    q.weight = m + 1;
    q.level = std::labs(F.D) * cn;
    // nebentypus: omega_{K/Q}(n) psi((n)) / n^m
    DirChar chi;
    chi.modulus = q.level;
    chi.v.assign(q.level, 0);
    for (long n = 1; n < q.level; ++n) {
        if (std::gcd(n, q.level) != 1) continue;
        Q th = psi.fin_angle(KElem(F, n));
        int sgn_fin = sgn(th) == 0 ? 1 : (th == qq(1, 2) ? -1 : 0);
        if (sgn_fin == 0) throw std::domain_error("nebentypus is not quadratic");
        chi.v[n] = static_cast<int>(kronecker_symbol(F.D, n)) * sgn_fin;
    }
    q.chi = chi;
    q.growth = Growth{2, Q(m + 1, 2)};
    f.data.F = F;
    f.data.weight = q.weight;
    f.data.level = q.level;
    f.data.chi = chi;
    f.data.psi = psi;
    for (long l = 2; l <= N; ++l)
        if (is_prime(l)) f.data.a[l] = q.c[l];
    return f;
}

Zp unit_root(const Zp& a, long p, long w) {
    if (!a.is_unit()) throw std::domain_error("a_p is not a p-adic unit (not ordinary)");
    Zp pw = Zp(a.p, a.N, p).pow(w - 1);
    Zp x = a;
    for (long i = 0; i < a.N + 2; ++i) {
        Zp fx = x * x - a * x + pw;
        Zp df = Zp(a.p, a.N, 2) * x - a;
        x = x - fx * df.inv();
    }
    return x;
}

PStabilized p_stabilize(const CMForm& f, const PadicEmbedding& iota) {
    long p = iota.p;
    if (f.q.prec() < p) throw PrecisionError("need a_p for p-stabilization", p);
    if (f.q.level % p == 0) throw std::invalid_argument("level must be prime to p");
    PStabilized r;
    r.p = p;
    Zp ap = iota(f.q.c[p]);
    long w = f.q.weight;
    r.alpha = unit_root(ap, p, w);
    r.beta = Zp(p, iota.N, p).pow(w - 1) / r.alpha;
    auto fp = to_padic(iota, f.q);
    auto vp = qexp_Vq(fp, p);
    r.q = fp;
    for (long n = 0; n <= fp.prec(); ++n) r.q.c[n] = fp.c[n] - r.beta * vp.c[n];
    r.q.level = f.q.level * p;
    return r;
}

namespace {

using Mat = std::vector<std::vector<Zp>>;

Mat mat_mul(const Mat& A, const Mat& B) {
    size_t n = A.size();
    Mat C(n, std::vector<Zp>(n, ring_from(A[0][0], 0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k)
            for (size_t j = 0; j < n; ++j) C[i][j] = C[i][j] + A[i][k] * B[k][j];
    return C;
}

Mat mat_pow(Mat A, long e) {
    size_t n = A.size();
    Mat R(n, std::vector<Zp>(n, ring_from(A[0][0], 0)));
    for (size_t i = 0; i < n; ++i) R[i][i] = ring_from(A[0][0], 1);
    while (e) {
        if (e & 1) R = mat_mul(R, A);
        A = mat_mul(A, A);
        e >>= 1;
    }
    return R;
}

std::vector<Zp> mat_vec(const Mat& A, const std::vector<Zp>& v) {
    std::vector<Zp> r(A.size(), ring_from(v[0], 0));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] = r[i] + A[i][j] * v[j];
    return r;
}

}  // namespace

OrdinaryResult ordinary_projector(const std::vector<QExp<Zp>>& basis, const std::vector<std::vector<Zp>>& Up,
                                  const std::vector<Zp>& coords, long p, long max_m) {
    size_t n = basis.size();
    if (n == 0 || Up.size() != n || coords.size() != n) throw std::invalid_argument("dimension mismatch");
    // Up[j][i]: coefficient of basis j in U_p(basis i)
    for (size_t i = 0; i < n; ++i) {
        auto img = hecke_Uq(basis[i], p);
        for (long t = 0; t <= img.prec(); ++t) {
            Zp s = ring_from(coords[0], 0);
            for (size_t j = 0; j < n; ++j) s = s + Up[j][i] * basis[j].c[t];
            if (!s.eq(img.c[t])) throw std::invalid_argument("U_p matrix inconsistent with the expansions");
        }
    }
    Mat P = Up;
    std::vector<Zp> prev = mat_vec(P, coords);
    int stable = 0;
    for (long m = 2; m <= max_m; ++m) {
        P = mat_pow(P, m);
        auto cur = mat_vec(P, coords);
        bool same = true;
        for (size_t i = 0; i < n; ++i)
            if (!cur[i].eq(prev[i])) same = false;
        stable = same ? stable + 1 : 0;
        prev = cur;
        if (stable >= 2) {
            OrdinaryResult r;
            r.coords = cur;
            r.m = m - 2;
            r.q = basis[0];
            for (long t = 0; t <= r.q.prec(); ++t) {
                Zp s = ring_from(coords[0], 0);
                for (size_t j = 0; j < n; ++j)
                    if (t <= basis[j].prec()) s = s + cur[j] * basis[j].c[t];
                r.q.c[t] = s;
            }
            return r;
        }
    }
    throw std::runtime_error("ordinary projector did not converge within the iteration budget");
}

CBall eval_cm(const QExp<CBall>& g, const CBall& tau0, double max_tail) {
    if (!g.growth) throw std::invalid_argument("eval_cm needs a growth certificate");
    if (!tau0.im.positive()) throw std::domain_error("tau must lie in the upper half plane");
    CBall q = e2pi(tau0);
    long N = g.prec();
    CBall acc(0);
    for (long n = N; n >= 0; --n) acc = acc * q + g.c[n];
    // tail: C (N+1)^A r^{N+1} / (1 - rho), rho = (1 + 1/(N+1))^A r
    RBall r = RBall((RBall(-2) * RBall::pi() * tau0.im).exp());
    RBall C(g.growth->C), A(g.growth->A);
    RBall n1(N + 1);
    RBall rho = ((RBall(1) + RBall(1) / n1).log() * A).exp() * r;
    double tail;
    if (!(RBall(1) - rho).positive()) {
        tail = INFINITY;
    } else {
        RBall t = C * (n1.log() * A).exp() * r.pow(N + 1) / (RBall(1) - rho);
        tail = t.mag();
    }
    if (!(tail <= max_tail)) throw TailError("tail bound exceeds the requested accuracy", tail);
    acc.add_error(tail);
    if (g.period != 0) {
        CBall tp = CBall(RBall(0), RBall(2) * RBall::pi());
        acc = acc * tp.pow(g.period);
    }
    return acc;
}

CBall eval_cm(const Field& F, const QExp<KElem>& g, const CBall& tau0, double max_tail) {
    return eval_cm(to_ball(F, g), tau0, max_tail);
}

Q bernoulli(long n) {
    std::vector<Q> B(n + 1);
    B[0] = 1;
    for (long m = 1; m <= n; ++m) {
        Q s = 0;
        Z binom = 1;  // C(m+1, k)
        for (long k = 0; k < m; ++k) {
            s += Q(binom) * B[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        B[m] = -s / (m + 1);
    }
    return B[n];
}

QExp<Q> eisenstein(long k, long N) {
    if (k < 4 || k % 2 != 0) throw std::invalid_argument("Eisenstein weight must be even and at least 4");
    Q factor = Q(2 * k) / bernoulli(k);
    QExp<Q> E;
    E.c.assign(N + 1, Q(0));
    E.c[0] = 1;
    for (long n = 1; n <= N; ++n) {
        Z s = 0;
        for (long d = 1; d * d <= n; ++d) {
            if (n % d != 0) continue;
            Z t;
            mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k - 1));
            s += t;
            if (d * d != n) {
                mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(n / d), static_cast<unsigned long>(k - 1));
                s += t;
            }
        }
        E.c[n] = -factor * Q(s);
    }
    E.weight = k;
    E.level = 1;
    E.growth = Growth{2 * abs(factor) + 1, Q(k - 1)};
    return E;
}

}  // namespace kudla
