#include "kudla/family.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace kudla {

namespace {

Zp teich_q(long p, long N, const Q& x) { return teichmuller(p, Zp::from_q(p, N, x).v, N); }

long lift_level(const Field& F, long p, long r) {
    long lv = std::labs(F.D);
    for (long i = 0; i < r; ++i) lv *= p;
    return lv;
}

LiftData lattice_data(const Field& F, long p, long r) {
    LiftData L;
    L.F = F;
    L.p = p;
    L.r = r;
    return L;
}

// one_plus_T_pow loses v_p(i!) digits in degree i
long guard_digits(long p, long MT) {
    long g = 2;
    for (long q = p; q <= MT; q *= p) g += MT / q;
    return g;
}

KElem delta(const Field& F) { return KElem(F, -F.t, 2); }

void check_member(const CMHidaFamily& Fm, long w) {
    if (w < 2 || (w - Fm.w0) % (Fm.p - 1) != 0)
        throw std::invalid_argument("weight outside the family's residue class mod p-1");
}

}  // namespace

CMHidaFamily cm_hida_family(const Field& F, long m0, long p, long N, long MT, long prec) {
    auto sp = prime_split(F, p);
    if (sp.kind != Split::split) throw std::invalid_argument("p must split: the CM family is not ordinary otherwise");
    if (prec < p) throw std::invalid_argument("need at least p coefficients");
    CMHidaFamily Fm;
    Fm.F = F;
    Fm.psi0 = cm_char(F, m0);
    Fm.m0 = m0;
    Fm.w0 = m0 + 1;
    Fm.p = p;
    Fm.N = N;
    Fm.MT = MT;
    Fm.iota = PadicEmbedding::make(F, p, N + guard_digits(p, MT));
    auto base = theta_cm(Fm.psi0, p).q;
    Fm.chi = base.chi;
    Fm.level = base.level * p;
    PadicHeckeChar pc = to_padic(Fm.psi0, p, N);
    Fm.a.assign(prec + 1, LambdaElem(p, N, MT));
    for (long n = 1; n <= prec; ++n) {
        std::set<Ideal> seen;
        for (const KElem& mu : elements_of_norm(F, Ideal::unit(), Q(n))) {
            Ideal A = Ideal::principal(F, mu);
            if (!seen.insert(A).second) continue;
            Zp im = Fm.iota(mu);
            if (!im.is_unit()) continue;  // P | A
            Zp c = pc.eval(A) * one_unit(im).pow(-Fm.w0).reduce(N);
            Fm.a[n] = Fm.a[n] + LambdaElem::one_plus_T_pow(p, N, MT, gamma_exponent(im)).scale(c);
        }
    }
    return Fm;
}

QExp<Zp> specialize_family(const CMHidaFamily& Fm, long w) {
    check_member(Fm, w);
    ArithmeticPoint P{w, 0, 0};
    QExp<Zp> r;
    r.weight = w;
    r.level = Fm.level;
    r.chi = Fm.chi;
    for (const auto& x : Fm.a) r.c.push_back(arithmetic_point_eval(x, P).value);
    return r;
}

LambdaElem lambda_inv(const LambdaElem& x) {
    if (!x.c.at(0).is_unit()) throw std::domain_error("constant term is not a unit");
    LambdaElem r(x.p, x.N, x.MT);
    Zp b0 = x.c[0].inv();
    r.c[0] = b0;
    for (long n = 1; n < x.MT; ++n) {
        Zp s(x.p, x.N, 0);
        for (long i = 1; i <= n; ++i) s += x.c[i] * r.c[n - i];
        r.c[n] = -(b0 * s);
    }
    return r;
}

LambdaElem universal_power(const CMHidaFamily& Fm, long d, long extra) {
    if (d % Fm.p == 0) throw std::domain_error("d must be prime to p");
    if (extra < 1) throw std::invalid_argument("extra weight must be positive");
    Zp dz(Fm.p, Fm.N + guard_digits(Fm.p, Fm.MT), d);
    Zp c = teichmuller(Fm.p, Z(d), Fm.N).pow(Fm.w0) * dz.reduce(Fm.N).pow(extra - 1);
    return LambdaElem::one_plus_T_pow(Fm.p, Fm.N, Fm.MT, gamma_exponent(dz)).scale(c);
}

std::vector<LambdaElem> star_convolve(const CMHidaFamily& Fm, const QExp<KElem>& g) {
    long L = std::min(Fm.prec(), g.prec());
    std::vector<Zp> ig;
    for (long i = 0; i <= L; ++i) {
        try {
            ig.push_back(Fm.iota(g.c[i]).reduce(Fm.N));
        } catch (const std::exception& e) {
            throw std::domain_error("coefficient " + std::to_string(i) + " is not p-integral: " + e.what());
        }
    }
    std::vector<LambdaElem> out(L + 1, LambdaElem(Fm.p, Fm.N, Fm.MT));
    for (long j = 0; j <= L; ++j)
        for (long i = 0; i <= j; ++i)
            if (!ig[j - i].is_zero()) out[j] = out[j] + Fm.a[i].scale(ig[j - i]);
    return out;
}

std::vector<LambdaElem> lambda_hecke(const CMHidaFamily& Fm, const std::vector<LambdaElem>& c, long n, long wg,
                                     const DirChar& chig, long level, long out_prec) {
    long avail = (static_cast<long>(c.size()) - 1) / n;
    if (out_prec > avail) throw PrecisionError("lambda_hecke needs more coefficients", n * out_prec);
    DirChar chi = Fm.chi * chig;
    std::vector<LambdaElem> out(out_prec + 1, LambdaElem(Fm.p, Fm.N, Fm.MT));
    for (long j = 0; j <= out_prec; ++j) {
        long g = j == 0 ? n : std::gcd(n, j);
        for (long d = 1; d <= g; ++d) {
            if (g % d != 0 || std::gcd(d, level) != 1) continue;
            int x = chi(d);
            if (x == 0) continue;
            LambdaElem t = c[n * j / (d * d)] * universal_power(Fm, d, wg);
            out[j] = out[j] + t.scale(Zp(Fm.p, Fm.N, x));
        }
    }
    return out;
}

LambdaFJ lambda_fj(const CMHidaFamily& Fm, const LambdaHeckeChar& Xi, long j, long r, long nmax, long M, long J,
                   int weight_branch) {
    if (j % 2 != 0) throw std::invalid_argument("j must be even");
    if (M >= Fm.p) throw std::invalid_argument("slices m >= p have p in the denominator");
    if (nmax * J > Fm.prec()) throw PrecisionError("family too short", nmax * J);
    const Field& F = Fm.F;
    long p = Fm.p, N = Fm.N, MT = Fm.MT;
    LambdaFJ out;
    out.family = Fm;
    out.Xi = Xi;
    out.j = j;
    out.r = r;
    out.M = M;
    out.J = J;
    out.weight_branch = weight_branch;
    LiftData L0 = lattice_data(F, p, r);
    long level = lift_level(F, p, r);
    DirChar kr = DirChar::kronecker_char(F.D);
    ClassGroup G = class_group(F, p);
    long G2 = N + guard_digits(p, MT);
    Zp half = Zp(p, G2, 2).inv();
    for (int ci = 0; ci < G.size(); ++ci) {
        auto reps = b_representatives(L0, G.reps[ci]);
        for (long n = 1; n <= nmax; ++n)
            for (size_t bi = 0; bi < reps.size(); ++bi) {
                const Ideal& b = reps[bi].b;
                LambdaFJEntry e;
                e.class_index = ci;
                e.n = n;
                e.b_index = static_cast<int>(bi);
                e.b = b;
                e.tau = reps[bi].tau;
                e.char_factor = lambda_inv(Xi.eval(b));
                Q nb = b.norm();
                Zp s = gamma_exponent(Zp::from_q(p, G2, nb)) * half;
                if (weight_branch < 0) s = -s;
                e.weight_factor = LambdaElem::one_plus_T_pow(p, N, MT, s).scale(teich_q(p, N, nb).pow(j / 2));
                auto Jr = jacobi_rescale(intrinsic_theta(F, theta_lattice(L0, b), M, n * J), delta(F) * Q(n));
                for (long m = 0; m <= M; ++m)
                    e.hecke.push_back(lambda_hecke(Fm, star_convolve(Fm, Jr.slices[m]), n, m + 1, kr, level, J));
                out.entries.push_back(std::move(e));
            }
    }
    return out;
}

char SpecializationCertificate::first_failing_factor() const { return failures.empty() ? 0 : failures.front().factor; }

SpecializationCertificate specialize_fj(const LambdaFJ& L, long k, long required) {
    const CMHidaFamily& Fm = L.family;
    const Field& F = Fm.F;
    long p = Fm.p, N = Fm.N;
    check_member(Fm, k - 1);
    SpecializationCertificate cert;
    cert.k = k;
    cert.precision = N;
    ArithmeticPoint Pk{k, 0, 0}, Pk1{k - 1, 0, 0};

    // classical side
    PadicHeckeChar xk = to_padic(specialize_xi(L.Xi, Pk), p, N);
    long nmax = 0;
    for (const auto& e : L.entries) nmax = std::max(nmax, e.n);
    CMForm fk = theta_cm(cm_char(F, k - 2), std::max(nmax * L.J, p));
    QExp<Zp> fst = p_stabilize(fk, Fm.iota).q;
    LiftData L0 = lattice_data(F, p, L.r);
    long level = lift_level(F, p, L.r);

    auto compare = [&](size_t ei, char fac, long m, long i, const LambdaElem& lam, const ArithmeticPoint& P,
                       const Zp& ref) {
        PointValue pv = arithmetic_point_eval(lam, P, required);
        long prec = std::min(pv.precision, ref.N);
        cert.precision = std::min(cert.precision, prec);
        ++cert.compared;
        if (!pv.value.eq(ref, prec)) {
            std::ostringstream os;
            os << "Lambda side " << pv.value.str() << ", classical " << ref.str();
            cert.failures.push_back({ei, fac, m, i, os.str()});
        }
    };

    for (size_t ei = 0; ei < L.entries.size(); ++ei) {
        const auto& e = L.entries[ei];
        compare(ei, 'a', -1, -1, e.char_factor, Pk, xk.eval(e.b).inv());
        Q nb = e.b.norm();
        Zp wref = Zp::from_q(p, N, nb).pow(k / 2) * teich_q(p, N, nb).pow((L.j - k) / 2);
        compare(ei, 'b', -1, -1, e.weight_factor, Pk, wref);
        auto Jr = jacobi_rescale(intrinsic_theta(F, theta_lattice(L0, e.b), L.M, e.n * L.J), delta(F) * Q(e.n));
        for (long m = 0; m <= L.M; ++m) {
            auto g = qexp_mul(qexp_truncate(fst, e.n * L.J), to_padic(Fm.iota, Jr.slices[m]));
            g.level = level;
            auto t = hecke_Tn(g, e.n, L.J);
            for (long i = 0; i <= L.J; ++i) compare(ei, 'c', m, i, e.hecke[m][i], Pk1, t.c[i]);
        }
    }
    return cert;
}

SerreLimitReport serre_limit_check(const std::vector<std::vector<Zp>>& seq, const std::vector<Zp>& limit, long shift) {
    SerreLimitReport rep;
    rep.converges = !seq.empty();
    for (size_t i = 0; i < seq.size(); ++i) {
        if (seq[i].size() != limit.size()) throw std::invalid_argument("length mismatch");
        long d = limit.empty() ? 0 : limit[0].N;
        for (size_t c = 0; c < limit.size(); ++c) d = std::min(d, (seq[i][c] - limit[c]).valuation());
        rep.digits.push_back(d);
        if (d < static_cast<long>(i) + 1 + shift && rep.first_bad < 0) {
            rep.first_bad = static_cast<long>(i);
            rep.converges = false;
        }
    }
    return rep;
}

}  // namespace kudla
