#include "kudla/lift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kudla {

namespace {

Laurent S(const char* s, const Q& e = 1) { return Laurent::sym(s, e); }
Laurent qp(const Q& e) { return Laurent::sym("q", e); }

Q half(long k) { return qq(k, 2); }

long modp(long a, long p) { return mod(a, p); }

long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = modp(a, p);
    while (nr != 0) {
        long qq = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - qq * nt);
        std::tie(r, nr) = std::make_pair(nr, r - qq * nr);
    }
    if (r != 1) throw std::domain_error("not invertible mod p");
    return modp(t, p);
}

Q qpow_l(long q, long e) {
    Z v;
    mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(std::labs(e)));
    return e >= 0 ? Q(v) : Q(1) / Q(v);
}

}  // namespace

std::map<std::string, long> torsion_orders(Split s) {
    if (s == Split::ramified) return {{"e", 2}, {"h", 2}};
    return {};
}

Laurent lifted_eigenvalue_naive_sym(Split s, long k, bool conj_prime) {
    Laurent e = S("e"), h = S("h"), a = S("a");
    // value at Qbar of a character is the inverse of its value at Q
    Laurent ebar = conj_prime ? e : e.pow(-1), hbar = conj_prime ? h : h.pow(-1);
    switch (s) {
        case Split::split:
            return qp(2 - half(k)) * ebar * a + qp(1) * hbar * ebar.pow(-2);
        case Split::ramified:
            return (qp(2 - half(k)) * ebar * (a + S("ab")) + qp(1) * hbar * ebar.pow(-2)).reduce(torsion_orders(s));
        case Split::inert:
            return qp(4 - k) * a * a + Laurent(2) * qp(2) + qp(1);
    }
    return {};
}

Laurent lifted_eigenvalue_sym(Split s, long k) {
    Laurent e = S("e"), h = S("h"), a = S("a");
    Laurent ebar = e.pow(-1), hbar = h.pow(-1);
    switch (s) {
        case Split::split:
            return ebar * qp(1) * a + qp(half(k)) * hbar * ebar.pow(-2);
        case Split::ramified:
            return (ebar * qp(1) * (a + S("ab")) + qp(half(k)) * hbar * ebar.pow(-2)).reduce(torsion_orders(s));
        case Split::inert:
            return qp(1) * a * a + Laurent(2) * qp(k - 1) + qp(k - 2);
    }
    return {};
}

Laurent lifted_eigenvalue_normalized_sym(Split s, long k) {
    Q Nexp = s == Split::inert ? Q(2) : Q(1);
    return (lifted_eigenvalue_naive_sym(s, k) * qp(Nexp * (half(k) - 1))).reduce(torsion_orders(s));
}

Laurent lifted_eigenvalue_p_sym() { return qp(2) * S("e").pow(-1) * S("a"); }

Laurent shintani_euler(Split s, long k, EulerTable t) {
    Laurent x = S("x"), one(1);
    Laurent h = S("h");
    if (s == Split::split) {
        Laurent Ninv = qp(-1);
        Laurent lam = lifted_eigenvalue_naive_sym(s, k), lam_bar = lifted_eigenvalue_naive_sym(s, k, true);
        return one - lam_bar * h.pow(-1) * Ninv * x + lam * h.pow(-1) * Ninv * x.pow(2) - h.pow(-2) * x.pow(3);
    }
    Q Nexp = s == Split::inert ? Q(2) : Q(1);
    Laurent lam = lifted_eigenvalue_naive_sym(s, k);
    Laurent hinv = s == Split::inert ? Laurent(1) : h.pow(-1);
    // literal: N in the inert row, N^{1/2} in the ramified row; corrected: the other way round
    bool use_sqrt = (s == Split::ramified) == (t == EulerTable::literal);
    Laurent c = use_sqrt ? qp(Nexp / 2) : qp(Nexp);
    Laurent quad = one + (c - lam * hinv) * qp(-Nexp) * x + x.pow(2);
    return ((one - x) * quad).reduce(torsion_orders(s));
}

Laurent base_change_product(Split s, long k) {
    Laurent x = S("x"), one(1), a = S("a");
    Laurent e = S("e"), h = S("h");
    Laurent abel_lin = one - e.pow(-2) * x;
    switch (s) {
        case Split::split: {
            // Satake parameters of f at q with product q^{k-2}; X = x q^{1-k/2}
            Laurent c = e * h.pow(-1);
            Laurent bc = one - a * c * qp(1 - half(k)) * x + c.pow(2) * x.pow(2);
            return bc * abel_lin;
        }
        case Split::ramified: {
            // parameters a, abar with a abar = q^{k-2}
            Laurent c = e * h.pow(-1);
            Laurent bc = one - (a + S("ab")) * c * qp(1 - half(k)) * x + c.pow(2) * x.pow(2);
            return (bc * abel_lin).reduce(torsion_orders(s));
        }
        case Split::inert: {
            // squares of the Satake parameters, product q^{k-2} with omega(q) = -1; X = x q^{2-k}
            Laurent bc = one - (a * a * qp(2 - k) + Laurent(2)) * x + x.pow(2);
            return bc * (one - x);
        }
    }
    return {};
}

EulerCheck euler_factorization_check(Split s, long k, EulerTable t) {
    EulerCheck r;
    r.lhs = shintani_euler(s, k, t);
    r.rhs = base_change_product(s, k);
    bool shape = r.lhs.max_exponent("x") == 3 && r.lhs.coeff("x", 0) == Laurent(1);
    r.ok = shape && r.lhs == r.rhs;
    return r;
}

DivisibilityCheck never_ordinary_check(Split s, long k) {
    DivisibilityCheck r;
    r.value = lifted_eigenvalue_sym(s, k);
    r.ok = r.value.divisible_by("q", 1, {"a", "ab"});
    return r;
}

KElem lifted_eigenvalue_naive(const Field& F, long q, const KElem& aq, const HeckeChar& chi, long k) {
    auto sp = prime_split(F, q);
    auto chibar = chi.eval_or_throw(sp.Pbar).in_field(F);
    if (!chibar) throw std::domain_error("character value outside K");
    switch (sp.kind) {
        case Split::split:
            return aq * qpow_l(q, 2 - k / 2) + *chibar * Q(q);
        case Split::ramified:
            return (aq + aq.conj()) * qpow_l(q, 2 - k / 2) + *chibar * Q(q);
        case Split::inert:
            return aq * aq * qpow_l(q, 4 - k) + KElem(F, 2 * q * q + q);
    }
    return {};
}

KElem lifted_eigenvalue(const Field& F, long q, const KElem& aq, const HeckeChar& chi, long k) {
    auto sp = prime_split(F, q);
    auto chibar = chi.eval_or_throw(sp.Pbar).in_field(F);
    if (!chibar) throw std::domain_error("character value outside K");
    switch (sp.kind) {
        case Split::split:
            return aq * Q(q) + *chibar * qpow_l(q, k / 2);
        case Split::ramified:
            return (aq + aq.conj()) * Q(q) + *chibar * qpow_l(q, k / 2);
        case Split::inert:
            return aq * aq * Q(q) + KElem(F, Q(2) * qpow_l(q, k - 1) + qpow_l(q, k - 2));
    }
    return {};
}

KElem lifted_eigenvalue_p(const Field& F, long p, const KElem& ap) {
    (void)F;
    return ap * Q(p * p);
}

// ---- multiplicity lemma

namespace {
struct SplitData {
    long mu;        // image of delta in the first component
    long tau_diff;  // tau^(1) - tau^(2)
};

}  // namespace

static SplitData data_for(const Field& F, long p) {
    auto sp = prime_split(F, p);
    if (sp.kind != Split::split) throw std::invalid_argument("multiplicity lemma needs p split");
    long t1 = modp(-sp.root, p);       // tau mod P
    long t2 = modp(F.t - t1, p);       // tau mod Pbar
    long mu = modp(2 * t1 - F.t, p);   // delta = 2 tau - t
    return {mu, modp(t1 - t2, p)};
}

namespace {
Field lemma_field(long p) {
    // smallest |d| with p split and p not dividing D; the lemma is local at p
    for (long d : {-7L, -1L, -2L, -3L, -11L, -19L, -43L, -67L, -163L, -5L, -6L, -10L, -13L}) {
        Field F = Field::make(d);
        if (F.D % p == 0) continue;
        if (kronecker(F.D, p) == 1) return F;
    }
    throw std::invalid_argument("no split field found");
}
}  // namespace

long pairing_mod_p(long p, const std::vector<long>& X) {
    Field F = lemma_field(p);
    long mu = data_for(F, p).mu, mi = inv_mod(mu, p);
    // y^T J_1 x with J_1 = [[0,0,mu^{-1}],[0,1,0],[-mu^{-1},0,0]]; x2 carries p^r
    return modp(X[3] * mi * X[2] - X[5] * mi * X[0], p);
}

bool in_T(long p, long r, const std::vector<long>& X) {
    (void)r;
    Field F = lemma_field(p);
    auto sd = data_for(F, p);
    // X1 = integer mod p^r: equal components; X3 = b + tau: components differ by tau^(1) - tau^(2)
    return modp(X[0] - X[3], p) == 0 && modp(X[2] - X[5] - sd.tau_diff, p) == 0;
}

namespace {

// membership of X in the image of the coset representative (a, b), standard action
bool in_image(long p, long r, long mu, long a, long b, const std::vector<long>& X) {
    long pr = r >= 1 ? 0 : 1;  // p^r mod p
    long x1 = X[0], x2 = X[1], x3 = X[2];
    // g1 = [[p, mu b, p^r a],[0,1,0],[0,0,1]] on Z_p + p^r Z_p + Z_p
    if (modp(x1 - pr * mu * b * x2 - pr * a * x3, p) != 0) return false;
    // standard coordinates of y: y_std = J_1^T y
    long mi = inv_mod(mu, p);
    long ys1 = modp(-mi * X[5], p), ys2 = X[4], ys3 = modp(mi * X[3], p);
    // g2 = [[1,0,0],[-mu b, p, 0],[-p^r a, 0, p]] on Z_p^3
    if (modp(ys2 + mu * b * ys1, p) != 0) return false;
    if (modp(ys3 + pr * a * ys1, p) != 0) return false;
    return true;
}

}  // namespace

long multiplicity(long p, long r, const std::vector<long>& X) {
    Field F = lemma_field(p);
    long mu = data_for(F, p).mu;
    long m = 0;
    for (long a = 0; a < p; ++a)
        for (long b = 0; b < p; ++b)
            if (in_image(p, r, mu, a, b, X)) ++m;
    return m;
}

MultiplicityReport lemma_check(long p, long r) {
    if (r < 1) throw std::invalid_argument("r must be positive");
    Field F = lemma_field(p);
    auto sd = data_for(F, p);
    MultiplicityReport rep;
    rep.p = p;
    rep.r = r;
    std::vector<std::vector<long>> vecs;
    // T fixes x1 = y1 and x3 = y3 + (tau^(1) - tau^(2))
    for (long y1 = 0; y1 < p; ++y1)
        for (long y2 = 0; y2 < p; ++y2)
            for (long y3 = 0; y3 < p; ++y3)
                for (long x2 = 0; x2 < p; ++x2) vecs.push_back({y1, x2, modp(y3 + sd.tau_diff, p), y1, y2, y3});
    for (const auto& X : vecs) {
        ++rep.vectors;
        long m = multiplicity(p, r, X);
        bool iso = pairing_mod_p(p, X) == 0;
        if (iso) ++rep.isotropic;
        rep.m_hist[m]++;
        rep.sum_m += m;
        long expect = iso ? p : 0;
        if (m != expect) {
            ++rep.exceptions;
            if (rep.sample_exceptions.size() < 8) {
                auto e = X;
                e.push_back(m);
                rep.sample_exceptions.push_back(e);
            }
        }
    }
    for (long a = 0; a < p; ++a)
        for (long b = 0; b < p; ++b)
            for (const auto& X : vecs)
                if (in_image(p, r, sd.mu, a, b, X)) ++rep.sum_images;
    return rep;
}

// ---- Fourier-Jacobi coefficients

namespace {

KElem delta_of(const Field& F) { return KElem(F, -F.t, 2); }

long level_of(const LiftData& L) {
    long lv = std::labs(L.F.D);
    for (long i = 0; L.p > 0 && i < L.r; ++i) lv *= L.p;
    return lv;
}

bool coprime_to(const Q& x, long p) {
    if (p <= 1) return true;
    return mpz_divisible_ui_p(x.get_num().get_mpz_t(), p) == 0 &&
           mpz_divisible_ui_p(x.get_den().get_mpz_t(), p) == 0;
}

CBall char_factor(const LiftData& L, const Ideal& b) {
    CBall e = L.eps.eval(b);
    CBall v = e * e * e / L.chi.eval(b);
    Q nb = b.norm();
    return v * CBall(RBall(nb).pow(L.k / 2));
}

CBall eps_a(const LiftData& L, const Ideal& a) {
    Ideal q = ideal_mul(L.F, ideal_conj(L.F, a), ideal_inv(L.F, a));
    return L.eps.eval(q);
}

constexpr double kEvalTail = 1e-30;

}  // namespace

std::vector<BRep> b_representatives(const LiftData& L, const Ideal& a) {
    const Field& F = L.F;
    ClassGroup G = class_group(F, L.p > 0 ? L.p : 1);
    std::vector<BRep> out;
    for (const Ideal& b0 : G.reps) {
        Ideal C0 = ideal_mul(F, a, ideal_conj(F, b0));
        KElem e0 = C0.basis0(F), e1 = C0.basis1(F);
        // x primitive in C0 with (x) C0^{-1} prime to p; then b = b0 / xbar has a bbar = C0 / x containing 1 primitively
        std::optional<KElem> found;
        for (long R = 0; R <= 12 && !found; ++R)
            for (long u = -R; u <= R && !found; ++u)
                for (long v = -R; v <= R && !found; ++v) {
                    if (std::max(std::labs(u), std::labs(v)) != R || std::gcd(u, v) != 1) continue;
                    if (v < 0 || (v == 0 && u < 0)) continue;
                    KElem x = e0 * Q(u) + e1 * Q(v);
                    if (coprime_to(x.norm() / C0.norm(), L.p)) found = x;
                }
        if (!found) throw std::logic_error("no representative prime to p");
        Ideal b = ideal_scale(F, b0, found->conj().inv());
        Ideal lat = ideal_scale(F, C0, found->inv());
        CMBasis cb = ideal_to_cm_basis(F, lat);
        if (!(cb.lambda == KElem(F, 1))) throw std::logic_error("1 is not primitive in a bbar");
        out.push_back({b, cb.tau});
    }
    return out;
}

Ideal theta_lattice(const LiftData& L, const Ideal& b) {
    const Field& F = L.F;
    Ideal pb = b;
    if (L.p > 0) {
        auto sp = prime_split(F, L.p);
        pb = ideal_mul(F, ideal_pow(F, sp.P, L.r), b);
    }
    return ideal_scale(F, ideal_conj(F, pb), delta_of(F));
}

namespace {

void check_lift(const LiftData& L) {
    if (L.k < 6 || L.k % 2 != 0) throw std::invalid_argument("weight must be even and at least 6");
    if (L.f.weight != L.k - 1) throw std::invalid_argument("f must have weight k-1");
    if (!L.f.growth) throw std::invalid_argument("f needs a growth certificate");
    if (L.p > 0 && prime_split(L.F, L.p).kind != Split::split) throw std::invalid_argument("p must split in K");
}

// value at tau of T_n applied to one slice expansion, raising the q-precision until the tail is small
template <class Build>
CBall hecke_eval(const Field& F, Build build, long n, long J0, long Jmax, const CBall& tau) {
    for (long J = J0;; J = J * 3 / 2 + 1) {
        J = std::min(J, Jmax);
        try {
            QExp<KElem> g = build(n * J);
            return eval_cm(F, hecke_Tn(g, n, J), tau, kEvalTail);
        } catch (const TailError&) {
            if (J >= Jmax) throw;
        }
    }
}

}  // namespace

FJCoefficient fj_p_modified(const LiftData& L, const Ideal& a, long n, long M) {
    check_lift(L);
    const Field& F = L.F;
    FJCoefficient out;
    out.a = a;
    out.n = n;
    out.taylor.assign(M + 1, CBall(0));
    if (n == 0) {
        if (!L.f.c.at(0).is_zero()) throw UnsupportedInput("constant coefficient needs a cuspidal f");
        return out;
    }
    if (n < 0) throw std::invalid_argument("negative Fourier-Jacobi index");
    long level = level_of(L);
    long Jmax = L.f.prec() / n;
    long J0 = L.qprec > 0 ? std::min(L.qprec, Jmax) : std::min(12L, Jmax);
    KElem nd = delta_of(F) * Q(n);
    for (const BRep& br : b_representatives(L, a)) {
        Ideal C = theta_lattice(L, br.b);
        CBall tau = CBall::from_k(F, br.tau);
        CBall fac = char_factor(L, br.b);
        // theta slices are rebuilt only when more precision is needed
        long have = -1;
        JacobiExp<KElem> Jr;
        for (long m = 0; m <= M; ++m) {
            auto build = [&](long N) {
                if (N > have) {
                    Jr = jacobi_rescale(intrinsic_theta(F, C, M, N), nd);
                    have = N;
                }
                QExp<KElem> g = qexp_mul(qexp_truncate(L.f, N), qexp_truncate(Jr.slices[m], N));
                g.level = level;
                return g;
            };
            out.taylor[m] += fac * hecke_eval(F, build, n, J0, Jmax, tau);
        }
    }
    CBall ea = eps_a(L, a);
    for (auto& c : out.taylor) c = c * ea;
    return out;
}

namespace {

ThetaSum fj_eval_reps(const LiftData& L, const Ideal& a, long n, const CBall& w, const std::vector<BRep>& reps) {
    check_lift(L);
    if (n < 1) throw std::invalid_argument("fj_eval needs n >= 1");
    const Field& F = L.F;
    long level = level_of(L);
    CBall nd = CBall::from_k(F, delta_of(F) * Q(n));
    QExp<CBall> fb = to_ball(F, L.f);
    struct Part {
        CBall v;
        double L;
    };
    std::vector<Part> parts;
    long terms = 0;
    CBall ea = eps_a(L, a);
    for (const BRep& br : reps) {
        Ideal C = theta_lattice(L, br.b);
        CBall tau0 = CBall::from_k(F, br.tau);
        CBall fac = char_factor(L, br.b) * ea;
        for (long ad = 1; ad <= n; ++ad) {
            if (n % ad != 0 || std::gcd(ad, level) != 1) continue;
            long d = n / ad;
            // n^{k-1} d^{-k}
            CBall coef = CBall(RBall(Q(n)).pow(L.k - 1) / RBall(Q(d)).pow(L.k)) * fac;
            for (long b = 0; b < d; ++b) {
                CBall tau1 = (tau0 * CBall(RBall(Q(ad))) + CBall(RBall(Q(b)))) / CBall(RBall(Q(d)));
                CBall fv = eval_cm(fb, tau1, kEvalTail);
                ThetaSum th = theta_ideal_eval(F, C, w * nd * CBall(RBall(Q(ad))), tau1);
                parts.push_back({coef * fv * th.value, th.log_scale});
                terms += th.terms;
            }
        }
    }
    ThetaSum out;
    out.terms = terms;
    out.value = CBall(0);
    if (parts.empty()) return out;
    double top = parts[0].L;
    for (const auto& p : parts) top = std::max(top, p.L);
    out.log_scale = top;
    for (const auto& p : parts)
        out.value += p.v * CBall((RBall::from_double(p.L) - RBall::from_double(top)).exp());
    return out;
}

}  // namespace

ThetaSum fj_eval(const LiftData& L, const Ideal& a, long n, const CBall& w) {
    return fj_eval_reps(L, a, n, w, b_representatives(L, a));
}

FJCoefficient fj_level1(const LiftData& L, const Ideal& a, long n, long M, const TraceData* trace) {
    if (!trace) throw UnsupportedInput("the level-one formula needs trace data for f times theta");
    const Field& F = L.F;
    FJCoefficient out;
    out.a = a;
    out.n = n;
    out.taylor.assign(M + 1, CBall(0));
    if (n == 0) return out;
    auto reps = b_representatives(L, a);
    for (int i = 0; i < static_cast<int>(reps.size()); ++i) {
        CBall fac = char_factor(L, reps[i].b);
        CBall tau = CBall::from_k(F, reps[i].tau);
        for (long m = 0; m <= M; ++m) {
            auto it = trace->slices.find({i, m});
            if (it == trace->slices.end()) throw UnsupportedInput("trace data missing a slice");
            QExp<CBall> g = it->second;
            g.level = 1;
            out.taylor[m] += fac * eval_cm(hecke_Tn(g, n), tau, kEvalTail);
        }
    }
    CBall ea = eps_a(L, a);
    for (auto& c : out.taylor) c = c * ea;
    return out;
}

FJExpansion fj_table(const LiftData& L, long N, long M) {
    FJExpansion E;
    E.k = L.k;
    E.p = L.p;
    E.r = L.r;
    E.D = L.F.D;
    E.M = M;
    E.N = N;
    ClassGroup G = class_group(L.F, L.p > 0 ? L.p : 1);
    for (int i = 0; i < G.size(); ++i)
        for (long n = 0; n <= N; ++n) E.table[{i, n}] = fj_p_modified(L, G.reps[i], n, M);
    return E;
}

FJExpansion arithmetic_normalize(const FJExpansion& E, OmegaMode mode, const CBall* omega0) {
    FJExpansion R = E;
    if (mode == OmegaMode::formal) {
        R.omega_power -= E.k;
        for (auto& [key, c] : R.table) c.omega_power -= E.k;
        return R;
    }
    if (!omega0) throw std::invalid_argument("numeric mode needs a value for the period");
    if (omega0->contains_zero()) throw std::domain_error("period ball contains zero");
    CBall s = CBall(1) / omega0->pow(E.k);
    for (auto& [key, c] : R.table)
        for (auto& t : c.taylor) t = t * s;
    return R;
}

namespace {

// |x - y| relative to |y|, and whether the difference ball contains zero
std::pair<bool, double> ball_match(const CBall& x, const CBall& y) {
    CBall d = x - y;
    double scale = std::max(y.mag(), 1e-300);
    return {d.contains_zero(), d.rad() / scale};
}

}  // namespace

CompatReport fj_compatibility(const LiftData& L, const Ideal& a, long n, long M, const KElem& lambda) {
    (void)M;
    const Field& F = L.F;
    CompatReport rep;
    Ideal la = ideal_scale(F, a, lambda);
    // b -> b / lambdabar keeps a bbar, hence tau_{a,b}; other choices move tau outside the level group
    auto reps = b_representatives(L, a);
    auto lreps = reps;
    for (auto& br : lreps) br.b = ideal_scale(F, br.b, lambda.conj().inv());
    CBall lam = CBall::from_k(F, lambda);
    const double ws[3][2] = {{0.031, 0.017}, {-0.023, 0.041}, {0.052, -0.011}};
    rep.holds_lambda = rep.holds_lambda_bar = true;
    for (const auto& wv : ws) {
        CBall w(RBall::from_double(wv[0]), RBall::from_double(wv[1]));
        CBall lhs = fj_eval_reps(L, la, n, w * lam, lreps).full();
        CBall base = fj_eval_reps(L, a, n, w, reps).full();
        auto [ok1, r1] = ball_match(lhs, base / lam.pow(L.k));
        auto [ok2, r2] = ball_match(lhs, base / lam.conj().pow(L.k));
        rep.holds_lambda = rep.holds_lambda && ok1 && r1 < 1e-15;
        rep.holds_lambda_bar = rep.holds_lambda_bar && ok2 && r2 < 1e-15;
        rep.max_rad = std::max({rep.max_rad, r1, r2});
    }
    return rep;
}

ShimuraReport shimura_check(const LiftData& L, const Ideal& a, long n, const CBall& w, int translates, double tol) {
    const Field& F = L.F;
    ShimuraReport rep;
    KElem e0 = a.basis0(F), e1 = a.basis1(F);
    std::vector<KElem> ss;
    for (long R = 1; static_cast<int>(ss.size()) < translates && R < 10; ++R)
        for (long u = -R; u <= R; ++u)
            for (long v = 0; v <= R; ++v) {
                if (std::max(std::labs(u), v) != R || (v == 0 && u < 0)) continue;
                ss.push_back(e0 * Q(u) + e1 * Q(v));
            }
    std::sort(ss.begin(), ss.end(), [](const KElem& x, const KElem& y) { return x.norm() < y.norm(); });
    if (static_cast<int>(ss.size()) > translates) ss.resize(translates);
    RBall r(Q(n) / a.norm());
    CBall delta = CBall::from_k(F, delta_of(F));
    ThetaSum g0 = fj_eval(L, a, n, w);
    rep.r_fit_min = INFINITY;
    rep.r_fit_max = -INFINITY;
    for (const KElem& s : ss) {
        CBall sb = CBall::from_k(F, s);
        ThetaSum g1 = fj_eval(L, a, n, w + sb);
        CBall E = -(delta * sb.conj() * (w + sb * CBall(RBall(Q(1, 2)))));
        CBall pred = e2pi(E * CBall(r));
        CBall ratio = g1.value / g0.value * CBall((RBall::from_double(g1.log_scale) - RBall::from_double(g0.log_scale)).exp());
        CBall q = ratio / pred;
        double dev = std::min((q - CBall(1)).mag(), (q + CBall(1)).mag());
        ++rep.translates;
        rep.max_rad = std::max(rep.max_rad, q.rad());
        rep.max_dev = std::max(rep.max_dev, dev);
        if (dev <= tol && q.rad() <= tol) ++rep.passed;
        double imE = E.im.mid_d();
        if (std::fabs(imE) > 1e-9) {
            double logR = std::log(g1.value.mag()) - std::log(g0.value.mag()) + g1.log_scale - g0.log_scale;
            double rf = -logR / (2 * M_PI * imE);
            rep.r_fit_min = std::min(rep.r_fit_min, rf);
            rep.r_fit_max = std::max(rep.r_fit_max, rf);
        }
    }
    return rep;
}

}  // namespace kudla
