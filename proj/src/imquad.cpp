#include "kudla/imquad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace kudla {

long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

bool is_squarefree(long m) {
    m = std::labs(m);
    for (long q = 2; q * q <= m; ++q)
        if (m % (q * q) == 0) return false;
    return true;
}

bool is_prime(long q) {
    if (q < 2) return false;
    for (long r = 2; r * r <= q; ++r)
        if (q % r == 0) return false;
    return true;
}

Field Field::make(long d) {
    if (d >= 0) throw std::invalid_argument("d must be negative");
    if (!is_squarefree(d)) throw std::invalid_argument("d must be squarefree");
    Field F;
    F.d = d;
    if (mod(d, 4) == 1) {
        F.D = d;
        F.t = 1;
        F.n = (1 - d) / 4;
    } else {
        F.D = 4 * d;
        F.t = 0;
        F.n = -d;
    }
    F.w = d == -1 ? 4 : d == -3 ? 6 : 2;
    F.h = static_cast<int>(reduced_forms(F.D).size());
    return F;
}

KElem KElem::conj() const {
    KElem r = *this;
    r.x = x + t * y;
    r.y = -y;
    return r;
}

KElem KElem::inv() const {
    Q nm = norm();
    if (sgn(nm) == 0) throw std::domain_error("inverse of zero");
    KElem c = conj();
    c.x /= nm;
    c.y /= nm;
    return c;
}

KElem KElem::operator-() const {
    KElem r = *this;
    r.x = -x;
    r.y = -y;
    return r;
}

KElem& KElem::operator+=(const KElem& o) {
    x += o.x;
    y += o.y;
    return *this;
}

KElem& KElem::operator-=(const KElem& o) {
    x -= o.x;
    y -= o.y;
    return *this;
}

KElem& KElem::operator*=(const KElem& o) {
    // tau^2 = t tau - n
    Q yy = y * o.y;
    Q nx = x * o.x - n * yy;
    Q ny = x * o.y + y * o.x + t * yy;
    x = nx;
    y = ny;
    return *this;
}

KElem& KElem::operator*=(const Q& c) {
    x *= c;
    y *= c;
    return *this;
}

KElem KElem::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    KElem r = *this, acc = *this;
    r.x = 1;
    r.y = 0;
    while (e) {
        if (e & 1) r *= acc;
        acc *= acc;
        e >>= 1;
    }
    return r;
}

std::complex<double> KElem::embed() const {
    double re_tau = t == 1 ? 0.5 : 0.0;
    double im_tau = t == 1 ? std::sqrt(4.0 * n - 1.0) / 2.0 : std::sqrt(static_cast<double>(n));
    return {x.get_d() + y.get_d() * re_tau, y.get_d() * im_tau};
}

std::string KElem::str() const {
    std::ostringstream os;
    os << x.get_str() << (sgn(y) < 0 ? "-" : "+") << Q(abs(y)).get_str() << "*tau";
    return os.str();
}

Q tau_re(const Field& F) { return F.t == 1 ? qq(1, 2) : Q(0); }
Q tau_im2(const Field& F) { return F.t == 1 ? qq(4 * F.n - 1, 4) : Q(F.n); }

namespace {

Z zlcm(const Z& a, const Z& b) {
    Z r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Z zgcd(const Z& a, const Z& b) {
    Z r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace

Ideal Ideal::from_gens(const Field& F, const std::vector<KElem>& gens) {
    // Z-span of gens * {1, tau}
    std::vector<KElem> all;
    for (const auto& g : gens) {
        all.push_back(g);
        all.push_back(g * KElem::tau(F));
    }
    Z L = 1;
    for (const auto& g : all) {
        L = zlcm(L, g.x.get_den());
        L = zlcm(L, g.y.get_den());
    }
    std::vector<std::pair<Z, Z>> v;
    for (const auto& g : all) {
        Q X = g.x * L, Y = g.y * L;
        v.emplace_back(X.get_num(), Y.get_num());
    }
    // column echelon on the y coordinate
    Z A = 0;
    std::pair<Z, Z> piv{0, 0};
    for (auto& w : v) {
        while (sgn(w.second) != 0) {
            if (sgn(piv.second) == 0) {
                std::swap(piv, w);
                break;
            }
            Z q;
            mpz_fdiv_q(q.get_mpz_t(), w.second.get_mpz_t(), piv.second.get_mpz_t());
            w.first -= q * piv.first;
            w.second -= q * piv.second;
            if (sgn(w.second) != 0) std::swap(piv, w);
        }
        A = zgcd(A, w.first);
    }
    if (sgn(piv.second) == 0 || sgn(A) == 0) throw std::domain_error("degenerate lattice");
    if (sgn(piv.second) < 0) {
        piv.first = -piv.first;
        piv.second = -piv.second;
    }
    Z C = piv.second;
    Z B = piv.first % A;
    if (sgn(B) < 0) B += A;
    if (A % C != 0 || B % C != 0) throw std::domain_error("not an O_K-module");
    Ideal I;
    I.scale = Q(C, L);
    I.scale.canonicalize();
    I.a = Z(A / C).get_si();
    I.b = Z(B / C).get_si();
    return I;
}

bool Ideal::contains(const Field& F, const KElem& x) const {
    (void)F;
    // x = u*scale*a + v*scale*(b + tau)
    Q v = x.y / scale;
    if (v.get_den() != 1) return false;
    Q u = (x.x / scale - v * b) / a;
    return u.get_den() == 1;
}

bool Ideal::is_integral() const {
    return scale.get_den() == 1;
}

bool Ideal::operator<(const Ideal& o) const {
    if (norm() != o.norm()) return norm() < o.norm();
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return scale < o.scale;
}

std::string Ideal::str() const {
    std::ostringstream os;
    os << "(" << scale.get_str() << "," << a << "," << b << ")";
    return os.str();
}

Ideal ideal_mul(const Field& F, const Ideal& A, const Ideal& B) {
    KElem a0 = A.basis0(F), a1 = A.basis1(F), b0 = B.basis0(F), b1 = B.basis1(F);
    return Ideal::from_gens(F, {a0 * b0, a0 * b1, a1 * b0, a1 * b1});
}

Ideal ideal_conj(const Field& F, const Ideal& A) {
    return Ideal::from_gens(F, {A.basis0(F).conj(), A.basis1(F).conj()});
}

Ideal ideal_inv(const Field& F, const Ideal& A) {
    Ideal c = ideal_conj(F, A);
    c.scale /= A.norm();
    return c;
}

Ideal ideal_pow(const Field& F, const Ideal& A, long e) {
    if (e < 0) return ideal_pow(F, ideal_inv(F, A), -e);
    Ideal r = Ideal::unit(), acc = A;
    while (e) {
        if (e & 1) r = ideal_mul(F, r, acc);
        acc = ideal_mul(F, acc, acc);
        e >>= 1;
    }
    return r;
}

Ideal ideal_scale(const Field& F, const Ideal& A, const KElem& lambda) {
    return Ideal::from_gens(F, {A.basis0(F) * lambda, A.basis1(F) * lambda});
}

Q ideal_norm(const Ideal& A) { return A.norm(); }

long ideal_valuation(const Field& F, const Ideal& A, const Ideal& P) {
    long q = P.a == 1 ? P.scale.get_num().get_si() : P.a;
    long e = (F.D % q == 0) ? 2 : 1;
    long v = 0;
    Z num = A.scale.get_num(), den = A.scale.get_den();
    while (num % q == 0) { num /= q; v += e; }
    while (den % q == 0) { den /= q; v -= e; }
    Ideal prim = A;
    prim.scale = 1;
    Ideal Pinv = ideal_inv(F, P);
    for (;;) {
        Ideal nxt = ideal_mul(F, prim, Pinv);
        if (!nxt.is_integral()) break;
        prim = nxt;
        ++v;
    }
    return v;
}

std::vector<KElem> elements_of_norm(const Field& F, const Ideal& A, const Q& target) {
    std::vector<KElem> out;
    KElem w0 = A.basis0(F), w1 = A.basis1(F);
    // N(u w0 + v w1) = qa u^2 + qb u v + qc v^2
    Q qa = w0.norm(), qc = w1.norm(), qb = (w0 * w1.conj()).trace();
    Q disc = 4 * qa * qc - qb * qb;
    double vmax = std::sqrt(Q(4 * qa * target / disc).get_d()) + 1;
    for (long v = -static_cast<long>(vmax); v <= static_cast<long>(vmax); ++v) {
        // qa u^2 + qb v u + (qc v^2 - target) = 0
        Q bq = qb * v, cq = qc * v * v - target;
        Q dd = bq * bq - 4 * qa * cq;
        if (sgn(dd) < 0) continue;
        double s = std::sqrt(dd.get_d());
        double lo = (-bq.get_d() - s) / (2 * qa.get_d()), hi = (-bq.get_d() + s) / (2 * qa.get_d());
        for (long u = static_cast<long>(std::floor(lo)) - 1; u <= static_cast<long>(std::ceil(hi)) + 1; ++u) {
            KElem x = w0 * Q(u) + w1 * Q(v);
            if (x.norm() == target) out.push_back(x);
        }
    }
    return out;
}

std::optional<KElem> principal_generator(const Field& F, const Ideal& A) {
    auto v = elements_of_norm(F, A, A.norm());
    if (v.empty()) return std::nullopt;
    // deterministic choice: largest x, then largest y
    auto best = v[0];
    for (const auto& e : v)
        if (e.x > best.x || (e.x == best.x && e.y > best.y)) best = e;
    return best;
}

std::vector<KElem> units(const Field& F) {
    return elements_of_norm(F, Ideal::unit(), 1);
}

bool Form::operator<(const Form& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

Form reduce_form(Form f) {
    for (;;) {
        if (f.b > f.a || f.b <= -f.a) {
            // translate b into (-a, a]
            long k = static_cast<long>(std::floor((f.a - f.b) / (2.0 * f.a)));
            // b' = b + 2 a k
            long nb = f.b + 2 * f.a * k;
            long nc = f.a * k * k + f.b * k + f.c;
            f.b = nb;
            f.c = nc;
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        if (f.b > f.a || f.b <= -f.a) continue;
        return f;
    }
}

std::vector<Form> reduced_forms(long D) {
    std::vector<Form> out;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

Form ideal_form(const Field& F, const Ideal& A) {
    // primitive part a Z + (b + tau) Z
    KElem bt(F, A.b, 1);
    Q c = bt.norm() / A.a;
    return reduce_form({A.a, 2 * A.b + F.t, c.get_num().get_si()});
}

Ideal form_ideal(const Field& F, const Form& f) {
    // a Z + ((-B + sqrt D)/2) Z
    Q x = F.t == 1 ? qq(-f.b - 1, 2) : qq(-f.b, 2);
    return Ideal::from_gens(F, {KElem(F, f.a, 0), KElem(F, x, 1)});
}

int ClassGroup::index_of(const Field& F, const Ideal& A) const {
    Form f = ideal_form(F, A);
    for (size_t i = 0; i < forms.size(); ++i)
        if (forms[i] == f) return static_cast<int>(i);
    throw std::logic_error("form not in class group");
}

int ClassGroup::inverse(int i) const {
    for (int j = 0; j < size(); ++j)
        if (table[i][j] == identity) return j;
    throw std::logic_error("no inverse");
}

ClassGroup class_group(const Field& F, long m) {
    if (m < 1) throw std::invalid_argument("modulus must be positive");
    ClassGroup G;
    G.forms = reduced_forms(F.D);
    int h = static_cast<int>(G.forms.size());
    G.reps.assign(h, Ideal::unit());
    std::vector<bool> got(h, false);
    int found = 0;
    // primitive integral ideals by increasing norm
    for (long a = 1; found < h; ++a) {
        if (std::gcd(a, m) != 1) continue;
        for (long b = 0; b < a && found < h; ++b) {
            KElem bt(F, b, 1);
            if (bt.norm().get_num() % a != 0) continue;
            Ideal I;
            I.a = a;
            I.b = b;
            int k = G.index_of(F, I);
            if (!got[k]) {
                got[k] = true;
                G.reps[k] = I;
                ++found;
            }
        }
        if (a > 100000) throw std::runtime_error("class representative search exhausted");
    }
    for (int i = 0; i < h; ++i)
        if (G.forms[i].a == 1) G.identity = i;
    G.table.assign(h, std::vector<int>(h));
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) G.table[i][j] = G.index_of(F, ideal_mul(F, G.reps[i], G.reps[j]));
    return G;
}

long kronecker(long D, long q) {
    if (q == 2) {
        if (D % 2 == 0) return 0;
        long r = mod(D, 8);
        return (r == 1 || r == 7) ? 1 : -1;
    }
    long a = mod(D, q);
    if (a == 0) return 0;
    // Euler criterion
    long e = (q - 1) / 2, r = 1, base = a;
    while (e) {
        if (e & 1) r = static_cast<long>((__int128)r * base % q);
        base = static_cast<long>((__int128)base * base % q);
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

PrimeSplit prime_split(const Field& F, long q) {
    if (!is_prime(q)) throw std::invalid_argument("q must be prime");
    PrimeSplit s;
    s.q = q;
    std::vector<long> roots;
    for (long b = 0; b < q; ++b) {
        KElem bt(F, b, 1);
        if (bt.norm().get_num() % q == 0) roots.push_back(b);
    }
    if (roots.empty()) {
        s.kind = Split::inert;
        s.P.scale = q;
        s.Pbar = s.P;
        return s;
    }
    s.root = roots[0];
    s.P.a = q;
    s.P.b = roots[0];
    if (roots.size() == 1) {
        s.kind = Split::ramified;
        s.Pbar = s.P;
    } else {
        s.kind = Split::split;
        s.Pbar.a = q;
        s.Pbar.b = roots[1];
    }
    return s;
}

CMBasis ideal_to_cm_basis(const Field& F, const Ideal& C) {
    CMBasis r;
    r.lambda = C.basis0(F);
    r.tau = C.basis1(F) / r.lambda;
    if (sgn(r.tau.y) < 0) r.tau = -r.tau;
    r.normalized = ideal_scale(F, C, r.lambda.inv());
    return r;
}

Ideal ide(const Field& F, const std::vector<std::pair<Ideal, long>>& vals) {
    Ideal r = Ideal::unit();
    for (const auto& [P, e] : vals) r = ideal_mul(F, r, ideal_pow(F, P, e));
    return r;
}

}  // namespace kudla
