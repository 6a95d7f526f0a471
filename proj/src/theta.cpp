#include "kudla/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "kudla/qexp.hpp"

namespace kudla {

namespace {

// #{x in Z^2 : (x-c)^T Y (x-c) <= t} <= (2 sqrt(t k) + 1)^2 <= 8 k t + 2, k = max diag of Y^{-1};
// sum over shells t in (R2 + j, R2 + j + 1] of that count times e^{-pi (R2 + j)}
double tail_bound(double R2, double kappa) {
    double q = std::exp(-M_PI);
    double alpha = 8 * kappa * (R2 + 1) + 2;
    return 1.5 * std::exp(-M_PI * R2) * (alpha / (1 - q) + 8 * kappa * q / ((1 - q) * (1 - q)));
}

Q rand_q(std::mt19937_64& g, long lo, long hi, long den) {
    std::uniform_int_distribution<long> u(lo * den, hi * den);
    return qq(u(g), den);
}

QuadForm2 unreduced_form(const Field& F, const Ideal& A) {
    Q c = KElem(F, A.b, 1).norm() / A.a;
    return {A.a, 2 * A.b + F.t, c.get_num().get_si()};
}

}  // namespace

ThetaSum theta2_eval(const QuadForm2& f, const CBall& tau, const CBall& z1, const CBall& z2, double rel_tol) {
    double y = tau.im.mid_d();
    if (!(y > 0)) throw std::domain_error("theta needs Im tau > 0");
    double Y11 = 2.0 * f.A * y, Y12 = double(f.B) * y, Y22 = 2.0 * f.C * y;
    double det = Y11 * Y22 - Y12 * Y12;
    if (!(det > 0)) throw std::domain_error("theta form is not positive definite");
    double I11 = Y22 / det, I12 = -Y12 / det, I22 = Y11 / det;
    double b1 = z1.im.mid_d(), b2 = z2.im.mid_d();
    double c1 = -(I11 * b1 + I12 * b2), c2 = -(I12 * b1 + I22 * b2);
    double kappa = std::max(I11, I22);

    double R2 = std::max(1.0, -std::log(rel_tol) / M_PI);
    while (tail_bound(R2, kappa) > rel_tol) R2 += 0.5;

    ThetaSum out;
    // |term| = exp(-pi (x-c)^T Y (x-c)) exp(pi b^T Y^{-1} b)
    out.log_scale = M_PI * (b1 * (I11 * b1 + I12 * b2) + b2 * (I12 * b1 + I22 * b2));
    CBall acc;
    // terms are divided by exp(log_scale) so that huge arguments stay representable
    CBall shift(RBall(0), RBall::from_double(out.log_scale) / (RBall(2) * RBall::pi()));
    double r2 = std::sqrt(R2 * I22);
    long v0 = static_cast<long>(std::floor(c2 - r2)) - 1, v1 = static_cast<long>(std::ceil(c2 + r2)) + 1;
    for (long v = v0; v <= v1; ++v) {
        double dv = v - c2;
        // Y11 s^2 + 2 Y12 s dv + Y22 dv^2 <= R2, s = u - c1
        double disc = Y12 * Y12 * dv * dv - Y11 * (Y22 * dv * dv - R2);
        if (disc < 0) continue;
        double sd = std::sqrt(disc);
        double s0 = (-Y12 * dv - sd) / Y11, s1 = (-Y12 * dv + sd) / Y11;
        long u0 = static_cast<long>(std::floor(c1 + s0)), u1 = static_cast<long>(std::ceil(c1 + s1));
        for (long u = u0; u <= u1; ++u) {
            Z qv = Z(f.A) * u * u + Z(f.B) * u * v + Z(f.C) * v * v;
            CBall ex = tau * CBall(RBall(Q(qv))) + z1 * CBall(RBall(u)) + z2 * CBall(RBall(v)) + shift;
            acc += e2pi(ex);
            ++out.terms;
        }
    }
    // the terms skipped at the ellipse edge are covered by the bound (it counts from R2)
    acc.add_error(tail_bound(R2, kappa) * 1.01);
    out.value = std::move(acc);
    return out;
}

ThetaSum theta_ideal_eval(const Field& F, const Ideal& A, const CBall& w, const CBall& tau, double rel_tol) {
    QuadForm2 f = unreduced_form(F, A);
    CBall z1 = CBall::from_k(F, A.basis0(F)) * w;
    CBall z2 = CBall::from_k(F, A.basis1(F)) * w;
    return theta2_eval(f, tau, z1, z2, rel_tol);
}

FECheck theta_fe_check(const Field& F, const Ideal& A, int triples, uint64_t seed, double tol, bool gamma1) {
    std::mt19937_64 g(seed);
    long N = -F.D;
    DirChar om = DirChar::kronecker_char(F.D);
    FECheck out;
    std::uniform_int_distribution<long> cm(1, 3), dm(-4, 4);
    while (out.count < triples) {
        long c = N * cm(g) * (g() % 2 ? 1 : -1);
        long d = gamma1 ? 1 + N * dm(g) : dm(g) * 3 + 1;
        if (std::gcd(c, d) != 1) continue;
        // a d - b c = 1
        long a = 0, b = 0;
        {
            long r0 = d, r1 = c, s0 = 1, s1 = 0;
            while (r1 != 0) {
                long qt = r0 / r1;
                std::tie(r0, r1) = std::make_pair(r1, r0 - qt * r1);
                std::tie(s0, s1) = std::make_pair(s1, s0 - qt * s1);
            }
            // s0 d = r0 (mod c), r0 = +-1
            a = s0 * r0;
            b = (a * d - 1) / c;
        }
        Q xi = rand_q(g, -1, 1, 1000) * qq(3, 10), eta = qq(6, 10) + rand_q(g, 0, 1, 1000) * qq(6, 10);
        CBall tau(RBall((Q(-d) + xi) / c), RBall(eta / std::abs(c)));
        // |w|^2 of the order of Im tau keeps both sides of moderate size
        Q sc = qq(1, 2 * std::abs(c));
        CBall w(RBall(rand_q(g, -1, 1, 1000) * sc), RBall(rand_q(g, -1, 1, 1000) * sc));
        CBall j = CBall(RBall(c)) * tau + CBall(RBall(d));
        CBall gt = (CBall(RBall(a)) * tau + CBall(RBall(b))) / j;
        CBall lhs = theta_ideal_eval(F, A, w / j, gt).full();
        CBall rhs = CBall(RBall(om(d))) * j * theta_ideal_eval(F, A, w, tau).full();
        double rad = lhs.rad() + rhs.rad();
        out.max_radius = std::max(out.max_radius, rad);
        ++out.count;
        if ((lhs - rhs).contains_zero() && rad <= tol) ++out.passed;
    }
    return out;
}

FECheck theta_scaling_check(const Field& F, const Ideal& A, int samples, uint64_t seed, double tol) {
    std::mt19937_64 g(seed);
    FECheck out;
    for (int i = 0; i < samples; ++i) {
        KElem lam(F, rand_q(g, -3, 3, 1), rand_q(g, -3, 3, 1));
        if (lam.is_zero()) lam = KElem(F, 1, 1);
        CBall tau(RBall(rand_q(g, -1, 1, 100)), RBall(qq(1, 2) + rand_q(g, 0, 1, 100)));
        CBall w(RBall(rand_q(g, -1, 1, 100) / 4), RBall(rand_q(g, -1, 1, 100) / 4));
        CBall lhs = theta_ideal_eval(F, ideal_scale(F, A, lam), w, tau).full();
        CBall rhs = theta_ideal_eval(F, A, CBall::from_k(F, lam) * w, tau).full();
        double rad = lhs.rad() + rhs.rad();
        out.max_radius = std::max(out.max_radius, rad);
        ++out.count;
        if ((lhs - rhs).contains_zero() && rad <= tol) ++out.passed;
    }
    return out;
}

std::vector<ThetaPeriod> theta_periods(const Field& F, const Ideal& C, const KElem& tau0, long search) {
    std::vector<ThetaPeriod> out;
    KElem e0 = C.basis0(F), e1 = C.basis1(F);
    Q NC = C.norm();
    for (long i = -search; i <= search; ++i)
        for (long j = -search; j <= search; ++j) {
            KElem y = e0 * Q(i) + e1 * Q(j);
            if (y.is_zero()) continue;
            KElem t0 = y * tau0 * (e0.trace() / NC), t1 = y * tau0 * (e1.trace() / NC);
            // lambda e_k - t_k = z_k in Z: z0 e1 - z1 e0 = t1 e0 - t0 e1
            KElem R = t1 * e0 - t0 * e1;
            // coordinates of R in the basis (e1, -e0)
            KElem e1n = e1, e0n = -e0;
            // solve R = z0 e1n + z1 e0n over Q using the tau coordinate
            Q det = e1n.x * e0n.y - e1n.y * e0n.x;
            if (sgn(det) == 0) continue;
            Q z0 = (R.x * e0n.y - R.y * e0n.x) / det, z1 = (e1n.x * R.y - e1n.y * R.x) / det;
            if (z0.get_den() != 1 || z1.get_den() != 1) continue;
            KElem lam = (KElem(F, z0) + t0) / e0;
            KElem S = tau0 * (y.conj() - y) * (Q(1) / NC) + lam;
            out.push_back({y, lam, S});
        }
    std::stable_sort(out.begin(), out.end(),
                     [](const ThetaPeriod& a, const ThetaPeriod& b) { return a.y.norm() < b.y.norm(); });
    return out;
}

}  // namespace kudla
