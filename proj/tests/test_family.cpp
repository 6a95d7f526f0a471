#include <random>

#include "doctest.h"
#include "kudla/family.hpp"

using namespace kudla;

namespace {

struct Config {
    long D, p;
};
const Config kConfigs[] = {{-7, 11}, {-11, 5}};

Zp at(const LambdaElem& L, long k) { return arithmetic_point_eval(L, {k, 0, 0}).value; }

QExp<Zp> padic_q(const QExp<Q>& f, long p, long N) {
    return qexp_map<Zp>(f, [&](const Q& x) { return Zp::from_q(p, N, x); });
}

}  // namespace

TEST_CASE("CM family specializes to the ordinary stabilization") {
    for (auto [D, p] : kConfigs) {
        Field F = Field::make(D);
        auto Fm = cm_hida_family(F, 4, p, 30, 30, 40);
        for (long w : {5L, 5 + (p - 1)}) {
            INFO("D = " << D << ", w = " << w);
            auto s = specialize_family(Fm, w);
            auto ps = p_stabilize(theta_cm(cm_char(F, w - 1), 40), Fm.iota);
            for (long n = 0; n <= 40; ++n) CHECK(s.c[n].eq(ps.q.c[n], 30));
            // a_p is the unit root
            CHECK(s.c[p].is_unit());
            CHECK(s.c[p].eq(ps.alpha, 30));
        }
        CHECK_THROWS_AS(specialize_family(Fm, 6), std::invalid_argument);
    }
    Field F = Field::make(-7);
    CHECK_THROWS_AS(cm_hida_family(F, 4, 5, 20, 10, 20), std::invalid_argument);  // inert
    CHECK_THROWS_AS(cm_hida_family(F, 4, 7, 20, 10, 20), std::invalid_argument);  // ramified
}

TEST_CASE("Lambda inverse and universal powers") {
    std::mt19937_64 rng(11);
    long p = 5, N = 20, MT = 10;
    for (int t = 0; t < 20; ++t) {
        LambdaElem x(p, N, MT);
        for (auto& c : x.c) c = Zp(p, N, Z(static_cast<unsigned long>(rng() % 100000)));
        x.c[0] = Zp(p, N, 1 + 5 * (t + 1));
        auto y = lambda_inv(x) * x;
        CHECK(y == LambdaElem::constant(p, N, MT, Zp(p, N, 1)));
    }
    LambdaElem z(p, N, MT);
    CHECK_THROWS_AS(lambda_inv(z), std::domain_error);

    Field F = Field::make(-11);
    auto Fm = cm_hida_family(F, 4, 5, 20, 20, 10);
    for (long d : {2L, 3L, 7L, 12L})
        for (long w : {5L, 9L, 13L})
            for (long extra : {1L, 3L}) {
                Z e;
                mpz_ui_pow_ui(e.get_mpz_t(), d, w + extra - 1);
                CHECK(at(universal_power(Fm, d, extra), w).eq(Zp(5, 20, e), 20));
            }
}

TEST_CASE("star product commutes with specialization") {
    Field F = Field::make(-11);
    auto Fm = cm_hida_family(F, 4, 5, 25, 25, 30);
    auto th = intrinsic_theta(F, Ideal::unit(), 2, 30);
    for (long m = 0; m <= 2; ++m) {
        auto c = star_convolve(Fm, th.slices[m]);
        for (long w : {5L, 9L}) {
            auto ref = qexp_mul(specialize_family(Fm, w), to_padic(Fm.iota, th.slices[m]));
            for (long n = 0; n <= 30; ++n) CHECK(at(c[n], w).eq(ref.c[n], 25));
        }
    }
    // a slice with p in a denominator is reported with its index
    auto bad = qexp_scale(th.slices[2], KElem(F, Q(1, 5)));
    try {
        star_convolve(Fm, bad);
        FAIL("accepted");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("coefficient") != std::string::npos);
    }
}

TEST_CASE("Lambda-adic Fourier-Jacobi coefficients specialize to the classical ones") {
    for (auto [D, p] : kConfigs) {
        Field F = Field::make(D);
        auto Fm = cm_hida_family(F, 4, p, 30, 30, 30);
        auto Xi = xi_family(unramified_weight_char(F, 6), p, 30, 30);
        for (long j : {0L, 2L}) {
            auto L = lambda_fj(Fm, Xi, j, 1, 10, 4, 3);
            CHECK(L.entries.size() == 10);
            for (long k : {6L, 6 + 2 * (p - 1)}) {
                INFO("D = " << D << ", j = " << j << ", k = " << k);
                auto c = specialize_fj(L, k, 30);
                CHECK(c.ok());
                CHECK(c.precision == 30);
                CHECK(c.compared == 10 * (2 + 5 * 4));
            }
        }
    }
}

TEST_CASE("the representatives carry a nontrivial norm") {
    // otherwise the square-root branch in the weight factor would be invisible
    Field F7 = Field::make(-7), F11 = Field::make(-11);
    LiftData L7;
    L7.F = F7;
    L7.p = 11;
    LiftData L11;
    L11.F = F11;
    L11.p = 5;
    CHECK(b_representatives(L7, Ideal::unit())[0].b.norm() == Q(1, 2));
    CHECK(b_representatives(L11, Ideal::unit())[0].b.norm() == Q(1, 3));
}

TEST_CASE("negative controls fail at the corrupted factor") {
    for (auto [D, p] : kConfigs) {
        Field F = Field::make(D);
        auto Fm = cm_hida_family(F, 4, p, 30, 30, 12);
        auto Xi = xi_family(unramified_weight_char(F, 6), p, 30, 30);
        auto L = lambda_fj(Fm, Xi, 0, 1, 4, 2, 3, -1);
        auto c = specialize_fj(L, 6, 30);
        CHECK_FALSE(c.ok());
        CHECK(c.first_failing_factor() == 'b');
        for (const auto& f : c.failures) CHECK(f.factor == 'b');
        CHECK(c.failures.size() == L.entries.size());

        auto Xb = Xi;
        Xb.branch_sign = -1;
        auto c2 = specialize_fj(lambda_fj(Fm, Xb, 0, 1, 4, 2, 3), 6, 30);
        CHECK_FALSE(c2.ok());
        CHECK(c2.first_failing_factor() == 'a');
        for (const auto& f : c2.failures) CHECK(f.factor == 'a');
    }
}

TEST_CASE("interpolation congruences between nearby weights") {
    Field F = Field::make(-11);
    long p = 5;
    auto Fm = cm_hida_family(F, 4, p, 30, 30, 12);
    auto Xi = xi_family(unramified_weight_char(F, 6), p, 30, 30);
    auto L = lambda_fj(Fm, Xi, 2, 1, 4, 2, 3);
    for (long m : {0L, 1L, 2L}) {
        long step = (p - 1);
        for (long i = 0; i < m; ++i) step *= p;
        long k1 = 6, k2 = 6 + 2 * step;
        for (const auto& e : L.entries) {
            CHECK(at(e.char_factor, k1).eq(at(e.char_factor, k2), m + 1));
            CHECK(at(e.weight_factor, k1).eq(at(e.weight_factor, k2), m + 1));
            for (const auto& row : e.hecke)
                for (const auto& x : row) CHECK(at(x, k1 - 1).eq(at(x, k2 - 1), m + 1));
        }
    }
}

TEST_CASE("Serre limits") {
    long p = 5, N = 20;
    auto f = padic_q(eisenstein(6, 30), p, N);
    auto E = padic_q(eisenstein(4, 30), p, N);
    std::vector<std::vector<Zp>> seq;
    auto Ep = E;  // E^{p^i}
    for (int i = 0; i < 3; ++i) {
        seq.push_back(qexp_mul(f, Ep).c);
        auto acc = Ep;
        for (long t = 1; t < p; ++t) acc = qexp_mul(acc, Ep);
        Ep = acc;
    }
    auto rep = serre_limit_check(seq, f.c);
    CHECK(rep.converges);
    for (size_t i = 0; i < rep.digits.size(); ++i) CHECK(rep.digits[i] >= static_cast<long>(i) + 1);

    // N^{k_i / 2}, k_i = k0 + (p-1) p^i, tends to N^{k0/2} times the quadratic residue symbol of N mod p
    Q nb(1, 3);
    long k0 = 6;
    std::vector<std::vector<Zp>> pw;
    for (long i = 0; i < 4; ++i) {
        long ki = k0 + (p - 1) * std::lround(std::pow(p, i));
        pw.push_back({Zp::from_q(p, N, nb).pow(ki / 2)});
    }
    Zp base = Zp::from_q(p, N, nb).pow(k0 / 2);
    // 3 is not a square mod 5
    CHECK(serre_limit_check(pw, {-base}).converges);
    auto naive = serre_limit_check(pw, {base});
    CHECK_FALSE(naive.converges);
    CHECK(naive.first_bad == 0);
}
