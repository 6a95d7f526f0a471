#include <random>

#include "doctest.h"
#include "kudla/cosets.hpp"
#include "kudla/lift.hpp"

using namespace kudla;

namespace {

QExp<CBall> ball_q(const QExp<Q>& f) {
    return qexp_map<CBall>(f, [](const Q& x) { return CBall(RBall(x)); });
}

double rel(const CBall& x, const CBall& y) { return (x - y).mag() / std::max(y.mag(), 1e-300); }

}  // namespace

TEST_CASE("row Hermite form") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> U(-30, 30);
    for (int i = 0; i < 500; ++i) {
        Mat2 X{U(rng), U(rng), U(rng), U(rng)};
        if (X.det() <= 0) continue;
        auto rh = row_hermite(X);
        CHECK(rh.u.det() == 1);
        CHECK(rh.u * rh.H == X);
        CHECK(rh.H.c == 0);
        CHECK(rh.H.a > 0);
        CHECK(rh.H.d > 0);
        CHECK(rh.H.b >= 0);
        CHECK(rh.H.b < rh.H.d);
        // invariant under the left SL2(Z) action
        Mat2 g{2, 1, 5, 3};
        CHECK(row_hermite(g * X).H == rh.H);
    }
}

TEST_CASE("lifting from SL2(Z/M)") {
    for (long M : {2L, 7L, 12L, 35L}) {
        long seen = 0;
        for (long a = 0; a < M; ++a)
            for (long b = 0; b < M; ++b)
                for (long c = 0; c < M; ++c)
                    for (long d = 0; d < M; ++d) {
                        if (mod(a * d - b * c, M) != 1 % M) continue;
                        Mat2 g = lift_sl2({a, b, c, d}, M);
                        CHECK(g.det() == 1);
                        CHECK(g.mod(M) == Mat2{a, b, c, d}.mod(M));
                        ++seen;
                    }
        CHECK(seen > 0);
    }
}

TEST_CASE("double coset identity for small levels") {
    for (auto [p, D] : {std::pair{5L, -3L}, {3L, -4L}, {2L, -7L}, {5L, -7L}}) {
        for (long n : {1L, 2L, 3L, 5L}) {
            auto c = coset_identity_check(n, p, 1, D);
            INFO("M = " << c.M << ", n = " << n);
            CHECK(c.ok());
            CHECK(c.side_a == c.side_b);
            CHECK(c.b_in_a);
            CHECK(c.index == c.M);
            long q = n;
            if (n == 1)
                CHECK(c.side_a == c.M);
            else if (c.M % q == 0)
                CHECK(c.side_a == q * c.M);
            else
                CHECK(c.side_a == (q + 1) * c.M);
        }
    }
}

TEST_CASE("composite n and the enumeration budget") {
    // for n = 4 the congruence side also holds the imprimitive matrices (the diag(2,2) part of T_4):
    // 7 = 1 + 2 + 4 cosets against the 6 primitive ones of the double coset
    auto c = coset_identity_check(4, 5, 1, -3);
    CHECK(c.duplicates == 0);
    CHECK(c.side_a == 7 * 15);
    CHECK(c.side_b == 6 * 15);
    CHECK(c.b_in_a);
    CHECK_FALSE(c.sets_equal);
    try {
        coset_identity_check(5, 5, 2, -7, 1000);
        FAIL("no refusal");
    } catch (const EnumerationBudget& e) {
        CHECK(e.required == 175L * 175 * 175 * 175 * 6);
    }
}

TEST_CASE("Gamma_1(3) coset representatives") {
    auto reps = gamma1_coset_reps(3);
    REQUIRE(reps.size() == 8);
    for (size_t i = 0; i < reps.size(); ++i) {
        CHECK(reps[i].det() == 1);
        for (size_t j = 0; j < reps.size(); ++j)
            if (i != j) CHECK_FALSE(in_gamma1(reps[i] * reps[j].adj(), 3));
    }
    // every element of SL2(Z) lies in exactly one coset
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> U(0, 8);
    for (int t = 0; t < 100; ++t) {
        Mat2 g = lift_sl2({1, 0, 0, 1}, 1);
        for (int s = 0; s < 6; ++s) {
            long k = U(rng) - 4;
            g = g * Mat2{1, k, 0, 1} * Mat2{0, -1, 1, 0};
        }
        int hits = 0;
        for (const auto& m : reps) hits += in_gamma1(g * m.adj(), 3);
        CHECK(hits == 1);
    }
    CHECK(gamma1_coset_reps(1).size() == 1);
    CHECK(gamma1_coset_reps(5).size() == 24);
}

TEST_CASE("trace of E4(3 tau) over Gamma_1(3) is 56/27 E4") {
    // E4(3 tau) + 3^{-3} U_3 E4 = 3^{-3} T_3 E4 = (28/27) E4, doubled by -1 in Gamma_0(3)
    auto E4 = ball_q(eisenstein(4, 600));
    auto V = qexp_Vq(E4, 3);
    for (auto [x, y] : {std::pair{0.1, 1.3}, {-0.31, 0.9}, {0.45, 2.0}}) {
        CBall tau(RBall::from_double(x), RBall::from_double(y));
        CBall tr = trace_eval(V, 4, 3, tau);
        CBall ref = CBall(RBall(Q(56, 27))) * eval_cm(E4, tau, 1e-30);
        CHECK(rel(tr, ref) < 1e-25);
    }
    // a level one input is multiplied by the index
    CBall tau(RBall::from_double(0.2), RBall::from_double(1.1));
    CHECK(rel(trace_eval(E4, 4, 3, tau), CBall(8) * eval_cm(E4, tau, 1e-30)) < 1e-25);
}

TEST_CASE("level one lift with oracle trace data matches direct slash summation") {
    Field F = Field::make(-3);
    // f is not read on the level one path; the trace data carry it
    LiftData L{F, theta_cm(cm_char(F, 6), 60).q, 6, 0, 1, trivial_char(F), unramified_weight_char(F, 6), 0};
    // E4 vanishes at tau_K here, so the oracle uses E6: the trace of E6(3 tau) is 2 (1 + 3^{-5}) E6
    auto E6 = ball_q(eisenstein(6, 600));
    auto V = qexp_Vq(E6, 3);
    TraceData tr;
    auto tq = qexp_scale(E6, CBall(RBall(Q(488, 243))));
    tq.growth = Growth{Q(488 * 1009 * 2, 243), Q(5)};
    tr.slices[{0, 0}] = tq;
    auto c = fj_level1(L, Ideal::unit(), 1, 0, &tr);
    auto reps = b_representatives(L, Ideal::unit());
    REQUIRE(reps.size() == 1);
    CBall tau = CBall::from_k(F, reps[0].tau);
    CBall direct = trace_eval(V, 6, 3, tau) * CBall(RBall(reps[0].b.norm()).pow(3));
    CHECK(direct.mag() > 1);
    CHECK(rel(c.taylor[0], direct) < 1e-25);
}
