#include <random>

#include "doctest.h"
#include "kudla/imquad.hpp"
#include "oracles.hpp"

using namespace kudla;

TEST_CASE("field data") {
    auto F = Field::make(-1);
    CHECK(F.D == -4);
    CHECK(F.w == 4);
    CHECK(F.t == 0);
    auto G = Field::make(-3);
    CHECK(G.D == -3);
    CHECK(G.w == 6);
    CHECK(G.t == 1);
    auto H = Field::make(-7);
    CHECK(H.D == -7);
    CHECK(H.h == 1);
    CHECK(H.w == 2);
    CHECK_THROWS(Field::make(5));
    CHECK_THROWS(Field::make(-12));
}

TEST_CASE("element arithmetic") {
    auto F = Field::make(-7);
    KElem a(F, 3, 2), b(F, Q(1, 2), -5);
    CHECK((a * b).norm() == a.norm() * b.norm());
    CHECK(a * a.conj() == KElem(F, a.norm()));
    CHECK(a / a == KElem(F, 1));
    CHECK(KElem(F, (a * b).trace()) == a * b + (a * b).conj());
    auto t = KElem::tau(F);
    CHECK(t * t == t * Q(F.t) - KElem(F, F.n));
}

TEST_CASE("class numbers match the reduced-form oracle") {
    for (long D = -3; D > -200; --D) {
        if (!oracle::is_fundamental(D)) continue;
        auto F = Field::make(oracle::d_of(D));
        auto G = class_group(F, 1);
        CHECK_MESSAGE(G.size() == oracle::reduced_form_count(D), "D=", D);
    }
    auto F = Field::make(-23);
    CHECK(class_group(F).size() == 3);
}

TEST_CASE("class group table is a group") {
    for (long d : {-5L, -23L, -14L, -47L, -71L}) {
        auto F = Field::make(d);
        auto G = class_group(F, 15);
        int h = G.size();
        for (const auto& r : G.reps) CHECK(std::gcd(r.norm().get_num().get_si(), 15L) == 1);
        for (int i = 0; i < h; ++i) {
            CHECK(G.table[G.identity][i] == i);
            for (int j = 0; j < h; ++j)
                for (int k = 0; k < h; ++k) CHECK(G.table[G.table[i][j]][k] == G.table[i][G.table[j][k]]);
            int x = G.identity, ord = 0;
            do {
                x = G.table[x][i];
                ++ord;
            } while (x != G.identity);
            CHECK(h % ord == 0);
        }
    }
}

TEST_CASE("unit class for h = 1") {
    auto F = Field::make(-7);
    auto G = class_group(F, 5);
    REQUIRE(G.size() == 1);
    CHECK(G.reps[0] == Ideal::unit());
    auto F4 = Field::make(-1);
    CHECK(class_group(F4, 5).reps[0] == Ideal::unit());
}

TEST_CASE("prime splitting agrees with the Kronecker symbol") {
    for (long d : {-1L, -2L, -3L, -7L, -11L, -23L}) {
        auto F = Field::make(d);
        for (long q = 2; q < 1000; ++q) {
            if (!is_prime(q)) continue;
            auto s = prime_split(F, q);
            long k = kronecker(F.D, q);
            Split want = k == 1 ? Split::split : k == -1 ? Split::inert : Split::ramified;
            CHECK(s.kind == want);
            if (s.kind == Split::split) {
                CHECK(s.P.norm() == q);
                CHECK(ideal_mul(F, s.P, s.Pbar) == Ideal::principal(F, KElem(F, q)));
            } else if (s.kind == Split::inert) {
                CHECK(s.P.norm() == q * q);
            } else {
                CHECK(s.P.norm() == q);
                CHECK(ideal_mul(F, s.P, s.P) == Ideal::principal(F, KElem(F, q)));
            }
        }
    }
    auto F = Field::make(-1);
    auto s = prime_split(F, 5);
    CHECK(s.P == Ideal::principal(F, KElem(F, 2, 1)));
    CHECK(prime_split(F, 3).kind == Split::inert);
    CHECK(prime_split(F, 2).kind == Split::ramified);
}

namespace {

// index of a sublattice of Z^2 spanned by integer vectors, by determinant of a basis
Z lattice_index(const Field& F, const Ideal& A) {
    // A integral: index in O_K equals |det| of basis coordinates
    KElem u = A.basis0(F), v = A.basis1(F);
    Q det = u.x * v.y - u.y * v.x;
    return Q(abs(det)).get_num();
}

Ideal random_ideal(const Field& F, std::mt19937& rng) {
    std::uniform_int_distribution<int> c(-6, 6);
    KElem g1(F, c(rng), c(rng)), g2(F, c(rng), c(rng));
    if (g1.is_zero()) g1 = KElem(F, 1);
    return Ideal::from_gens(F, {g1, g2});
}

}  // namespace

TEST_CASE("norm multiplicativity against lattice index") {
    std::mt19937 rng(7);
    auto F = Field::make(-23);
    for (int it = 0; it < 100; ++it) {
        Ideal A = random_ideal(F, rng), B = random_ideal(F, rng);
        Ideal AB = ideal_mul(F, A, B);
        CHECK(AB.norm() == A.norm() * B.norm());
        CHECK(Q(lattice_index(F, AB)) == AB.norm());
        CHECK(ideal_mul(F, A, ideal_conj(F, A)) == Ideal::principal(F, KElem(F, A.norm())));
        CHECK(ideal_mul(F, A, Ideal::unit()) == A);
    }
}

TEST_CASE("cm basis round trip") {
    std::mt19937 rng(11);
    for (long d : {-7L, -23L, -5L}) {
        auto F = Field::make(d);
        auto c0 = ideal_to_cm_basis(F, Ideal::unit());
        CHECK(c0.lambda == KElem(F, 1));
        CHECK(c0.tau == KElem::tau(F));
        for (int it = 0; it < 100; ++it) {
            Ideal C = random_ideal(F, rng);
            C.scale *= Q(it % 3 + 1, it % 5 + 1);
            C.scale.canonicalize();
            auto cb = ideal_to_cm_basis(F, C);
            CHECK(sgn(cb.tau.y) > 0);
            CHECK(Ideal::from_gens(F, {cb.lambda, cb.lambda * cb.tau}) == C);
            CHECK(ideal_scale(F, cb.normalized, cb.lambda) == C);
            // conjugate ideal: tau' equivalent to -conj(tau)
            auto cc = ideal_to_cm_basis(F, ideal_conj(F, C));
            Ideal l1 = Ideal::from_gens(F, {KElem(F, 1), cc.tau});
            Ideal l2 = Ideal::from_gens(F, {KElem(F, 1), -cb.tau.conj()});
            CHECK(l1 == l2);
        }
        // integral ideal a Z + (b + tau) Z
        for (const auto& r : class_group(F).reps) {
            auto cb = ideal_to_cm_basis(F, r);
            CHECK(cb.lambda == KElem(F, r.a));
            CHECK(cb.tau == KElem(F, Q(r.b) / r.a, Q(1) / r.a));
        }
    }
}

TEST_CASE("ide of valuations") {
    auto F = Field::make(-1);
    auto s = prime_split(F, 5);
    CHECK(ide(F, {}) == Ideal::unit());
    CHECK(ide(F, {{s.P, 1}, {s.Pbar, 1}}) == Ideal::principal(F, KElem(F, 5)));
    CHECK(ide(F, {{s.P, 2}}).norm() == 25);
    CHECK(ideal_valuation(F, ide(F, {{s.P, 2}, {s.Pbar, -1}}), s.P) == 2);
    CHECK(ideal_valuation(F, ide(F, {{s.P, 2}, {s.Pbar, -1}}), s.Pbar) == -1);
}

TEST_CASE("principal generators") {
    auto F = Field::make(-7);
    auto s = prime_split(F, 11);
    auto g = principal_generator(F, s.P);
    REQUIRE(g);
    CHECK(g->norm() == 11);
    CHECK(Ideal::principal(F, *g) == s.P);
    CHECK(units(F).size() == 2);
    CHECK(units(Field::make(-3)).size() == 6);
    auto F23 = Field::make(-23);
    auto G = class_group(F23);
    int nonprincipal = 0;
    for (const auto& r : G.reps)
        if (!principal_generator(F23, r)) ++nonprincipal;
    CHECK(nonprincipal == 2);
}
