#include <random>

#include "doctest.h"
#include "kudla/shells.hpp"

using namespace kudla;

TEST_CASE("scalar shell counts match a brute force box") {
    QuadForm2 f{2, 1, 3};
    long X = 200;
    auto r = shell_counts(f, X, Kernel::scalar);
    std::vector<long> ref(X + 1, 0);
    for (long u = -30; u <= 30; ++u)
        for (long v = -30; v <= 30; ++v) {
            long q = 2 * u * u + u * v + 3 * v * v;
            if (q <= X) ++ref[q];
        }
    CHECK(r == ref);
}

TEST_CASE("sum of two squares") {
    auto r = shell_counts({1, 0, 1}, 50);
    CHECK(r[0] == 1);
    CHECK(r[1] == 4);
    CHECK(r[5] == 8);
    CHECK(r[25] == 12);
    CHECK(r[3] == 0);
}

TEST_CASE("AVX2 rows equal scalar rows") {
    if (!avx2_available()) {
        MESSAGE("AVX2 not available; equivalence not exercised");
        return;
    }
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> co(-50, 50), len(1, 37), u0(-1000, 1000);
    for (int t = 0; t < 2000; ++t) {
        long A = 1 + (rng() % 40), C = 1 + (rng() % 40), B;
        do B = co(rng);
        while (B * B >= 4 * A * C);
        QuadForm2 f{A, B, C};
        long v = co(rng), u = u0(rng), n = len(rng);
        std::vector<int64_t> a(n), b(n);
        shell_row_scalar(f, v, u, n, a.data());
        shell_row_avx2(f, v, u, n, b.data());
        REQUIRE(a == b);
    }
    for (QuadForm2 f : {QuadForm2{1, 1, 2}, QuadForm2{2, 1, 3}, QuadForm2{1, 0, 5}, QuadForm2{3, 2, 7}}) {
        CHECK(shell_counts(f, 3000, Kernel::scalar) == shell_counts(f, 3000, Kernel::avx2));
        CHECK(shell_vectors(f, 500, Kernel::scalar) == shell_vectors(f, 500, Kernel::avx2));
    }
}
