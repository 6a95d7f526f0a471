#include <random>

#include "doctest.h"
#include "kudla/textio.hpp"

using namespace kudla;

TEST_CASE("rationals round-trip") {
    for (Q x : {Q(0), Q(-3, 7), Q(5), Q(Z("123456789012345678901234567890"), Z(17))}) CHECK(parse_q(q_text(x)) == x);
    CHECK(q_text(Q(4, 6)) == "2/3");
    CHECK(parse_q("6/4") == Q(3, 2));
    CHECK(parse_q("-5") == Q(-5));
    CHECK_THROWS_AS(parse_q("1/0"), ParseError);
    CHECK_THROWS_AS(parse_q("x/2"), ParseError);
}

TEST_CASE("p-adics round-trip") {
    std::mt19937_64 rng(5);
    for (long p : {5L, 11L})
        for (int t = 0; t < 50; ++t) {
            Z v(static_cast<unsigned long>(rng() % 1000000));
            Zp x(p, 12, v * (t % 3 == 0 ? Z(p * p) : Z(1)));
            Zp y = parse_zp(zp_text(x));
            CHECK(y.p == x.p);
            CHECK(y.N == x.N);
            CHECK(y.v == x.v);
        }
    CHECK(zp_text(Zp(5, 4, 50)) == "2*5^2 mod 5^4");
    CHECK(zp_text(Zp(5, 4, 0)) == "0 mod 5^4");
    CHECK(parse_zp("0 mod 7^3").is_zero());
    CHECK_THROWS_AS(parse_zp("3*5^1"), ParseError);
    CHECK_THROWS_AS(parse_zp("3*7^1 mod 5^4"), ParseError);
}

TEST_CASE("balls round-trip bit for bit") {
    std::vector<RBall> xs{RBall(0), RBall(Q(1, 3)), RBall::pi(), -RBall::pi().exp(), RBall::with_radius(RBall(2), 1e-30)};
    for (const auto& x : xs) {
        RBall y = parse_rball(rball_text(x));
        CHECK(mpfr_equal_p(x.m, y.m));
        CHECK(mpfr_equal_p(x.r, y.r));
        CHECK(rball_text(y) == rball_text(x));
    }
    CBall z(RBall(Q(2, 7)), RBall::pi());
    CHECK(cball_text(parse_cball(cball_text(z))) == cball_text(z));
    CHECK(rball_text(RBall(3)) == "0x3p+0 ± 0x0p+0");
    CHECK_THROWS_AS(parse_rball("0x1p+0"), ParseError);
    CHECK_THROWS_AS(parse_rball("zz ± 0x0p+0"), ParseError);
}

TEST_CASE("field elements and documents") {
    Field F = Field::make(-7);
    KElem a(F, Q(1, 2), Q(-3));
    CHECK(parse_kelem(F, kelem_text(a)) == a);

    TextDoc d;
    d.set("format", "test");
    d.set("d", "-7");
    d.set("d", "-11");
    d.records.emplace_back("0,1", "1/2");
    d.records.emplace_back("3", "0x1p+0 ± 0x0p+0");
    std::string s = write_doc(d);
    CHECK(s == "format = test\nd = -11\n\n0,1\t1/2\n3\t0x1p+0 ± 0x0p+0\n");
    TextDoc e = read_doc(s);
    CHECK(e.headers == d.headers);
    CHECK(e.records == d.records);
    CHECK(write_doc(e) == s);
    CHECK(e.header("d") == "-11");
    CHECK_THROWS_AS(e.header("missing"), ParseError);
    CHECK_THROWS_AS(read_doc("no equals sign\n"), ParseError);
    CHECK_THROWS_AS(read_doc("a = 1\n\nno tab\n"), ParseError);
}

TEST_CASE("sha256 test vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
