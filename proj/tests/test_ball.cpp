#include <cmath>

#include "doctest.h"
#include "kudla/ball.hpp"

using namespace kudla;

TEST_CASE("pi and elementary functions enclose their values") {
    RBall pi = RBall::pi();
    CHECK(std::abs(pi.mid_d() - M_PI) < 1e-15);
    CHECK(pi.rad_d() < 1e-70);
    RBall x(Q(7, 3));
    RBall y = x.exp().log() - x;
    CHECK(y.contains_zero());
    CHECK(y.rad_d() < 1e-60);
    RBall s = x.sin(), c = x.cos();
    CHECK((s * s + c * c - RBall(1)).contains_zero());
    CHECK((RBall(2).sqrt() * RBall(2).sqrt() - RBall(2)).contains_zero());
    RBall at = RBall(1).atan2(RBall(1)) * RBall(4) - pi;
    CHECK(at.contains_zero());
}

TEST_CASE("division by a ball containing zero throws") {
    RBall z = RBall::with_radius(RBall(0), 1e-30);
    CHECK_THROWS(RBall(1) / z);
}

TEST_CASE("e(z) at i is exp(-2 pi)") {
    CBall v = e2pi(CBall::i());
    CHECK(std::abs(v.re.mid_d() - std::exp(-2 * M_PI)) < 1e-17);
    CHECK(v.im.contains_zero());
    CBall u = e2pi(CBall(RBall(Q(1, 4))));
    CHECK((u - CBall::i()).contains_zero());
    CHECK(u.rad() < 1e-60);
}

TEST_CASE("field elements embed by the positive root") {
    Field F = Field::make(-7);
    KElem t = KElem::tau(F);
    CBall b = CBall::from_k(F, t);
    CHECK(std::abs(b.re.mid_d() - 0.5) < 1e-15);
    CHECK(b.im.mid_d() > 0);
    CHECK(((b * b) - b + CBall(2)).contains_zero());
    CHECK((tau_im(F) * tau_im(F) - RBall(Q(7, 4))).contains_zero());
}

TEST_CASE("precision guard restores the previous precision") {
    long before = ball_prec();
    {
        PrecGuard g(512);
        CHECK(ball_prec() == 512);
        CHECK(RBall::pi().rad_d() < 1e-150);
    }
    CHECK(ball_prec() == before);
}
