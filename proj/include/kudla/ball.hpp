#pragma once

#include <mpfr.h>

#include <string>

#include "kudla/imquad.hpp"

namespace kudla {

// Working precision for ball midpoints, in bits.
long ball_prec();
void set_ball_prec(long bits);

struct PrecGuard {
    long saved;
    explicit PrecGuard(long bits) : saved(ball_prec()) { set_ball_prec(bits); }
    ~PrecGuard() { set_ball_prec(saved); }
};

// Real ball [mid - rad, mid + rad]; rad is always an upper bound.
class RBall {
public:
    RBall();
    RBall(long v);
    RBall(const Q& q);
    RBall(const RBall& o);
    RBall(RBall&& o) noexcept;
    RBall& operator=(const RBall& o);
    RBall& operator=(RBall&& o) noexcept;
    ~RBall();

    static RBall pi();
    static RBall from_double(double v);
    static RBall with_radius(const RBall& mid, double extra);

    RBall& operator+=(const RBall& o);
    RBall& operator-=(const RBall& o);
    RBall& operator*=(const RBall& o);
    RBall& operator/=(const RBall& o);
    RBall operator-() const;

    friend RBall operator+(RBall a, const RBall& b) { return a += b; }
    friend RBall operator-(RBall a, const RBall& b) { return a -= b; }
    friend RBall operator*(RBall a, const RBall& b) { return a *= b; }
    friend RBall operator/(RBall a, const RBall& b) { return a /= b; }

    RBall sqrt() const;
    RBall exp() const;
    RBall log() const;
    RBall cos() const;
    RBall sin() const;
    RBall pow(long e) const;
    RBall atan2(const RBall& x) const;  // atan2(this, x)

    void add_error(const mpfr_t e);
    void add_error(double e);

    bool contains_zero() const;
    bool positive() const;
    double mid_d() const;
    double rad_d() const;
    double mag() const;  // upper bound of |x|
    std::string str() const;
    std::string hex() const;

    mpfr_t m;
    mpfr_t r;
};

class CBall {
public:
    RBall re, im;

    CBall() = default;
    CBall(long v) : re(v) {}
    CBall(RBall a) : re(std::move(a)) {}
    CBall(RBall a, RBall b) : re(std::move(a)), im(std::move(b)) {}

    static CBall i() { return CBall(RBall(0), RBall(1)); }
    static CBall from_k(const Field& F, const KElem& x);
    static CBall expi(const RBall& theta);

    CBall& operator+=(const CBall& o);
    CBall& operator-=(const CBall& o);
    CBall& operator*=(const CBall& o);
    CBall& operator/=(const CBall& o);
    CBall operator-() const { return CBall(-re, -im); }

    friend CBall operator+(CBall a, const CBall& b) { return a += b; }
    friend CBall operator-(CBall a, const CBall& b) { return a -= b; }
    friend CBall operator*(CBall a, const CBall& b) { return a *= b; }
    friend CBall operator/(CBall a, const CBall& b) { return a /= b; }

    CBall conj() const { return CBall(re, -im); }
    CBall exp() const;
    CBall pow(long e) const;
    RBall abs2() const { return re * re + im * im; }
    double mag() const;
    double rad() const;
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    void add_error(double e) {
        re.add_error(e);
        im.add_error(e);
    }
    std::string str() const;
    std::string hex() const;
};

// e(z) = exp(2 pi i z)
CBall e2pi(const CBall& z);

// sqrt(|D|) / 2 etc: Im(tau) as a ball
RBall tau_im(const Field& F);

}  // namespace kudla
