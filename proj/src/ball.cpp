#include "kudla/ball.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kudla {

namespace {

thread_local long g_prec = 256;
constexpr mpfr_prec_t kRadPrec = 64;

// rad += |mid| * 2^(1 - prec)
void add_ulp(RBall& x) {
    if (mpfr_zero_p(x.m)) return;
    mpfr_t e;
    mpfr_init2(e, kRadPrec);
    mpfr_abs(e, x.m, MPFR_RNDU);
    mpfr_mul_2si(e, e, 1 - static_cast<long>(mpfr_get_prec(x.m)), MPFR_RNDU);
    mpfr_add(x.r, x.r, e, MPFR_RNDU);
    mpfr_clear(e);
}

void abs_up(mpfr_t out, const mpfr_t v) { mpfr_abs(out, v, MPFR_RNDU); }

}  // namespace

long ball_prec() { return g_prec; }
void set_ball_prec(long bits) { g_prec = bits; }

RBall::RBall() {
    mpfr_init2(m, g_prec);
    mpfr_init2(r, kRadPrec);
    mpfr_set_zero(m, 1);
    mpfr_set_zero(r, 1);
}

RBall::RBall(long v) : RBall() {
    if (mpfr_set_si(m, v, MPFR_RNDN) != 0) add_ulp(*this);
}

RBall::RBall(const Q& q) : RBall() {
    if (mpfr_set_q(m, q.get_mpq_t(), MPFR_RNDN) != 0) add_ulp(*this);
}

RBall::RBall(const RBall& o) {
    mpfr_init2(m, mpfr_get_prec(o.m));
    mpfr_init2(r, kRadPrec);
    mpfr_set(m, o.m, MPFR_RNDN);
    mpfr_set(r, o.r, MPFR_RNDU);
}

RBall::RBall(RBall&& o) noexcept : RBall(static_cast<const RBall&>(o)) {}

RBall& RBall::operator=(const RBall& o) {
    if (this != &o) {
        mpfr_set_prec(m, mpfr_get_prec(o.m));
        mpfr_set(m, o.m, MPFR_RNDN);
        mpfr_set(r, o.r, MPFR_RNDU);
    }
    return *this;
}

RBall& RBall::operator=(RBall&& o) noexcept {
    if (this != &o) {
        mpfr_swap(m, o.m);
        mpfr_swap(r, o.r);
    }
    return *this;
}

RBall::~RBall() {
    mpfr_clear(m);
    mpfr_clear(r);
}

RBall RBall::pi() {
    RBall x;
    mpfr_const_pi(x.m, MPFR_RNDN);
    add_ulp(x);
    return x;
}

RBall RBall::from_double(double v) {
    RBall x;
    mpfr_set_d(x.m, v, MPFR_RNDN);
    return x;
}

RBall RBall::with_radius(const RBall& mid, double extra) {
    RBall x = mid;
    x.add_error(extra);
    return x;
}

void RBall::add_error(const mpfr_t e) {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    abs_up(a, e);
    mpfr_add(r, r, a, MPFR_RNDU);
    mpfr_clear(a);
}

void RBall::add_error(double e) {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_set_d(a, std::fabs(e), MPFR_RNDU);
    mpfr_add(r, r, a, MPFR_RNDU);
    mpfr_clear(a);
}

RBall& RBall::operator+=(const RBall& o) {
    int inex = mpfr_add(m, m, o.m, MPFR_RNDN);
    mpfr_add(r, r, o.r, MPFR_RNDU);
    if (inex) add_ulp(*this);
    return *this;
}

RBall& RBall::operator-=(const RBall& o) {
    int inex = mpfr_sub(m, m, o.m, MPFR_RNDN);
    mpfr_add(r, r, o.r, MPFR_RNDU);
    if (inex) add_ulp(*this);
    return *this;
}

RBall& RBall::operator*=(const RBall& o) {
    mpfr_t t1, t2, am, bm;
    mpfr_inits2(kRadPrec, t1, t2, am, bm, static_cast<mpfr_ptr>(nullptr));
    abs_up(am, m);
    abs_up(bm, o.m);
    mpfr_mul(t1, am, o.r, MPFR_RNDU);
    mpfr_mul(t2, bm, r, MPFR_RNDU);
    mpfr_add(t1, t1, t2, MPFR_RNDU);
    mpfr_mul(t2, r, o.r, MPFR_RNDU);
    mpfr_add(r, t1, t2, MPFR_RNDU);
    int inex = mpfr_mul(m, m, o.m, MPFR_RNDN);
    if (inex) add_ulp(*this);
    mpfr_clears(t1, t2, am, bm, static_cast<mpfr_ptr>(nullptr));
    return *this;
}

RBall& RBall::operator/=(const RBall& o) {
    mpfr_t den, t1, t2;
    mpfr_inits2(kRadPrec, den, t1, t2, static_cast<mpfr_ptr>(nullptr));
    mpfr_abs(den, o.m, MPFR_RNDD);
    mpfr_sub(den, den, o.r, MPFR_RNDD);
    if (mpfr_sgn(den) <= 0) {
        mpfr_clears(den, t1, t2, static_cast<mpfr_ptr>(nullptr));
        throw std::domain_error("ball division by a ball containing zero");
    }
    int inex = mpfr_div(m, m, o.m, MPFR_RNDN);
    // (ra + |q| rb) / (|bm| - rb)
    abs_up(t1, m);
    mpfr_mul_2si(t2, t1, 1 - static_cast<long>(mpfr_get_prec(m)), MPFR_RNDU);
    mpfr_add(t1, t1, t2, MPFR_RNDU);
    mpfr_mul(t1, t1, o.r, MPFR_RNDU);
    mpfr_add(t1, t1, r, MPFR_RNDU);
    mpfr_div(r, t1, den, MPFR_RNDU);
    if (inex) add_ulp(*this);
    mpfr_clears(den, t1, t2, static_cast<mpfr_ptr>(nullptr));
    return *this;
}

RBall RBall::operator-() const {
    RBall x = *this;
    mpfr_neg(x.m, x.m, MPFR_RNDN);
    return x;
}

RBall RBall::sqrt() const {
    mpfr_t lo;
    mpfr_init2(lo, kRadPrec);
    mpfr_sub(lo, m, r, MPFR_RNDD);
    if (mpfr_sgn(lo) <= 0) {
        mpfr_clear(lo);
        throw std::domain_error("sqrt of a ball touching zero");
    }
    RBall x;
    int inex = mpfr_sqrt(x.m, m, MPFR_RNDN);
    mpfr_sqrt(lo, lo, MPFR_RNDD);
    mpfr_div(x.r, r, lo, MPFR_RNDU);
    if (inex) add_ulp(x);
    mpfr_clear(lo);
    return x;
}

RBall RBall::exp() const {
    RBall x;
    int inex = mpfr_exp(x.m, m, MPFR_RNDN);
    mpfr_t e, a;
    mpfr_inits2(kRadPrec, e, a, static_cast<mpfr_ptr>(nullptr));
    mpfr_expm1(e, r, MPFR_RNDU);
    abs_up(a, x.m);
    mpfr_mul_2si(x.r, a, 1 - static_cast<long>(mpfr_get_prec(x.m)), MPFR_RNDU);
    mpfr_add(a, a, x.r, MPFR_RNDU);
    mpfr_mul(x.r, a, e, MPFR_RNDU);
    if (inex) add_ulp(x);
    mpfr_clears(e, a, static_cast<mpfr_ptr>(nullptr));
    return x;
}

RBall RBall::log() const {
    mpfr_t lo;
    mpfr_init2(lo, kRadPrec);
    mpfr_sub(lo, m, r, MPFR_RNDD);
    if (mpfr_sgn(lo) <= 0) {
        mpfr_clear(lo);
        throw std::domain_error("log of a non-positive ball");
    }
    RBall x;
    int inex = mpfr_log(x.m, m, MPFR_RNDN);
    mpfr_div(x.r, r, lo, MPFR_RNDU);
    if (inex) add_ulp(x);
    mpfr_clear(lo);
    return x;
}

RBall RBall::cos() const {
    RBall x;
    int inex = mpfr_cos(x.m, m, MPFR_RNDN);
    mpfr_set(x.r, r, MPFR_RNDU);
    if (inex) add_ulp(x);
    return x;
}

RBall RBall::sin() const {
    RBall x;
    int inex = mpfr_sin(x.m, m, MPFR_RNDN);
    mpfr_set(x.r, r, MPFR_RNDU);
    if (inex) add_ulp(x);
    return x;
}

RBall RBall::pow(long e) const {
    if (e < 0) return RBall(1) / pow(-e);
    RBall res(1), acc = *this;
    while (e) {
        if (e & 1) res *= acc;
        e >>= 1;
        if (e) acc *= acc;
    }
    return res;
}

RBall RBall::atan2(const RBall& x) const {
    // gradient of atan2 has norm 1/|z|
    RBall out;
    int inex = mpfr_atan2(out.m, m, x.m, MPFR_RNDN);
    mpfr_t ax, ay, d;
    mpfr_inits2(kRadPrec, ax, ay, d, static_cast<mpfr_ptr>(nullptr));
    mpfr_abs(ax, x.m, MPFR_RNDD);
    mpfr_sub(ax, ax, x.r, MPFR_RNDD);
    mpfr_abs(ay, m, MPFR_RNDD);
    mpfr_sub(ay, ay, r, MPFR_RNDD);
    if (mpfr_sgn(ax) < 0) mpfr_set_zero(ax, 1);
    if (mpfr_sgn(ay) < 0) mpfr_set_zero(ay, 1);
    mpfr_hypot(d, ax, ay, MPFR_RNDD);
    if (mpfr_sgn(d) <= 0) {
        mpfr_clears(ax, ay, d, static_cast<mpfr_ptr>(nullptr));
        throw std::domain_error("atan2 near the origin");
    }
    mpfr_add(ax, r, x.r, MPFR_RNDU);
    mpfr_div(out.r, ax, d, MPFR_RNDU);
    if (inex) add_ulp(out);
    mpfr_clears(ax, ay, d, static_cast<mpfr_ptr>(nullptr));
    return out;
}

bool RBall::contains_zero() const {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_abs(a, m, MPFR_RNDD);
    bool z = mpfr_cmp(a, r) <= 0;
    mpfr_clear(a);
    return z;
}

bool RBall::positive() const {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_sub(a, m, r, MPFR_RNDD);
    bool p = mpfr_sgn(a) > 0;
    mpfr_clear(a);
    return p;
}

double RBall::mid_d() const { return mpfr_get_d(m, MPFR_RNDN); }
double RBall::rad_d() const { return mpfr_get_d(r, MPFR_RNDU); }

double RBall::mag() const {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_abs(a, m, MPFR_RNDU);
    mpfr_add(a, a, r, MPFR_RNDU);
    double v = mpfr_get_d(a, MPFR_RNDU);
    mpfr_clear(a);
    return v;
}

std::string RBall::str() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.20Re +/- %.3Re", m, r);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string RBall::hex() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra +/- %Ra", m, r);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

CBall CBall::from_k(const Field& F, const KElem& x) {
    RBall re(x.x + x.y * tau_re(F));
    RBall im = RBall(x.y) * tau_im(F);
    return CBall(std::move(re), std::move(im));
}

CBall CBall::expi(const RBall& theta) { return CBall(theta.cos(), theta.sin()); }

CBall& CBall::operator+=(const CBall& o) {
    re += o.re;
    im += o.im;
    return *this;
}

CBall& CBall::operator-=(const CBall& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

CBall& CBall::operator*=(const CBall& o) {
    RBall a = re * o.re - im * o.im;
    RBall b = re * o.im + im * o.re;
    re = std::move(a);
    im = std::move(b);
    return *this;
}

CBall& CBall::operator/=(const CBall& o) {
    RBall n = o.abs2();
    CBall t = *this * o.conj();
    re = t.re / n;
    im = t.im / n;
    return *this;
}

CBall CBall::exp() const {
    RBall s = re.exp();
    return CBall(s * im.cos(), s * im.sin());
}

CBall CBall::pow(long e) const {
    if (e < 0) return CBall(1) / pow(-e);
    CBall res(1), acc = *this;
    while (e) {
        if (e & 1) res *= acc;
        e >>= 1;
        if (e) acc *= acc;
    }
    return res;
}

double CBall::mag() const { return std::hypot(re.mag(), im.mag()); }
double CBall::rad() const { return std::max(re.rad_d(), im.rad_d()); }

std::string CBall::str() const { return "(" + re.str() + ") + i(" + im.str() + ")"; }
std::string CBall::hex() const { return re.hex() + " ; " + im.hex(); }

CBall e2pi(const CBall& z) {
    RBall tp = RBall(2) * RBall::pi();
    CBall w(-(tp * z.im), tp * z.re);
    return w.exp();
}

RBall tau_im(const Field& F) { return RBall(tau_im2(F)).sqrt(); }

}  // namespace kudla
