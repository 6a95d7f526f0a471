#pragma once

#include <cstdint>
#include <vector>

#include "kudla/ball.hpp"
#include "kudla/imquad.hpp"
#include "kudla/shells.hpp"

namespace kudla {

// the sum is value * exp(log_scale); log_scale is the log of the largest term magnitude
struct ThetaSum {
    CBall value;
    double log_scale = 0;
    long terms = 0;
    CBall full() const { return value * CBall(RBall::from_double(log_scale).exp()); }
};

// sum_{x in Z^2} e(tau Q(x) + x1 z1 + x2 z2), summed around the dominant center;
// the tail beyond the ellipse is bounded and added to the radius
ThetaSum theta2_eval(const QuadForm2& f, const CBall& tau, const CBall& z1, const CBall& z2,
                     double rel_tol = 1e-40);

// theta_A(w, tau) = sum_{a in A} e(N(a)/N(A) tau + a w)
ThetaSum theta_ideal_eval(const Field& F, const Ideal& A, const CBall& w, const CBall& tau,
                          double rel_tol = 1e-40);

struct FECheck {
    int count = 0;
    int passed = 0;
    double max_radius = 0;  // combined radii of both sides
    bool ok() const { return passed == count; }
};

// theta_A(w/(c tau + d), gamma tau) = omega(d) (c tau + d) theta_A(w, tau), gamma in Gamma_1(D)
// (Gamma_0(D) when gamma1 is false); a triple passes when the difference contains zero
// and the combined radius is at most tol
FECheck theta_fe_check(const Field& F, const Ideal& A, int triples, uint64_t seed, double tol,
                       bool gamma1 = true);
// theta_{lambda A}(w, tau) = theta_A(lambda w, tau)
FECheck theta_scaling_check(const Field& F, const Ideal& A, int samples, uint64_t seed, double tol);

// Quasi-periods of W -> theta_C(W, tau0) at a CM point tau0 in K:
// theta(W + S) = e(-N(y) tau0 / N(C) - y W) theta(W), S = tau0 (ybar - y)/N(C) + lambda,
// for y in C with lambda c - Tr(c) y tau0 / N(C) in Z for all c in C.
struct ThetaPeriod {
    KElem y, lambda, S;
};
std::vector<ThetaPeriod> theta_periods(const Field& F, const Ideal& C, const KElem& tau0, long search);

}  // namespace kudla
