#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qgp/weingarten.hpp"

namespace qgp::tails {

using weingarten::Group;

struct TailBound {
    std::string kind;  // gaussian-exact | chebyshev | tdesign | gradient-union |
                       // loss | gaussian-literal
    double value = 0.0;      // probability, clamped to [0, 1]
    double log_value = 0.0;  // natural log of the unclamped tail; meaningful
                             // even when value underflows to 0
    std::vector<std::pair<std::string, double>> params;  // input echo
};

// Standard deviation of a single Haar output: sqrt(1/d) or sqrt(2/d).
double output_sigma(long d, Group group);

// Exact two-sided tail P(|X| >= c) of X ~ N(0, sigma^2): erfc(c / (sigma sqrt 2)).
double gaussian_tail(double c, double sigma);

// log of gaussian_tail, evaluated via the asymptotic continued expansion of
// erfc once the tail drops below the smallest normal double (z beyond ~26).
double log_gaussian_tail(double c, double sigma);

// Simplified variant erfc(c sqrt d) / sqrt 2, kept for verification reports
// only: it drops the 1/2 in the Gaussian exponent and misnormalizes the
// prefactor, but shares the exponential-in-d decay.
double gaussian_tail_literal(double c, long d);

// P(|X| >= c) <= variance / c^2, clamped to 1.
double chebyshev_bound(double c, double variance);

// Generalized moment bound available to any t-design:
// (2h - 1)!! / (d c^2)^h with h = floor(t / 2); t = 2 recovers Chebyshev at
// variance 1/d.
double tdesign_bound(double c, long d, int t);

// Union bound on the parameter-shift gradient: |dC| >= c forces one of the
// two shifted outputs beyond c/2, so the tail is at most twice the
// single-output tail at the halved threshold.
double gradient_tail_bound(double c, long d);

// P(|L - E[L]| >= c) for the shot loss L = (C - y)^2 with C ~ N(0, sigma^2),
// sigma^2 = 1/d, E[L] = y^2 + sigma^2. The deviation maps exactly to output
// deviations: L - E >= c iff |C - y| >= sqrt(E + c), and L - E <= -c iff
// |C - y| <= sqrt(E - c) (possible only when E > c).
double loss_concentration_bound(double c, double y, long d);

// Row builders echoing their parameters, for report emission.
TailBound make_gaussian_bound(double c, double sigma);
TailBound make_literal_bound(double c, long d);
TailBound make_chebyshev_bound(double c, double variance);
TailBound make_tdesign_bound(double c, long d, int t);
TailBound make_gradient_bound(double c, long d);
TailBound make_loss_bound(double c, double y, long d);

}  // namespace qgp::tails
