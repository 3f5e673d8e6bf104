#include "qgp/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgp/errors.hpp"

namespace qgp::tails {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log erfc(z) for z >= 0. The library erfc is accurate to full double
// precision until it leaves the normal range (z beyond ~26); past that the
// asymptotic expansion erfc(z) = e^{-z^2} / (z sqrt(pi)) * sum_n (-1)^n
// (2n-1)!! / (2 z^2)^n takes over, with the sum truncated once terms stop
// improving it.
double log_erfc(double z) {
    if (z <= 26.0) return std::log(std::erfc(z));
    const double inv2z2 = 1.0 / (2.0 * z * z);
    double term = 1.0, series = 1.0;
    for (int n = 1; n <= 30; ++n) {
        term *= -(2.0 * n - 1.0) * inv2z2;
        if (std::abs(term) < 1e-18) break;
        series += term;
    }
    return -z * z - std::log(z) - 0.5 * std::log(M_PI) + std::log(series);
}

double log_sum_exp(const std::vector<double>& ls) {
    double m = -kInf;
    for (double l : ls) m = std::max(m, l);
    if (m == -kInf) return -kInf;
    double s = 0.0;
    for (double l : ls) s += std::exp(l - m);
    return m + std::log(s);
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

double log_double_factorial_odd(int h) {
    double s = 0.0;  // log (2h - 1)!!
    for (int j = 2 * h - 1; j >= 3; j -= 2) s += std::log(static_cast<double>(j));
    return s;
}

}  // namespace

double output_sigma(long d, Group group) {
    if (d < 2) throw Error("dimension must be at least 2");
    return std::sqrt((group == Group::orthogonal ? 2.0 : 1.0) /
                     static_cast<double>(d));
}

double gaussian_tail(double c, double sigma) {
    if (c < 0.0) throw Error("tail threshold must be nonnegative");
    if (!(sigma > 0.0)) throw Error("sigma must be positive");
    return std::erfc(c / (sigma * M_SQRT2));
}

double log_gaussian_tail(double c, double sigma) {
    if (c < 0.0) throw Error("tail threshold must be nonnegative");
    if (!(sigma > 0.0)) throw Error("sigma must be positive");
    return log_erfc(c / (sigma * M_SQRT2));
}

double gaussian_tail_literal(double c, long d) {
    if (c < 0.0) throw Error("tail threshold must be nonnegative");
    if (d < 2) throw Error("dimension must be at least 2");
    return std::erfc(c * std::sqrt(static_cast<double>(d))) / M_SQRT2;
}

double chebyshev_bound(double c, double variance) {
    if (!(c > 0.0)) throw Error("Chebyshev threshold must be positive");
    if (variance < 0.0) throw Error("variance must be nonnegative");
    return std::min(1.0, variance / (c * c));
}

double tdesign_bound(double c, long d, int t) {
    if (t < 2) throw Error("design order must be at least 2");
    if (!(c > 0.0)) throw Error("tail threshold must be positive");
    if (d < 2) throw Error("dimension must be at least 2");
    const int h = t / 2;
    const double log_val =
        log_double_factorial_odd(h) -
        h * std::log(static_cast<double>(d) * c * c);
    return clamp01(std::exp(log_val));
}

double gradient_tail_bound(double c, long d) {
    if (c < 0.0) throw Error("tail threshold must be nonnegative");
    return std::min(1.0, 2.0 * gaussian_tail(0.5 * c, output_sigma(d, Group::unitary)));
}

namespace {

struct LossTail {
    double value;
    double log_value;
};

LossTail loss_tail(double c, double y, long d) {
    if (!(c > 0.0)) throw Error("tail threshold must be positive");
    if (std::abs(y) > 1.0) throw Error("labels lie in [-1, 1]");
    if (d < 2) throw Error("dimension must be at least 2");
    const double sigma = output_sigma(d, Group::unitary);
    const double mean = y * y + sigma * sigma;  // E[(C - y)^2]
    const double a = std::sqrt(mean + c);
    const double s2 = sigma * M_SQRT2;

    // Upward deviation: |C - y| >= a, split into the two Gaussian tails.
    std::vector<double> logs = {log_erfc((a - y) / s2) - std::log(2.0),
                                log_erfc((a + y) / s2) - std::log(2.0)};
    double value = 0.5 * std::erfc((a - y) / s2) + 0.5 * std::erfc((a + y) / s2);

    // Downward deviation exists only while mean - c is still a possible loss.
    if (mean - c > 0.0) {
        const double b = std::sqrt(mean - c);
        const double lower =
            0.5 * (std::erf((y + b) / s2) - std::erf((y - b) / s2));
        value += lower;
        if (lower > 0.0) logs.push_back(std::log(lower));
    }
    return LossTail{clamp01(value), log_sum_exp(logs)};
}

}  // namespace

double loss_concentration_bound(double c, double y, long d) {
    return loss_tail(c, y, d).value;
}

TailBound make_gaussian_bound(double c, double sigma) {
    TailBound b;
    b.kind = "gaussian-exact";
    b.value = clamp01(gaussian_tail(c, sigma));
    b.log_value = log_gaussian_tail(c, sigma);
    b.params = {{"c", c}, {"sigma", sigma}};
    return b;
}

TailBound make_literal_bound(double c, long d) {
    TailBound b;
    b.kind = "gaussian-literal";
    b.value = clamp01(gaussian_tail_literal(c, d));
    b.log_value = log_erfc(c * std::sqrt(static_cast<double>(d))) -
                  0.5 * std::log(2.0);
    b.params = {{"c", c}, {"d", static_cast<double>(d)}};
    return b;
}

TailBound make_chebyshev_bound(double c, double variance) {
    TailBound b;
    b.kind = "chebyshev";
    b.value = chebyshev_bound(c, variance);
    b.log_value = std::log(variance) - 2.0 * std::log(c);
    b.params = {{"c", c}, {"variance", variance}};
    return b;
}

TailBound make_tdesign_bound(double c, long d, int t) {
    TailBound b;
    b.kind = "tdesign";
    b.value = tdesign_bound(c, d, t);
    const int h = t / 2;
    b.log_value = log_double_factorial_odd(h) -
                  h * std::log(static_cast<double>(d) * c * c);
    b.params = {{"c", c}, {"d", static_cast<double>(d)}, {"t", static_cast<double>(t)}};
    return b;
}

TailBound make_gradient_bound(double c, long d) {
    TailBound b;
    b.kind = "gradient-union";
    b.value = gradient_tail_bound(c, d);
    b.log_value = std::log(2.0) +
                  log_gaussian_tail(0.5 * c, output_sigma(d, Group::unitary));
    b.params = {{"c", c}, {"d", static_cast<double>(d)}};
    return b;
}

TailBound make_loss_bound(double c, double y, long d) {
    TailBound b;
    b.kind = "loss";
    const LossTail t = loss_tail(c, y, d);
    b.value = t.value;
    b.log_value = t.log_value;
    b.params = {{"c", c}, {"y", y}, {"d", static_cast<double>(d)}};
    return b;
}

}  // namespace qgp::tails
