#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "qgp/gp_moments.hpp"

namespace qgp::inference {

using weingarten::Group;

enum class KernelMode { asymptotic, exact };

// Covariance entry for a pair of states with squared overlap `overlap`:
// overlap/d for the unitary group, 2*overlap/d for the orthogonal group.
// KernelMode::exact substitutes the finite-d closed forms instead of the
// leading-order ones.
double fidelity_kernel(double overlap, long d, Group group,
                       KernelMode mode = KernelMode::asymptotic);

struct GPModel {
    gp::CovarianceMatrix covariance;  // m x m prior covariance of the outputs
    double noise_variance = 0.0;      // sigma_N^2; 1/N for N-shot estimates
    // Extension rule for new points: (overlap, d, group) -> covariance entry.
    std::function<double(double, long, Group)> kernel_fn;
};

struct PredictiveResult {
    double mean = 0.0;
    double variance = 0.0;
    double prior_variance = 0.0;
};

// Posterior at a new point given noisy observations y at the training states:
//   mean     = m^T (Sigma + sigma_N^2 I)^{-1} y
//   variance = prior - m^T (Sigma + sigma_N^2 I)^{-1} m
// An empty observation set returns the prior. The noiseless path with a
// rank-deficient kernel (e.g. duplicated training states) uses the
// minimum-norm pseudo-inverse solution when allow_pseudo_inverse is set and
// throws SingularGramError otherwise.
PredictiveResult predictive(const GPModel& gp, const Eigen::VectorXd& observations,
                            const Eigen::VectorXd& cross_cov, double prior_variance,
                            bool allow_pseudo_inverse = true);

struct TrivialityReport {
    PredictiveResult posterior;
    double shots = 0.0;             // N = 1 / noise_variance
    double mean_shift = 0.0;        // |posterior mean - prior mean| (prior mean is 0)
    double mean_shift_bound = 0.0;  // N * m * max|m_i| * max|y_i|, O(N/d) for
                                    // fidelity-kernel cross covariances
    double variance_reduction = 0.0;        // prior - posterior variance
    double variance_reduction_bound = 0.0;  // N * m * max m_i^2, O(N/d^2)
    double relative_variance_reduction = 0.0;
    bool regime_ok = true;  // shot count and state count polylog in d
    std::string note;
};

// Quantifies how far the posterior moves from the prior, together with the
// operator-norm bounds that force both shifts to vanish at large d whenever
// the shot and state counts stay polylogarithmic in d.
TrivialityReport triviality_report(const GPModel& gp,
                                   const Eigen::VectorXd& observations,
                                   const Eigen::VectorXd& cross_cov,
                                   double prior_variance, long d);

// E[(C - y)^{2k}] for a centred Gaussian output C with variance 1/d (unitary)
// or 2/d (orthogonal), via the binomial expansion over Gaussian moments
// E[C^r] = (r-1)!! sigma^r (even r; odd moments vanish).
double loss_moments(double y, int k, long d, Group group);

struct GammaParams {
    double shape = 0.0;
    double scale = 0.0;
};

// C^2 for C ~ N(0, sigma^2) follows a Gamma law with shape 1/2 and scale
// 2 sigma^2; its mean shape*scale recovers E[C^2] = sigma^2.
GammaParams squared_output_distribution(long d, Group group);

}  // namespace qgp::inference
