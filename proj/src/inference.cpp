#include "qgp/inference.hpp"

#include <cmath>
#include <limits>

#include "qgp/errors.hpp"

namespace qgp::inference {

double fidelity_kernel(double overlap, long d, Group group, KernelMode mode) {
    if (!(overlap >= 0.0 && overlap <= 1.0))
        throw Error("overlap must lie in [0, 1]");
    if (d < 2) throw Error("dimension must be at least 2");
    if (mode == KernelMode::exact)
        return weingarten::exact_covariance(overlap, d, group);
    const double group_factor = group == Group::orthogonal ? 2.0 : 1.0;
    return group_factor * overlap / static_cast<double>(d);
}

namespace {

// x^e by repeated multiplication; exact for e in {0,1,2} which the loss-moment
// identities rely on.
double dpow(double x, int e) {
    double v = 1.0;
    for (int i = 0; i < e; ++i) v *= x;
    return v;
}

// Solves K a = rhs for a symmetric kernel K, preferring a Cholesky
// factorization with a small jitter retry and falling back to the
// minimum-norm pseudo-inverse for genuinely rank-deficient kernels.
Eigen::MatrixXd solve_kernel(const Eigen::MatrixXd& k, const Eigen::MatrixXd& rhs,
                             bool noiseless, bool allow_pseudo_inverse) {
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    bool healthy = llt.info() == Eigen::Success;
    if (healthy) {
        // LLT can numerically succeed on a rank-deficient kernel when the zero
        // pivot rounds to a tiny positive value; require a sane pivot spread
        // (the squared ratio bounds the condition number by ~1e14).
        const Eigen::VectorXd pivots = llt.matrixLLT().diagonal();
        healthy = pivots.minCoeff() >= pivots.maxCoeff() * 1e-7;
    }
    if (healthy) return llt.solve(rhs);
    if (noiseless && !allow_pseudo_inverse)
        throw SingularGramError(
            "noiseless kernel matrix is singular; enable the pseudo-inverse "
            "fallback to predict with duplicated training states");

    const double scale = std::max(1.0, k.diagonal().cwiseAbs().maxCoeff());
    for (double jitter = 1e-12; jitter <= 1e-8; jitter *= 100.0) {
        const Eigen::MatrixXd kj =
            k + jitter * scale *
                    Eigen::MatrixXd::Identity(k.rows(), k.cols());
        llt.compute(kj);
        if (llt.info() == Eigen::Success) return llt.solve(rhs);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(k);
    return cod.solve(rhs);
}

}  // namespace

PredictiveResult predictive(const GPModel& gp, const Eigen::VectorXd& observations,
                            const Eigen::VectorXd& cross_cov, double prior_variance,
                            bool allow_pseudo_inverse) {
    if (gp.noise_variance < 0.0) throw Error("noise variance must be nonnegative");
    const Eigen::Index m = gp.covariance.entries.rows();
    if (observations.size() != m || cross_cov.size() != m)
        throw Error("observation and cross-covariance sizes must match the kernel");

    PredictiveResult r;
    r.prior_variance = prior_variance;
    r.variance = prior_variance;
    if (m == 0) return r;  // nothing observed: posterior == prior

    Eigen::MatrixXd kernel = gp.covariance.entries;
    kernel.diagonal().array() += gp.noise_variance;

    Eigen::MatrixXd rhs(m, 2);
    rhs.col(0) = observations;
    rhs.col(1) = cross_cov;
    const Eigen::MatrixXd alpha =
        solve_kernel(kernel, rhs, gp.noise_variance == 0.0, allow_pseudo_inverse);

    r.mean = cross_cov.dot(alpha.col(0));
    r.variance = prior_variance - cross_cov.dot(alpha.col(1));
    return r;
}

TrivialityReport triviality_report(const GPModel& gp,
                                   const Eigen::VectorXd& observations,
                                   const Eigen::VectorXd& cross_cov,
                                   double prior_variance, long d) {
    if (d < 2) throw Error("dimension must be at least 2");
    TrivialityReport rep;
    rep.posterior = predictive(gp, observations, cross_cov, prior_variance);
    rep.mean_shift = std::abs(rep.posterior.mean);
    rep.variance_reduction = prior_variance - rep.posterior.variance;
    rep.relative_variance_reduction =
        prior_variance > 0.0 ? rep.variance_reduction / prior_variance : 0.0;

    const double m = static_cast<double>(cross_cov.size());
    const double max_m = cross_cov.size() > 0 ? cross_cov.cwiseAbs().maxCoeff() : 0.0;
    const double max_y =
        observations.size() > 0 ? observations.cwiseAbs().maxCoeff() : 0.0;
    const double log2d = std::log2(static_cast<double>(d));
    const double polylog = log2d * log2d * log2d;

    if (gp.noise_variance > 0.0) {
        // ||(Sigma + sigma_N^2 I)^{-1}|| <= N for PSD Sigma, hence
        // |m^T K^{-1} y| <= N ||m|| ||y|| <= N * m * max|m_i| * max|y_i|
        // and m^T K^{-1} m <= N * m * max m_i^2.
        rep.shots = 1.0 / gp.noise_variance;
        rep.mean_shift_bound = rep.shots * m * max_m * max_y;
        rep.variance_reduction_bound = rep.shots * m * max_m * max_m;
        rep.regime_ok = rep.shots <= polylog && m <= polylog;
        rep.note = rep.regime_ok
                       ? "shot and state counts are polylogarithmic in d; the "
                         "posterior provably stays within the bounds of the prior"
                       : "shot or state count exceeds log2(d)^3; the vanishing-"
                         "shift bounds no longer apply";
    } else {
        rep.shots = std::numeric_limits<double>::infinity();
        rep.mean_shift_bound = std::numeric_limits<double>::infinity();
        rep.variance_reduction_bound = std::numeric_limits<double>::infinity();
        rep.regime_ok = false;
        rep.note = "noiseless observations: the inverse kernel norm is unbounded "
                   "and no triviality guarantee holds";
    }
    return rep;
}

double loss_moments(double y, int k, long d, Group group) {
    if (k < 1) throw Error("loss moment order must be at least 1");
    if (d < 2) throw Error("dimension must be at least 2");
    const double sigma2 = (group == Group::orthogonal ? 2.0 : 1.0) /
                          static_cast<double>(d);
    const int two_k = 2 * k;
    double total = 0.0;
    double binom = 1.0;  // C(2k, r), updated incrementally
    for (int r = 0; r <= two_k; ++r) {
        if (r % 2 == 0) {
            double moment = 1.0;  // E[C^r] = (r-1)!! sigma^r
            for (int j = r - 1; j >= 1; j -= 2) moment *= static_cast<double>(j);
            moment *= dpow(sigma2, r / 2);
            total += binom * moment * dpow(-y, two_k - r);
        }
        binom = binom * static_cast<double>(two_k - r) / static_cast<double>(r + 1);
    }
    return total;
}

GammaParams squared_output_distribution(long d, Group group) {
    if (d < 2) throw Error("dimension must be at least 2");
    const double sigma2 = (group == Group::orthogonal ? 2.0 : 1.0) /
                          static_cast<double>(d);
    return GammaParams{0.5, 2.0 * sigma2};
}

}  // namespace qgp::inference
