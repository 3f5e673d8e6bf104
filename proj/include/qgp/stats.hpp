#pragma once

// Streaming statistics over sample batches: mergeable power-sum moment
// accumulators, moment-ratio Gaussianity diagnostics, covariance/correlation
// with batch-means standard errors, tail frequencies with exact binomial
// intervals, and density-normalized histograms.

#include <Eigen/Dense>

#include <vector>

#include "qgp/sampler.hpp"

namespace qgp::stats {

// Raw power sums S_1..S_K with Neumaier-compensated accumulation. Power sums
// (unlike central-moment recursions) merge associatively, which is what the
// parallel samplers need; K ≤ 8 at |x| ≤ 1 keeps the conditioning harmless.
class MomentAccumulator {
public:
    explicit MomentAccumulator(int k_max = 8);

    void update(double x);
    void merge(const MomentAccumulator& other);  // throws on K mismatch

    int k_max() const { return static_cast<int>(sums_.size()); }
    long count() const { return n_; }
    double power_sum(int k) const;  // S_k including compensation
    double raw_moment(int k) const; // S_k / n
    double mean() const { return raw_moment(1); }
    // Unbiased sample variance.
    double variance() const;

private:
    long n_ = 0;
    std::vector<double> sums_;
    std::vector<double> comp_;
};

MomentAccumulator accumulate_column(const sampler::SampleBatch& batch, int column,
                                    int k_max = 8);

// k-th moment of a centered Gaussian in units of the variance:
// E[X^k]/E[X²]^{k/2} = k!/(2^{k/2}(k/2)!) = (k-1)!! for even k.
double gaussian_reference(int k);

struct MomentRatio {
    double ratio = 0.0;
    double reference = 0.0;
};
// m_k / m_2^{k/2} over raw moments (the streams here have mean zero).
MomentRatio moment_ratio(const MomentAccumulator& acc, int k);

// Full-sample moment ratio plus a batch-means standard error (see
// empirical_covariance for the batching scheme).
struct RatioEstimate {
    double ratio = 0.0;
    double se = 0.0;
    double reference = 0.0;
};
RatioEstimate moment_ratio_with_se(const sampler::SampleBatch& batch, int column,
                                   int k, int batches = 100);

// Unbiased sample covariance plus batch-means standard errors: the rows are
// split into `batches` contiguous blocks, the statistic is recomputed per
// block, and the SE is the spread of the block values over √B.
struct CovarianceEstimate {
    Eigen::MatrixXd cov;
    Eigen::MatrixXd cov_se;
    Eigen::MatrixXd corr;
    Eigen::MatrixXd corr_se;
    int batches_used = 0;
};
CovarianceEstimate empirical_covariance(const sampler::SampleBatch& batch,
                                        int batches = 100);

// Empirical two-sided tail P(|X| ≥ c) with the normal-approximation SE and
// the exact (Clopper-Pearson) confidence interval.
struct TailFrequency {
    double frequency = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    long hits = 0;
    long n = 0;
};
TailFrequency tail_frequency(const sampler::SampleBatch& batch, int column, double c,
                             double confidence = 0.95);

// Density-normalized histogram (integrates to 1) with the model N(0, σ²)
// density evaluated at bin centers for overlay columns.
struct Histogram {
    std::vector<double> edges;    // bins + 1
    std::vector<double> density;  // bins
    std::vector<double> overlay;  // bins (model density at centers)
    long n = 0;
    double sigma_model = 0.0;
};
Histogram histogram(const sampler::SampleBatch& batch, int column, int bins,
                    double sigma_model);

struct Histogram2D {
    std::vector<double> x_edges, y_edges;
    Eigen::MatrixXd density;  // bins × bins, integrates to 1 over the grid
    long n = 0;
};
Histogram2D histogram2d(const sampler::SampleBatch& batch, int col_x, int col_y, int bins);

// Kolmogorov-Smirnov distance to N(0, σ²) with the asymptotic p-value; a
// secondary diagnostic next to the moment ratios.
struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};
KsResult ks_test_gaussian(const sampler::SampleBatch& batch, int column, double sigma);

// Primary Gaussianity check: moment ratios k ∈ {4, 6} within 5 batch-SEs of
// their Gaussian references.
struct GaussianityVerdict {
    bool pass = false;
    double ratio4 = 0.0, se4 = 0.0;
    double ratio6 = 0.0, se6 = 0.0;
};
GaussianityVerdict gaussianity_verdict(const sampler::SampleBatch& batch, int column,
                                       int batches = 100);

}  // namespace qgp::stats
