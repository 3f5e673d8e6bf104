#include "qgp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "qgp/errors.hpp"

namespace qgp::stats {

namespace {

// Neumaier: accumulate the rounding error of every addition in a side term.
void add_compensated(double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
        comp += (sum - t) + v;
    else
        comp += (v - t) + sum;
    sum = t;
}

}  // namespace

MomentAccumulator::MomentAccumulator(int k_max) {
    if (k_max < 2) throw Error("moment accumulator needs k_max >= 2");
    sums_.assign(k_max, 0.0);
    comp_.assign(k_max, 0.0);
}

void MomentAccumulator::update(double x) {
    ++n_;
    double pw = 1.0;
    for (size_t k = 0; k < sums_.size(); ++k) {
        pw *= x;
        add_compensated(sums_[k], comp_[k], pw);
    }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.sums_.size() != sums_.size())
        throw OrderMismatchError("cannot merge accumulators of different order");
    n_ += other.n_;
    for (size_t k = 0; k < sums_.size(); ++k) {
        add_compensated(sums_[k], comp_[k], other.sums_[k]);
        add_compensated(sums_[k], comp_[k], other.comp_[k]);
    }
}

double MomentAccumulator::power_sum(int k) const {
    if (k < 1 || k > k_max()) throw Error("power sum order out of range");
    return sums_[k - 1] + comp_[k - 1];
}

double MomentAccumulator::raw_moment(int k) const {
    if (n_ == 0) throw Error("no samples accumulated");
    return power_sum(k) / static_cast<double>(n_);
}

double MomentAccumulator::variance() const {
    if (n_ < 2) throw Error("variance needs at least two samples");
    const double m1 = mean();
    return (power_sum(2) - static_cast<double>(n_) * m1 * m1) /
           static_cast<double>(n_ - 1);
}

MomentAccumulator accumulate_column(const sampler::SampleBatch& batch, int column,
                                    int k_max) {
    if (column < 0 || column >= batch.m()) throw Error("column index out of range");
    MomentAccumulator acc(k_max);
    for (long s = 0; s < batch.n_samples(); ++s) acc.update(batch.values(s, column));
    return acc;
}

double gaussian_reference(int k) {
    if (k < 2 || k % 2 != 0) throw Error("Gaussian moment ratio needs even k >= 2");
    double v = 1.0;
    for (int j = k - 1; j >= 3; j -= 2) v *= j;
    return v;
}

MomentRatio moment_ratio(const MomentAccumulator& acc, int k) {
    if (k < 2 || k % 2 != 0) throw Error("moment ratio needs even k >= 2");
    if (k > acc.k_max()) throw Error("accumulator order too small for requested ratio");
    const double m2 = acc.raw_moment(2);
    if (m2 <= 0.0) throw Error("degenerate second moment");
    MomentRatio r;
    r.ratio = acc.raw_moment(k) / std::pow(m2, k / 2.0);
    r.reference = gaussian_reference(k);
    return r;
}

namespace {

// Contiguous row blocks for batch-means: block b covers [start(b), start(b+1)),
// each with at least two rows.
std::vector<long> block_bounds(long n, int batches) {
    const int b_eff = static_cast<int>(std::max<long>(1, std::min<long>(batches, n / 2)));
    std::vector<long> bounds(b_eff + 1);
    for (int b = 0; b <= b_eff; ++b) bounds[b] = (n * b) / b_eff;
    return bounds;
}

double sd_of(const std::vector<double>& xs) {
    const long n = static_cast<long>(xs.size());
    if (n < 2) return 0.0;
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

void covariance_of_rows(const Eigen::MatrixXd& v, long lo, long hi, Eigen::MatrixXd& cov,
                        Eigen::MatrixXd& corr) {
    const long n = hi - lo;
    const int m = static_cast<int>(v.cols());
    const Eigen::RowVectorXd mean = v.middleRows(lo, n).colwise().mean();
    const Eigen::MatrixXd centered = v.middleRows(lo, n).rowwise() - mean;
    cov = centered.transpose() * centered / static_cast<double>(n - 1);
    corr.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double den = std::sqrt(cov(i, i) * cov(j, j));
            corr(i, j) = den > 0.0 ? cov(i, j) / den : (i == j ? 1.0 : 0.0);
        }
}

}  // namespace

CovarianceEstimate empirical_covariance(const sampler::SampleBatch& batch, int batches) {
    const long n = batch.n_samples();
    if (n < 2) throw Error("covariance needs at least two samples");
    const int m = batch.m();

    CovarianceEstimate est;
    covariance_of_rows(batch.values, 0, n, est.cov, est.corr);

    const auto bounds = block_bounds(n, batches);
    const int b = static_cast<int>(bounds.size()) - 1;
    est.batches_used = b;
    est.cov_se = Eigen::MatrixXd::Zero(m, m);
    est.corr_se = Eigen::MatrixXd::Zero(m, m);
    if (b < 2) return est;

    std::vector<Eigen::MatrixXd> bcov(b), bcorr(b);
    for (int k = 0; k < b; ++k)
        covariance_of_rows(batch.values, bounds[k], bounds[k + 1], bcov[k], bcorr[k]);
    std::vector<double> vals(b);
    const double root_b = std::sqrt(static_cast<double>(b));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < b; ++k) vals[k] = bcov[k](i, j);
            est.cov_se(i, j) = sd_of(vals) / root_b;
            for (int k = 0; k < b; ++k) vals[k] = bcorr[k](i, j);
            est.corr_se(i, j) = sd_of(vals) / root_b;
        }
    return est;
}

namespace {

// Regularized incomplete beta I_x(a, b) by the standard continued fraction
// (modified Lentz evaluation), good to ~1e-14 over the needed range.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15, kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double inc_beta_inv(double a, double b, double p) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (inc_beta(a, b, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TailFrequency tail_frequency(const sampler::SampleBatch& batch, int column, double c,
                             double confidence) {
    if (c < 0.0) throw Error("tail threshold must be nonnegative");
    if (column < 0 || column >= batch.m()) throw Error("column index out of range");
    if (confidence <= 0.0 || confidence >= 1.0) throw Error("confidence must be in (0,1)");
    TailFrequency tf;
    tf.n = batch.n_samples();
    for (long s = 0; s < tf.n; ++s)
        if (std::abs(batch.values(s, column)) >= c) ++tf.hits;
    tf.frequency = static_cast<double>(tf.hits) / static_cast<double>(tf.n);
    tf.se = std::sqrt(tf.frequency * (1.0 - tf.frequency) / static_cast<double>(tf.n));
    // Clopper-Pearson via beta quantiles.
    const double alpha = 1.0 - confidence;
    const double k = static_cast<double>(tf.hits), n = static_cast<double>(tf.n);
    tf.ci_low = tf.hits == 0 ? 0.0 : inc_beta_inv(k, n - k + 1.0, alpha / 2.0);
    tf.ci_high = tf.hits == tf.n ? 1.0 : inc_beta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
    return tf;
}

namespace {

double normal_pdf(double x, double sigma) {
    const double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

double normal_cdf(double x, double sigma) { return 0.5 * std::erfc(-x / (sigma * M_SQRT2)); }

}  // namespace

Histogram histogram(const sampler::SampleBatch& batch, int column, int bins,
                    double sigma_model) {
    if (bins < 1) throw Error("histogram needs at least one bin");
    if (column < 0 || column >= batch.m()) throw Error("column index out of range");
    const long n = batch.n_samples();
    if (n == 0) throw Error("histogram of an empty batch");

    double lo = batch.values.col(column).minCoeff();
    double hi = batch.values.col(column).maxCoeff();
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    Histogram h;
    h.n = n;
    h.sigma_model = sigma_model;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b)
        h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / bins;
    h.density.assign(bins, 0.0);
    const double width = (hi - lo) / bins;
    for (long s = 0; s < n; ++s) {
        int b = static_cast<int>((batch.values(s, column) - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        h.density[b] += 1.0;
    }
    for (double& dsty : h.density) dsty /= static_cast<double>(n) * width;
    h.overlay.resize(bins);
    for (int b = 0; b < bins; ++b)
        h.overlay[b] =
            sigma_model > 0.0
                ? normal_pdf(0.5 * (h.edges[b] + h.edges[b + 1]), sigma_model)
                : 0.0;
    return h;
}

Histogram2D histogram2d(const sampler::SampleBatch& batch, int col_x, int col_y,
                        int bins) {
    if (bins < 1) throw Error("histogram needs at least one bin");
    if (col_x < 0 || col_x >= batch.m() || col_y < 0 || col_y >= batch.m())
        throw Error("column index out of range");
    const long n = batch.n_samples();
    if (n == 0) throw Error("histogram of an empty batch");

    auto edges_for = [&](int col) {
        double lo = batch.values.col(col).minCoeff();
        double hi = batch.values.col(col).maxCoeff();
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
        std::vector<double> e(bins + 1);
        for (int b = 0; b <= bins; ++b)
            e[b] = lo + (hi - lo) * static_cast<double>(b) / bins;
        return e;
    };
    Histogram2D h;
    h.n = n;
    h.x_edges = edges_for(col_x);
    h.y_edges = edges_for(col_y);
    h.density = Eigen::MatrixXd::Zero(bins, bins);
    const double wx = h.x_edges[1] - h.x_edges[0];
    const double wy = h.y_edges[1] - h.y_edges[0];
    for (long s = 0; s < n; ++s) {
        int bx = static_cast<int>((batch.values(s, col_x) - h.x_edges[0]) / wx);
        int by = static_cast<int>((batch.values(s, col_y) - h.y_edges[0]) / wy);
        bx = std::clamp(bx, 0, bins - 1);
        by = std::clamp(by, 0, bins - 1);
        h.density(bx, by) += 1.0;
    }
    h.density /= static_cast<double>(n) * wx * wy;
    return h;
}

KsResult ks_test_gaussian(const sampler::SampleBatch& batch, int column, double sigma) {
    if (sigma <= 0.0) throw Error("KS test needs sigma > 0");
    if (column < 0 || column >= batch.m()) throw Error("column index out of range");
    const long n = batch.n_samples();
    if (n == 0) throw Error("KS test of an empty batch");
    std::vector<double> xs(n);
    for (long s = 0; s < n; ++s) xs[s] = batch.values(s, column);
    std::sort(xs.begin(), xs.end());
    KsResult r;
    for (long i = 0; i < n; ++i) {
        const double f = normal_cdf(xs[i], sigma);
        r.statistic = std::max(r.statistic,
                               std::max(f - static_cast<double>(i) / n,
                                        static_cast<double>(i + 1) / n - f));
    }
    // Asymptotic Kolmogorov distribution with the small-sample correction.
    const double rn = std::sqrt(static_cast<double>(n));
    const double lambda = (rn + 0.12 + 0.11 / rn) * r.statistic;
    double q = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
        q += (j % 2 == 1) ? term : -term;
        if (term < 1e-12) break;
    }
    r.p_value = std::clamp(q, 0.0, 1.0);
    return r;
}

RatioEstimate moment_ratio_with_se(const sampler::SampleBatch& batch, int column,
                                   int k, int batches) {
    const long n = batch.n_samples();
    if (n < 4) throw Error("ratio estimate needs at least four samples");
    RatioEstimate est;
    const MomentRatio full = moment_ratio(accumulate_column(batch, column, k), k);
    est.ratio = full.ratio;
    est.reference = full.reference;

    const auto bounds = block_bounds(n, batches);
    const int b = static_cast<int>(bounds.size()) - 1;
    std::vector<double> ratios(b);
    for (int j = 0; j < b; ++j) {
        MomentAccumulator acc(k);
        for (long s = bounds[j]; s < bounds[j + 1]; ++s)
            acc.update(batch.values(s, column));
        ratios[j] = moment_ratio(acc, k).ratio;
    }
    est.se = sd_of(ratios) / std::sqrt(static_cast<double>(b));
    return est;
}

GaussianityVerdict gaussianity_verdict(const sampler::SampleBatch& batch, int column,
                                       int batches) {
    GaussianityVerdict v;
    const RatioEstimate r4 = moment_ratio_with_se(batch, column, 4, batches);
    const RatioEstimate r6 = moment_ratio_with_se(batch, column, 6, batches);
    v.ratio4 = r4.ratio;
    v.se4 = r4.se;
    v.ratio6 = r6.ratio;
    v.se6 = r6.se;
    v.pass = std::abs(v.ratio4 - r4.reference) <= 5.0 * v.se4 &&
             std::abs(v.ratio6 - r6.reference) <= 5.0 * v.se6;
    return v;
}

}  // namespace qgp::stats
