#include "doctest.h"

#include <cmath>

#include "qgp/errors.hpp"
#include "qgp/inference.hpp"
#include "qgp/sampler.hpp"
#include "qgp/stats.hpp"

using namespace qgp;
using inference::KernelMode;
using weingarten::Group;

namespace {

// GP over m states with constant pairwise overlap w, unit self-overlap.
inference::GPModel uniform_model(int m, double w, long d, Group g, double noise,
                                 KernelMode mode = KernelMode::asymptotic) {
    inference::GPModel gp;
    gp.covariance.entries.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            gp.covariance.entries(i, j) =
                inference::fidelity_kernel(i == j ? 1.0 : w, d, g, mode);
    gp.noise_variance = noise;
    gp.kernel_fn = [mode](double overlap, long dd, Group gg) {
        return inference::fidelity_kernel(overlap, dd, gg, mode);
    };
    return gp;
}

}  // namespace

TEST_CASE("fidelity kernel values") {
    CHECK(inference::fidelity_kernel(1.0, 64, Group::unitary) ==
          doctest::Approx(1.0 / 64).epsilon(1e-14));
    CHECK(inference::fidelity_kernel(0.0, 64, Group::unitary) == 0.0);
    CHECK(inference::fidelity_kernel(1.0, 64, Group::orthogonal) ==
          doctest::Approx(2.0 / 64).epsilon(1e-14));
    // Exact mode substitutes the finite-d closed forms.
    CHECK(inference::fidelity_kernel(1.0, 64, Group::unitary, KernelMode::exact) ==
          doctest::Approx(1.0 / 65).epsilon(1e-14));
    CHECK(inference::fidelity_kernel(0.0, 64, Group::unitary, KernelMode::exact) ==
          doctest::Approx(-1.0 / (64.0 * 64 - 1)).epsilon(1e-14));
    CHECK(inference::fidelity_kernel(1.0, 64, Group::orthogonal, KernelMode::exact) ==
          doctest::Approx(2.0 / 66).epsilon(1e-14));
    CHECK_THROWS_AS(inference::fidelity_kernel(1.5, 64, Group::unitary), Error);
    CHECK_THROWS_AS(inference::fidelity_kernel(-0.1, 64, Group::unitary), Error);
}

TEST_CASE("empty observation set returns the prior") {
    auto gp = uniform_model(0, 0.0, 64, Group::unitary, 0.01);
    const double prior = inference::fidelity_kernel(1.0, 64, Group::unitary);
    const auto post =
        inference::predictive(gp, Eigen::VectorXd(), Eigen::VectorXd(), prior);
    CHECK(post.mean == 0.0);
    CHECK(post.variance == prior);
    CHECK(post.prior_variance == prior);
}

TEST_CASE("noiseless posterior interpolates the training data") {
    // Query one of the training states: cross covariance = kernel row, so the
    // posterior mean must reproduce the observation and kill the variance.
    const long d = 32;
    auto gp = uniform_model(3, 0.5, d, Group::unitary, 0.0, KernelMode::exact);
    Eigen::VectorXd y(3);
    y << 0.08, -0.03, 0.05;
    const Eigen::VectorXd cross = gp.covariance.entries.row(0).transpose();
    const double prior = gp.covariance.entries(0, 0);
    const auto post = inference::predictive(gp, y, cross, prior);
    CHECK(post.mean == doctest::Approx(y(0)).epsilon(1e-8));
    CHECK(post.variance == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(post.variance <= post.prior_variance + 1e-12);
}

TEST_CASE("posterior variance never exceeds the prior") {
    const long d = 128;
    for (double noise : {0.0, 1e-4, 0.1}) {
        auto gp = uniform_model(4, 0.25, d, Group::unitary, noise, KernelMode::exact);
        Eigen::VectorXd y(4);
        y << 0.1, 0.0, -0.1, 0.05;
        Eigen::VectorXd cross(4);
        cross << 1e-3, 2e-3, -1e-3, 5e-4;
        const double prior = inference::fidelity_kernel(1.0, d, Group::unitary);
        const auto post = inference::predictive(gp, y, cross, prior);
        CHECK(post.variance <= post.prior_variance + 1e-12);
        CHECK(std::isfinite(post.mean));
    }
}

TEST_CASE("singular noiseless kernels: pseudo-inverse or refusal") {
    // Duplicated training state makes the kernel rank deficient.
    const long d = 16;
    inference::GPModel gp;
    gp.covariance.entries.resize(2, 2);
    const double v = inference::fidelity_kernel(1.0, d, Group::unitary);
    gp.covariance.entries << v, v, v, v;
    gp.noise_variance = 0.0;
    Eigen::VectorXd y(2);
    y << 0.05, 0.05;  // consistent duplicated observations
    Eigen::VectorXd cross(2);
    cross << v, v;
    const auto post = inference::predictive(gp, y, cross, v, true);
    CHECK(post.mean == doctest::Approx(0.05).epsilon(1e-8));
    CHECK_THROWS_AS(inference::predictive(gp, y, cross, v, false),
                    SingularGramError);
}

TEST_CASE("large-d posterior is pinned to the prior") {
    // d = 2^18, four nearly orthogonal training states, 100-shot noise: both
    // displacement bounds are tiny, and the posterior obeys them.
    const long d = 1L << 18;
    const int m = 4;
    const double noise = 1.0 / 100;
    auto gp = uniform_model(m, 0.5, d, Group::unitary, noise, KernelMode::exact);
    Eigen::VectorXd y(m);
    y << 1.0, -1.0, 1.0, -1.0;
    Eigen::VectorXd cross(m);
    cross.setConstant(inference::fidelity_kernel(0.5, d, Group::unitary,
                                                 KernelMode::exact));
    const double prior = inference::fidelity_kernel(1.0, d, Group::unitary,
                                                    KernelMode::exact);
    const auto rep = inference::triviality_report(gp, y, cross, prior, d);

    CHECK(rep.shots == doctest::Approx(100.0));
    CHECK(rep.mean_shift <= rep.mean_shift_bound * (1 + 1e-9));
    CHECK(rep.variance_reduction <= rep.variance_reduction_bound * (1 + 1e-9));
    CHECK(rep.mean_shift_bound <= 1e-3);
    CHECK(rep.variance_reduction_bound <= 1e-6);
    CHECK(rep.regime_ok);  // 100 shots and 4 states vs log2(d)^3 = 5832
    CHECK(rep.relative_variance_reduction ==
          doctest::Approx(rep.variance_reduction / rep.posterior.prior_variance)
              .epsilon(1e-12));
}

TEST_CASE("regime flag trips when shots or states scale with d") {
    const long d = 1024;
    const int m = 4;
    auto gp = uniform_model(m, 0.5, d, Group::unitary, 1.0 / static_cast<double>(d));
    Eigen::VectorXd y = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd cross = Eigen::VectorXd::Constant(m, 0.5 / d);
    const double prior = 1.0 / d;
    // N = d shots: outside the polylog regime.
    const auto rep = inference::triviality_report(gp, y, cross, prior, d);
    CHECK_FALSE(rep.regime_ok);

    // Polylog shot count at the same d passes: log2(d)^3 = 1000.
    gp.noise_variance = 1.0 / 1000;
    CHECK(inference::triviality_report(gp, y, cross, prior, d).regime_ok);

    // Noiseless observations have unbounded effective shots.
    gp.noise_variance = 0.0;
    const auto noiseless = inference::triviality_report(gp, y, cross, prior, d);
    CHECK_FALSE(noiseless.regime_ok);
    CHECK(std::isinf(noiseless.shots));
}

TEST_CASE("loss moments: closed forms") {
    const long d = 64;
    const double y = 0.3;
    SUBCASE("first moment is exact for both groups") {
        CHECK(inference::loss_moments(y, 1, d, Group::unitary) ==
              doctest::Approx(y * y + 1.0 / d).epsilon(1e-14));
        CHECK(inference::loss_moments(y, 1, d, Group::orthogonal) ==
              doctest::Approx(y * y + 2.0 / d).epsilon(1e-14));
    }
    SUBCASE("second moment expands the binomial over Gaussian powers") {
        const double s2 = 1.0 / d;
        const double expected = std::pow(y, 4) + 6.0 * y * y * s2 + 3.0 * s2 * s2;
        CHECK(inference::loss_moments(y, 2, d, Group::unitary) ==
              doctest::Approx(expected).epsilon(1e-13));
    }
    SUBCASE("y = 0 reduces to pure Gaussian even moments") {
        CHECK(inference::loss_moments(0.0, 2, d, Group::unitary) ==
              doctest::Approx(3.0 / (static_cast<double>(d) * d)).epsilon(1e-13));
        CHECK(inference::loss_moments(0.0, 3, d, Group::unitary) ==
              doctest::Approx(15.0 / std::pow(static_cast<double>(d), 3))
                  .epsilon(1e-12));
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(inference::loss_moments(0.0, 0, d, Group::unitary), Error);
        CHECK_THROWS_AS(inference::loss_moments(0.0, 1, 1, Group::unitary), Error);
    }
}

TEST_CASE("loss first moment matches Monte Carlo") {
    const long d = 64;
    const double y = 0.5;
    DatasetParams dp;
    dp.d = d;
    dp.m = 1;
    const auto ds = make_dataset(DatasetKind::computational, dp, Group::unitary);
    const auto obs = make_observable("ZIIIII", Group::unitary);
    sampler::SampleOptions so;
    so.n_samples = 100000;
    so.seed = 61;
    const auto batch = sampler::sample_outputs(ds, obs, Group::unitary, so);
    stats::MomentAccumulator acc(2);
    for (long s = 0; s < batch.n_samples(); ++s) {
        const double c = batch.values(s, 0);
        acc.update((c - y) * (c - y));
    }
    // Gaussian-model prediction vs the empirical mean, 4 SE window. The model
    // itself is only O(1/d) accurate, so fold that into the tolerance.
    const double predicted = inference::loss_moments(y, 1, d, Group::unitary);
    const double se = std::sqrt(acc.variance() / static_cast<double>(acc.count()));
    CHECK(std::abs(acc.mean() - predicted) < 4 * se + 4.0 / (d * d));
}

TEST_CASE("squared output law") {
    const auto g = inference::squared_output_distribution(64, Group::unitary);
    CHECK(g.shape == 0.5);
    CHECK(g.scale == doctest::Approx(2.0 / 64).epsilon(1e-14));
    CHECK(g.shape * g.scale == doctest::Approx(1.0 / 64).epsilon(1e-14));
    const auto go = inference::squared_output_distribution(64, Group::orthogonal);
    CHECK(go.scale == doctest::Approx(4.0 / 64).epsilon(1e-14));
}
