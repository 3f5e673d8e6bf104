#include "doctest.h"

#include <cmath>
#include <complex>

#include "dense_oracle.hpp"
#include "qgp/errors.hpp"
#include "qgp/states.hpp"

using namespace qgp;
using weingarten::Group;

TEST_CASE("observable parsing: masks and flags") {
    const auto z = make_observable("Z", Group::unitary);
    CHECK(z.flip_mask == 0);
    CHECK(z.phase_mask == 1);
    CHECK(z.y_count == 0);
    CHECK(z.diagonal_flag);
    CHECK(z.d() == 2);

    // spec[0] owns the most significant bit of the index.
    const auto ziz = make_observable("ZIZ", Group::unitary);
    CHECK(ziz.flip_mask == 0);
    CHECK(ziz.phase_mask == 0b101);
    CHECK(ziz.diagonal_flag);

    const auto xy = make_observable("XY", Group::unitary);
    CHECK(xy.flip_mask == 0b11);
    CHECK(xy.phase_mask == 0b01);
    CHECK(xy.y_count == 1);
    CHECK_FALSE(xy.diagonal_flag);
}

TEST_CASE("observable parsing: rejects") {
    CHECK_THROWS_AS(make_observable("", Group::unitary), Error);
    CHECK_THROWS_AS(make_observable("II", Group::unitary), Error);  // traceful
    CHECK_THROWS_AS(make_observable("ZQ", Group::unitary), Error);
    CHECK_THROWS_AS(make_observable(std::string(63, 'Z'), Group::unitary), Error);
    // Y is complex; the orthogonal group needs real observables.
    CHECK_THROWS_AS(make_observable("XY", Group::orthogonal),
                    RealStatesRequiredError);
    CHECK_NOTHROW(make_observable("XZ", Group::orthogonal));
}

TEST_CASE("pauli expectation matches the dense matrix") {
    rng::Philox prng(21, 0);
    for (const char* spec : {"Z", "X", "ZZ", "XY", "YZ", "ZIZ"}) {
        const auto obs = make_observable(spec, Group::unitary);
        const auto dense = testing::pauli_dense(spec);
        for (int rep = 0; rep < 3; ++rep) {
            const auto phi = testing::random_complex_state(obs.d(), prng);
            const std::complex<double> expect = phi.dot(dense * phi);
            CHECK(std::abs(expect.imag()) < 1e-12);
            CHECK(pauli_expectation(obs, phi) ==
                  doctest::Approx(expect.real()).epsilon(1e-12));
        }
    }
}

TEST_CASE("pauli expectation stays within the spectrum") {
    rng::Philox prng(22, 0);
    const auto obs = make_observable("XZY", Group::unitary);
    for (int rep = 0; rep < 20; ++rep) {
        const auto phi = testing::random_complex_state(obs.d(), prng);
        const double v = pauli_expectation(obs, phi);
        CHECK(std::abs(v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("random states are unit norm and respect the real flag") {
    rng::Philox prng(23, 0);
    const auto c = random_state(16, false, prng);
    CHECK_NOTHROW(c.validate());
    CHECK_FALSE(c.real_flag);
    const auto r = random_state(16, true, prng);
    CHECK_NOTHROW(r.validate());
    CHECK(r.real_flag);
    CHECK(r.amplitudes.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pure state validation catches broken states") {
    PureState s;
    s.amplitudes = Eigen::VectorXcd::Zero(4);
    s.amplitudes(0) = 2.0;  // norm 2
    CHECK_THROWS_AS(s.validate(), Error);
    s.amplitudes(0) = std::complex<double>(0.0, 1.0);
    s.real_flag = true;  // imaginary part present
    CHECK_THROWS_AS(s.validate(), Error);
    s.real_flag = false;
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("dataset kinds: closed-form inner products") {
    DatasetParams dp;
    dp.d = 8;

    SUBCASE("computational basis is exactly orthonormal") {
        dp.m = 4;
        const auto ds = make_dataset(DatasetKind::computational, dp, Group::unitary);
        CHECK(ds.m() == 4);
        CHECK(ds.inner.g.isApprox(Eigen::MatrixXcd::Identity(4, 4)));
        REQUIRE(ds.inner.exact.has_value());
        CHECK(ds.inner.exact->is_identity());
        CHECK_NOTHROW(ds.inner.validate());

        const auto alias =
            make_dataset(DatasetKind::orthonormal_basis, dp, Group::unitary);
        CHECK(alias.inner.g.isApprox(ds.inner.g));
    }

    SUBCASE("pair kinds hit their designed overlaps") {
        const auto ghz = make_dataset(DatasetKind::ghz_pair, dp, Group::unitary);
        CHECK(ghz.m() == 2);
        CHECK(ghz.inner.overlaps()(0, 1) == doctest::Approx(0.5).epsilon(1e-12));

        const auto eps = make_dataset(DatasetKind::epsilon_pair, dp, Group::unitary);
        CHECK(eps.inner.overlaps()(0, 1) ==
              doctest::Approx(1.0 / dp.d).epsilon(1e-12));
    }

    SUBCASE("requesting more basis states than the dimension fails") {
        dp.m = 9;
        CHECK_THROWS_AS(make_dataset(DatasetKind::computational, dp, Group::unitary),
                        Error);
    }
}

TEST_CASE("dataset kinds: random families") {
    DatasetParams dp;
    dp.d = 64;
    dp.m = 6;
    dp.seed = 7;

    SUBCASE("haar states validate and are reproducible") {
        const auto a = make_dataset(DatasetKind::haar_random, dp, Group::unitary);
        const auto b = make_dataset(DatasetKind::haar_random, dp, Group::unitary);
        CHECK_NOTHROW(a.inner.validate());
        for (int i = 0; i < a.m(); ++i)
            CHECK(a.states[static_cast<size_t>(i)].amplitudes ==
                  b.states[static_cast<size_t>(i)].amplitudes);
        // Haar overlaps concentrate near 1/d, far below 1.
        const auto w = a.inner.overlaps();
        double max_off = 0.0;
        for (int i = 0; i < a.m(); ++i)
            for (int j = 0; j < a.m(); ++j)
                if (i != j) max_off = std::max(max_off, w(i, j));
        CHECK(max_off < 0.5);
    }

    SUBCASE("orthogonal group forces real amplitudes") {
        const auto ds = make_dataset(DatasetKind::haar_random, dp, Group::orthogonal);
        CHECK(ds.inner.real_flag);
        for (const auto& s : ds.states)
            CHECK(s.amplitudes.imag().cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("clustered states separate classes") {
        dp.classes = 2;
        dp.spread = 0.05;
        const auto ds = make_dataset(DatasetKind::clustered, dp, Group::unitary);
        const auto w = ds.inner.overlaps();
        // Labels alternate by construction order; recover classes from labels.
        for (int i = 0; i < ds.m(); ++i) {
            for (int j = i + 1; j < ds.m(); ++j) {
                const auto cls = [&](int t) {
                    const auto& lab = ds.labels[static_cast<size_t>(t)];
                    return lab.substr(0, lab.find('_'));
                };
                const bool same_class = cls(i) == cls(j);
                if (same_class)
                    CHECK(w(i, j) > 0.8);
                else
                    CHECK(w(i, j) < 0.2);
            }
        }
    }
}

TEST_CASE("inner product validation catches defects") {
    InnerProducts bad;
    bad.g = Eigen::MatrixXcd::Identity(2, 2);
    bad.g(0, 1) = 0.5;  // not Hermitian (g(1,0) stays 0)
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.g(1, 0) = 0.5;
    CHECK_NOTHROW(bad.validate());
    bad.g(0, 0) = 2.0;  // diagonal must be 1
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("kind names round-trip") {
    for (auto kind : {DatasetKind::computational, DatasetKind::ghz_pair,
                      DatasetKind::epsilon_pair, DatasetKind::orthonormal_basis,
                      DatasetKind::haar_random, DatasetKind::clustered})
        CHECK(dataset_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(dataset_kind_from_string("nonsense"), Error);
}
