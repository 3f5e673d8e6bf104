#include "doctest.h"

#include <set>

#include "dense_oracle.hpp"
#include "qgp/brauer.hpp"
#include "qgp/errors.hpp"

using namespace qgp;
using brauer::PairPartition;

TEST_CASE("identity diagram and permutation embedding") {
    const auto id = brauer::identity_diagram(3);
    CHECK(brauer::is_valid(id));
    CHECK(brauer::is_permutation_diagram(id));
    CHECK(brauer::to_permutation(id).is_identity());

    for (const auto& p : perm::enumerate_group(3)) {
        const auto s = brauer::from_permutation(p);
        CHECK(brauer::is_valid(s));
        CHECK(brauer::is_permutation_diagram(s));
        CHECK(brauer::to_permutation(s) == p);
        // The embedded diagram's dense operator is the permutation operator.
        const auto dense_s = testing::brauer_operator(s, 2);
        const auto dense_p = testing::perm_operator(p, 2);
        CHECK((dense_s - dense_p).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("enumeration size is (2k-1)!! with no duplicates") {
    CHECK(brauer::enumerate_brauer(1).size() == 1);
    CHECK(brauer::enumerate_brauer(2).size() == 3);
    CHECK(brauer::enumerate_brauer(3).size() == 15);
    CHECK(brauer::enumerate_brauer(4).size() == 105);
    std::set<std::vector<int>> seen;
    for (const auto& s : brauer::enumerate_brauer(4)) {
        CHECK(brauer::is_valid(s));
        seen.insert(s.partner);
    }
    CHECK(seen.size() == 105);
    CHECK_THROWS_AS(brauer::enumerate_brauer(7), CapacityError);
}

TEST_CASE("transpose is a dense transpose and an involution") {
    for (long d : {2L, 3L})
        for (const auto& s : brauer::enumerate_brauer(2)) {
            CHECK(brauer::transpose(brauer::transpose(s)) == s);
            const auto lhs = testing::brauer_operator(brauer::transpose(s), d);
            const Eigen::MatrixXd rhs = testing::brauer_operator(s, d).transpose();
            CHECK((lhs - rhs).norm() == doctest::Approx(0.0));
        }
    for (const auto& s : brauer::enumerate_brauer(3)) {
        const auto lhs = testing::brauer_operator(brauer::transpose(s), 2);
        const Eigen::MatrixXd rhs = testing::brauer_operator(s, 2).transpose();
        CHECK((lhs - rhs).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("composition matches F(a)F(b) = d^loops F(ab) densely") {
    for (long d : {2L, 3L}) {
        for (int k = 1; k <= 2; ++k) {
            const auto all = brauer::enumerate_brauer(k);
            for (const auto& a : all)
                for (const auto& b : all) {
                    const auto [ab, loops] = brauer::brauer_compose(a, b);
                    const Eigen::MatrixXd lhs =
                        testing::brauer_operator(a, d) * testing::brauer_operator(b, d);
                    const Eigen::MatrixXd rhs =
                        std::pow(static_cast<double>(d), loops) *
                        testing::brauer_operator(ab, d);
                    CHECK((lhs - rhs).norm() == doctest::Approx(0.0).epsilon(1e-10));
                }
        }
    }
    // Spot-check k = 3 on a subsample to keep the dense products cheap.
    const auto all3 = brauer::enumerate_brauer(3);
    for (size_t i = 0; i < all3.size(); i += 3)
        for (size_t j = 0; j < all3.size(); j += 4) {
            const auto [ab, loops] = brauer::brauer_compose(all3[i], all3[j]);
            const Eigen::MatrixXd lhs = testing::brauer_operator(all3[i], 2) *
                                        testing::brauer_operator(all3[j], 2);
            const Eigen::MatrixXd rhs =
                std::pow(2.0, loops) * testing::brauer_operator(ab, 2);
            CHECK((lhs - rhs).norm() == doctest::Approx(0.0).epsilon(1e-10));
        }
}

TEST_CASE("character equals the dense trace") {
    for (long d : {2L, 3L})
        for (int k = 1; k <= 3; ++k)
            for (const auto& s : brauer::enumerate_brauer(k))
                CHECK(to_double(brauer::character(s, d)) ==
                      doctest::Approx(testing::brauer_operator(s, d).trace())
                          .epsilon(1e-12));
}

TEST_CASE("the cup-cap diagram reproduces the k=2 golden trace") {
    // Pairs {bottom 0, bottom 1} and {top 0, top 1}: Tr[F(Π)F(Π)] = d·d.
    PairPartition pi;
    pi.partner = {1, 0, 3, 2};
    REQUIRE(brauer::is_valid(pi));
    for (long d : {2L, 3L, 5L}) {
        const auto [comp, loops] = brauer::brauer_compose(pi, pi);
        const double trace =
            std::pow(static_cast<double>(d), loops) *
            to_double(brauer::character(comp, d));
        CHECK(trace == doctest::Approx(static_cast<double>(d * d)));
    }
}

TEST_CASE("observable kernel matches the dense trace at even dimensions") {
    for (const std::string spec : {"Z", "X"}) {
        const auto o = testing::pauli_dense(spec);
        const long d = o.rows();
        for (int k = 1; k <= 3; ++k) {
            const auto ok = testing::kron_power(o, k);
            for (const auto& s : brauer::enumerate_brauer(k)) {
                const double expect =
                    (testing::brauer_operator(s, d).cast<std::complex<double>>() * ok)
                        .trace()
                        .real();
                CHECK(to_double(brauer::trace_obs_power(s, d)) ==
                      doctest::Approx(expect).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("state kernel matches the dense trace on random real states") {
    rng::Philox prng(77, 0);
    for (long d : {2L, 3L}) {
        std::vector<Eigen::VectorXcd> states;
        for (int i = 0; i < 3; ++i)
            states.push_back(testing::random_real_state(d, prng));
        const auto g = testing::gram_of(states);
        const Eigen::MatrixXd g_real = g.real();

        for (int k = 1; k <= 3; ++k) {
            std::vector<int> assignment(static_cast<size_t>(k));
            for (int t = 0; t < k; ++t) assignment[static_cast<size_t>(t)] = t % 3;
            const auto lambda = testing::lambda_operator(states, assignment);
            for (const auto& s : brauer::enumerate_brauer(k)) {
                const double expect =
                    (lambda *
                     testing::brauer_operator(s, d).cast<std::complex<double>>())
                        .trace()
                        .real();
                CHECK(brauer::trace_state_product_brauer(s, g_real, assignment) ==
                      doctest::Approx(expect).epsilon(1e-10));
            }
        }
    }
}
