#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qgp/errors.hpp"
#include "qgp/weingarten.hpp"

using namespace qgp;
using weingarten::Group;

namespace {

InnerProducts two_state_inner(const Rational& g01) {
    InnerProducts ip;
    ip.real_flag = true;
    ip.g = Eigen::MatrixXcd::Identity(2, 2);
    ip.g(0, 1) = ip.g(1, 0) = to_double(g01);
    RationalMatrix e = RationalMatrix::identity(2);
    e(0, 1) = e(1, 0) = g01;
    ip.exact = e;
    return ip;
}

}  // namespace

TEST_CASE("group names round-trip") {
    CHECK(weingarten::to_string(Group::unitary) == "unitary");
    CHECK(weingarten::to_string(Group::orthogonal) == "orthogonal");
    CHECK(weingarten::group_from_string("unitary") == Group::unitary);
    CHECK(weingarten::group_from_string("orthogonal") == Group::orthogonal);
    CHECK_THROWS(weingarten::group_from_string("symplectic"));
}

TEST_CASE("k=1 tables: one basis element, weight 1/d") {
    for (long d : {2L, 3L, 5L, 10L}) {
        for (Group g : {Group::unitary, Group::orthogonal}) {
            const auto t = weingarten::build_table(g, 1, d);
            REQUIRE(t.size() == 1);
            CHECK(t.gram(0, 0) == Rational(d));
            CHECK(t.wg(0, 0) == Rational(1) / Rational(d));
        }
    }
}

TEST_CASE("k=2 unitary table matches the closed form at several d") {
    for (long d : {2L, 3L, 5L, 10L}) {
        const auto t = weingarten::build_table(Group::unitary, 2, d);
        REQUIRE(t.size() == 2);
        const Rational d2 = Rational(d) * Rational(d);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(t.gram(i, j) == (i == j ? d2 : Rational(d)));
        // (1/(d²-1)) · [[1, -1/d], [-1/d, 1]]
        const Rational den = d2 - 1;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(t.wg(i, j) == (i == j ? Rational(Rational(1) / den)
                                            : Rational(Rational(-1) /
                                                       (Rational(d) * den))));
    }
}

TEST_CASE("k=2 orthogonal table matches the closed form at several d") {
    for (long d : {2L, 3L, 5L, 10L}) {
        const auto t = weingarten::build_table(Group::orthogonal, 2, d);
        REQUIRE(t.size() == 3);
        const Rational d2 = Rational(d) * Rational(d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(t.gram(i, j) == (i == j ? d2 : Rational(d)));
        // (1/(d(d+2)(d-1))) · [(d+1) on the diagonal, -1 off it]
        const Rational den = Rational(d) * Rational(d + 2) * Rational(d - 1);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(t.wg(i, j) == (i == j ? Rational(Rational(d + 1) / den)
                                            : Rational(Rational(-1) / den)));
    }
}

TEST_CASE("gram times weingarten is the exact identity at higher orders") {
    CHECK(weingarten::build_table(Group::unitary, 3, 3).gram
              .multiply(weingarten::build_table(Group::unitary, 3, 3).wg)
              .is_identity());
    const auto u5 = weingarten::build_table(Group::unitary, 5, 5);
    CHECK(u5.size() == 120);
    CHECK(u5.gram.multiply(u5.wg).is_identity());
    const auto o4 = weingarten::build_table(Group::orthogonal, 4, 4);
    CHECK(o4.size() == 105);
    CHECK(o4.gram.multiply(o4.wg).is_identity());
}

TEST_CASE("basis operators become dependent below d = k") {
    CHECK_THROWS_AS(weingarten::build_table(Group::unitary, 3, 2),
                    SingularGramError);
    CHECK_THROWS_AS(weingarten::build_table(Group::orthogonal, 3, 2),
                    SingularGramError);
}

TEST_CASE("order caps are enforced") {
    CHECK(weingarten::default_k_max(Group::unitary) == 6);
    CHECK(weingarten::default_k_max(Group::orthogonal) == 4);
    CHECK_THROWS_AS(weingarten::build_table(Group::unitary, 7, 10), CapacityError);
    CHECK_THROWS_AS(weingarten::build_table(Group::orthogonal, 5, 10),
                    CapacityError);
}

TEST_CASE("exact k=2 moments reproduce the covariance closed forms") {
    // E[C_i C_j] from the table contraction must equal the closed-form
    // covariance at every overlap, exactly.
    const std::vector<Rational> overlaps = {
        Rational(0), Rational(1), Rational(1) / Rational(4),
        Rational(4) / Rational(9)};
    for (long d : {2L, 3L, 5L, 10L}) {
        for (Group g : {Group::unitary, Group::orthogonal}) {
            const auto table = weingarten::build_table(g, 2, d);
            for (const auto& w : overlaps) {
                // States with ⟨ψ0|ψ1⟩ = sqrt(w), real.
                Rational g01 = w == Rational(1) / Rational(4)
                                   ? Rational(1) / Rational(2)
                                   : w == Rational(4) / Rational(9)
                                         ? Rational(2) / Rational(3)
                                         : w;
                const auto ip = two_state_inner(g01);
                weingarten::MomentSpec spec{{0, 1}, &ip};
                const Rational overlap = g01 * g01;
                CHECK(weingarten::exact_moment(table, spec) ==
                      weingarten::exact_covariance(overlap, d, g));
            }
        }
    }
}

TEST_CASE("covariance closed forms at the regime endpoints") {
    for (long d : {2L, 3L, 5L, 10L}) {
        CHECK(weingarten::exact_covariance(Rational(1), d, Group::unitary) ==
              Rational(1) / Rational(d + 1));
        CHECK(weingarten::exact_covariance(Rational(0), d, Group::unitary) ==
              Rational(-1) / (Rational(d) * Rational(d) - 1));
        CHECK(weingarten::exact_covariance(Rational(1), d, Group::orthogonal) ==
              Rational(2) / Rational(d + 2));
        CHECK(weingarten::exact_covariance(Rational(0), d, Group::orthogonal) ==
              Rational(-2) / (Rational(d + 2) * Rational(d - 1)));
    }
}

TEST_CASE("odd moments vanish exactly and cross-observable covariance is zero") {
    const auto ip = two_state_inner(Rational(1) / Rational(2));
    for (Group g : {Group::unitary, Group::orthogonal}) {
        for (int k : {1, 3}) {
            weingarten::MomentSpec spec{std::vector<int>(static_cast<size_t>(k), 0),
                                        &ip};
            CHECK(weingarten::exact_moment(g, 8, spec) == Rational(0));
        }
    }
    CHECK(weingarten::cross_observable_covariance() == Rational(0));
}

TEST_CASE("table cache round-trips exactly and survives corruption") {
    const auto dir = std::filesystem::temp_directory_path() / "qgp_cache_test";
    std::filesystem::remove_all(dir);

    const auto fresh =
        weingarten::cached_table(Group::orthogonal, 2, 7, dir.string());
    const auto path = dir / weingarten::table_filename(Group::orthogonal, 2, 7);
    REQUIRE(std::filesystem::exists(path));

    const auto loaded = weingarten::load_table(path.string());
    CHECK(loaded.gram == fresh.gram);
    CHECK(loaded.wg == fresh.wg);
    CHECK(loaded.k == fresh.k);
    CHECK(loaded.d == fresh.d);
    REQUIRE(loaded.brauer_basis.size() == fresh.brauer_basis.size());
    for (size_t i = 0; i < loaded.brauer_basis.size(); ++i)
        CHECK(loaded.brauer_basis[i] == fresh.brauer_basis[i]);

    // A cached hit must reproduce the same table.
    const auto hit = weingarten::cached_table(Group::orthogonal, 2, 7, dir.string());
    CHECK(hit.wg == fresh.wg);

    // Corrupt the file: load_table must reject it, cached_table must rebuild.
    {
        std::ofstream f(path, std::ios::trunc);
        f << "{\"format\": \"weingarten-table\", \"version\": 1}";
    }
    CHECK_THROWS(weingarten::load_table(path.string()));
    const auto rebuilt =
        weingarten::cached_table(Group::orthogonal, 2, 7, dir.string());
    CHECK(rebuilt.wg == fresh.wg);
    CHECK(weingarten::load_table(path.string()).wg == fresh.wg);

    std::filesystem::remove_all(dir);
}

TEST_CASE("empty cache dir means in-memory build") {
    const auto t = weingarten::cached_table(Group::unitary, 2, 4, "");
    CHECK(t.size() == 2);
}
