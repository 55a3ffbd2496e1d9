#include <catch2/catch_amalgamated.hpp>

#include <checkers/lattice.hpp>
#include <checkers/mass.hpp>

using namespace checkers;

TEST_CASE("reachability needs matching parity, the light cone, and n != -tau") {
    CHECK(reachable(Site{1, 1}));
    CHECK_FALSE(reachable(Site{-1, 1}));
    CHECK_FALSE(reachable(Site{0, 1}));
    CHECK(reachable(Site{0, 2}));
    CHECK(reachable(Site{2, 2}));
    CHECK_FALSE(reachable(Site{-2, 2}));
    CHECK_FALSE(reachable(Site{1, 2}));
    CHECK_FALSE(reachable(Site{4, 2}));
    CHECK(reachable(Site{-2, 4}));
    CHECK_FALSE(reachable(Site{-4, 4}));
    CHECK_FALSE(reachable(Site{0, 0}));
    CHECK_FALSE(reachable(Site{0, -2}));
}

TEST_CASE("classify splits reachable sites into boundary and interior") {
    CHECK(classify(Site{1, 1}) == SiteClass::cone_boundary);
    CHECK(classify(Site{3, 3}) == SiteClass::cone_boundary);
    CHECK(classify(Site{0, 2}) == SiteClass::interior);
    CHECK(classify(Site{-2, 4}) == SiteClass::interior);
    CHECK(classify(Site{1, 2}) == SiteClass::unreachable);
    CHECK(classify(Site{-3, 3}) == SiteClass::unreachable);
    CHECK(classify(Site{5, 3}) == SiteClass::unreachable);
    CHECK_THROWS_AS(classify(Site{0, 0}), InvalidSiteError);
    CHECK_THROWS_AS(classify(Site{2, -4}), InvalidSiteError);
}

TEST_CASE("rotated coordinates round-trip over every reachable site") {
    for (int tau = 1; tau <= 40; ++tau) {
        for (int n = -tau; n <= tau; ++n) {
            const Site s{n, tau};
            if (!reachable(s)) continue;
            const RotatedSite r = to_rotated(s);
            CHECK(r.lam >= 1);
            CHECK(r.mu_row >= 0);
            CHECK(r.lam + r.mu_row == tau);
            CHECK(from_rotated(r) == s);
        }
    }
}

TEST_CASE("to_rotated rejects unreachable sites") {
    CHECK_THROWS_AS(to_rotated(Site{1, 2}), InvalidSiteError);
    CHECK_THROWS_AS(to_rotated(Site{-2, 2}), InvalidSiteError);
    CHECK_THROWS_AS(to_rotated(Site{0, 0}), InvalidSiteError);
    CHECK_THROWS_AS(to_rotated(Site{7, 3}), InvalidSiteError);
}

TEST_CASE("from_rotated is total on the rotated quarter-lattice") {
    for (int lam = 1; lam <= 20; ++lam) {
        for (int mu = 0; mu <= 20; ++mu) {
            const Site s = from_rotated(RotatedSite{lam, mu});
            CHECK(reachable(s));
            CHECK(to_rotated(s) == RotatedSite{lam, mu});
        }
    }
    CHECK_THROWS_AS(validate_rotated(RotatedSite{0, 0}), InvalidSiteError);
    CHECK_THROWS_AS(validate_rotated(RotatedSite{3, -1}), InvalidSiteError);
}

TEST_CASE("mass text parses to exact rationals unless it looks like a decimal") {
    const MassParam half = parse_mass("1/2");
    REQUIRE(half.is_exact());
    CHECK(half.rational() == Rational{1, 2});
    CHECK(half.value() == 0.5);

    const MassParam three_sevenths = parse_mass("3/7");
    REQUIRE(three_sevenths.is_exact());
    CHECK(three_sevenths.rational() == Rational{3, 7});

    const MassParam two = parse_mass("2");
    REQUIRE(two.is_exact());
    CHECK(two.rational() == 2);
    CHECK(two.m2() == 4);

    const MassParam dec = parse_mass("0.5");
    REQUIRE_FALSE(dec.is_exact());
    CHECK(dec.value() == 0.5);
    CHECK_THROWS_AS(dec.rational(), std::logic_error);

    const MassParam sci = parse_mass("2e-3");
    REQUIRE_FALSE(sci.is_exact());
    CHECK(sci.value() == 2e-3);

    CHECK_THROWS_AS(parse_mass(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_mass("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mass("-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mass("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mass("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mass("1/2/3"), std::invalid_argument);
    CHECK_THROWS_AS(MassParam::floating(-0.25), std::invalid_argument);
}

TEST_CASE("mass renders back to stable text") {
    CHECK(parse_mass("3/7").str() == "3/7");
    CHECK(parse_mass("1").str() == "1");
    CHECK(parse_mass("0.5").str() == "0.5");
}
