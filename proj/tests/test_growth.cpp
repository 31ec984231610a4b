#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "treecover/growth.hpp"

using namespace treecover;

TEST_CASE("inflated control wraps the declared control") {
    GrowthProfile profile = GrowthProfile::defaults();
    // control(r) = 2r, so f(x) = 2*(3x) + 3x = 9x.
    CHECK(profile.control(Rational(5)) == Rational(10));
    CHECK(profile.inflated_control(Rational(1)) == Rational(9));
    CHECK(profile.inflated_control(Rational(2)) == Rational(18));
    CHECK(profile.inflated_control(Rational(1, 3)) == Rational(3));

    GrowthProfile affine(LinearControl{Rational(1), Rational(4)}, Rational(100), Rational(2));
    // f(x) = (3x + 4) + 3x = 6x + 4.
    CHECK(affine.inflated_control(Rational(2)) == Rational(16));
}

TEST_CASE("level scales under the default constants") {
    GrowthProfile profile = GrowthProfile::defaults();
    CHECK(profile.level_scale(0) == Rational(2));
    CHECK(profile.level_scale(1) == Rational(1800));
    CHECK(profile.level_scale(2) == Rational(1620000));
    // With control 2r the recurrence is level_scale(k) = 900 * level_scale(k-1).
    CHECK(profile.level_scale(3) == Rational(1620000) * 900);
}

TEST_CASE("level scales are non-decreasing and outrun 2k") {
    GrowthProfile profile = GrowthProfile::defaults();
    for (std::size_t k = 1; k <= 10; ++k) {
        CHECK(profile.level_scale(k) >= profile.level_scale(k - 1));
        CHECK(profile.level_scale(k) >= Rational(2) * BigInt(k));
    }
    // A deliberately weak constant still yields a monotone scale sequence.
    GrowthProfile weak(LinearControl{Rational(2), Rational(0)}, Rational(1, 5), Rational(2));
    for (std::size_t k = 1; k <= 10; ++k)
        CHECK(weak.level_scale(k) >= weak.level_scale(k - 1));
}

TEST_CASE("step tables evaluate right-continuously and clamp") {
    StepTableControl table;
    table.steps = {{Rational(1), Rational(3)}, {Rational(4), Rational(7)}, {Rational(10), Rational(7)}};
    GrowthProfile profile(table, Rational(100), Rational(2));
    CHECK(profile.control(Rational(1)) == Rational(3));
    CHECK(profile.control(Rational(3)) == Rational(3));
    CHECK(profile.control(Rational(4)) == Rational(7));
    CHECK(profile.control(Rational(9, 2)) == Rational(7));
    CHECK(profile.control(Rational(1, 2)) == Rational(3));  // below the grid
    CHECK(profile.control(Rational(25)) == Rational(7));    // above the grid
}

TEST_CASE("non-monotone control functions are rejected") {
    StepTableControl decreasing;
    decreasing.steps = {{Rational(1), Rational(5)}, {Rational(2), Rational(3)}};
    CHECK_THROWS_AS(GrowthProfile(decreasing, Rational(100), Rational(2)),
                    NonMonotoneControlFunction);

    CHECK_THROWS_AS(GrowthProfile(LinearControl{Rational(-1), Rational(0)}, Rational(100),
                                  Rational(2)),
                    NonMonotoneControlFunction);
}

TEST_CASE("scales survive deep evaluation") {
    // The tower for a space of diameter 2000 asks for scales this deep; the
    // values grow to thousands of digits and must stay exact.
    GrowthProfile profile = GrowthProfile::defaults();
    const Rational& deep = profile.level_scale(2001);
    CHECK(deep == profile.level_scale(2000) * 900);
    CHECK(deep > 0);
}
