#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "treecover/cover.hpp"
#include "treecover/fixtures.hpp"

#include <random>

using namespace treecover;

namespace {

// Element spanning the inclusive index range [lo, hi] of a path space.
PointSubset run(const SpacePtr& space, std::uint32_t lo, std::uint32_t hi) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t p = lo; p <= hi; ++p) members.push_back(p);
    return PointSubset(space.get(), std::move(members));
}

} // namespace

TEST_CASE("check_cover measures instead of trusting") {
    auto path = make_path(9);

    ColoredCover whole(path, {{run(path, 0, 9)}}, Rational(1), Rational(9));
    auto cert = check_cover(whole);
    CHECK(cert.passes());
    CHECK(cert.covers_space);
    CHECK_FALSE(cert.min_gap_per_color[0].has_value()); // single element, gap vacuous
    CHECK(cert.max_element_diameter == Rational(9));

    ColoredCover close_pair(path, {{run(path, 0, 1), run(path, 5, 6)}, {run(path, 0, 9)}},
                            Rational(5), Rational(9));
    cert = check_cover(close_pair);
    CHECK_FALSE(cert.passes());
    REQUIRE(cert.gap_violations.size() == 1);
    CHECK(cert.gap_violations[0].gap == Rational(4));
    CHECK(cert.gap_violations[0].color == 0);
    CHECK(*cert.min_gap_per_color[0] == Rational(4));

    ColoredCover missing(path, {{run(path, 0, 8)}}, Rational(1), Rational(9));
    cert = check_cover(missing);
    CHECK_FALSE(cert.covers_space);
    CHECK(cert.uncovered_points == std::vector<std::uint32_t>{9});

    ColoredCover fat(path, {{run(path, 0, 9)}}, Rational(1), Rational(4));
    cert = check_cover(fat);
    REQUIRE(cert.diameter_violations.size() == 1);
    CHECK(cert.diameter_violations[0].diameter == Rational(9));

    // Externally imposed claims override the embedded ones.
    CHECK_FALSE(check_cover(whole, Rational(1), Rational(5)).passes());
    CHECK(check_cover(fat, Rational(1), Rational(9)).passes());
}

TEST_CASE("cover construction rejects malformed families") {
    auto path = make_path(9);
    CHECK_THROWS_AS(ColoredCover(path, {{PointSubset(path.get(), {})}}, Rational(1), Rational(9)),
                    EmptySubset);
    // Empty colors are fine; they appear at extreme scales.
    ColoredCover lopsided(path, {{run(path, 0, 9)}, {}}, Rational(1), Rational(9));
    CHECK(check_cover(lopsided).passes());
    CHECK_FALSE(lopsided.color(1).size());
}

TEST_CASE("thickening trades scale for a Lebesgue number") {
    auto path = make_path(40);
    ColoredCover cover(path, {{run(path, 0, 9), run(path, 20, 29)}}, Rational(11), Rational(9));

    ColoredCover same = lebesgue_thicken(cover, Rational(0));
    CHECK(same == cover);

    ColoredCover thick = lebesgue_thicken(cover, Rational(2));
    CHECK(thick.scale() == Rational(7));
    CHECK(thick.diameter_bound() == Rational(13));
    REQUIRE(thick.color(0).size() == 2);
    CHECK(thick.color(0)[0] == run(path, 0, 11));
    CHECK(thick.color(0)[1] == run(path, 18, 31));
    CHECK(set_distance(thick.color(0)[0], thick.color(0)[1]) == Rational(7));
}

TEST_CASE("thickening is tight at the boundary gap") {
    auto path = make_path(30);
    // Two elements at distance exactly r + 2k with r = 6, k = 2.
    ColoredCover cover(path, {{run(path, 0, 5), run(path, 15, 20)}}, Rational(10), Rational(5));
    REQUIRE(check_cover(cover, Rational(10), Rational(5)).gap_violations.empty());
    ColoredCover thick = lebesgue_thicken(cover, Rational(2));
    CHECK(set_distance(thick.color(0)[0], thick.color(0)[1]) == Rational(6));
    CHECK(check_cover(thick, Rational(6), Rational(9)).gap_violations.empty());
}

TEST_CASE("thickening refuses input that fails its own certificate") {
    auto path = make_path(9);
    ColoredCover bad(path, {{run(path, 0, 2), run(path, 4, 6)}}, Rational(5), Rational(2));
    CHECK_THROWS_AS(lebesgue_thicken(bad, Rational(1)), PreconditionViolated);
}

TEST_CASE("Lebesgue certificates find uncovered balls") {
    auto path = make_path(9);
    ColoredCover halves(path, {{run(path, 0, 4), run(path, 5, 9)}}, Rational(1), Rational(4));
    CHECK(check_lebesgue(halves, Rational(0)).passes);
    auto cert = check_lebesgue(halves, Rational(1));
    CHECK_FALSE(cert.passes);
    CHECK(cert.failing_points == std::vector<std::uint32_t>{4, 5});

    ColoredCover whole(path, {{run(path, 0, 9)}}, Rational(1), Rational(9));
    for (int k = 0; k <= 9; ++k) CHECK(check_lebesgue(whole, Rational(k)).passes);
}

TEST_CASE("interval cover tiles the line with alternating colors") {
    auto path = make_path(15);
    ColoredCover cover = interval_cover_1d(path, Rational(2));
    REQUIRE(cover.num_colors() == 2);
    REQUIRE(cover.color(0).size() == 2);
    REQUIRE(cover.color(1).size() == 2);
    CHECK(cover.color(0)[0] == run(path, 0, 3));
    CHECK(cover.color(0)[1] == run(path, 8, 11));
    CHECK(cover.color(1)[0] == run(path, 4, 7));
    CHECK(cover.color(1)[1] == run(path, 12, 15));
    CHECK(check_cover(cover, Rational(2), Rational(4)).passes());

    // Scale beyond the span: one block, the other color goes empty.
    ColoredCover wide = interval_cover_1d(path, Rational(100));
    CHECK(check_cover(wide).passes());
    CHECK(wide.color(0).size() == 1);
    CHECK(wide.color(1).empty());
    CHECK(wide.color(0)[0].size() == 16);

    auto unlined = FiniteMetricSpace::validate(
        {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
    CHECK_THROWS_AS(interval_cover_1d(unlined, Rational(1)), MissingCoordinates);
}

TEST_CASE("interval covers keep their declared claims across scales") {
    auto path = make_path(100);
    for (const Rational& r : {Rational(1), Rational(3, 2), Rational(4), Rational(30)}) {
        ColoredCover cover = interval_cover_1d(path, r);
        auto cert = check_cover(cover, r, 2 * r);
        CHECK(cert.passes());
    }
}

TEST_CASE("product covers multiply colors and intersect elements") {
    auto grid = make_grid(3, 2); // 4x4 grid under the sup metric
    REQUIRE(grid->product_structure().has_value());
    auto& factors = *grid->product_structure();
    ColoredCover cx = interval_cover_1d(factors.left, Rational(1));
    ColoredCover cy = interval_cover_1d(factors.right, Rational(1));
    ColoredCover cover = product_cover(cx, cy, grid);
    CHECK(cover.num_colors() == 4);
    CHECK(check_cover(cover, Rational(1), Rational(2)).passes());

    // Pairing with a single-element cover reproduces the other factor.
    auto single = make_singleton();
    ColoredCover cs(single, {{PointSubset(single.get(), {0})}}, Rational(1), Rational(0));
    auto lifted_space = make_product(factors.left, single, ProductMetric::Sup);
    ColoredCover lifted = product_cover(cx, cs, lifted_space);
    CHECK(lifted.num_colors() == 2);
    REQUIRE(lifted.color(0).size() == cx.color(0).size());
    for (std::size_t e = 0; e < cx.color(0).size(); ++e)
        CHECK(lifted.color(0)[e].members() == cx.color(0)[e].members());

    CHECK_THROWS_AS(product_cover(cx, cy, factors.left), CoverError);
}

TEST_CASE("greedy partition merges to a fixed point") {
    auto path = make_path(9);
    ColoredCover singletons = greedy_cover(path, Rational(1));
    CHECK(singletons.num_colors() == 1);
    CHECK(singletons.color(0).size() == 10);

    ColoredCover chain = greedy_cover(path, Rational(2));
    CHECK(chain.color(0).size() == 1);
    CHECK(chain.color(0)[0].size() == 10);

    ColoredCover everything = greedy_cover(path, Rational(1000));
    CHECK(everything.color(0).size() == 1);

    // Two runs separated by a jump of 4: r=3 keeps them apart, r=5 merges.
    auto graph = FiniteMetricSpace::from_graph(
        {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {2, 3, Rational(4)}, {3, 4, Rational(1)}}, 5);
    ColoredCover split = greedy_cover(graph, Rational(3));
    CHECK(split.color(0).size() == 2);
    CHECK(check_cover(split, Rational(3), diameter(split.color(0)[0]) + diameter(split.color(0)[1]))
              .gap_violations.empty());
    ColoredCover merged = greedy_cover(graph, Rational(5));
    CHECK(merged.color(0).size() == 1);
}

TEST_CASE("generators expose their space and declared control") {
    auto path = make_path(20);
    auto interval = make_generator("interval", path);
    CHECK(interval->colors() == 2);
    CHECK(interval->control(Rational(5)) == Rational(10));
    CHECK(check_cover(interval->generate(Rational(3)), Rational(3), Rational(6)).passes());

    auto greedy = make_generator("greedy", path);
    CHECK(greedy->colors() == 1);
    CHECK(check_cover(greedy->generate(Rational(2))).covers_space);

    auto automatic = make_generator("auto", path);
    CHECK(automatic->colors() == 2); // line coordinates present, picks interval

    auto grid = make_grid(3, 2);
    CHECK(make_generator("auto", grid)->colors() == 4);
    CHECK_THROWS(make_generator("product", path));
    CHECK_THROWS(make_generator("no-such", path));
}

TEST_CASE("empirical control tables bound what the generator produced") {
    auto path = make_path(100);
    auto interval = make_generator("interval", path);
    std::vector<Rational> scales = {Rational(1), Rational(2), Rational(5), Rational(10),
                                    Rational(60)};
    auto table = empirical_control_function(*interval, scales);
    REQUIRE(table.size() == scales.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(table[i].first == scales[i]);
        CHECK(table[i].second <= 2 * scales[i]); // measured, never above the declared control
        if (i > 0) CHECK(table[i].second >= table[i - 1].second);
    }

    auto greedy = make_generator("greedy", path);
    auto top = empirical_control_function(*greedy, {Rational(1000)});
    CHECK(top[0].second == Rational(100));

    auto single = make_singleton();
    auto trivial = empirical_control_function(*make_generator("greedy", single), {Rational(2)});
    CHECK(trivial[0].second == Rational(0));
}

TEST_CASE("random interval covers survive thickening") {
    // Property pass over random scales and Lebesgue radii on a fixed line.
    auto path = make_path(500);
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        Rational k(rng() % 12);
        Rational r = Rational(1 + rng() % 40) + Rational(rng() % 3, 3);
        ColoredCover raw = interval_cover_1d(path, r + 2 * k);
        ColoredCover thick = lebesgue_thicken(raw, k);
        CHECK(check_cover(thick, r, 2 * (r + 2 * k) + 2 * k).passes());
        CHECK(check_lebesgue(thick, k).passes);
        CHECK(thick.diameter_bound() - raw.diameter_bound() == 2 * k);
    }
}
