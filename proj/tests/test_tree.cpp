#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "treecover/fixtures.hpp"
#include "treecover/tree.hpp"

#include <deque>
#include <vector>

using namespace treecover;

namespace {

PointSubset runs(const SpacePtr& space, std::vector<std::pair<std::uint32_t, std::uint32_t>> spans) {
    std::vector<std::uint32_t> members;
    for (auto [lo, hi] : spans)
        for (std::uint32_t p = lo; p <= hi; ++p) members.push_back(p);
    return PointSubset(space.get(), std::move(members));
}

TowerLevel level_of(Rational scale, ColoredCover cover) {
    std::vector<std::uint32_t> identity(cover.num_colors());
    for (std::uint32_t c = 0; c < identity.size(); ++c) identity[c] = c;
    return TowerLevel{std::move(scale), std::move(cover), std::move(identity), 0};
}

// Breadth-first distances over the explicit edge list, as an oracle for the
// ancestor-walk implementation.
std::vector<std::int64_t> bfs_from(const EmbeddingTree& tree, std::uint32_t start) {
    std::vector<std::vector<std::uint32_t>> adjacent(tree.num_vertices());
    for (auto [child, parent] : tree.edges()) {
        adjacent[child].push_back(parent);
        adjacent[parent].push_back(child);
    }
    std::vector<std::int64_t> dist(tree.num_vertices(), -1);
    std::deque<std::uint32_t> queue{start};
    dist[start] = 0;
    while (!queue.empty()) {
        std::uint32_t v = queue.front();
        queue.pop_front();
        for (std::uint32_t w : adjacent[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

void check_against_bfs(const EmbeddingTree& tree) {
    for (std::uint32_t a = 0; a < tree.num_vertices(); ++a) {
        auto oracle = bfs_from(tree, a);
        for (std::uint32_t b = 0; b < tree.num_vertices(); ++b)
            CHECK(tree_distance(tree, a, b) == oracle[b]);
    }
}

// Path 0..8, one color, three levels: two small blocks and one offset block,
// a middle level swallowing the first two, and a top level swallowing all.
CoverTower nested_tower() {
    auto path = make_path(8);
    std::vector<TowerLevel> levels;
    levels.push_back(level_of(
        Rational(1), ColoredCover(path,
                                  {{runs(path, {{0, 1}}), runs(path, {{3, 4}}),
                                    runs(path, {{6, 8}})}},
                                  Rational(1), Rational(8))));
    levels.push_back(level_of(
        Rational(10), ColoredCover(path, {{runs(path, {{0, 5}}), runs(path, {{6, 8}})}},
                                   Rational(1), Rational(8))));
    levels.push_back(level_of(
        Rational(100), ColoredCover(path, {{runs(path, {{0, 8}})}}, Rational(1), Rational(8))));
    return CoverTower(path, GrowthProfile::defaults(), 1, 0, std::move(levels));
}

} // namespace

TEST_CASE("edges go to the first containing level only") {
    CoverTower tower = nested_tower();
    EmbeddingTree tree = build_tree(tower, 0);

    REQUIRE(tree.num_vertices() == 6);
    // Vertices in (level, element) order: three blocks, two middles, one top.
    CHECK(tree.vertex(0) == TreeVertex{0, 0});
    CHECK(tree.vertex(5) == TreeVertex{2, 0});
    CHECK(tree.root() == 5);
    CHECK(tree.edges() == std::vector<std::pair<std::uint32_t, std::uint32_t>>{
                              {0, 3}, {1, 3}, {2, 4}, {3, 5}, {4, 5}});
    // {0,1} is inside the top element too, but the middle level blocks a
    // direct edge.
    CHECK(*tree.parent(0) == 3);
    CHECK(tree.depth(0) == 2);
    CHECK(tree.depth(5) == 0);

    CHECK(tree_distance(tree, 0, 0) == 0);
    CHECK(tree_distance(tree, 0, 3) == 1);
    CHECK(tree_distance(tree, 0, 1) == 2);
    CHECK(tree_distance(tree, 0, 2) == 4); // leaf to leaf through the root
    CHECK(tree_distance(tree, 2, 0) == 4);
    check_against_bfs(tree);

    CHECK_THROWS_AS(tree_distance(tree, 0, 42), VertexNotInTree);
}

TEST_CASE("an element contained nowhere higher becomes a second root") {
    auto path = make_path(8);
    std::vector<TowerLevel> levels;
    levels.push_back(level_of(
        Rational(1),
        ColoredCover(path, {{runs(path, {{0, 1}}), runs(path, {{6, 8}})}}, Rational(1), Rational(8))));
    levels.push_back(level_of(
        Rational(10), ColoredCover(path, {{runs(path, {{0, 5}})}}, Rational(1), Rational(8))));
    CoverTower truncated(path, GrowthProfile::defaults(), 1, 0, std::move(levels));

    EmbeddingTree tree = build_tree(truncated, 0);
    CHECK(tree.num_vertices() == 3);
    CHECK_FALSE(tree.parent(1).has_value()); // {6..8} floats free
    CHECK_THROWS_AS(tree.root(), NotATree);
    CHECK_THROWS_AS(tree_distance(tree, 0, 1), NotATree);

    ForestCertificate cert = validate_forest(EmbeddingForest{path, {tree}});
    CHECK_FALSE(cert.passes);
    CHECK_FALSE(cert.trees[0].connected);
    CHECK_FALSE(cert.trees[0].unique_root);
    CHECK(cert.trees[0].root_ids.size() == 2);
    CHECK(cert.trees[0].acyclic);
    CHECK(cert.trees[0].unreachable_vertex.has_value());
}

TEST_CASE("vertex lists are validated structurally") {
    auto path = make_path(8);
    auto element = [&](std::uint32_t lo, std::uint32_t hi) { return runs(path, {{lo, hi}}); };

    // Parent at the same level.
    CHECK_THROWS_AS(EmbeddingTree(path, 0, {TreeVertex{0, 0}, TreeVertex{0, 1}},
                                  {element(0, 3), element(4, 8)}, {1u, std::nullopt}),
                    NotATree);
    // Parent id out of range.
    CHECK_THROWS_AS(EmbeddingTree(path, 0, {TreeVertex{0, 0}}, {element(0, 8)}, {7u}), NotATree);
    // Vertices out of order.
    CHECK_THROWS_AS(EmbeddingTree(path, 0, {TreeVertex{1, 0}, TreeVertex{0, 0}},
                                  {element(0, 8), element(0, 3)}, {std::nullopt, 0u}),
                    NotATree);
    // Mismatched table sizes.
    CHECK_THROWS_AS(EmbeddingTree(path, 0, {TreeVertex{0, 0}}, {}, {std::nullopt}), NotATree);
}

TEST_CASE("pipeline towers yield valid forests") {
    auto path = make_path(30);
    auto generator = make_generator("interval", path);
    CoverTower tower = build_tower(*generator, GrowthProfile::defaults(), 0);
    EmbeddingForest forest = build_forest(tower);

    REQUIRE(forest.num_colors() == 2);
    ForestCertificate cert = validate_forest(forest);
    CHECK(cert.passes);
    for (const TreeCertificate& tree : cert.trees) {
        CHECK(tree.connected);
        CHECK(tree.acyclic);
        CHECK(tree.unique_root);
        CHECK(tree.num_edges == tree.num_vertices - 1);
    }

    for (const EmbeddingTree& tree : forest.trees) {
        check_against_bfs(tree);

        // Same-color containment always has a short path upward: the hops
        // can only pass through levels between the two endpoints.
        for (std::uint32_t a = 0; a < tree.num_vertices(); ++a)
            for (std::uint32_t b = 0; b < tree.num_vertices(); ++b) {
                if (tree.vertex(a).level >= tree.vertex(b).level) continue;
                if (!tree.members(a).is_subset_of(tree.members(b))) continue;
                CHECK(tree_distance(tree, a, b) <=
                      static_cast<std::int64_t>(tree.vertex(b).level - tree.vertex(a).level));
            }
    }
}

TEST_CASE("grid towers yield valid four-color forests") {
    auto grid = make_grid(5, 2);
    auto generator = make_generator("product", grid);
    CoverTower tower = build_tower(*generator, GrowthProfile::defaults(), 0);
    EmbeddingForest forest = build_forest(tower);
    REQUIRE(forest.num_colors() == 4);
    CHECK(validate_forest(forest).passes);
    for (const EmbeddingTree& tree : forest.trees) check_against_bfs(tree);
}

TEST_CASE("tree distance is a metric") {
    auto path = make_path(30);
    auto generator = make_generator("interval", path);
    EmbeddingForest forest = build_forest(build_tower(*generator, GrowthProfile::defaults(), 0));
    const EmbeddingTree& tree = forest.trees[0];
    const std::uint32_t count = static_cast<std::uint32_t>(tree.num_vertices());
    for (std::uint32_t a = 0; a < count; ++a)
        for (std::uint32_t b = 0; b < count; ++b) {
            std::int64_t ab = tree_distance(tree, a, b);
            CHECK(ab == tree_distance(tree, b, a));
            CHECK((ab == 0) == (a == b));
            for (std::uint32_t c = 0; c < count; c += 7)
                CHECK(ab <= tree_distance(tree, a, c) + tree_distance(tree, c, b));
        }
}

TEST_CASE("degree profiles document local finiteness") {
    auto single = make_singleton();
    EmbeddingForest lone = build_forest(
        build_tower(*make_generator("greedy", single), GrowthProfile::defaults(), 0));
    REQUIRE(lone.trees[0].num_vertices() == 1);
    CHECK(degree_profile(lone.trees[0]) == std::map<std::size_t, std::size_t>{{0, 1}});
    CHECK(validate_forest(lone).passes);

    // A star: five blocks under one top element.
    auto path = make_path(9);
    std::vector<TowerLevel> levels;
    std::vector<PointSubset> blocks;
    for (std::uint32_t b = 0; b < 5; ++b) blocks.push_back(runs(path, {{2 * b, 2 * b + 1}}));
    levels.push_back(level_of(Rational(1), ColoredCover(path, {blocks}, Rational(1), Rational(9))));
    levels.push_back(level_of(
        Rational(10), ColoredCover(path, {{runs(path, {{0, 9}})}}, Rational(1), Rational(9))));
    CoverTower star(path, GrowthProfile::defaults(), 1, 0, std::move(levels));
    EmbeddingTree tree = build_tree(star, 0);
    CHECK(degree_profile(tree) == std::map<std::size_t, std::size_t>{{1, 5}, {5, 1}});

    // Histogram totals agree with a direct count of edge endpoints.
    auto generator = make_generator("interval", make_path(30));
    EmbeddingForest forest = build_forest(build_tower(*generator, GrowthProfile::defaults(), 0));
    for (const EmbeddingTree& t : forest.trees) {
        auto profile = degree_profile(t);
        std::size_t vertices = 0, endpoint_sum = 0;
        for (auto [degree, count] : profile) {
            vertices += count;
            endpoint_sum += degree * count;
        }
        CHECK(vertices == t.num_vertices());
        CHECK(endpoint_sum == 2 * t.edges().size());
    }
}
