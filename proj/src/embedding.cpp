#include "treecover/embedding.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace treecover {

EmbeddingMap EmbeddingMap::build(const CoverTower& tower) {
    const FiniteMetricSpace& space = tower.space();
    const std::uint32_t num_colors = tower.num_colors();
    const std::size_t n = space.size();
    EmbeddingMap map;
    map.space_ = tower.space_ptr();
    map.num_colors_ = num_colors;
    map.level_.assign(num_colors, std::vector<std::size_t>(n, 0));
    map.element_.assign(num_colors, std::vector<std::uint32_t>(n, 0));

    std::vector<std::uint32_t> claimant(n, 0);
    std::vector<std::size_t> claim_epoch(n, 0);
    std::size_t epoch = 0;
    std::vector<char> assigned(n);
    for (std::uint32_t c = 0; c < num_colors; ++c) {
        std::fill(assigned.begin(), assigned.end(), 0);
        std::size_t remaining = n;
        for (std::size_t l = 0; l < tower.levels().size() && remaining > 0; ++l) {
            ++epoch;
            const auto& elements = tower.level(l).cover.color(c);
            for (std::uint32_t e = 0; e < elements.size(); ++e) {
                for (std::uint32_t x : elements[e].members()) {
                    if (claim_epoch[x] == epoch) throw AmbiguousElement(x, c, l, claimant[x], e);
                    claim_epoch[x] = epoch;
                    claimant[x] = e;
                    if (!assigned[x]) {
                        assigned[x] = 1;
                        map.level_[c][x] = l;
                        map.element_[c][x] = e;
                        --remaining;
                    }
                }
            }
        }
        if (remaining > 0)
            for (std::uint32_t x = 0; x < n; ++x)
                if (!assigned[x]) throw PointNeverCovered(x, c);
    }
    return map;
}

EmbeddingMap EmbeddingMap::from_tables(SpacePtr space, std::vector<std::vector<std::size_t>> levels,
                                       std::vector<std::vector<std::uint32_t>> elements) {
    if (!space) throw CoverError("map needs a space");
    if (levels.size() != elements.size()) throw CoverError("map tables have different color counts");
    for (std::size_t c = 0; c < levels.size(); ++c)
        if (levels[c].size() != space->size() || elements[c].size() != space->size())
            throw CoverError("map table size does not match the space");
    EmbeddingMap map;
    map.space_ = std::move(space);
    map.num_colors_ = static_cast<std::uint32_t>(levels.size());
    map.level_ = std::move(levels);
    map.element_ = std::move(elements);
    return map;
}

std::size_t EmbeddingMap::home_level(std::uint32_t point, std::uint32_t color) const {
    if (color >= num_colors_ || point >= space_->size())
        throw CoverError("map lookup out of range");
    return level_[color][point];
}

std::uint32_t EmbeddingMap::home_element(std::uint32_t point, std::uint32_t color) const {
    if (color >= num_colors_ || point >= space_->size())
        throw CoverError("map lookup out of range");
    return element_[color][point];
}

TreeVertex EmbeddingMap::home_vertex(std::uint32_t point, std::uint32_t color) const {
    return TreeVertex{home_level(point, color), home_element(point, color)};
}

std::int64_t product_distance(const EmbeddingForest& forest, const EmbeddingMap& map,
                              std::uint32_t x, std::uint32_t y) {
    if (forest.num_colors() != map.num_colors())
        throw ColorMismatch("forest and map disagree on the number of colors");
    std::int64_t best = 0;
    for (std::uint32_t c = 0; c < map.num_colors(); ++c) {
        const EmbeddingTree& tree = forest.trees[c];
        auto a = tree.vertex_id(map.home_vertex(x, c));
        auto b = tree.vertex_id(map.home_vertex(y, c));
        if (!a || !b) throw CoverError("map target is not a vertex of its tree");
        best = std::max(best, tree_distance(tree, *a, *b));
    }
    return best;
}

PairSpec PairSpec::automatic(const FiniteMetricSpace& space, std::uint64_t seed) {
    if (space.size() <= 1500) return all_pairs();
    return sample(1'000'000, seed);
}

std::string PairSpec::describe(const FiniteMetricSpace& space) const {
    const std::size_t n = space.size();
    const std::size_t total = n < 2 ? 0 : n * (n - 1) / 2;
    std::ostringstream out;
    if (exhaustive || sample_size * 2 >= total) {
        out << "exhaustive (" << total << " pairs)";
    } else {
        out << "sample of " << sample_size << " pairs, seed " << seed << ", plus the " << n
            << " nearest and " << n << " farthest pairs";
    }
    return out.str();
}

std::vector<std::pair<std::uint32_t, std::uint32_t>>
enumerate_pairs(const FiniteMetricSpace& space, const PairSpec& spec) {
    const std::uint32_t n = static_cast<std::uint32_t>(space.size());
    const std::size_t total = n < 2 ? 0 : static_cast<std::size_t>(n) * (n - 1) / 2;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    if (spec.exhaustive || spec.sample_size * 2 >= total) {
        pairs.reserve(total);
        for (std::uint32_t x = 0; x + 1 < n; ++x)
            for (std::uint32_t y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
        return pairs;
    }

    std::set<std::pair<std::uint32_t, std::uint32_t>> chosen;
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    while (chosen.size() < spec.sample_size) {
        std::uint32_t x = pick(rng), y = pick(rng);
        if (x == y) continue;
        if (x > y) std::swap(x, y);
        chosen.emplace(x, y);
    }

    // Extremes: the n closest and n farthest pairs, found by streaming every
    // pair through two bounded heaps keyed by (rank, x, y).
    using Entry = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;
    std::priority_queue<Entry> nearest;                                      // pop largest
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> farthest; // pop smallest
    for (std::uint32_t x = 0; x + 1 < n; ++x)
        for (std::uint32_t y = x + 1; y < n; ++y) {
            Entry entry{space.dist_rank(x, y), x, y};
            nearest.push(entry);
            if (nearest.size() > n) nearest.pop();
            farthest.push(entry);
            if (farthest.size() > n) farthest.pop();
        }
    while (!nearest.empty()) {
        auto [r, x, y] = nearest.top();
        nearest.pop();
        chosen.emplace(x, y);
    }
    while (!farthest.empty()) {
        auto [r, x, y] = farthest.top();
        farthest.pop();
        chosen.emplace(x, y);
    }
    return {chosen.begin(), chosen.end()};
}

namespace {

// Distances between the tree vertices the map actually uses, for O(1) product
// distances during the pair scan.
struct PairContext {
    std::vector<std::vector<std::int32_t>> table; // [color], |used| x |used|
    std::vector<std::vector<std::uint32_t>> uidx; // [color][point] -> used index
    std::vector<std::size_t> used_count;
    std::int64_t max_product = 0;

    std::int64_t dprod(std::uint32_t x, std::uint32_t y) const {
        std::int64_t best = 0;
        for (std::size_t c = 0; c < table.size(); ++c) {
            std::int64_t d = table[c][uidx[c][x] * used_count[c] + uidx[c][y]];
            best = std::max(best, d);
        }
        return best;
    }
};

PairContext make_context(const EmbeddingMap& map, const EmbeddingForest& forest) {
    if (forest.num_colors() != map.num_colors())
        throw ColorMismatch("forest and map disagree on the number of colors");
    const std::size_t n = map.space_ptr()->size();
    PairContext ctx;
    for (std::uint32_t c = 0; c < map.num_colors(); ++c) {
        const EmbeddingTree& tree = forest.trees[c];
        std::vector<std::uint32_t> target(n);
        for (std::uint32_t x = 0; x < n; ++x) {
            auto id = tree.vertex_id(map.home_vertex(x, c));
            if (!id) throw CoverError("map target is not a vertex of its tree");
            target[x] = *id;
        }
        std::vector<std::uint32_t> used = target;
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
        std::vector<std::uint32_t> uidx(n);
        for (std::uint32_t x = 0; x < n; ++x)
            uidx[x] = static_cast<std::uint32_t>(
                std::lower_bound(used.begin(), used.end(), target[x]) - used.begin());

        const std::size_t v = tree.num_vertices();
        std::vector<std::vector<std::uint32_t>> adjacency(v);
        for (const auto& [child, parent] : tree.edges()) {
            adjacency[child].push_back(parent);
            adjacency[parent].push_back(child);
        }
        std::vector<std::uint32_t> vertex_uidx(v, std::numeric_limits<std::uint32_t>::max());
        for (std::size_t i = 0; i < used.size(); ++i) vertex_uidx[used[i]] = static_cast<std::uint32_t>(i);

        std::vector<std::int32_t> table(used.size() * used.size(), 0);
        std::vector<std::int32_t> dist(v);
        std::vector<std::uint32_t> queue(v);
        for (std::size_t i = 0; i < used.size(); ++i) {
            std::fill(dist.begin(), dist.end(), -1);
            std::size_t head = 0, tail = 0;
            dist[used[i]] = 0;
            queue[tail++] = used[i];
            while (head < tail) {
                std::uint32_t cur = queue[head++];
                for (std::uint32_t nb : adjacency[cur])
                    if (dist[nb] < 0) {
                        dist[nb] = dist[cur] + 1;
                        queue[tail++] = nb;
                    }
            }
            for (std::size_t j = 0; j < used.size(); ++j) {
                if (dist[used[j]] < 0) throw NotATree("tree is not connected");
                table[i * used.size() + j] = dist[used[j]];
                ctx.max_product = std::max<std::int64_t>(ctx.max_product, dist[used[j]]);
            }
        }
        ctx.table.push_back(std::move(table));
        ctx.uidx.push_back(std::move(uidx));
        ctx.used_count.push_back(used.size());
    }
    return ctx;
}

std::int64_t grid_top(const FiniteMetricSpace& space) {
    return to_int64(ceil_rational(space.diameter()));
}

void run_expansive(const FiniteMetricSpace& space, const PairContext& ctx,
                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                   DistortionReport& report) {
    const auto& values = space.distance_values();
    std::vector<std::int64_t> bound_floor(values.size());
    std::vector<std::int64_t> bucket(values.size());
    for (std::size_t r = 0; r < values.size(); ++r) {
        bound_floor[r] = to_int64(floor_rational(2 * values[r] + 4));
        bucket[r] = to_int64(ceil_rational(values[r]));
    }

    const std::int64_t top = grid_top(space);
    std::vector<std::int64_t> max_at_rank(values.size(), -1);
    std::vector<std::int64_t> max_at_bucket(static_cast<std::size_t>(top) + 1, -1);
    for (const auto& [x, y] : pairs) {
        const std::uint32_t r = space.dist_rank(x, y);
        const std::int64_t dp = ctx.dprod(x, y);
        max_at_rank[r] = std::max(max_at_rank[r], dp);
        max_at_bucket[static_cast<std::size_t>(bucket[r])] =
            std::max(max_at_bucket[static_cast<std::size_t>(bucket[r])], dp);
        if (dp > bound_floor[r])
            report.expansive_violations.push_back(
                PairWitness{x, y, values[r], dp, 2 * values[r] + 4});
    }

    report.expansive_margin.reset();
    for (std::size_t r = 0; r < values.size(); ++r) {
        if (max_at_rank[r] < 0) continue;
        Rational margin = Rational(max_at_rank[r]) - (2 * values[r] + 4);
        if (!report.expansive_margin || margin > *report.expansive_margin)
            report.expansive_margin = margin;
    }

    report.empirical_rho.assign(static_cast<std::size_t>(top) + 1, std::nullopt);
    std::optional<std::int64_t> running;
    for (std::size_t t = 0; t <= static_cast<std::size_t>(top); ++t) {
        if (max_at_bucket[t] >= 0) running = std::max(running.value_or(-1), max_at_bucket[t]);
        report.empirical_rho[t] = running;
    }
    report.pairs_checked = pairs.size();
}

void run_proper(const FiniteMetricSpace& space, const PairContext& ctx,
                const GrowthProfile& profile, std::uint32_t num_colors,
                const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                DistortionReport& report) {
    const auto& values = space.distance_values();
    std::vector<std::int64_t> bucket(values.size());
    for (std::size_t r = 0; r < values.size(); ++r)
        bucket[r] = to_int64(floor_rational(values[r]));

    // d_X must stay within 2 f(g(num_colors * max(k, 1))) when the product
    // distance is k; precompute that bound's rank per k.
    std::vector<Rational> bounds(static_cast<std::size_t>(ctx.max_product) + 1);
    std::vector<std::uint32_t> bound_rank(bounds.size());
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const std::size_t index = num_colors * std::max<std::size_t>(k, 1);
        bounds[k] = mul_add_rational(profile.inflated_at(index), 2, 0);
        auto rank = space.rank_of_closed_bound(bounds[k]);
        bound_rank[k] = rank ? *rank : 0;
    }

    const std::int64_t top = grid_top(space);
    std::vector<std::optional<std::int64_t>> min_at_bucket(static_cast<std::size_t>(top) + 1);
    for (const auto& [x, y] : pairs) {
        const std::uint32_t r = space.dist_rank(x, y);
        const std::int64_t dp = ctx.dprod(x, y);
        auto& slot = min_at_bucket[static_cast<std::size_t>(bucket[r])];
        slot = std::min(slot.value_or(dp), dp);
        if (r > bound_rank[static_cast<std::size_t>(dp)])
            report.proper_violations.push_back(
                PairWitness{x, y, values[r], dp, bounds[static_cast<std::size_t>(dp)]});
    }

    report.empirical_delta.assign(static_cast<std::size_t>(top) + 1, std::nullopt);
    std::optional<std::int64_t> running;
    for (std::size_t t = static_cast<std::size_t>(top) + 1; t-- > 0;) {
        if (min_at_bucket[t]) running = std::min(running.value_or(*min_at_bucket[t]), *min_at_bucket[t]);
        report.empirical_delta[t] = running;
    }

    report.envelope_checks.clear();
    report.envelopes_consistent = true;
    for (std::int64_t t = 0; t <= top; ++t) {
        EnvelopeCheck check;
        check.t = t;
        check.analytic_floor = distance_floor(profile, num_colors, Rational(t));
        check.observed_minimum = report.empirical_delta[static_cast<std::size_t>(t)];
        check.ok = !check.observed_minimum || *check.observed_minimum >= check.analytic_floor;
        report.envelopes_consistent = report.envelopes_consistent && check.ok;
        report.envelope_checks.push_back(check);
    }
    report.pairs_checked = pairs.size();
}

} // namespace

void verify_expansive(const EmbeddingMap& map, const EmbeddingForest& forest,
                      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                      DistortionReport& report) {
    run_expansive(*map.space_ptr(), make_context(map, forest), pairs, report);
}

void verify_proper(const EmbeddingMap& map, const EmbeddingForest& forest,
                   const GrowthProfile& profile,
                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                   DistortionReport& report) {
    run_proper(*map.space_ptr(), make_context(map, forest), profile, map.num_colors(), pairs,
               report);
}

DistortionReport verify_embedding(const EmbeddingMap& map, const EmbeddingForest& forest,
                                  const GrowthProfile& profile, const PairSpec& spec) {
    const FiniteMetricSpace& space = *map.space_ptr();
    auto pairs = enumerate_pairs(space, spec);
    PairContext ctx = make_context(map, forest);
    DistortionReport report;
    report.pair_descriptor = spec.describe(space);
    run_expansive(space, ctx, pairs, report);
    run_proper(space, ctx, profile, map.num_colors(), pairs, report);
    return report;
}

std::vector<std::int64_t> product_distances(
    const EmbeddingMap& map, const EmbeddingForest& forest,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
    PairContext ctx = make_context(map, forest);
    std::vector<std::int64_t> out;
    out.reserve(pairs.size());
    for (const auto& [x, y] : pairs) out.push_back(ctx.dprod(x, y));
    return out;
}

std::int64_t distance_floor(const GrowthProfile& profile, std::uint32_t num_colors,
                            const Rational& t) {
    // The scale sequence is non-decreasing, and once two consecutive entries
    // are equal it is constant forever (the inflated control is strictly
    // increasing, so a strict step propagates).  A non-growing bound below t
    // therefore means no level ever reaches t.
    std::int64_t k = 0;
    Rational bound = mul_add_rational(profile.inflated_at(0), 2, 0);
    while (t > bound) {
        ++k;
        Rational next = mul_add_rational(
            profile.inflated_at(static_cast<std::size_t>(k) * num_colors), 2, 0);
        if (next == bound)
            throw CoverError("no level reaches distance " + format_rational(t) +
                             ": the level scales have stopped growing");
        bound = std::move(next);
    }
    return k;
}

std::vector<TreeVertex> nesting_chain(const CoverTower& tower, std::uint32_t point,
                                      std::uint32_t color) {
    if (color >= tower.num_colors()) throw CoverError("color out of range");
    if (point >= tower.space().size()) throw CoverError("point out of range");
    std::vector<TreeVertex> chain;
    for (std::size_t l = 0; l < tower.levels().size(); ++l) {
        const auto& elements = tower.level(l).cover.color(color);
        for (std::uint32_t e = 0; e < elements.size(); ++e)
            if (elements[e].contains(point)) {
                chain.push_back(TreeVertex{l, e});
                break;
            }
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const PointSubset& lower = tower.level(chain[i].level).cover.color(color)[chain[i].element];
        const PointSubset& upper =
            tower.level(chain[i + 1].level).cover.color(color)[chain[i + 1].element];
        if (!lower.is_subset_of(upper)) throw NestingViolation(point, color, chain[i], chain[i + 1]);
    }
    return chain;
}

bool map_matches_tower(const EmbeddingMap& map, const CoverTower& tower) {
    if (map.space_ptr()->size() != tower.space().size()) return false;
    if (map.num_colors() != tower.num_colors()) return false;
    EmbeddingMap rebuilt = EmbeddingMap::build(tower);
    for (std::uint32_t c = 0; c < map.num_colors(); ++c)
        for (std::uint32_t x = 0; x < tower.space().size(); ++x)
            if (map.home_level(x, c) != rebuilt.home_level(x, c) ||
                map.home_element(x, c) != rebuilt.home_element(x, c))
                return false;
    return true;
}

} // namespace treecover
