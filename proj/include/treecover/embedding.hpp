#pragma once

#include "treecover/tree.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace treecover {

struct PointNeverCovered : CoverError {
    PointNeverCovered(std::uint32_t point, std::uint32_t color)
        : CoverError("point " + std::to_string(point) + " is never covered by color " +
                     std::to_string(color)),
          point(point), color(color) {}
    std::uint32_t point;
    std::uint32_t color;
};

struct AmbiguousElement : CoverError {
    AmbiguousElement(std::uint32_t point, std::uint32_t color, std::size_t level,
                     std::uint32_t element_a, std::uint32_t element_b)
        : CoverError("point " + std::to_string(point) + " lies in elements " +
                     std::to_string(element_a) + " and " + std::to_string(element_b) +
                     " of color " + std::to_string(color) + " at level " + std::to_string(level)),
          point(point), color(color), level(level), element_a(element_a), element_b(element_b) {}
    std::uint32_t point;
    std::uint32_t color;
    std::size_t level;
    std::uint32_t element_a;
    std::uint32_t element_b;
};

struct ColorMismatch : CoverError {
    using CoverError::CoverError;
};

struct NestingViolation : CoverError {
    NestingViolation(std::uint32_t point, std::uint32_t color, TreeVertex lower, TreeVertex upper)
        : CoverError("chain for point " + std::to_string(point) + ", color " +
                     std::to_string(color) + " breaks between level " +
                     std::to_string(lower.level) + " and level " + std::to_string(upper.level)),
          point(point), color(color), lower(lower), upper(upper) {}
    std::uint32_t point;
    std::uint32_t color;
    TreeVertex lower;
    TreeVertex upper;
};

// For each point and color: the lowest level whose cover of that color
// contains the point, and the element realizing it.
class EmbeddingMap {
  public:
    static EmbeddingMap build(const CoverTower& tower);

    std::size_t home_level(std::uint32_t point, std::uint32_t color) const;
    std::uint32_t home_element(std::uint32_t point, std::uint32_t color) const;
    TreeVertex home_vertex(std::uint32_t point, std::uint32_t color) const;

    std::uint32_t num_colors() const { return num_colors_; }
    const SpacePtr& space_ptr() const { return space_; }
    bool operator==(const EmbeddingMap&) const = default;

    // Deserialization path; build() is the normal constructor.
    static EmbeddingMap from_tables(SpacePtr space, std::vector<std::vector<std::size_t>> levels,
                                    std::vector<std::vector<std::uint32_t>> elements);

  private:
    EmbeddingMap() = default;
    SpacePtr space_;
    std::uint32_t num_colors_ = 0;
    std::vector<std::vector<std::size_t>> level_;     // [color][point]
    std::vector<std::vector<std::uint32_t>> element_; // [color][point]
};

// Sup metric on the product of the color trees.
std::int64_t product_distance(const EmbeddingForest& forest, const EmbeddingMap& map,
                              std::uint32_t x, std::uint32_t y);

// Which point pairs a verification pass examines.
struct PairSpec {
    bool exhaustive = true;
    std::size_t sample_size = 0;
    std::uint64_t seed = 0;

    static PairSpec all_pairs() { return PairSpec{true, 0, 0}; }
    static PairSpec sample(std::size_t size, std::uint64_t seed) {
        return PairSpec{false, size, seed};
    }
    // Exhaustive up to 1500 points, sampled above.
    static PairSpec automatic(const FiniteMetricSpace& space, std::uint64_t seed = 0);

    std::string describe(const FiniteMetricSpace& space) const;
};

// Distinct unordered pairs (x < y), lexicographically sorted. Sampled specs
// add the nearest and farthest |X| pairs so both verification regimes see
// their extremes.
std::vector<std::pair<std::uint32_t, std::uint32_t>> enumerate_pairs(const FiniteMetricSpace& space,
                                                                     const PairSpec& spec);

struct PairWitness {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    Rational metric_distance;
    std::int64_t product_dist = 0;
    Rational bound;
};

struct EnvelopeCheck {
    std::int64_t t = 0;
    std::int64_t analytic_floor = 0;               // h(t)
    std::optional<std::int64_t> observed_minimum;  // empirical_delta(t)
    bool ok = true;
};

struct DistortionReport {
    std::size_t pairs_checked = 0;
    std::string pair_descriptor;

    std::optional<Rational> expansive_margin; // max of d_prod - (2 d_X + 4)
    std::vector<PairWitness> expansive_violations;
    std::vector<PairWitness> proper_violations;

    // Indexed by integer t: rho[t] = max d_prod over pairs with d_X <= t,
    // delta[t] = min d_prod over pairs with d_X >= t; empty where no pair lands.
    std::vector<std::optional<std::int64_t>> empirical_rho;
    std::vector<std::optional<std::int64_t>> empirical_delta;
    std::vector<EnvelopeCheck> envelope_checks;
    bool envelopes_consistent = true;

    bool passes_expansive() const {
        return expansive_violations.empty() &&
               (!expansive_margin || *expansive_margin <= 0);
    }
    bool passes_proper() const { return proper_violations.empty() && envelopes_consistent; }
    bool passes() const { return passes_expansive() && passes_proper(); }
};

void verify_expansive(const EmbeddingMap& map, const EmbeddingForest& forest,
                      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                      DistortionReport& report);

void verify_proper(const EmbeddingMap& map, const EmbeddingForest& forest,
                   const GrowthProfile& profile,
                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                   DistortionReport& report);

// Runs both checks over one pair enumeration.
DistortionReport verify_embedding(const EmbeddingMap& map, const EmbeddingForest& forest,
                                  const GrowthProfile& profile, const PairSpec& spec);

// Product distance for every listed pair, in order.
std::vector<std::int64_t> product_distances(const EmbeddingMap& map, const EmbeddingForest& forest,
                                            const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs);

// Smallest k with t <= 2 f(g(num_colors * k)).
std::int64_t distance_floor(const GrowthProfile& profile, std::uint32_t num_colors,
                            const Rational& t);

// The elements of one color containing a point, ordered by level; throws
// NestingViolation if consecutive elements fail to nest.
std::vector<TreeVertex> nesting_chain(const CoverTower& tower, std::uint32_t point,
                                      std::uint32_t color);

// True when rebuilding the map from the tower reproduces it exactly.
bool map_matches_tower(const EmbeddingMap& map, const CoverTower& tower);

} // namespace treecover
