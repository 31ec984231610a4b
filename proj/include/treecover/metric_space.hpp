// Finite metric spaces with exact rational distances, plus the set-level
// operations everything downstream is built on: set distance, closed
// neighborhoods and diameters of point subsets.
//
// Distances are interned: the space keeps a sorted pool of distinct values and
// a dense table of ranks into it.  Comparisons against a fixed threshold then
// reduce to integer rank comparisons, which keeps the hot loops (absorption,
// certificates, pair verification) cheap even though every value is an exact
// rational.
#pragma once

#include "treecover/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace treecover {

struct MetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeDistance : MetricError {
    std::size_t p, q;
    NegativeDistance(std::size_t p_, std::size_t q_, const Rational& v)
        : MetricError("negative distance at (" + std::to_string(p_) + "," + std::to_string(q_) +
                      "): " + format_rational(v)),
          p(p_), q(q_) {}
};

struct AsymmetryError : MetricError {
    std::size_t p, q;
    AsymmetryError(std::size_t p_, std::size_t q_)
        : MetricError("asymmetric entries at (" + std::to_string(p_) + "," + std::to_string(q_) + ")"),
          p(p_), q(q_) {}
};

struct ZeroOffDiagonal : MetricError {
    std::size_t p, q;
    ZeroOffDiagonal(std::size_t p_, std::size_t q_)
        : MetricError("distinct points at zero distance: (" + std::to_string(p_) + "," +
                      std::to_string(q_) + ")"),
          p(p_), q(q_) {}
};

struct TriangleViolation : MetricError {
    std::size_t p, q, via;
    TriangleViolation(std::size_t p_, std::size_t q_, std::size_t via_)
        : MetricError("triangle inequality fails: d(" + std::to_string(p_) + "," +
                      std::to_string(q_) + ") > d(.," + std::to_string(via_) + ") + d(" +
                      std::to_string(via_) + ",.)"),
          p(p_), q(q_), via(via_) {}
};

struct DisconnectedGraph : MetricError {
    std::size_t from, to;
    DisconnectedGraph(std::size_t from_, std::size_t to_)
        : MetricError("graph is disconnected: no path from " + std::to_string(from_) + " to " +
                      std::to_string(to_)),
          from(from_), to(to_) {}
};

struct EmptySubset : MetricError {
    EmptySubset() : MetricError("operation requires a nonempty point subset") {}
};

struct SpaceMismatch : MetricError {
    SpaceMismatch() : MetricError("subsets belong to different metric spaces") {}
};

class FiniteMetricSpace;
using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

// How a product space combines factor distances.
enum class ProductMetric { Sup, L1 };

struct ProductStructure {
    SpacePtr left;
    SpacePtr right;
    ProductMetric metric;
};

struct WeightedEdge {
    std::size_t u, v;
    Rational weight;
};

class FiniteMetricSpace {
public:
    // Validates an explicit distance table exhaustively: symmetry, zero
    // diagonal, positivity off the diagonal and the triangle inequality over
    // all point triples.  Throws the specific violation it finds first.
    static SpacePtr validate(const std::vector<std::vector<Rational>>& table,
                             std::vector<std::string> labels = {});

    // Shortest-path metric of a connected graph with positive edge weights.
    // The result always satisfies the metric axioms by construction.
    static SpacePtr from_graph(const std::vector<WeightedEdge>& edges, std::size_t num_vertices,
                               std::vector<std::string> labels = {});

    // Construction from a table already known to be metric (fixtures, product
    // spaces).  Skips the cubic validation pass; callers own the guarantee.
    static SpacePtr from_trusted_table(std::vector<Rational> flat_table, std::size_t n,
                                       std::vector<std::string> labels = {});

    // Trusted construction in interned form: a strictly increasing value pool
    // starting at 0 and a dense n*n rank table.  Lets large fixtures skip
    // building millions of rationals.  Checks only the cheap structural facts
    // (pool sorted, zero diagonal, symmetry, rank range).
    static SpacePtr from_interned(std::vector<Rational> distance_values,
                                  std::vector<std::uint32_t> ranks, std::size_t n,
                                  std::vector<std::string> labels = {});

    std::size_t size() const { return n_; }
    const Rational& dist(std::size_t p, std::size_t q) const { return values_[rank_[p * n_ + q]]; }
    std::uint32_t dist_rank(std::size_t p, std::size_t q) const { return rank_[p * n_ + q]; }

    // Sorted pool of distinct distance values; rank r corresponds to
    // distance_values()[r].
    const std::vector<Rational>& distance_values() const { return values_; }

    // Largest rank whose value is <= bound, or nullopt if every value exceeds
    // it.  d(p,q) <= bound  iff  dist_rank(p,q) <= *rank_of_closed_bound(bound).
    std::optional<std::uint32_t> rank_of_closed_bound(const Rational& bound) const;

    // Smallest rank whose value is >= bound (values_.size() if none).
    // d(p,q) < bound  iff  dist_rank(p,q) < rank_of_open_bound(bound).
    std::uint32_t rank_of_open_bound(const Rational& bound) const;

    const Rational& diameter() const { return values_.back(); }

    const std::vector<std::string>& labels() const { return labels_; }
    bool has_default_labels() const;

    // Integer line coordinates, present on spaces isometric to a subset of the
    // integers (paths and matrix inputs that declare them).
    const std::optional<std::vector<long long>>& line_coordinates() const { return line_coords_; }
    void attach_line_coordinates(std::vector<long long> coords);

    const std::optional<ProductStructure>& product_structure() const { return product_; }
    void attach_product_structure(ProductStructure s) { product_ = std::move(s); }

private:
    FiniteMetricSpace() = default;
    static SpacePtr build(std::vector<Rational> flat, std::size_t n, std::vector<std::string> labels);

    std::size_t n_ = 0;
    std::vector<std::uint32_t> rank_;
    std::vector<Rational> values_;
    std::vector<std::string> labels_;
    std::optional<std::vector<long long>> line_coords_;
    std::optional<ProductStructure> product_;
};

// A subset of the points of one space, kept sorted and duplicate-free.
class PointSubset {
public:
    PointSubset() = default;
    PointSubset(const FiniteMetricSpace* space, std::vector<std::uint32_t> members);

    const FiniteMetricSpace* space() const { return space_; }
    const std::vector<std::uint32_t>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(std::uint32_t point) const;
    bool is_subset_of(const PointSubset& other) const;
    bool operator==(const PointSubset& other) const {
        return space_ == other.space_ && members_ == other.members_;
    }

private:
    const FiniteMetricSpace* space_ = nullptr;
    std::vector<std::uint32_t> members_;
};

// min over pairs; 0 exactly when the subsets intersect.
Rational set_distance(const PointSubset& a, const PointSubset& b);

// Closed neighborhood: every point within distance r of the subset.
PointSubset neighborhood(const PointSubset& v, const Rational& r);

Rational diameter(const PointSubset& v);

// All points within distance radius of a single point.
PointSubset ball(const FiniteMetricSpace& space, std::uint32_t center, const Rational& radius);

} // namespace treecover
