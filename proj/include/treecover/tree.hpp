#pragma once

#include "treecover/tower.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace treecover {

struct NotATree : CoverError {
    using CoverError::CoverError;
};

struct VertexNotInTree : CoverError {
    VertexNotInTree(std::uint32_t color, std::uint32_t vertex)
        : CoverError("vertex " + std::to_string(vertex) + " is not in the color-" +
                     std::to_string(color) + " tree"),
          color(color), vertex(vertex) {}
    std::uint32_t color;
    std::uint32_t vertex;
};

// One cover element, addressed by its level and its index within the level's
// color class. Identical point sets at different levels are distinct vertices.
struct TreeVertex {
    std::size_t level = 0;
    std::uint32_t element = 0;
    auto operator<=>(const TreeVertex&) const = default;
};

// The tree a single color class induces: every element of that color at every
// level is a vertex, and each vertex is joined to the element containing it at
// the first higher level where one exists.
class EmbeddingTree {
  public:
    EmbeddingTree(SpacePtr space, std::uint32_t color, std::vector<TreeVertex> vertices,
                  std::vector<PointSubset> members, std::vector<std::optional<std::uint32_t>> parents);

    std::uint32_t color() const { return color_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    const std::vector<TreeVertex>& vertices() const { return vertices_; }
    const TreeVertex& vertex(std::uint32_t id) const;
    const PointSubset& members(std::uint32_t id) const;
    const std::optional<std::uint32_t>& parent(std::uint32_t id) const;
    std::size_t depth(std::uint32_t id) const;
    std::optional<std::uint32_t> vertex_id(const TreeVertex& v) const;

    // The unique parentless vertex; throws NotATree when there is not exactly one.
    std::uint32_t root() const;

    // (child, parent) pairs, in child id order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

    const SpacePtr& space_ptr() const { return space_; }

  private:
    SpacePtr space_;
    std::uint32_t color_;
    std::vector<TreeVertex> vertices_;
    std::vector<PointSubset> members_;
    std::vector<std::optional<std::uint32_t>> parents_;
    std::vector<std::size_t> depths_;
    std::vector<std::uint32_t> roots_;
};

struct EmbeddingForest {
    SpacePtr space;
    std::vector<EmbeddingTree> trees;
    std::uint32_t num_colors() const { return static_cast<std::uint32_t>(trees.size()); }
};

EmbeddingTree build_tree(const CoverTower& tower, std::uint32_t color);
EmbeddingForest build_forest(const CoverTower& tower);

// Unit-weight path length between two vertices; throws VertexNotInTree for bad
// ids and NotATree when the vertices lie in different components.
std::int64_t tree_distance(const EmbeddingTree& tree, std::uint32_t a, std::uint32_t b);

struct TreeCertificate {
    std::uint32_t color = 0;
    std::size_t num_vertices = 0;
    std::size_t num_edges = 0;
    bool connected = false;
    bool acyclic = false;
    bool unique_root = false;
    std::vector<std::uint32_t> root_ids;
    std::optional<std::uint32_t> unreachable_vertex;
    bool passes() const { return connected && acyclic && unique_root; }
};

struct ForestCertificate {
    bool passes = false;
    std::vector<TreeCertificate> trees;
};

// Re-derives connectivity and acyclicity from the edge lists alone, without
// trusting the parent pointers' semantics.
ForestCertificate validate_forest(const EmbeddingForest& forest);

// degree -> number of vertices with that degree (undirected).
std::map<std::size_t, std::size_t> degree_profile(const EmbeddingTree& tree);

} // namespace treecover
