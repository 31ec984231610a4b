#include "treecover/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace treecover {

namespace {
constexpr std::uint32_t kNoOwner = std::numeric_limits<std::uint32_t>::max();
}

EmbeddingTree::EmbeddingTree(SpacePtr space, std::uint32_t color, std::vector<TreeVertex> vertices,
                             std::vector<PointSubset> members,
                             std::vector<std::optional<std::uint32_t>> parents)
    : space_(std::move(space)), color_(color), vertices_(std::move(vertices)),
      members_(std::move(members)), parents_(std::move(parents)) {
    if (!space_) throw NotATree("tree needs a space");
    if (vertices_.size() != members_.size() || vertices_.size() != parents_.size())
        throw NotATree("vertex, member, and parent lists have different lengths");
    if (!std::is_sorted(vertices_.begin(), vertices_.end()) ||
        std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw NotATree("vertices are not sorted and distinct");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (members_[i].space() != space_.get()) throw SpaceMismatch();
        if (members_[i].empty()) throw NotATree("vertex with empty member set");
        if (parents_[i]) {
            if (*parents_[i] >= vertices_.size()) throw NotATree("parent id out of range");
            if (vertices_[*parents_[i]].level <= vertices_[i].level)
                throw NotATree("parent is not at a strictly higher level");
        }
    }
    depths_.resize(vertices_.size(), 0);
    for (std::size_t i = vertices_.size(); i-- > 0;) {
        if (parents_[i])
            depths_[i] = depths_[*parents_[i]] + 1; // parent id > i: sorted by level
        else
            roots_.push_back(static_cast<std::uint32_t>(i));
    }
    std::reverse(roots_.begin(), roots_.end());
}

const TreeVertex& EmbeddingTree::vertex(std::uint32_t id) const {
    if (id >= vertices_.size()) throw VertexNotInTree(color_, id);
    return vertices_[id];
}

const PointSubset& EmbeddingTree::members(std::uint32_t id) const {
    if (id >= members_.size()) throw VertexNotInTree(color_, id);
    return members_[id];
}

const std::optional<std::uint32_t>& EmbeddingTree::parent(std::uint32_t id) const {
    if (id >= parents_.size()) throw VertexNotInTree(color_, id);
    return parents_[id];
}

std::size_t EmbeddingTree::depth(std::uint32_t id) const {
    if (id >= depths_.size()) throw VertexNotInTree(color_, id);
    return depths_[id];
}

std::optional<std::uint32_t> EmbeddingTree::vertex_id(const TreeVertex& v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) return std::nullopt;
    return static_cast<std::uint32_t>(it - vertices_.begin());
}

std::uint32_t EmbeddingTree::root() const {
    if (roots_.size() != 1)
        throw NotATree("color-" + std::to_string(color_) + " tree has " +
                       std::to_string(roots_.size()) + " roots");
    return roots_.front();
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> EmbeddingTree::edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(vertices_.size());
    for (std::uint32_t id = 0; id < parents_.size(); ++id)
        if (parents_[id]) out.emplace_back(id, *parents_[id]);
    return out;
}

EmbeddingTree build_tree(const CoverTower& tower, std::uint32_t color) {
    if (color >= tower.num_colors()) throw CoverError("color out of range");
    const FiniteMetricSpace& space = tower.space();
    const std::size_t level_count = tower.levels().size();

    // owner[l][x] = index of the color's element containing x at level l;
    // first_id[l] = vertex id of that level's first element.
    std::vector<std::vector<std::uint32_t>> owner(level_count);
    std::vector<std::uint32_t> first_id(level_count, 0);
    std::vector<TreeVertex> vertices;
    for (std::size_t l = 0; l < level_count; ++l) {
        first_id[l] = static_cast<std::uint32_t>(vertices.size());
        const auto& elements = tower.level(l).cover.color(color);
        if (!elements.empty()) owner[l].assign(space.size(), kNoOwner);
        for (std::uint32_t e = 0; e < elements.size(); ++e) {
            vertices.push_back(TreeVertex{l, e});
            for (std::uint32_t x : elements[e].members()) owner[l][x] = e;
        }
    }

    std::vector<PointSubset> members;
    std::vector<std::optional<std::uint32_t>> parents;
    members.reserve(vertices.size());
    parents.reserve(vertices.size());
    for (const TreeVertex& v : vertices) {
        const PointSubset& self = tower.level(v.level).cover.color(color)[v.element];
        members.push_back(self);
        std::optional<std::uint32_t> parent;
        for (std::size_t l = v.level + 1; l < level_count && !parent; ++l) {
            if (owner[l].empty()) continue;
            const std::uint32_t candidate = owner[l][self.members().front()];
            if (candidate == kNoOwner) continue;
            bool contained = true;
            for (std::uint32_t x : self.members())
                if (owner[l][x] != candidate) {
                    contained = false;
                    break;
                }
            if (contained) parent = first_id[l] + candidate;
        }
        parents.push_back(parent);
    }
    return EmbeddingTree(tower.space_ptr(), color, std::move(vertices), std::move(members),
                         std::move(parents));
}

EmbeddingForest build_forest(const CoverTower& tower) {
    EmbeddingForest forest;
    forest.space = tower.space_ptr();
    forest.trees.reserve(tower.num_colors());
    for (std::uint32_t c = 0; c < tower.num_colors(); ++c)
        forest.trees.push_back(build_tree(tower, c));
    return forest;
}

std::int64_t tree_distance(const EmbeddingTree& tree, std::uint32_t a, std::uint32_t b) {
    if (a >= tree.num_vertices()) throw VertexNotInTree(tree.color(), a);
    if (b >= tree.num_vertices()) throw VertexNotInTree(tree.color(), b);
    std::int64_t steps = 0;
    while (tree.depth(a) > tree.depth(b)) {
        a = *tree.parent(a);
        ++steps;
    }
    while (tree.depth(b) > tree.depth(a)) {
        b = *tree.parent(b);
        ++steps;
    }
    while (a != b) {
        if (!tree.parent(a) || !tree.parent(b))
            throw NotATree("vertices lie in different components");
        a = *tree.parent(a);
        b = *tree.parent(b);
        steps += 2;
    }
    return steps;
}

ForestCertificate validate_forest(const EmbeddingForest& forest) {
    ForestCertificate cert;
    cert.passes = true;
    for (const EmbeddingTree& tree : forest.trees) {
        TreeCertificate tc;
        tc.color = tree.color();
        tc.num_vertices = tree.num_vertices();
        auto edge_list = tree.edges();
        tc.num_edges = edge_list.size();

        // Union-find over the undirected edge list.
        std::vector<std::uint32_t> rep(tree.num_vertices());
        std::iota(rep.begin(), rep.end(), 0);
        auto find = [&](std::uint32_t v) {
            while (rep[v] != v) {
                rep[v] = rep[rep[v]];
                v = rep[v];
            }
            return v;
        };
        std::size_t components = tree.num_vertices();
        for (const auto& [child, parent] : edge_list) {
            std::uint32_t a = find(child), b = find(parent);
            if (a != b) {
                rep[a] = b;
                --components;
            }
        }
        tc.connected = components <= 1;
        tc.acyclic = tc.num_edges + components == tc.num_vertices;
        for (std::uint32_t id = 0; id < tree.num_vertices(); ++id)
            if (!tree.parent(id)) tc.root_ids.push_back(id);
        tc.unique_root = tc.root_ids.size() == 1;
        if (!tc.connected && tree.num_vertices() > 0) {
            std::uint32_t home = find(tc.root_ids.empty() ? 0 : tc.root_ids.front());
            for (std::uint32_t id = 0; id < tree.num_vertices(); ++id)
                if (find(id) != home) {
                    tc.unreachable_vertex = id;
                    break;
                }
        }
        cert.passes = cert.passes && tc.passes();
        cert.trees.push_back(std::move(tc));
    }
    return cert;
}

std::map<std::size_t, std::size_t> degree_profile(const EmbeddingTree& tree) {
    std::vector<std::size_t> degree(tree.num_vertices(), 0);
    for (std::uint32_t id = 0; id < tree.num_vertices(); ++id)
        if (tree.parent(id)) {
            ++degree[id];
            ++degree[*tree.parent(id)];
        }
    std::map<std::size_t, std::size_t> profile;
    for (std::size_t d : degree) ++profile[d];
    return profile;
}

} // namespace treecover
