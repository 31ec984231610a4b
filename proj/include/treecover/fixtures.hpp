#pragma once

#include "treecover/metric_space.hpp"

#include <cstdint>
#include <string>

namespace treecover {

SpacePtr make_singleton();

// Integer points 0..m on a line, with line coordinates attached.
SpacePtr make_path(std::size_t m);

// d-fold sup-metric product of a path, folded left.
SpacePtr make_grid(std::size_t m, std::size_t dims);

// Connected unit-weight graph on n vertices: a random-attachment spanning
// tree (vertex v joins a uniform earlier vertex), then each remaining pair
// becomes an edge with probability p, scanned in lexicographic order.
SpacePtr make_random_graph(std::size_t n, const Rational& p, std::uint64_t seed);

SpacePtr make_product(const SpacePtr& a, const SpacePtr& b, ProductMetric metric);

// "singleton", "path:m", "grid:m:d", "random-graph:n:p:seed".
SpacePtr make_fixture(const std::string& descriptor);

} // namespace treecover
