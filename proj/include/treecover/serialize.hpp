#pragma once

#include "treecover/embedding.hpp"

#include <string>

namespace treecover {

// Text formats.  Every file starts with "treecover-format 1 <kind>", and
// serialize(parse(text)) == text for the native kinds (matrix, tower, forest,
// map).  The DOT export is write-only.

std::string space_to_matrix(const FiniteMetricSpace& space);
SpacePtr matrix_to_space(const std::string& text); // runs full metric validation
SpacePtr edges_to_space(const std::string& text);  // shortest-path metric of the edge list

std::string tower_to_text(const CoverTower& tower);
CoverTower text_to_tower(const std::string& text, SpacePtr space);

std::string forest_to_text(const EmbeddingForest& forest);
EmbeddingForest text_to_forest(const std::string& text, SpacePtr space);

std::string map_to_text(const EmbeddingMap& map);
EmbeddingMap text_to_map(const std::string& text, SpacePtr space);

std::string forest_to_dot(const EmbeddingForest& forest);

// Whole-file helpers; writes go to a temporary file first and rename into
// place, so readers never observe a half-written artifact.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace treecover
