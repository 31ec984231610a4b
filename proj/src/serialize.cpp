#include "treecover/serialize.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace treecover {

namespace {

class TokenReader {
  public:
    explicit TokenReader(const std::string& text) : in_(text) {}

    std::string next(const char* what) {
        if (pushed_) {
            std::string token = std::move(*pushed_);
            pushed_.reset();
            return token;
        }
        std::string token;
        if (!(in_ >> token))
            throw ParseError(std::string("unexpected end of input, expected ") + what);
        return token;
    }

    void push_back(std::string token) { pushed_ = std::move(token); }

    void expect(const std::string& keyword) {
        std::string token = next(keyword.c_str());
        if (token != keyword)
            throw ParseError("expected '" + keyword + "', found '" + token + "'");
    }

    std::uint64_t read_u64(const char* what) {
        std::string token = next(what);
        if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError(std::string("expected ") + what + ", found '" + token + "'");
        return std::strtoull(token.c_str(), nullptr, 10);
    }

    std::uint32_t read_u32(const char* what) {
        std::uint64_t v = read_u64(what);
        if (v > 0xffffffffull) throw ParseError(std::string(what) + " out of range");
        return static_cast<std::uint32_t>(v);
    }

    Rational read_rational(const char* what) { return parse_rational(next(what)); }

    void expect_end() {
        std::string token;
        if (in_ >> token) throw ParseError("trailing content after '" + token + "'");
        if (pushed_) throw ParseError("trailing content after '" + *pushed_ + "'");
    }

  private:
    std::istringstream in_;
    std::optional<std::string> pushed_;
};

void read_header(TokenReader& reader, const std::string& kind) {
    reader.expect("treecover-format");
    std::string version = reader.next("format version");
    if (version != "1") throw ParseError("unsupported format version '" + version + "'");
    reader.expect(kind);
}

void check_space_points(TokenReader& reader, const SpacePtr& space) {
    reader.expect("space-points");
    std::uint64_t n = reader.read_u64("point count");
    if (!space) throw ParseError("loading this artifact requires a space");
    if (n != space->size())
        throw ParseError("artifact was written for " + std::to_string(n) +
                         " points, the space has " + std::to_string(space->size()));
}

PointSubset read_subset(TokenReader& reader, const FiniteMetricSpace& space) {
    std::uint64_t count = reader.read_u64("member count");
    std::vector<std::uint32_t> members;
    members.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) members.push_back(reader.read_u32("point index"));
    return PointSubset(&space, std::move(members));
}

void write_subset(std::ostream& out, const PointSubset& subset) {
    out << subset.size();
    for (std::uint32_t p : subset.members()) out << ' ' << p;
}

// "0-11 18-31"-style run summary for DOT labels.
std::string run_summary(const PointSubset& subset) {
    std::ostringstream out;
    const auto& m = subset.members();
    std::size_t i = 0;
    bool first = true;
    while (i < m.size()) {
        std::size_t j = i;
        while (j + 1 < m.size() && m[j + 1] == m[j] + 1) ++j;
        if (!first) out << ' ';
        first = false;
        if (j == i)
            out << m[i];
        else
            out << m[i] << "-" << m[j];
        i = j + 1;
        if (out.tellp() > 40 && i < m.size()) {
            out << " ...";
            break;
        }
    }
    return out.str();
}

} // namespace

std::string space_to_matrix(const FiniteMetricSpace& space) {
    std::ostringstream out;
    out << "treecover-format 1 matrix\n" << space.size() << "\n";
    if (!space.has_default_labels()) {
        for (std::size_t p = 0; p < space.size(); ++p)
            out << (p ? " " : "") << space.labels()[p];
        out << "\n";
    }
    for (std::size_t p = 0; p < space.size(); ++p) {
        for (std::size_t q = 0; q <= p; ++q)
            out << (q ? " " : "") << format_rational(space.dist(p, q));
        out << "\n";
    }
    return out.str();
}

SpacePtr matrix_to_space(const std::string& text) {
    TokenReader reader(text);
    read_header(reader, "matrix");
    std::uint64_t n = reader.read_u64("point count");
    if (n == 0) throw ParseError("matrix needs at least one point");

    // Labels are optional: if the token after the point count parses as a
    // rational it is already matrix data.
    std::vector<std::string> labels;
    std::string probe = reader.next("labels or matrix data");
    bool has_labels = false;
    try {
        parse_rational(probe);
    } catch (const ParseError&) {
        has_labels = true;
    }
    if (has_labels) {
        labels.push_back(probe);
        for (std::uint64_t i = 1; i < n; ++i) labels.push_back(reader.next("label"));
    } else {
        reader.push_back(std::move(probe));
    }

    std::vector<std::vector<Rational>> table(n, std::vector<Rational>(n));
    for (std::uint64_t p = 0; p < n; ++p)
        for (std::uint64_t q = 0; q <= p; ++q) {
            Rational v = reader.read_rational("matrix entry");
            table[p][q] = v;
            table[q][p] = std::move(v);
        }
    reader.expect_end();
    return FiniteMetricSpace::validate(table, std::move(labels));
}

SpacePtr edges_to_space(const std::string& text) {
    TokenReader reader(text);
    read_header(reader, "edges");
    std::vector<WeightedEdge> edges;
    std::size_t max_vertex = 0;
    while (true) {
        std::string token;
        try {
            token = reader.next("edge or end of file");
        } catch (const ParseError&) {
            break;
        }
        reader.push_back(std::move(token));
        WeightedEdge e;
        e.u = reader.read_u64("edge endpoint");
        e.v = reader.read_u64("edge endpoint");
        e.weight = reader.read_rational("edge weight");
        max_vertex = std::max({max_vertex, e.u, e.v});
        edges.push_back(std::move(e));
    }
    if (edges.empty()) throw ParseError("edge list is empty");
    return FiniteMetricSpace::from_graph(edges, max_vertex + 1);
}

std::string tower_to_text(const CoverTower& tower) {
    std::ostringstream out;
    out << "treecover-format 1 tower\n";
    out << "space-points " << tower.space().size() << "\n";
    out << "colors " << tower.num_colors() << "\n";
    out << "basepoint " << tower.basepoint() << "\n";
    out << "height " << tower.height() << "\n";
    const GrowthProfile& profile = tower.profile();
    if (const auto* linear = std::get_if<LinearControl>(&profile.control_form())) {
        out << "control linear " << format_rational(linear->slope) << " "
            << format_rational(linear->offset) << "\n";
    } else {
        const auto& table = std::get<StepTableControl>(profile.control_form());
        out << "control table " << table.steps.size() << "\n";
        for (const auto& [arg, value] : table.steps)
            out << "step " << format_rational(arg) << " " << format_rational(value) << "\n";
    }
    out << "growth-constant " << format_rational(profile.growth_constant()) << "\n";
    out << "base-scale " << format_rational(profile.base_scale()) << "\n";
    for (std::size_t k = 0; k < tower.levels().size(); ++k) {
        const TowerLevel& level = tower.level(k);
        out << "level " << k << "\n";
        out << "scale " << format_rational(level.scale) << "\n";
        out << "renumbering";
        for (std::uint32_t c : level.renumbering) out << ' ' << c;
        out << "\n";
        out << "witness " << level.basepoint_witness << "\n";
        out << "cover-scale " << format_rational(level.cover.scale()) << "\n";
        out << "cover-diameter-bound " << format_rational(level.cover.diameter_bound()) << "\n";
        for (std::uint32_t c = 0; c < level.cover.num_colors(); ++c) {
            out << "color " << c << " elements " << level.cover.color(c).size() << "\n";
            for (const PointSubset& element : level.cover.color(c)) {
                out << "element ";
                write_subset(out, element);
                out << "\n";
            }
        }
    }
    out << "end\n";
    return out.str();
}

CoverTower text_to_tower(const std::string& text, SpacePtr space) {
    TokenReader reader(text);
    read_header(reader, "tower");
    check_space_points(reader, space);
    reader.expect("colors");
    const std::uint32_t num_colors = reader.read_u32("color count");
    if (num_colors == 0) throw ParseError("tower needs at least one color");
    reader.expect("basepoint");
    const std::uint32_t basepoint = reader.read_u32("basepoint");
    reader.expect("height");
    const std::uint64_t height = reader.read_u64("height");

    reader.expect("control");
    std::string control_kind = reader.next("control kind");
    ControlForm form = LinearControl{0, 0};
    if (control_kind == "linear") {
        Rational slope = reader.read_rational("control slope");
        Rational offset = reader.read_rational("control offset");
        form = LinearControl{std::move(slope), std::move(offset)};
    } else if (control_kind == "table") {
        std::uint64_t rows = reader.read_u64("table size");
        StepTableControl table;
        for (std::uint64_t i = 0; i < rows; ++i) {
            reader.expect("step");
            Rational arg = reader.read_rational("step argument");
            Rational value = reader.read_rational("step value");
            table.steps.emplace_back(std::move(arg), std::move(value));
        }
        form = std::move(table);
    } else {
        throw ParseError("unknown control kind '" + control_kind + "'");
    }
    reader.expect("growth-constant");
    Rational growth_constant = reader.read_rational("growth constant");
    reader.expect("base-scale");
    Rational base_scale = reader.read_rational("base scale");
    GrowthProfile profile(std::move(form), std::move(growth_constant), std::move(base_scale));

    std::vector<TowerLevel> levels;
    for (std::uint64_t k = 0; k <= height; ++k) {
        reader.expect("level");
        if (reader.read_u64("level index") != k) throw ParseError("levels out of order");
        reader.expect("scale");
        Rational scale = reader.read_rational("level scale");
        if (scale != profile.level_scale(k))
            throw ParseError("level " + std::to_string(k) +
                             " scale disagrees with the growth profile");
        reader.expect("renumbering");
        std::vector<std::uint32_t> renumbering;
        for (std::uint32_t c = 0; c < num_colors; ++c)
            renumbering.push_back(reader.read_u32("renumbering entry"));
        std::vector<std::uint32_t> sorted = renumbering;
        std::sort(sorted.begin(), sorted.end());
        for (std::uint32_t c = 0; c < num_colors; ++c)
            if (sorted[c] != c) throw ParseError("renumbering is not a permutation");
        reader.expect("witness");
        const std::uint32_t witness = reader.read_u32("witness element");
        reader.expect("cover-scale");
        Rational cover_scale = reader.read_rational("cover scale");
        reader.expect("cover-diameter-bound");
        Rational cover_bound = reader.read_rational("cover diameter bound");
        std::vector<std::vector<PointSubset>> colors(num_colors);
        for (std::uint32_t c = 0; c < num_colors; ++c) {
            reader.expect("color");
            if (reader.read_u32("color index") != c) throw ParseError("colors out of order");
            reader.expect("elements");
            std::uint64_t count = reader.read_u64("element count");
            for (std::uint64_t e = 0; e < count; ++e) {
                reader.expect("element");
                colors[c].push_back(read_subset(reader, *space));
            }
        }
        ColoredCover cover(space, std::move(colors), std::move(cover_scale),
                           std::move(cover_bound));
        if (witness >= cover.color(static_cast<std::uint32_t>(k % num_colors)).size())
            throw ParseError("witness element out of range at level " + std::to_string(k));
        levels.push_back(
            TowerLevel{std::move(scale), std::move(cover), std::move(renumbering), witness});
    }
    reader.expect("end");
    reader.expect_end();
    return CoverTower(std::move(space), std::move(profile), num_colors, basepoint,
                      std::move(levels));
}

std::string forest_to_text(const EmbeddingForest& forest) {
    std::ostringstream out;
    out << "treecover-format 1 forest\n";
    out << "space-points " << forest.space->size() << "\n";
    out << "colors " << forest.num_colors() << "\n";
    for (const EmbeddingTree& tree : forest.trees) {
        out << "tree " << tree.color() << "\n";
        out << "vertices " << tree.num_vertices() << "\n";
        for (std::uint32_t id = 0; id < tree.num_vertices(); ++id) {
            const TreeVertex& v = tree.vertex(id);
            out << "vertex " << id << " level " << v.level << " element " << v.element
                << " parent ";
            if (tree.parent(id))
                out << *tree.parent(id);
            else
                out << "none";
            out << " members ";
            write_subset(out, tree.members(id));
            out << "\n";
        }
    }
    out << "end\n";
    return out.str();
}

EmbeddingForest text_to_forest(const std::string& text, SpacePtr space) {
    TokenReader reader(text);
    read_header(reader, "forest");
    check_space_points(reader, space);
    reader.expect("colors");
    const std::uint32_t num_colors = reader.read_u32("color count");
    EmbeddingForest forest;
    forest.space = space;
    for (std::uint32_t c = 0; c < num_colors; ++c) {
        reader.expect("tree");
        if (reader.read_u32("tree color") != c) throw ParseError("trees out of order");
        reader.expect("vertices");
        const std::uint64_t count = reader.read_u64("vertex count");
        std::vector<TreeVertex> vertices;
        std::vector<PointSubset> members;
        std::vector<std::optional<std::uint32_t>> parents;
        for (std::uint64_t id = 0; id < count; ++id) {
            reader.expect("vertex");
            if (reader.read_u64("vertex id") != id) throw ParseError("vertices out of order");
            reader.expect("level");
            const std::uint64_t level = reader.read_u64("vertex level");
            reader.expect("element");
            const std::uint32_t element = reader.read_u32("vertex element");
            reader.expect("parent");
            std::string parent_token = reader.next("parent id or none");
            std::optional<std::uint32_t> parent;
            if (parent_token != "none") {
                reader.push_back(std::move(parent_token));
                parent = reader.read_u32("parent id");
            }
            reader.expect("members");
            vertices.push_back(TreeVertex{level, element});
            members.push_back(read_subset(reader, *space));
            parents.push_back(parent);
        }
        forest.trees.emplace_back(space, c, std::move(vertices), std::move(members),
                                  std::move(parents));
    }
    reader.expect("end");
    reader.expect_end();
    return forest;
}

std::string map_to_text(const EmbeddingMap& map) {
    std::ostringstream out;
    out << "treecover-format 1 map\n";
    out << "space-points " << map.space_ptr()->size() << "\n";
    out << "colors " << map.num_colors() << "\n";
    for (std::uint32_t x = 0; x < map.space_ptr()->size(); ++x)
        for (std::uint32_t c = 0; c < map.num_colors(); ++c)
            out << "entry " << x << " " << c << " level " << map.home_level(x, c) << " element "
                << map.home_element(x, c) << "\n";
    out << "end\n";
    return out.str();
}

EmbeddingMap text_to_map(const std::string& text, SpacePtr space) {
    TokenReader reader(text);
    read_header(reader, "map");
    check_space_points(reader, space);
    reader.expect("colors");
    const std::uint32_t num_colors = reader.read_u32("color count");
    std::vector<std::vector<std::size_t>> levels(num_colors,
                                                 std::vector<std::size_t>(space->size()));
    std::vector<std::vector<std::uint32_t>> elements(num_colors,
                                                     std::vector<std::uint32_t>(space->size()));
    for (std::uint32_t x = 0; x < space->size(); ++x)
        for (std::uint32_t c = 0; c < num_colors; ++c) {
            reader.expect("entry");
            if (reader.read_u32("point index") != x || reader.read_u32("color index") != c)
                throw ParseError("map entries out of order");
            reader.expect("level");
            levels[c][x] = reader.read_u64("level");
            reader.expect("element");
            elements[c][x] = reader.read_u32("element index");
        }
    reader.expect("end");
    reader.expect_end();
    return EmbeddingMap::from_tables(std::move(space), std::move(levels), std::move(elements));
}

std::string forest_to_dot(const EmbeddingForest& forest) {
    std::ostringstream out;
    out << "graph forest {\n";
    out << "  node [shape=box fontname=\"monospace\"];\n";
    for (const EmbeddingTree& tree : forest.trees) {
        const std::uint32_t c = tree.color();
        out << "  subgraph cluster_color" << c << " {\n";
        out << "    label=\"color " << c << "\";\n";
        for (std::uint32_t id = 0; id < tree.num_vertices(); ++id) {
            const TreeVertex& v = tree.vertex(id);
            out << "    c" << c << "_v" << id << " [label=\"(" << c << "," << v.level << ","
                << v.element << ")\\n" << run_summary(tree.members(id)) << "\"];\n";
        }
        for (const auto& [child, parent] : tree.edges())
            out << "    c" << c << "_v" << child << " -- c" << c << "_v" << parent << ";\n";
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write file: " + temp);
        out << content;
        if (!out) throw ParseError("write failed: " + temp);
    }
    std::filesystem::rename(temp, path);
}

} // namespace treecover
