#include "treecover/pipeline.hpp"

#include "treecover/embedding.hpp"
#include "treecover/tower.hpp"
#include "treecover/tree.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>
#include <vector>

namespace treecover {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

struct ArtifactPaths {
    std::string tower, forest, map, report, pairs_tsv, dot;
};

ArtifactPaths paths_under(const std::string& dir) {
    auto join = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    return ArtifactPaths{join("tower.txt"), join("forest.txt"), join("map.txt"),
                         join("report.txt"), join("pairs.tsv"), join("forest.dot")};
}

void print_check(std::ostream& out, const std::string& name, bool ok) {
    out << "  [" << (ok ? "PASS" : "FAIL") << "] " << name << "\n";
}

std::string space_summary(const std::string& descriptor, const FiniteMetricSpace& space) {
    std::ostringstream out;
    out << descriptor << " (" << space.size() << " points, diameter "
        << format_rational(space.diameter()) << ", " << space.distance_values().size()
        << " distinct distances)";
    return out.str();
}

struct VerificationResult {
    bool level_claims_ok = true;
    std::vector<std::size_t> bad_claim_levels;
    bool level_covers_ok = true;
    std::vector<std::size_t> bad_cover_levels;
    CoherenceCertificate coherence;
    BasepointCoverageCertificate basepoint;
    ForestCertificate forest_cert;
    bool forest_matches_tower = true;
    bool map_ok = true;
    DistortionReport report;

    bool passes() const {
        return level_claims_ok && level_covers_ok && coherence.passes && basepoint.passes &&
               forest_cert.passes && forest_matches_tower && map_ok && report.passes();
    }
};

VerificationResult run_verification(const CoverTower& tower, const EmbeddingForest& forest,
                                    const EmbeddingMap& map, const PairSpec& spec) {
    VerificationResult result;
    const GrowthProfile& profile = tower.profile();
    for (std::size_t k = 0; k < tower.levels().size(); ++k) {
        const ColoredCover& cover = tower.level(k).cover;
        const Rational expected_scale = mul_div_rational(profile.level_scale(k), 9, 10);
        const Rational expected_bound = mul_add_rational(profile.inflated_at(k), 2, 0);
        if (cover.scale() != expected_scale || cover.diameter_bound() != expected_bound) {
            result.level_claims_ok = false;
            result.bad_claim_levels.push_back(k);
        }
        if (!check_cover(cover).passes()) {
            result.level_covers_ok = false;
            result.bad_cover_levels.push_back(k);
        }
    }
    result.coherence = certify_coherence(tower);
    result.basepoint = certify_basepoint_coverage(tower);
    result.forest_cert = validate_forest(forest);
    result.forest_matches_tower = forest_to_text(build_forest(tower)) == forest_to_text(forest);
    result.map_ok = map_matches_tower(map, tower);
    result.report = verify_embedding(map, forest, profile, spec);
    return result;
}

void print_levels(std::ostream& out, const std::vector<std::size_t>& levels) {
    out << "    failing levels:";
    for (std::size_t k : levels) out << " " << k;
    out << "\n";
}

void print_verification(std::ostream& out, const VerificationResult& result) {
    print_check(out, "level-covers (claims)", result.level_claims_ok);
    if (!result.level_claims_ok) print_levels(out, result.bad_claim_levels);
    print_check(out, "level-covers (certificates)", result.level_covers_ok);
    if (!result.level_covers_ok) print_levels(out, result.bad_cover_levels);
    std::ostringstream coherence_name;
    coherence_name << "coherence (" << result.coherence.pairs_checked << " element pairs)";
    print_check(out, coherence_name.str(), result.coherence.passes);
    for (const auto& w : result.coherence.violations)
        out << "    color " << w.color << ": element " << w.upper_element << " at level "
            << w.upper_level << " loses point " << w.escaping_point << " of element "
            << w.lower_element << " at level " << w.lower_level << " (set distance "
            << format_rational(w.distance) << ")\n";
    print_check(out, "basepoint-coverage", result.basepoint.passes);
    print_check(out, "forest-structure", result.forest_cert.passes);
    print_check(out, "forest-matches-tower", result.forest_matches_tower);
    print_check(out, "map-consistency", result.map_ok);
    out << "  pairs: " << result.report.pair_descriptor << "\n";
    if (result.report.expansive_margin)
        out << "  expansive margin: " << format_rational(*result.report.expansive_margin)
            << " (<= 0 required)\n";
    print_check(out, "expansive", result.report.passes_expansive());
    std::ostringstream proper_name;
    proper_name << "proper (" << result.report.proper_violations.size() << " violations)";
    print_check(out, proper_name.str(), result.report.passes_proper());
    print_check(out, "distance-envelopes", result.report.envelopes_consistent);
}

std::string report_to_text(const VerificationResult& result) {
    const DistortionReport& report = result.report;
    std::ostringstream out;
    out << "treecover-format 1 report\n";
    out << "pair-source " << report.pair_descriptor << "\n";
    out << "pairs-checked " << report.pairs_checked << "\n";
    out << "expansive-margin ";
    if (report.expansive_margin)
        out << format_rational(*report.expansive_margin);
    else
        out << "none";
    out << "\n";
    out << "expansive-violations " << report.expansive_violations.size() << "\n";
    for (const auto& w : report.expansive_violations)
        out << "expansive-violation " << w.x << " " << w.y << " "
            << format_rational(w.metric_distance) << " " << w.product_dist << " "
            << format_rational(w.bound) << "\n";
    out << "proper-violations " << report.proper_violations.size() << "\n";
    for (const auto& w : report.proper_violations)
        out << "proper-violation " << w.x << " " << w.y << " "
            << format_rational(w.metric_distance) << " " << w.product_dist << " "
            << format_rational(w.bound) << "\n";
    for (std::size_t t = 0; t < report.empirical_rho.size(); ++t) {
        out << "rho " << t << " ";
        if (report.empirical_rho[t])
            out << *report.empirical_rho[t];
        else
            out << "none";
        out << "\n";
    }
    for (std::size_t t = 0; t < report.empirical_delta.size(); ++t) {
        out << "delta " << t << " ";
        if (report.empirical_delta[t])
            out << *report.empirical_delta[t];
        else
            out << "none";
        out << "\n";
    }
    for (const auto& check : report.envelope_checks) {
        out << "envelope " << check.t << " floor " << check.analytic_floor << " observed ";
        if (check.observed_minimum)
            out << *check.observed_minimum;
        else
            out << "none";
        out << (check.ok ? " ok" : " FAIL") << "\n";
    }
    out << "level-covers " << (result.level_claims_ok && result.level_covers_ok ? "pass" : "fail")
        << "\n";
    out << "coherence " << (result.coherence.passes ? "pass" : "fail") << "\n";
    out << "basepoint-coverage " << (result.basepoint.passes ? "pass" : "fail") << "\n";
    out << "forest-valid "
        << (result.forest_cert.passes && result.forest_matches_tower ? "pass" : "fail") << "\n";
    out << "map-consistent " << (result.map_ok ? "pass" : "fail") << "\n";
    out << "verdict " << (result.passes() ? "pass" : "fail") << "\n";
    return out.str();
}

struct LoadedArtifacts {
    SpacePtr space;
    CoverTower tower;
    EmbeddingForest forest;
    EmbeddingMap map;
};

void write_report_files(const ArtifactPaths& paths, const VerificationResult& result,
                        const LoadedArtifacts& artifacts, const PairSpec& spec) {
    write_text_file(paths.report, report_to_text(result));
    auto pairs = enumerate_pairs(*artifacts.space, spec);
    auto products = product_distances(artifacts.map, artifacts.forest, pairs);
    std::ostringstream tsv;
    tsv << "x\ty\tdistance\tproduct\n";
    for (std::size_t i = 0; i < pairs.size(); ++i)
        tsv << pairs[i].first << "\t" << pairs[i].second << "\t"
            << format_rational(artifacts.space->dist(pairs[i].first, pairs[i].second)) << "\t"
            << products[i] << "\n";
    write_text_file(paths.pairs_tsv, tsv.str());
}

LoadedArtifacts load_artifacts(const PipelineConfig& config) {
    SpacePtr space = resolve_space(config.space);
    ArtifactPaths paths = paths_under(config.out_dir);
    CoverTower tower = text_to_tower(read_text_file(paths.tower), space);
    EmbeddingForest forest = text_to_forest(read_text_file(paths.forest), space);
    EmbeddingMap map = text_to_map(read_text_file(paths.map), space);
    return LoadedArtifacts{std::move(space), std::move(tower), std::move(forest), std::move(map)};
}

} // namespace

SpacePtr resolve_space(const std::string& descriptor) {
    if (descriptor.rfind("matrix:", 0) == 0)
        return matrix_to_space(read_text_file(descriptor.substr(7)));
    if (descriptor.rfind("edges:", 0) == 0)
        return edges_to_space(read_text_file(descriptor.substr(6)));
    return make_fixture(descriptor);
}

GrowthProfile resolve_profile(const PipelineConfig& config, const CoverGenerator& generator) {
    auto parts = split(config.control, ':');
    ControlForm form = LinearControl{0, 0};
    if (parts[0] == "linear" && parts.size() == 3) {
        form = LinearControl{parse_rational(parts[1]), parse_rational(parts[2])};
    } else if (parts[0] == "const" && parts.size() == 2) {
        form = LinearControl{Rational(0), parse_rational(parts[1])};
    } else if (parts[0] == "empirical" && parts.size() == 2) {
        std::vector<Rational> scales;
        for (const std::string& token : split(parts[1], ','))
            scales.push_back(parse_rational(token));
        StepTableControl table;
        table.steps = empirical_control_function(generator, scales);
        form = std::move(table);
    } else {
        throw ParseError("unknown control descriptor '" + config.control + "'");
    }
    return GrowthProfile(std::move(form), parse_rational(config.growth_constant), Rational(2));
}

PairSpec resolve_pairs(const std::string& text, const FiniteMetricSpace& space,
                       std::uint64_t seed) {
    if (text == "auto") return PairSpec::automatic(space, seed);
    if (text == "exhaustive") return PairSpec::all_pairs();
    auto parts = split(text, ':');
    if (parts.size() == 2 && parts[0] == "sample") {
        if (parts[1].empty() || parts[1].find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad sample size '" + parts[1] + "'");
        return PairSpec::sample(std::strtoull(parts[1].c_str(), nullptr, 10), seed);
    }
    throw ParseError("unknown pair policy '" + text + "'");
}

int cmd_validate(const PipelineConfig& config, std::ostream& out) {
    SpacePtr space = resolve_space(config.space);
    out << "space " << space_summary(config.space, *space) << "\n";
    if (!space->has_default_labels()) out << "  labeled points\n";
    if (space->line_coordinates()) out << "  line coordinates attached\n";
    if (space->product_structure()) out << "  product structure attached\n";
    out << "metric axioms hold\n";
    return 0;
}

int cmd_build(const PipelineConfig& config, std::ostream& out) {
    SpacePtr space = resolve_space(config.space);
    auto generator = make_generator(config.generator, space);
    if (config.colors && *config.colors != generator->colors())
        throw ParseError("--colors " + std::to_string(*config.colors) + " but the " +
                         config.generator + " generator uses " +
                         std::to_string(generator->colors()));
    GrowthProfile profile = resolve_profile(config, *generator);

    out << "space " << space_summary(config.space, *space) << "\n";
    out << "generator " << generator->describe() << " (" << generator->colors() << " colors)\n";
    out << "growth constant " << format_rational(profile.growth_constant()) << ", base scale "
        << format_rational(profile.base_scale()) << "\n";

    CoverTower tower = build_tower(*generator, profile, config.basepoint);
    std::size_t total_elements = 0;
    for (const TowerLevel& level : tower.levels()) total_elements += level.cover.total_elements();
    out << "tower height " << tower.height() << " (effective " << tower.effective_height() << ", "
        << total_elements << " elements)\n";

    EmbeddingForest forest = build_forest(tower);
    EmbeddingMap map = EmbeddingMap::build(tower);
    PairSpec spec = resolve_pairs(config.pairs, *space, config.seed);
    VerificationResult result = run_verification(tower, forest, map, spec);
    print_verification(out, result);

    std::filesystem::create_directories(config.out_dir);
    ArtifactPaths paths = paths_under(config.out_dir);
    write_text_file(paths.tower, tower_to_text(tower));
    write_text_file(paths.forest, forest_to_text(forest));
    write_text_file(paths.map, map_to_text(map));
    out << "artifacts written to " << config.out_dir << "\n";
    return result.passes() ? 0 : 1;
}

int cmd_verify(const PipelineConfig& config, std::ostream& out) {
    LoadedArtifacts artifacts = load_artifacts(config);
    out << "space " << space_summary(config.space, *artifacts.space) << "\n";
    out << "tower height " << artifacts.tower.height() << " (effective "
        << artifacts.tower.effective_height() << ")\n";
    PairSpec spec = resolve_pairs(config.pairs, *artifacts.space, config.seed);
    VerificationResult result =
        run_verification(artifacts.tower, artifacts.forest, artifacts.map, spec);
    print_verification(out, result);
    ArtifactPaths paths = paths_under(config.out_dir);
    write_report_files(paths, result, artifacts, spec);
    out << "report written to " << paths.report << "\n";
    out << "verdict " << (result.passes() ? "pass" : "fail") << "\n";
    return result.passes() ? 0 : 1;
}

int cmd_export(const PipelineConfig& config, std::ostream& out) {
    SpacePtr space = resolve_space(config.space);
    ArtifactPaths paths = paths_under(config.out_dir);
    CoverTower tower = text_to_tower(read_text_file(paths.tower), space);
    EmbeddingForest forest = build_forest(tower);
    if (config.format != "native" && config.format != "dot" && config.format != "both")
        throw ParseError("unknown export format '" + config.format + "'");
    if (config.format != "dot") {
        write_text_file(paths.forest, forest_to_text(forest));
        out << "forest written to " << paths.forest << "\n";
    }
    if (config.format != "native") {
        write_text_file(paths.dot, forest_to_dot(forest));
        out << "forest written to " << paths.dot << "\n";
    }
    return 0;
}

int cmd_report(const PipelineConfig& config, std::ostream& out) {
    LoadedArtifacts artifacts = load_artifacts(config);
    PairSpec spec = resolve_pairs(config.pairs, *artifacts.space, config.seed);
    VerificationResult result =
        run_verification(artifacts.tower, artifacts.forest, artifacts.map, spec);
    ArtifactPaths paths = paths_under(config.out_dir);
    write_report_files(paths, result, artifacts, spec);
    out << report_to_text(result);
    out << "report written to " << paths.report << "\n";
    out << "pair table written to " << paths.pairs_tsv << "\n";
    return result.passes() ? 0 : 1;
}

int run_command(const std::string& command, const PipelineConfig& config, std::ostream& out) {
    try {
        if (command == "validate") return cmd_validate(config, out);
        if (command == "build") return cmd_build(config, out);
        if (command == "verify") return cmd_verify(config, out);
        if (command == "export") return cmd_export(config, out);
        if (command == "report") return cmd_report(config, out);
        throw ParseError("unknown command '" + command + "'");
    } catch (const ParseError& e) {
        out << "error: " << e.what() << "\n";
        return 2;
    } catch (const NonMonotoneControlFunction& e) {
        out << "error: " << e.what() << "\n";
        return 2;
    } catch (const MetricError& e) {
        out << "certificate failure: " << e.what() << "\n";
        return 1;
    } catch (const CoverError& e) {
        out << "certificate failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        out << "unexpected failure: " << e.what() << "\n";
        return 3;
    }
}

} // namespace treecover
