#pragma once

#include "treecover/cover.hpp"
#include "treecover/fixtures.hpp"
#include "treecover/serialize.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace treecover {

struct PipelineConfig {
    std::string space = "path:20";
    std::string generator = "auto";
    std::string control = "linear:2:0"; // linear:a:b | const:b | empirical:r1,r2,...
    std::string growth_constant = "100";
    std::optional<std::uint32_t> colors; // must match the generator when given
    std::uint32_t basepoint = 0;
    std::string pairs = "auto"; // auto | exhaustive | sample:N
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::string format = "both"; // export: native | dot | both
};

SpacePtr resolve_space(const std::string& descriptor);
GrowthProfile resolve_profile(const PipelineConfig& config, const CoverGenerator& generator);
PairSpec resolve_pairs(const std::string& text, const FiniteMetricSpace& space,
                       std::uint64_t seed);

// Exit status: 0 all checks pass, 1 a certificate or verification fails,
// 2 unusable input or configuration, 3 unexpected failure.
int cmd_validate(const PipelineConfig& config, std::ostream& out);
int cmd_build(const PipelineConfig& config, std::ostream& out);
int cmd_verify(const PipelineConfig& config, std::ostream& out);
int cmd_export(const PipelineConfig& config, std::ostream& out);
int cmd_report(const PipelineConfig& config, std::ostream& out);

int run_command(const std::string& command, const PipelineConfig& config, std::ostream& out);

} // namespace treecover
