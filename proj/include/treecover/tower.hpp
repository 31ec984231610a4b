// Towers of coherent covers, one per scale level.  Level k starts from the
// generator's cover at scale g(k) + 2k, thickened by k so that every k-ball
// around a point sits inside some element, recolored so the ball around the
// basepoint lands in color k mod (number of colors), and finally run through
// the absorption induction: working down from level k-1 to 0, every lower
// element of the same color that comes within f(g(i)) of the growing set is
// swallowed together with its i-neighborhood.  The result is certified, never
// assumed: disjointness at (9/10) g(k), diameters at 2 f(g(k)), and the two
// structural properties the tree construction relies on.
#pragma once

#include "treecover/cover.hpp"
#include "treecover/growth.hpp"

#include <optional>
#include <vector>

namespace treecover {

struct DiameterBudgetExceeded : CoverError {
    std::size_t level;
    DiameterBudgetExceeded(std::size_t level_, const Rational& declared, const Rational& budget)
        : CoverError("level " + std::to_string(level_) + ": declared diameter " +
                     format_rational(declared) + " exceeds budget " + format_rational(budget)),
          level(level_) {}
};

struct LebesgueWitnessMissing : CoverError {
    std::size_t level;
    std::uint32_t basepoint;
    LebesgueWitnessMissing(std::size_t level_, std::uint32_t basepoint_)
        : CoverError("level " + std::to_string(level_) + ": no element contains the " +
                     std::to_string(level_) + "-ball around basepoint " +
                     std::to_string(basepoint_)),
          level(level_), basepoint(basepoint_) {}
};

struct CoherenceViolation : CoverError {
    std::size_t level;
    CoverCertificate certificate;
    CoherenceViolation(std::size_t level_, CoverCertificate cert);
};

// One downward step of the absorption induction on a single element.
struct AbsorptionStep {
    std::size_t lower_level;
    std::vector<std::uint32_t> absorbed; // element indices at lower_level, same color
    PointSubset before;                  // W before this step
    PointSubset after;                   // W after absorbing the i-neighborhoods
};

struct AbsorptionTrace {
    std::uint32_t color;
    std::uint32_t element;
    std::vector<AbsorptionStep> steps; // ordered lower_level = k-1, ..., 0
};

struct TowerLevel {
    Rational scale;                       // g(k)
    ColoredCover cover;                   // absorbed, claims ((9/10) g(k), 2 f(g(k)))
    std::vector<std::uint32_t> renumbering; // renumbering[c] = generator color placed at c
    std::uint32_t basepoint_witness;      // element of color k mod C containing B_k(basepoint)
};

class CoverTower {
public:
    CoverTower(SpacePtr space, GrowthProfile profile, std::uint32_t num_colors,
               std::uint32_t basepoint, std::vector<TowerLevel> levels);

    const SpacePtr& space_ptr() const { return space_; }
    const FiniteMetricSpace& space() const { return *space_; }
    const GrowthProfile& profile() const { return profile_; }
    std::uint32_t num_colors() const { return num_colors_; }
    std::uint32_t basepoint() const { return basepoint_; }
    std::size_t height() const { return levels_.size() - 1; }
    const std::vector<TowerLevel>& levels() const { return levels_; }
    const TowerLevel& level(std::size_t k) const { return levels_[k]; }

    // Largest level whose cover still has at least two elements (0 if none):
    // above it every level is a single whole-space element in one color.
    std::size_t effective_height() const;

private:
    SpacePtr space_;
    GrowthProfile profile_;
    std::uint32_t num_colors_;
    std::uint32_t basepoint_;
    std::vector<TowerLevel> levels_;
};

// ceil(diameter) + num_colors - 1: past ceil(diameter) every ball around the
// basepoint is the whole space, and the extra levels let each color take its
// turn as the designated one.
std::size_t tower_height(const FiniteMetricSpace& space, std::uint32_t num_colors);

// Generator cover at scale g(k) + 2k thickened by k.  Checks the declared
// control against the budget f(g(k)) before generating, and certifies the
// result at (g(k), f(g(k))).
ColoredCover raw_level_cover(const CoverGenerator& generator, const GrowthProfile& profile,
                             std::size_t level);

struct RenumberResult {
    ColoredCover cover;
    std::vector<std::uint32_t> renumbering; // renumbering[c] = input color placed at c
    std::uint32_t witness; // element of color level mod C containing the basepoint ball
};

// Single swap bringing a color whose element contains B_level(basepoint) to
// color level mod C.  Identity when the target color already qualifies,
// otherwise the lowest qualifying color is swapped in.
RenumberResult renumber_for_basepoint(const ColoredCover& cover, std::size_t level,
                                      std::uint32_t basepoint);

struct AbsorbOptions {
    bool record_traces = true;
};

struct AbsorbResult {
    ColoredCover cover;
    std::vector<AbsorptionTrace> traces; // empty when not recorded
};

// The absorption induction for one level.  lower_levels[i] is the finished
// cover of level i; the raw cover is at level lower_levels.size().  Throws
// CoherenceViolation when the absorbed cover fails its certificate at scale
// (9/10) g(k) and diameter bound 2 f(g(k)).
AbsorbResult absorb_level(const ColoredCover& raw, const std::vector<const ColoredCover*>& lower_levels,
                          const GrowthProfile& profile, const AbsorbOptions& options = {});

// Full pipeline: raw cover, renumbering and absorption for every level
// 0..tower_height.
CoverTower build_tower(const CoverGenerator& generator, const GrowthProfile& profile,
                       std::uint32_t basepoint);

struct CoherenceWitness {
    std::uint32_t color;
    std::size_t upper_level;
    std::uint32_t upper_element;
    std::size_t lower_level;
    std::uint32_t lower_element;
    Rational distance;           // d(U, V), which was <= lower_level
    std::uint32_t escaping_point; // point of V^l outside U
};

struct CoherenceCertificate {
    bool passes = false;
    std::size_t pairs_checked = 0;
    std::vector<CoherenceWitness> violations;
};

// Property: for same-colored U at level k and V at level l < k with
// d(U, V) <= l, the l-neighborhood of V lies inside U.  Exhaustive.
CoherenceCertificate certify_coherence(const CoverTower& tower);

struct BasepointCoverageCertificate {
    bool passes = false;
    // witness element index per level (color k mod C), absent on failure.
    std::vector<std::optional<std::uint32_t>> witness_per_level;
    std::vector<std::size_t> failing_levels;
};

// Property: at every level k some element of color k mod C contains the
// closed k-ball around the basepoint.
BasepointCoverageCertificate certify_basepoint_coverage(const CoverTower& tower);

} // namespace treecover
