// Colored covers of a finite metric space and their certificates.
//
// A cover assigns each of its elements to one of a fixed number of colors and
// claims two quantities: a scale (elements of one color are pairwise at least
// that far apart) and a diameter bound.  check_cover measures both claims and
// reports violations instead of trusting them.
#pragma once

#include "treecover/metric_space.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace treecover {

struct CoverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionViolated : CoverError {
    using CoverError::CoverError;
};

struct MissingCoordinates : CoverError {
    MissingCoordinates() : CoverError("space carries no integer line coordinates") {}
};

class ColoredCover {
public:
    // Elements per color; empty colors are allowed (they occur at extreme
    // scales), empty elements are not.
    ColoredCover(SpacePtr space, std::vector<std::vector<PointSubset>> colors, Rational scale,
                 Rational diameter_bound);

    const SpacePtr& space_ptr() const { return space_; }
    const FiniteMetricSpace& space() const { return *space_; }
    std::size_t num_colors() const { return colors_.size(); }
    const std::vector<std::vector<PointSubset>>& colors() const { return colors_; }
    const std::vector<PointSubset>& color(std::size_t i) const { return colors_[i]; }
    const Rational& scale() const { return scale_; }
    const Rational& diameter_bound() const { return diameter_bound_; }

    std::size_t total_elements() const;
    bool operator==(const ColoredCover& other) const;

private:
    SpacePtr space_;
    std::vector<std::vector<PointSubset>> colors_;
    Rational scale_;
    Rational diameter_bound_;
};

struct GapViolation {
    std::uint32_t color, element_a, element_b;
    Rational gap;
};

struct DiameterViolation {
    std::uint32_t color, element;
    Rational diameter;
};

struct CoverCertificate {
    bool covers_space = false;
    std::vector<std::uint32_t> uncovered_points;
    // One entry per color: smallest pairwise gap, absent when the color has
    // fewer than two elements.
    std::vector<std::optional<Rational>> min_gap_per_color;
    std::vector<GapViolation> gap_violations;
    Rational max_element_diameter = 0;
    std::vector<DiameterViolation> diameter_violations;
    Rational checked_scale = 0;
    Rational checked_diameter_bound = 0;

    bool passes() const {
        return covers_space && gap_violations.empty() && diameter_violations.empty();
    }
};

// Measures the cover against its own claims.
CoverCertificate check_cover(const ColoredCover& cover);

// Measures the cover against externally imposed claims.
CoverCertificate check_cover(const ColoredCover& cover, const Rational& scale,
                             const Rational& diameter_bound);

// Replaces each element U by its closed k-neighborhood.  Input must pass
// check_cover at its claimed scale r + 2k; the result claims scale r and
// diameter bound D + 2k, and every point x gains an element containing the
// whole ball B_k(x).
ColoredCover lebesgue_thicken(const ColoredCover& cover, const Rational& k);

struct LebesgueCertificate {
    bool passes = false;
    Rational radius = 0;
    std::vector<std::uint32_t> failing_points;
};

// Does some element contain the closed k-ball of every point?
LebesgueCertificate check_lebesgue(const ColoredCover& cover, const Rational& k);

// Two-colored cover of an integer-line space: color c takes the points with
// coordinate in [4rm + 2rc, 4rm + 2rc + 2r) for integer m.  Each element has
// diameter < 2r and same-colored elements are at least 2r apart.
ColoredCover interval_cover_1d(const SpacePtr& space, const Rational& r);

// Pairwise products of the factor covers' elements on a declared product
// space; color (i, i') becomes index i * cy_colors + i'.
ColoredCover product_cover(const ColoredCover& cx, const ColoredCover& cy, const SpacePtr& product_space);

// Single-color partition: points are merged into the first cluster closer
// than r in index order, then clusters are merged until all pairwise gaps
// reach r.  Deterministic.
ColoredCover greedy_cover(const SpacePtr& space, const Rational& r);

// A cover generator bound to one space: produces a cover at any requested
// scale and declares a non-decreasing diameter bound for its output.
class CoverGenerator {
public:
    virtual ~CoverGenerator() = default;
    virtual ColoredCover generate(const Rational& scale) const = 0;
    // Declared control: elements of generate(r) have diameter <= control(r).
    virtual Rational control(const Rational& r) const = 0;
    virtual std::uint32_t colors() const = 0;
    virtual std::string describe() const = 0;
    virtual const SpacePtr& space() const = 0;
};

// interval | product | greedy; product requires a space with product
// structure, interval requires line coordinates.
std::unique_ptr<CoverGenerator> make_generator(const std::string& name, const SpacePtr& space);

// Measured control function: for each scale, the largest element diameter the
// generator actually produced, monotonized upward so the table never
// decreases.
std::vector<std::pair<Rational, Rational>> empirical_control_function(
    const CoverGenerator& generator, const std::vector<Rational>& scales);

} // namespace treecover
