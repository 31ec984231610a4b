// Scale bookkeeping for cover towers.  A profile owns the declared control
// function of the generator in use and derives from it the inflated control
//   f(x) = control(3x) + 3x
// and the level scales
//   g(0) = base_scale,   g(k) = growth_constant * f(g(k-1)),
// which grow fast enough (with the default constants) for the absorption
// construction to stay coherent.
#pragma once

#include "treecover/rational.hpp"

#include <deque>
#include <stdexcept>
#include <variant>
#include <vector>

namespace treecover {

struct NonMonotoneControlFunction : std::runtime_error {
    explicit NonMonotoneControlFunction(const std::string& what) : std::runtime_error(what) {}
};

// control(r) = slope * r + offset.
struct LinearControl {
    Rational slope;
    Rational offset;
};

// Right-continuous step table: control(r) is the value at the largest grid
// point <= r, clamped to the ends of the table.
struct StepTableControl {
    std::vector<std::pair<Rational, Rational>> steps; // (argument, value), strictly increasing args
};

using ControlForm = std::variant<LinearControl, StepTableControl>;

class GrowthProfile {
public:
    GrowthProfile(ControlForm control, Rational growth_constant, Rational base_scale);

    static GrowthProfile defaults() {
        return GrowthProfile(LinearControl{2, 0}, Rational(100), Rational(2));
    }

    Rational control(const Rational& r) const;          // declared f'
    Rational inflated_control(const Rational& x) const; // f(x) = f'(3x) + 3x, requires x > 0

    // g(k); memoized, and verified non-decreasing as it extends.  The deque
    // keeps earlier references valid while the memo grows.  Not safe for
    // concurrent first-time evaluation.
    const Rational& level_scale(std::size_t k) const;

    // f(g(k)), memoized the same way.  Tower construction consults this bound
    // at every level, and the values are large enough that recomputing them
    // is the dominant cost if done per call.
    const Rational& inflated_at(std::size_t k) const;

    const ControlForm& control_form() const { return form_; }
    const Rational& growth_constant() const { return growth_constant_; }
    const Rational& base_scale() const { return base_scale_; }

private:
    ControlForm form_;
    Rational growth_constant_;
    Rational base_scale_;
    mutable std::deque<Rational> scales_;
    mutable std::deque<Rational> inflated_;
};

} // namespace treecover
