#include "treecover/growth.hpp"

#include <algorithm>

namespace treecover {

GrowthProfile::GrowthProfile(ControlForm control, Rational growth_constant, Rational base_scale)
    : form_(std::move(control)), growth_constant_(std::move(growth_constant)),
      base_scale_(std::move(base_scale)) {
    if (growth_constant_ <= 0)
        throw std::invalid_argument("growth constant must be positive");
    if (base_scale_ <= 0) throw std::invalid_argument("base scale must be positive");
    if (const auto* linear = std::get_if<LinearControl>(&form_)) {
        if (linear->slope < 0)
            throw NonMonotoneControlFunction("linear control with negative slope " +
                                             format_rational(linear->slope));
        if (linear->offset < 0)
            throw std::invalid_argument("control function must be non-negative");
    } else {
        const auto& steps = std::get<StepTableControl>(form_).steps;
        if (steps.empty()) throw std::invalid_argument("empty control table");
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i].second < 0)
                throw std::invalid_argument("control function must be non-negative");
            if (i > 0) {
                if (steps[i].first <= steps[i - 1].first)
                    throw std::invalid_argument("control table arguments must increase");
                if (steps[i].second < steps[i - 1].second)
                    throw NonMonotoneControlFunction(
                        "control table decreases at argument " + format_rational(steps[i].first));
            }
        }
    }
}

Rational GrowthProfile::control(const Rational& r) const {
    if (const auto* linear = std::get_if<LinearControl>(&form_))
        return linear->slope * r + linear->offset;
    const auto& steps = std::get<StepTableControl>(form_).steps;
    // Value at the largest grid argument <= r; below the grid use the first
    // entry, beyond it the last.
    auto it = std::upper_bound(steps.begin(), steps.end(), r,
                               [](const Rational& v, const auto& s) { return v < s.first; });
    if (it == steps.begin()) return steps.front().second;
    return std::prev(it)->second;
}

Rational GrowthProfile::inflated_control(const Rational& x) const {
    if (x <= 0) throw std::invalid_argument("inflated control requires a positive argument");
    // With an integer linear control and an integer argument, stay in cpp_int:
    // at deep levels the scales run to thousands of digits, where every
    // cpp_rational operator pays a re-normalization far costlier than the
    // arithmetic itself.
    if (const auto* linear = std::get_if<LinearControl>(&form_)) {
        if (is_integer(x) && is_integer(linear->slope) && is_integer(linear->offset)) {
            BigInt x3 = 3 * numerator(x);
            return Rational(numerator(linear->slope) * x3 + numerator(linear->offset) + x3);
        }
    }
    return control(3 * x) + 3 * x;
}

const Rational& GrowthProfile::level_scale(std::size_t k) const {
    if (scales_.empty()) scales_.push_back(base_scale_);
    while (scales_.size() <= k) {
        Rational inflated = inflated_control(scales_.back());
        Rational next = (is_integer(growth_constant_) && is_integer(inflated))
                            ? Rational(numerator(growth_constant_) * numerator(inflated))
                            : growth_constant_ * inflated;
        if (next < scales_.back())
            throw NonMonotoneControlFunction("level scales decrease at level " +
                                             std::to_string(scales_.size()));
        scales_.push_back(std::move(next));
    }
    return scales_[k];
}

const Rational& GrowthProfile::inflated_at(std::size_t k) const {
    level_scale(k);
    while (inflated_.size() <= k)
        inflated_.push_back(inflated_control(scales_[inflated_.size()]));
    return inflated_[k];
}

} // namespace treecover
