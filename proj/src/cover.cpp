#include "treecover/cover.hpp"

#include <algorithm>
#include <map>

namespace treecover {

ColoredCover::ColoredCover(SpacePtr space, std::vector<std::vector<PointSubset>> colors,
                           Rational scale, Rational diameter_bound)
    : space_(std::move(space)), colors_(std::move(colors)), scale_(std::move(scale)),
      diameter_bound_(std::move(diameter_bound)) {
    for (const auto& color : colors_)
        for (const auto& element : color) {
            if (element.empty()) throw EmptySubset();
            if (element.space() != space_.get()) throw SpaceMismatch();
        }
}

std::size_t ColoredCover::total_elements() const {
    std::size_t total = 0;
    for (const auto& color : colors_) total += color.size();
    return total;
}

bool ColoredCover::operator==(const ColoredCover& other) const {
    return space_.get() == other.space_.get() && colors_ == other.colors_ &&
           scale_ == other.scale_ && diameter_bound_ == other.diameter_bound_;
}

CoverCertificate check_cover(const ColoredCover& cover) {
    return check_cover(cover, cover.scale(), cover.diameter_bound());
}

CoverCertificate check_cover(const ColoredCover& cover, const Rational& scale,
                             const Rational& diameter_bound) {
    const FiniteMetricSpace& space = cover.space();
    const std::size_t n = space.size();
    CoverCertificate cert;
    cert.checked_scale = scale;
    cert.checked_diameter_bound = diameter_bound;

    std::vector<char> covered(n, 0);
    for (const auto& color : cover.colors())
        for (const auto& element : color)
            for (std::uint32_t p : element.members()) covered[p] = 1;
    for (std::uint32_t p = 0; p < n; ++p)
        if (!covered[p]) cert.uncovered_points.push_back(p);
    cert.covers_space = cert.uncovered_points.empty();

    cert.min_gap_per_color.resize(cover.num_colors());
    for (std::uint32_t c = 0; c < cover.num_colors(); ++c) {
        const auto& elements = cover.color(c);
        if (elements.size() < 2) continue;
        // Min cross-element gap via one scan over point pairs of this color;
        // avoids quadratic-in-|element| set_distance calls on large elements.
        std::vector<std::int32_t> owner(n, -1);
        for (std::uint32_t e = 0; e < elements.size(); ++e)
            for (std::uint32_t p : elements[e].members()) {
                if (owner[p] >= 0) {
                    // Overlapping same-colored elements: gap zero.
                    cert.min_gap_per_color[c] = Rational(0);
                    if (Rational(0) < scale)
                        cert.gap_violations.push_back(
                            {c, static_cast<std::uint32_t>(owner[p]), e, Rational(0)});
                } else {
                    owner[p] = static_cast<std::int32_t>(e);
                }
            }
        std::uint32_t best_rank = std::numeric_limits<std::uint32_t>::max();
        std::uint32_t best_p = 0, best_q = 0;
        for (std::uint32_t p = 0; p < n; ++p) {
            if (owner[p] < 0) continue;
            for (std::uint32_t q = p + 1; q < n; ++q) {
                if (owner[q] < 0 || owner[q] == owner[p]) continue;
                std::uint32_t r = space.dist_rank(p, q);
                if (r < best_rank) {
                    best_rank = r;
                    best_p = p;
                    best_q = q;
                }
            }
        }
        if (best_rank != std::numeric_limits<std::uint32_t>::max()) {
            Rational gap = space.distance_values()[best_rank];
            if (!cert.min_gap_per_color[c] || gap < *cert.min_gap_per_color[c])
                cert.min_gap_per_color[c] = gap;
            if (gap < scale)
                cert.gap_violations.push_back({c, static_cast<std::uint32_t>(owner[best_p]),
                                               static_cast<std::uint32_t>(owner[best_q]), gap});
        }
    }

    for (std::uint32_t c = 0; c < cover.num_colors(); ++c) {
        const auto& elements = cover.color(c);
        for (std::uint32_t e = 0; e < elements.size(); ++e) {
            Rational d = diameter(elements[e]);
            if (d > cert.max_element_diameter) cert.max_element_diameter = d;
            if (d > diameter_bound) cert.diameter_violations.push_back({c, e, d});
        }
    }
    return cert;
}

ColoredCover lebesgue_thicken(const ColoredCover& cover, const Rational& k) {
    if (k < 0) throw PreconditionViolated("negative thickening radius");
    if (cover.scale() < 2 * k)
        throw PreconditionViolated("thickening radius too large for claimed scale " +
                                   format_rational(cover.scale()));
    // Only the claims that determine the output's claims gate the operation.
    // Coverage is preserved either way (elements only grow), so a partial
    // family may be thickened as-is.
    CoverCertificate pre = check_cover(cover);
    if (!pre.gap_violations.empty() || !pre.diameter_violations.empty())
        throw PreconditionViolated("input cover fails its own certificate at scale " +
                                   format_rational(cover.scale()));
    std::vector<std::vector<PointSubset>> out(cover.num_colors());
    for (std::uint32_t c = 0; c < cover.num_colors(); ++c)
        for (const auto& element : cover.color(c)) out[c].push_back(neighborhood(element, k));
    return ColoredCover(cover.space_ptr(), std::move(out),
                        add_scaled_rational(cover.scale(), -2, k),
                        add_scaled_rational(cover.diameter_bound(), 2, k));
}

LebesgueCertificate check_lebesgue(const ColoredCover& cover, const Rational& k) {
    const FiniteMetricSpace& space = cover.space();
    LebesgueCertificate cert;
    cert.radius = k;
    for (std::uint32_t x = 0; x < space.size(); ++x) {
        PointSubset bx = ball(space, x, k);
        bool held = false;
        // Only elements containing x can contain its ball.
        for (const auto& color : cover.colors()) {
            for (const auto& element : color) {
                if (!element.contains(x)) continue;
                if (bx.is_subset_of(element)) {
                    held = true;
                    break;
                }
            }
            if (held) break;
        }
        if (!held) cert.failing_points.push_back(x);
    }
    cert.passes = cert.failing_points.empty();
    return cert;
}

ColoredCover interval_cover_1d(const SpacePtr& space, const Rational& r) {
    if (!space->line_coordinates()) throw MissingCoordinates();
    if (r <= 0) throw PreconditionViolated("interval cover needs a positive scale");
    const auto& coords = *space->line_coordinates();
    // Window of width 2r starting at 2r*u; u even -> color 0, u odd -> color 1.
    std::map<BigInt, std::vector<std::uint32_t>> windows;
    const Rational width = mul_add_rational(r, 2, 0);
    // floor(x / width) without building the normalized quotient, which would
    // run a bignum gcd per point once the scales are huge.
    auto window_of = [&width](long long x) {
        BigInt n = BigInt(x) * denominator(width);
        const BigInt& d = numerator(width);
        BigInt quot = n / d;
        if (n % d != 0 && n < 0) --quot;
        return quot;
    };
    // u is monotone in the coordinate, so when the two extremes share a
    // window everything does.
    auto [lo, hi] = std::minmax_element(coords.begin(), coords.end());
    BigInt u_lo = window_of(*lo);
    if (u_lo == window_of(*hi)) {
        std::vector<std::uint32_t> everyone(coords.size());
        for (std::uint32_t p = 0; p < coords.size(); ++p) everyone[p] = p;
        windows.emplace(std::move(u_lo), std::move(everyone));
    } else {
        for (std::uint32_t p = 0; p < coords.size(); ++p) windows[window_of(coords[p])].push_back(p);
    }
    std::vector<std::vector<PointSubset>> colors(2);
    for (auto& [u, members] : windows) {
        std::size_t c = (u % 2 == 0) ? 0 : 1;
        colors[c].emplace_back(space.get(), std::move(members));
    }
    return ColoredCover(space, std::move(colors), r, width);
}

ColoredCover product_cover(const ColoredCover& cx, const ColoredCover& cy,
                           const SpacePtr& product_space) {
    const auto& structure = product_space->product_structure();
    if (!structure) throw PreconditionViolated("space carries no product structure");
    if (structure->left.get() != cx.space_ptr().get() ||
        structure->right.get() != cy.space_ptr().get())
        throw SpaceMismatch();
    const std::size_t ny = structure->right->size();
    const std::size_t color_count = cx.num_colors() * cy.num_colors();
    std::vector<std::vector<PointSubset>> colors(color_count);
    for (std::uint32_t i = 0; i < cx.num_colors(); ++i)
        for (std::uint32_t j = 0; j < cy.num_colors(); ++j) {
            auto& bucket = colors[i * cy.num_colors() + j];
            for (const auto& u : cx.color(i))
                for (const auto& v : cy.color(j)) {
                    std::vector<std::uint32_t> members;
                    members.reserve(u.size() * v.size());
                    for (std::uint32_t a : u.members())
                        for (std::uint32_t b : v.members())
                            members.push_back(static_cast<std::uint32_t>(a * ny + b));
                    bucket.emplace_back(product_space.get(), std::move(members));
                }
        }
    Rational scale = std::min(cx.scale(), cy.scale());
    Rational bound = structure->metric == ProductMetric::Sup
                         ? std::max(cx.diameter_bound(), cy.diameter_bound())
                         : cx.diameter_bound() + cy.diameter_bound();
    return ColoredCover(product_space, std::move(colors), std::move(scale), std::move(bound));
}

ColoredCover greedy_cover(const SpacePtr& space, const Rational& r) {
    if (r <= 0) throw PreconditionViolated("greedy cover needs a positive scale");
    const std::uint32_t open_rank = space->rank_of_open_bound(r);
    std::vector<std::vector<std::uint32_t>> clusters;
    for (std::uint32_t p = 0; p < space->size(); ++p) {
        bool placed = false;
        for (auto& cluster : clusters) {
            for (std::uint32_t q : cluster)
                if (space->dist_rank(p, q) < open_rank) {
                    placed = true;
                    break;
                }
            if (placed) {
                cluster.push_back(p);
                break;
            }
        }
        if (!placed) clusters.push_back({p});
    }
    // Merge until every pairwise gap reaches r.
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < clusters.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
                bool close = false;
                for (std::uint32_t p : clusters[i]) {
                    for (std::uint32_t q : clusters[j])
                        if (space->dist_rank(p, q) < open_rank) {
                            close = true;
                            break;
                        }
                    if (close) break;
                }
                if (close) {
                    clusters[i].insert(clusters[i].end(), clusters[j].begin(), clusters[j].end());
                    clusters.erase(clusters.begin() + j);
                    merged = true;
                }
            }
    }
    std::vector<std::vector<PointSubset>> colors(1);
    for (auto& cluster : clusters) colors[0].emplace_back(space.get(), std::move(cluster));
    return ColoredCover(space, std::move(colors), r, space->diameter());
}

namespace {

class IntervalGenerator final : public CoverGenerator {
public:
    explicit IntervalGenerator(SpacePtr space) : space_(std::move(space)) {
        if (!space_->line_coordinates()) throw MissingCoordinates();
    }
    ColoredCover generate(const Rational& scale) const override {
        return interval_cover_1d(space_, scale);
    }
    Rational control(const Rational& r) const override { return mul_add_rational(r, 2, 0); }
    std::uint32_t colors() const override { return 2; }
    std::string describe() const override { return "interval"; }
    const SpacePtr& space() const override { return space_; }

private:
    SpacePtr space_;
};

class ProductGenerator final : public CoverGenerator {
public:
    explicit ProductGenerator(SpacePtr space) : space_(std::move(space)) {
        const auto& structure = space_->product_structure();
        if (!structure) throw PreconditionViolated("space carries no product structure");
        left_ = make_generator("auto", structure->left);
        right_ = make_generator("auto", structure->right);
    }
    ColoredCover generate(const Rational& scale) const override {
        return product_cover(left_->generate(scale), right_->generate(scale), space_);
    }
    Rational control(const Rational& r) const override {
        return space_->product_structure()->metric == ProductMetric::Sup
                   ? std::max(left_->control(r), right_->control(r))
                   : left_->control(r) + right_->control(r);
    }
    std::uint32_t colors() const override { return left_->colors() * right_->colors(); }
    std::string describe() const override {
        return "product(" + left_->describe() + "," + right_->describe() + ")";
    }
    const SpacePtr& space() const override { return space_; }

private:
    SpacePtr space_;
    std::unique_ptr<CoverGenerator> left_, right_;
};

class GreedyGenerator final : public CoverGenerator {
public:
    explicit GreedyGenerator(SpacePtr space) : space_(std::move(space)) {}
    ColoredCover generate(const Rational& scale) const override {
        return greedy_cover(space_, scale);
    }
    // Any subset has diameter at most the space's, and greedy promises nothing
    // tighter: the honest declared control is the constant diameter.
    Rational control(const Rational&) const override { return space_->diameter(); }
    std::uint32_t colors() const override { return 1; }
    std::string describe() const override { return "greedy"; }
    const SpacePtr& space() const override { return space_; }

private:
    SpacePtr space_;
};

} // namespace

std::unique_ptr<CoverGenerator> make_generator(const std::string& name, const SpacePtr& space) {
    if (name == "interval") return std::make_unique<IntervalGenerator>(space);
    if (name == "product") return std::make_unique<ProductGenerator>(space);
    if (name == "greedy") return std::make_unique<GreedyGenerator>(space);
    if (name == "auto") {
        if (space->product_structure()) return std::make_unique<ProductGenerator>(space);
        if (space->line_coordinates()) return std::make_unique<IntervalGenerator>(space);
        return std::make_unique<GreedyGenerator>(space);
    }
    throw CoverError("unknown generator '" + name + "'");
}

std::vector<std::pair<Rational, Rational>> empirical_control_function(
    const CoverGenerator& generator, const std::vector<Rational>& scales) {
    std::vector<Rational> sorted(scales);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::pair<Rational, Rational>> table;
    Rational running_max = 0;
    for (const Rational& r : sorted) {
        ColoredCover cover = generator.generate(r);
        Rational worst = 0;
        for (const auto& color : cover.colors())
            for (const auto& element : color) worst = std::max(worst, diameter(element));
        running_max = std::max(running_max, worst);
        table.emplace_back(r, running_max);
    }
    return table;
}

} // namespace treecover
