#include "treecover/tower.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <sstream>

namespace treecover {

namespace {

using Bits = boost::dynamic_bitset<>;

Bits bits_of(const PointSubset& subset, std::size_t n) {
    Bits bits(n);
    for (std::uint32_t p : subset.members()) bits.set(p);
    return bits;
}

PointSubset subset_of(const FiniteMetricSpace* space, const Bits& bits) {
    std::vector<std::uint32_t> members;
    members.reserve(bits.count());
    for (auto p = bits.find_first(); p != Bits::npos; p = bits.find_next(p))
        members.push_back(static_cast<std::uint32_t>(p));
    return PointSubset(space, std::move(members));
}

struct ElementCache {
    Bits members;
    Bits open_zone; // points x with d(x, V) <  f(g(level))
    Bits reach;     // points x with d(x, V) <= level
};

using LevelCache = std::vector<std::vector<ElementCache>>; // per color, per element

LevelCache build_level_cache(const ColoredCover& cover, std::size_t level,
                             const GrowthProfile& profile) {
    const FiniteMetricSpace& space = cover.space();
    const std::size_t n = space.size();
    const std::uint32_t open_rank =
        space.rank_of_open_bound(profile.inflated_at(level));
    const auto closed_rank = space.rank_of_closed_bound(Rational(level));
    const std::uint32_t closed_limit = closed_rank ? *closed_rank + 1 : 0;
    const std::uint32_t stop_rank = std::min(open_rank, closed_limit);

    LevelCache cache(cover.num_colors());
    for (std::uint32_t c = 0; c < cover.num_colors(); ++c) {
        cache[c].reserve(cover.color(c).size());
        for (const PointSubset& v : cover.color(c)) {
            ElementCache entry{Bits(n), Bits(n), Bits(n)};
            entry.members = bits_of(v, n);
            if (v.size() == n) {
                entry.open_zone.set();
                entry.reach.set();
            } else {
                for (std::uint32_t x = 0; x < n; ++x) {
                    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
                    for (std::uint32_t p : v.members()) {
                        std::uint32_t r = space.dist_rank(x, p);
                        if (r < best) {
                            best = r;
                            if (best < stop_rank) break;
                        }
                    }
                    if (best < open_rank) entry.open_zone.set(x);
                    if (closed_rank && best <= *closed_rank) entry.reach.set(x);
                }
            }
            cache[c].push_back(std::move(entry));
        }
    }
    return cache;
}

// Shared absorption core; build_tower keeps one engine alive so lower-level
// caches are computed exactly once.
struct AbsorptionEngine {
    const FiniteMetricSpace& space;
    const GrowthProfile& profile;
    std::vector<LevelCache> caches;

    void push_level(const ColoredCover& cover) {
        caches.push_back(build_level_cache(cover, caches.size(), profile));
    }

    AbsorbResult absorb(const ColoredCover& raw, const AbsorbOptions& options) {
        const std::size_t n = space.size();
        const std::size_t k = caches.size();
        std::vector<std::vector<PointSubset>> out(raw.num_colors());
        std::vector<AbsorptionTrace> traces;
        for (std::uint32_t c = 0; c < raw.num_colors(); ++c) {
            for (std::uint32_t e = 0; e < raw.color(c).size(); ++e) {
                Bits w = bits_of(raw.color(c)[e], n);
                AbsorptionTrace trace{c, e, {}};
                for (std::size_t i = k; i-- > 0;) {
                    if (caches[i].size() != raw.num_colors())
                        throw PreconditionViolated("lower level has mismatched color count");
                    const auto& lower_elements = caches[i][c];
                    std::vector<std::uint32_t> absorbed;
                    for (std::uint32_t v = 0; v < lower_elements.size(); ++v)
                        if (lower_elements[v].open_zone.intersects(w)) absorbed.push_back(v);
                    AbsorptionStep step;
                    if (options.record_traces) {
                        step.lower_level = i;
                        step.absorbed = absorbed;
                        step.before = subset_of(&space, w);
                    }
                    for (std::uint32_t v : absorbed) w |= lower_elements[v].reach;
                    if (options.record_traces) {
                        step.after = subset_of(&space, w);
                        trace.steps.push_back(std::move(step));
                    }
                }
                out[c].push_back(subset_of(&space, w));
                if (options.record_traces) traces.push_back(std::move(trace));
            }
        }
        Rational scale = mul_div_rational(profile.level_scale(k), 9, 10);
        Rational bound = mul_add_rational(profile.inflated_at(k), 2, 0);
        ColoredCover cover(raw.space_ptr(), std::move(out), std::move(scale), std::move(bound));
        CoverCertificate cert = check_cover(cover);
        if (!cert.passes()) throw CoherenceViolation(k, std::move(cert));
        return AbsorbResult{std::move(cover), std::move(traces)};
    }
};

std::string summarize_failure(const CoverCertificate& cert) {
    std::ostringstream out;
    if (!cert.covers_space) out << " uncovered=" << cert.uncovered_points.size();
    if (!cert.gap_violations.empty()) {
        const auto& g = cert.gap_violations.front();
        out << " gap(color " << g.color << ", elements " << g.element_a << "," << g.element_b
            << ") = " << format_rational(g.gap) << " < " << format_rational(cert.checked_scale);
    }
    if (!cert.diameter_violations.empty()) {
        const auto& d = cert.diameter_violations.front();
        out << " diameter(color " << d.color << ", element " << d.element
            << ") = " << format_rational(d.diameter) << " > "
            << format_rational(cert.checked_diameter_bound);
    }
    return out.str();
}

} // namespace

CoherenceViolation::CoherenceViolation(std::size_t level_, CoverCertificate cert)
    : CoverError("absorbed cover fails its certificate at level " + std::to_string(level_) + ":" +
                 summarize_failure(cert)),
      level(level_), certificate(std::move(cert)) {}

CoverTower::CoverTower(SpacePtr space, GrowthProfile profile, std::uint32_t num_colors,
                       std::uint32_t basepoint, std::vector<TowerLevel> levels)
    : space_(std::move(space)), profile_(std::move(profile)), num_colors_(num_colors),
      basepoint_(basepoint), levels_(std::move(levels)) {
    if (levels_.empty()) throw CoverError("tower needs at least one level");
    if (basepoint_ >= space_->size()) throw CoverError("basepoint out of range");
    for (const auto& level : levels_)
        if (level.cover.num_colors() != num_colors_)
            throw CoverError("tower level has mismatched color count");
}

std::size_t CoverTower::effective_height() const {
    for (std::size_t k = levels_.size(); k-- > 0;)
        if (levels_[k].cover.total_elements() >= 2) return k;
    return 0;
}

std::size_t tower_height(const FiniteMetricSpace& space, std::uint32_t num_colors) {
    if (num_colors == 0) throw CoverError("tower needs at least one color");
    BigInt k0 = ceil_rational(space.diameter());
    return static_cast<std::size_t>(to_int64(k0)) + num_colors - 1;
}

ColoredCover raw_level_cover(const CoverGenerator& generator, const GrowthProfile& profile,
                             std::size_t level) {
    const Rational& g = profile.level_scale(level);
    const Rational scale = mul_add_rational(g, 1, 2 * static_cast<long>(level));
    const Rational declared =
        mul_add_rational(generator.control(scale), 1, 2 * static_cast<long>(level));
    const Rational& budget = profile.inflated_at(level);
    if (declared > budget) throw DiameterBudgetExceeded(level, declared, budget);
    ColoredCover cover = generator.generate(scale);
    ColoredCover thickened = lebesgue_thicken(cover, Rational(static_cast<long>(level)));
    CoverCertificate post = check_cover(thickened, g, budget);
    if (!post.passes())
        throw CoverError("generator output fails its contract at level " + std::to_string(level) +
                         ":" + summarize_failure(post));
    return thickened;
}

RenumberResult renumber_for_basepoint(const ColoredCover& cover, std::size_t level,
                                      std::uint32_t basepoint) {
    const FiniteMetricSpace& space = cover.space();
    if (basepoint >= space.size()) throw CoverError("basepoint out of range");
    const std::uint32_t num_colors = static_cast<std::uint32_t>(cover.num_colors());
    const std::uint32_t target = static_cast<std::uint32_t>(level % num_colors);
    PointSubset basepoint_ball = ball(space, basepoint, Rational(static_cast<long>(level)));

    auto find_witness = [&](std::uint32_t color) -> std::optional<std::uint32_t> {
        const auto& elements = cover.color(color);
        for (std::uint32_t e = 0; e < elements.size(); ++e) {
            if (!elements[e].contains(basepoint)) continue;
            if (basepoint_ball.is_subset_of(elements[e])) return e;
        }
        return std::nullopt;
    };

    std::vector<std::uint32_t> renumbering(num_colors);
    for (std::uint32_t c = 0; c < num_colors; ++c) renumbering[c] = c;

    std::optional<std::uint32_t> witness = find_witness(target);
    if (!witness) {
        for (std::uint32_t c = 0; c < num_colors && !witness; ++c) {
            if (c == target) continue;
            if (auto w = find_witness(c)) {
                witness = w;
                std::swap(renumbering[target], renumbering[c]);
            }
        }
    }
    if (!witness) throw LebesgueWitnessMissing(level, basepoint);

    std::vector<std::vector<PointSubset>> colors(num_colors);
    for (std::uint32_t c = 0; c < num_colors; ++c) colors[c] = cover.color(renumbering[c]);
    return RenumberResult{
        ColoredCover(cover.space_ptr(), std::move(colors), cover.scale(), cover.diameter_bound()),
        std::move(renumbering), *witness};
}

AbsorbResult absorb_level(const ColoredCover& raw, const std::vector<const ColoredCover*>& lower_levels,
                          const GrowthProfile& profile, const AbsorbOptions& options) {
    AbsorptionEngine engine{raw.space(), profile, {}};
    for (const ColoredCover* lower : lower_levels) {
        if (lower->space_ptr().get() != raw.space_ptr().get()) throw SpaceMismatch();
        engine.push_level(*lower);
    }
    return engine.absorb(raw, options);
}

CoverTower build_tower(const CoverGenerator& generator, const GrowthProfile& profile,
                       std::uint32_t basepoint) {
    const SpacePtr& space = generator.space();
    GrowthProfile owned = profile;
    const std::size_t height = tower_height(*space, generator.colors());
    AbsorptionEngine engine{*space, owned, {}};
    std::vector<TowerLevel> levels;
    levels.reserve(height + 1);
    for (std::size_t k = 0; k <= height; ++k) {
        ColoredCover raw = raw_level_cover(generator, owned, k);
        RenumberResult renumbered = renumber_for_basepoint(raw, k, basepoint);
        AbsorbResult absorbed = engine.absorb(renumbered.cover, AbsorbOptions{false});
        levels.push_back(TowerLevel{owned.level_scale(k), std::move(absorbed.cover),
                                    std::move(renumbered.renumbering), renumbered.witness});
        engine.push_level(levels.back().cover);
    }
    return CoverTower(space, std::move(owned), generator.colors(), basepoint, std::move(levels));
}

CoherenceCertificate certify_coherence(const CoverTower& tower) {
    const FiniteMetricSpace& space = tower.space();
    const std::size_t n = space.size();
    const std::size_t level_count = tower.levels().size();

    // Reach bitsets (radius = level index) and member bitsets per element.
    std::vector<LevelCache> caches;
    caches.reserve(level_count);
    for (std::size_t l = 0; l < level_count; ++l)
        caches.push_back(build_level_cache(tower.level(l).cover, l, tower.profile()));

    CoherenceCertificate cert;
    for (std::uint32_t c = 0; c < tower.num_colors(); ++c) {
        for (std::size_t k = 1; k < level_count; ++k) {
            const auto& uppers = tower.level(k).cover.color(c);
            for (std::uint32_t u = 0; u < uppers.size(); ++u) {
                const bool whole = uppers[u].size() == n;
                const Bits& u_bits = caches[k][c][u].members;
                for (std::size_t l = 0; l < k; ++l) {
                    const auto& lowers = tower.level(l).cover.color(c);
                    cert.pairs_checked += lowers.size();
                    if (whole) continue; // every subset is inside the whole space
                    for (std::uint32_t v = 0; v < lowers.size(); ++v) {
                        const Bits& reach = caches[l][c][v].reach;
                        if (!reach.intersects(u_bits)) continue; // d(U, V) > l
                        Bits outside = reach;
                        outside -= u_bits;
                        if (outside.none()) continue;
                        cert.violations.push_back(CoherenceWitness{
                            c, k, u, l, v, set_distance(uppers[u], lowers[v]),
                            static_cast<std::uint32_t>(outside.find_first())});
                    }
                }
            }
        }
    }
    cert.passes = cert.violations.empty();
    return cert;
}

BasepointCoverageCertificate certify_basepoint_coverage(const CoverTower& tower) {
    const FiniteMetricSpace& space = tower.space();
    BasepointCoverageCertificate cert;
    cert.witness_per_level.resize(tower.levels().size());
    for (std::size_t k = 0; k < tower.levels().size(); ++k) {
        const std::uint32_t target = static_cast<std::uint32_t>(k % tower.num_colors());
        PointSubset basepoint_ball =
            ball(space, tower.basepoint(), Rational(static_cast<long>(k)));
        const auto& elements = tower.level(k).cover.color(target);
        for (std::uint32_t e = 0; e < elements.size(); ++e) {
            if (!elements[e].contains(tower.basepoint())) continue;
            if (basepoint_ball.is_subset_of(elements[e])) {
                cert.witness_per_level[k] = e;
                break;
            }
        }
        if (!cert.witness_per_level[k]) cert.failing_levels.push_back(k);
    }
    cert.passes = cert.failing_levels.empty();
    return cert;
}

} // namespace treecover
