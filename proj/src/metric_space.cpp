#include "treecover/metric_space.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <queue>
#include <thread>

namespace treecover {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return labels;
}

// Triangle scan over all triples.  When every distance fits comfortably in
// int64 the additions run on machine integers; otherwise exact rationals.
void check_triangles(const std::vector<Rational>& flat, std::size_t n) {
    bool small_ints = true;
    std::vector<std::int64_t> ints;
    ints.reserve(flat.size());
    const BigInt limit = BigInt(1) << 62;
    for (const Rational& q : flat) {
        if (!is_integer(q) || numerator(q) >= limit || numerator(q) < 0) {
            small_ints = false;
            break;
        }
        ints.push_back(to_int64(numerator(q)));
    }
    if (small_ints) {
        unsigned workers = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
        if (n < 64) workers = 1;
        std::vector<std::thread> pool;
        std::vector<std::array<std::size_t, 3>> hits(workers, {n, n, n});
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t p = w; p < n; p += workers) {
                    const std::int64_t* row_p = ints.data() + p * n;
                    for (std::size_t s = 0; s < n; ++s) {
                        const std::int64_t* row_s = ints.data() + s * n;
                        const std::int64_t via = row_p[s];
                        for (std::size_t q = 0; q < n; ++q) {
                            if (row_p[q] > via + row_s[q]) {
                                hits[w] = {p, q, s};
                                return;
                            }
                        }
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& h : hits)
            if (h[0] < n) throw TriangleViolation(h[0], h[1], h[2]);
        return;
    }
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t q = 0; q < n; ++q)
                if (flat[p * n + q] > flat[p * n + s] + flat[s * n + q])
                    throw TriangleViolation(p, q, s);
}

} // namespace

SpacePtr FiniteMetricSpace::build(std::vector<Rational> flat, std::size_t n,
                                  std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n)
        throw MetricError("label count does not match point count");
    auto space = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
    space->n_ = n;
    space->labels_ = labels.empty() ? default_labels(n) : std::move(labels);

    std::vector<Rational> sorted(flat);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    space->values_ = std::move(sorted);

    space->rank_.resize(n * n);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        auto it = std::lower_bound(space->values_.begin(), space->values_.end(), flat[i]);
        space->rank_[i] = static_cast<std::uint32_t>(it - space->values_.begin());
    }
    return space;
}

SpacePtr FiniteMetricSpace::validate(const std::vector<std::vector<Rational>>& table,
                                     std::vector<std::string> labels) {
    const std::size_t n = table.size();
    if (n == 0) throw MetricError("empty distance table");
    std::vector<Rational> flat(n * n);
    for (std::size_t p = 0; p < n; ++p) {
        if (table[p].size() != n) throw MetricError("distance table is not square");
        for (std::size_t q = 0; q < n; ++q) flat[p * n + q] = table[p][q];
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (flat[p * n + p] != 0)
            throw MetricError("nonzero diagonal at point " + std::to_string(p));
        for (std::size_t q = p + 1; q < n; ++q) {
            const Rational& v = flat[p * n + q];
            if (v < 0) throw NegativeDistance(p, q, v);
            if (v != flat[q * n + p]) throw AsymmetryError(p, q);
            if (v == 0) throw ZeroOffDiagonal(p, q);
        }
    }
    check_triangles(flat, n);
    return build(std::move(flat), n, std::move(labels));
}

SpacePtr FiniteMetricSpace::from_graph(const std::vector<WeightedEdge>& edges,
                                       std::size_t num_vertices, std::vector<std::string> labels) {
    if (num_vertices == 0) throw MetricError("graph needs at least one vertex");
    std::vector<std::vector<std::pair<std::size_t, Rational>>> adj(num_vertices);
    for (const auto& e : edges) {
        if (e.u >= num_vertices || e.v >= num_vertices)
            throw MetricError("edge endpoint out of range: " + std::to_string(std::max(e.u, e.v)));
        if (e.u == e.v) throw MetricError("self-loop at vertex " + std::to_string(e.u));
        if (e.weight <= 0)
            throw MetricError("non-positive edge weight on (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ")");
        adj[e.u].emplace_back(e.v, e.weight);
        adj[e.v].emplace_back(e.u, e.weight);
    }

    const std::size_t n = num_vertices;
    std::vector<Rational> flat(n * n);
    std::vector<char> done(n);
    std::vector<Rational> dist(n);
    for (std::size_t src = 0; src < n; ++src) {
        std::fill(done.begin(), done.end(), 0);
        std::vector<char> reached(n, 0);
        dist.assign(n, Rational(0));
        reached[src] = 1;
        using Entry = std::pair<Rational, std::size_t>;
        auto cmp = [](const Entry& a, const Entry& b) { return a.first > b.first; };
        std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
        heap.emplace(Rational(0), src);
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (done[u]) continue;
            done[u] = 1;
            dist[u] = d;
            for (const auto& [v, w] : adj[u]) {
                if (done[v]) continue;
                Rational cand = d + w;
                if (!reached[v] || cand < dist[v]) {
                    reached[v] = 1;
                    dist[v] = cand;
                    heap.emplace(std::move(cand), v);
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (!done[v]) throw DisconnectedGraph(src, v);
            flat[src * n + v] = dist[v];
        }
    }
    return build(std::move(flat), n, std::move(labels));
}

SpacePtr FiniteMetricSpace::from_trusted_table(std::vector<Rational> flat_table, std::size_t n,
                                               std::vector<std::string> labels) {
    if (flat_table.size() != n * n) throw MetricError("trusted table has wrong size");
    return build(std::move(flat_table), n, std::move(labels));
}

SpacePtr FiniteMetricSpace::from_interned(std::vector<Rational> distance_values,
                                          std::vector<std::uint32_t> ranks, std::size_t n,
                                          std::vector<std::string> labels) {
    if (n == 0) throw MetricError("empty distance table");
    if (ranks.size() != n * n) throw MetricError("rank table has wrong size");
    if (distance_values.empty() || distance_values.front() != 0)
        throw MetricError("value pool must start at 0");
    for (std::size_t i = 0; i + 1 < distance_values.size(); ++i)
        if (!(distance_values[i] < distance_values[i + 1]))
            throw MetricError("value pool is not strictly increasing");
    std::vector<char> seen(distance_values.size(), 0);
    for (std::size_t p = 0; p < n; ++p) {
        if (ranks[p * n + p] != 0)
            throw MetricError("nonzero diagonal at point " + std::to_string(p));
        seen[0] = 1;
        for (std::size_t q = p + 1; q < n; ++q) {
            const std::uint32_t r = ranks[p * n + q];
            if (r >= distance_values.size())
                throw MetricError("rank out of range at (" + std::to_string(p) + "," +
                                  std::to_string(q) + ")");
            if (r == 0) throw ZeroOffDiagonal(p, q);
            if (r != ranks[q * n + p]) throw AsymmetryError(p, q);
            seen[r] = 1;
        }
    }
    // The pool must list exactly the realized distances, or diameter() and the
    // per-rank scans would see phantom values.
    for (std::size_t r = 0; r < seen.size(); ++r)
        if (!seen[r]) throw MetricError("value pool entry " + std::to_string(r) + " is unused");
    if (!labels.empty() && labels.size() != n)
        throw MetricError("label count does not match point count");
    auto space = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
    space->n_ = n;
    space->labels_ = labels.empty() ? default_labels(n) : std::move(labels);
    space->values_ = std::move(distance_values);
    space->rank_ = std::move(ranks);
    return space;
}

std::optional<std::uint32_t> FiniteMetricSpace::rank_of_closed_bound(const Rational& bound) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), bound);
    if (it == values_.begin()) return std::nullopt;
    return static_cast<std::uint32_t>((it - values_.begin()) - 1);
}

std::uint32_t FiniteMetricSpace::rank_of_open_bound(const Rational& bound) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), bound);
    return static_cast<std::uint32_t>(it - values_.begin());
}

bool FiniteMetricSpace::has_default_labels() const {
    for (std::size_t i = 0; i < n_; ++i)
        if (labels_[i] != std::to_string(i)) return false;
    return true;
}

void FiniteMetricSpace::attach_line_coordinates(std::vector<long long> coords) {
    if (coords.size() != n_) throw MetricError("coordinate count does not match point count");
    line_coords_ = std::move(coords);
}

PointSubset::PointSubset(const FiniteMetricSpace* space, std::vector<std::uint32_t> members)
    : space_(space), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.back() >= space_->size())
        throw MetricError("subset member out of range: " + std::to_string(members_.back()));
}

bool PointSubset::contains(std::uint32_t point) const {
    return std::binary_search(members_.begin(), members_.end(), point);
}

bool PointSubset::is_subset_of(const PointSubset& other) const {
    if (space_ != other.space_) throw SpaceMismatch();
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
}

Rational set_distance(const PointSubset& a, const PointSubset& b) {
    if (a.space() != b.space()) throw SpaceMismatch();
    if (a.empty() || b.empty()) throw EmptySubset();
    const FiniteMetricSpace& space = *a.space();
    // Shared point means distance zero; the membership scan is much cheaper
    // than the pair scan when one side is large.
    const PointSubset& small = a.size() <= b.size() ? a : b;
    const PointSubset& large = a.size() <= b.size() ? b : a;
    for (std::uint32_t p : small.members())
        if (large.contains(p)) return Rational(0);
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (std::uint32_t p : a.members()) {
        for (std::uint32_t q : b.members()) {
            std::uint32_t r = space.dist_rank(p, q);
            if (r < best) best = r;
        }
        if (best == 0) break;
    }
    return space.distance_values()[best];
}

PointSubset neighborhood(const PointSubset& v, const Rational& r) {
    if (v.empty()) throw EmptySubset();
    if (r < 0) throw MetricError("negative neighborhood radius");
    const FiniteMetricSpace& space = *v.space();
    if (v.size() == space.size()) return v;
    auto bound = space.rank_of_closed_bound(r);
    if (!bound) return v; // only rank 0 (= distance 0) would qualify, and that is v itself
    std::vector<std::uint32_t> out;
    out.reserve(v.size());
    for (std::uint32_t x = 0; x < space.size(); ++x) {
        for (std::uint32_t p : v.members()) {
            if (space.dist_rank(x, p) <= *bound) {
                out.push_back(x);
                break;
            }
        }
    }
    return PointSubset(&space, std::move(out));
}

Rational diameter(const PointSubset& v) {
    if (v.empty()) throw EmptySubset();
    const FiniteMetricSpace& space = *v.space();
    if (v.size() == space.size()) return space.diameter();
    std::uint32_t worst = 0;
    const auto& m = v.members();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            worst = std::max(worst, space.dist_rank(m[i], m[j]));
    return space.distance_values()[worst];
}

PointSubset ball(const FiniteMetricSpace& space, std::uint32_t center, const Rational& radius) {
    return neighborhood(PointSubset(&space, {center}), radius);
}

} // namespace treecover
