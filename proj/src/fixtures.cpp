#include "treecover/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
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

std::size_t parse_size(const std::string& token, const std::string& what) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad " + what + " '" + token + "' in space descriptor");
    return static_cast<std::size_t>(std::strtoull(token.c_str(), nullptr, 10));
}

} // namespace

SpacePtr make_singleton() {
    return FiniteMetricSpace::from_interned({Rational(0)}, {0}, 1);
}

SpacePtr make_path(std::size_t m) {
    const std::size_t n = m + 1;
    std::vector<Rational> values;
    values.reserve(n);
    for (std::size_t v = 0; v < n; ++v) values.emplace_back(static_cast<long long>(v));
    std::vector<std::uint32_t> ranks(n * n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            ranks[p * n + q] = static_cast<std::uint32_t>(p > q ? p - q : q - p);
    auto space = FiniteMetricSpace::from_interned(std::move(values), std::move(ranks), n);
    std::vector<long long> coords(n);
    for (std::size_t v = 0; v < n; ++v) coords[v] = static_cast<long long>(v);
    std::const_pointer_cast<FiniteMetricSpace>(space)->attach_line_coordinates(std::move(coords));
    return space;
}

SpacePtr make_product(const SpacePtr& a, const SpacePtr& b, ProductMetric metric) {
    if (!a || !b) throw MetricError("product factors must be non-null");
    const std::size_t na = a->size(), nb = b->size();
    const auto& va = a->distance_values();
    const auto& vb = b->distance_values();

    // Combine factor values rank-pair-wise once, then fill the big table with
    // integer lookups.
    std::map<Rational, std::uint32_t> pool;
    for (const Rational& x : va)
        for (const Rational& y : vb)
            pool.emplace(metric == ProductMetric::Sup ? std::max(x, y) : x + y, 0);
    std::vector<Rational> values;
    values.reserve(pool.size());
    for (auto& [value, rank] : pool) {
        rank = static_cast<std::uint32_t>(values.size());
        values.push_back(value);
    }
    std::vector<std::uint32_t> combined(va.size() * vb.size());
    for (std::size_t ra = 0; ra < va.size(); ++ra)
        for (std::size_t rb = 0; rb < vb.size(); ++rb) {
            const Rational key =
                metric == ProductMetric::Sup ? std::max(va[ra], vb[rb]) : va[ra] + vb[rb];
            combined[ra * vb.size() + rb] = pool.at(key);
        }

    const std::size_t n = na * nb;
    std::vector<std::uint32_t> ranks(n * n);
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t pa = p / nb, pb = p % nb;
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t qa = q / nb, qb = q % nb;
            ranks[p * n + q] = combined[a->dist_rank(pa, qa) * vb.size() + b->dist_rank(pb, qb)];
        }
    }

    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t pa = 0; pa < na; ++pa)
        for (std::size_t pb = 0; pb < nb; ++pb)
            labels.push_back("(" + a->labels()[pa] + "," + b->labels()[pb] + ")");

    auto space =
        FiniteMetricSpace::from_interned(std::move(values), std::move(ranks), n, std::move(labels));
    std::const_pointer_cast<FiniteMetricSpace>(space)->attach_product_structure(
        ProductStructure{a, b, metric});
    return space;
}

SpacePtr make_grid(std::size_t m, std::size_t dims) {
    if (dims == 0) throw ParseError("grid needs at least one dimension");
    SpacePtr acc = make_path(m);
    for (std::size_t d = 1; d < dims; ++d) acc = make_product(acc, make_path(m), ProductMetric::Sup);
    return acc;
}

SpacePtr make_random_graph(std::size_t n, const Rational& p, std::uint64_t seed) {
    if (n == 0) throw MetricError("graph needs at least one vertex");
    if (p < 0 || p > 1) throw ParseError("edge probability must lie in [0,1]");
    std::mt19937_64 rng(seed);

    std::vector<std::vector<std::uint32_t>> adj(n);
    auto connect = [&](std::size_t u, std::size_t v) {
        adj[u].push_back(static_cast<std::uint32_t>(v));
        adj[v].push_back(static_cast<std::uint32_t>(u));
    };
    for (std::size_t v = 1; v < n; ++v) connect(rng() % v, v);

    // Exact acceptance test u < floor(p * 2^64), independent of any library's
    // distribution implementation.
    const BigInt threshold = floor_rational(p * Rational(BigInt(1) << 64));
    std::vector<char> tree_edge(n * n, 0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::uint32_t v : adj[u]) tree_edge[u * n + v] = 1;
    for (std::size_t u = 0; u + 1 < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            if (tree_edge[u * n + v]) continue;
            if (BigInt(rng()) < threshold) connect(u, v);
        }

    // Unit weights: breadth-first search gives the metric directly in
    // interned form.
    std::vector<std::uint32_t> ranks(n * n, 0);
    std::vector<std::int64_t> dist(n);
    std::vector<std::uint32_t> queue(n);
    std::int64_t diam = 0;
    for (std::size_t src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        std::size_t head = 0, tail = 0;
        dist[src] = 0;
        queue[tail++] = static_cast<std::uint32_t>(src);
        while (head < tail) {
            std::uint32_t cur = queue[head++];
            for (std::uint32_t nb : adj[cur])
                if (dist[nb] < 0) {
                    dist[nb] = dist[cur] + 1;
                    queue[tail++] = nb;
                }
        }
        for (std::size_t v = 0; v < n; ++v) {
            ranks[src * n + v] = static_cast<std::uint32_t>(dist[v]);
            diam = std::max(diam, dist[v]);
        }
    }
    std::vector<Rational> values;
    values.reserve(static_cast<std::size_t>(diam) + 1);
    for (std::int64_t v = 0; v <= diam; ++v) values.emplace_back(static_cast<long long>(v));
    return FiniteMetricSpace::from_interned(std::move(values), std::move(ranks), n);
}

SpacePtr make_fixture(const std::string& descriptor) {
    auto parts = split(descriptor, ':');
    const std::string& kind = parts[0];
    if (kind == "singleton") {
        if (parts.size() != 1) throw ParseError("singleton takes no parameters");
        return make_singleton();
    }
    if (kind == "path") {
        if (parts.size() != 2) throw ParseError("expected path:m");
        return make_path(parse_size(parts[1], "path length"));
    }
    if (kind == "grid") {
        if (parts.size() != 3) throw ParseError("expected grid:m:d");
        return make_grid(parse_size(parts[1], "grid side"), parse_size(parts[2], "grid dimension"));
    }
    if (kind == "random-graph") {
        if (parts.size() != 4) throw ParseError("expected random-graph:n:p:seed");
        return make_random_graph(parse_size(parts[1], "vertex count"),
                                 parse_rational(parts[2]),
                                 static_cast<std::uint64_t>(parse_size(parts[3], "seed")));
    }
    throw ParseError("unknown space descriptor '" + descriptor + "'");
}

} // namespace treecover
