#include "apc/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace apc {

bool GraphRng::bernoulli(double p) {
    // 53 random bits mapped to [0, 1).
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u < p;
}

std::uint64_t GraphRng::below(std::uint64_t bound) {
    if (bound == 0) return 0;
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

Graph erdos_renyi(std::size_t n, double p, std::size_t num_labels, GraphRng& rng) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) edges.push_back({u, v});
    std::vector<LabelId> labels(n);
    for (auto& l : labels) l = static_cast<LabelId>(rng.below(std::max<std::size_t>(num_labels, 1)));
    return Graph(n, std::move(edges), std::move(labels));
}

Graph erdos_renyi_mean_degree(std::size_t n, double mean_degree, std::size_t num_labels, GraphRng& rng) {
    const double p = n > 1 ? std::min(1.0, mean_degree / static_cast<double>(n - 1)) : 0.0;
    return erdos_renyi(n, p, num_labels, rng);
}

Graph random_molecule(std::size_t n, std::size_t extra_edges, std::size_t num_labels, GraphRng& rng) {
    std::set<Edge> edges;
    std::vector<std::size_t> degree(n, 0);
    for (VertexId v = 1; v < n; ++v) {
        VertexId parent = 0;
        do {
            parent = static_cast<VertexId>(rng.below(v));
        } while (degree[parent] >= 4);
        edges.insert({parent, v});
        ++degree[parent];
        ++degree[v];
    }
    std::size_t added = 0;
    for (std::size_t attempt = 0; added < extra_edges && attempt < 1000 * (extra_edges + 1); ++attempt) {
        auto u = static_cast<VertexId>(rng.below(n));
        auto v = static_cast<VertexId>(rng.below(n));
        if (u == v || degree[u] >= 4 || degree[v] >= 4) continue;
        if (u > v) std::swap(u, v);
        if (!edges.insert({u, v}).second) continue;
        ++degree[u];
        ++degree[v];
        ++added;
    }
    std::vector<LabelId> labels(n);
    for (auto& l : labels) l = static_cast<LabelId>(rng.below(std::max<std::size_t>(num_labels, 1)));
    return Graph(n, std::vector<Edge>(edges.begin(), edges.end()), std::move(labels));
}

std::vector<VertexId> random_permutation(std::size_t n, GraphRng& rng) {
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), VertexId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    return perm;
}

}  // namespace apc
