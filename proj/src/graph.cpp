#include "apc/graph.hpp"

#include <algorithm>
#include <numeric>

namespace apc {

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::vector<LabelId> labels)
    : labels_(std::move(labels)) {
    if (labels_.size() != n) {
        throw GraphError("label sequence has length " + std::to_string(labels_.size()) +
                         " but graph has " + std::to_string(n) + " vertices");
    }
    for (auto& e : edges) {
        if (e.first >= n || e.second >= n) {
            throw GraphError("edge (" + std::to_string(e.first) + ", " + std::to_string(e.second) +
                             ") has an endpoint outside [0, " + std::to_string(n) + ")");
        }
        if (e.first == e.second) {
            throw GraphError("self-loop at vertex " + std::to_string(e.first));
        }
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw GraphError("duplicate edge (" + std::to_string(dup->first) + ", " +
                         std::to_string(dup->second) + ")");
    }
    edges_ = std::move(edges);

    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : edges_) {
        ++degree[e.first];
        ++degree[e.second];
    }
    offsets_.assign(n + 1, 0);
    std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
    adjacency_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adjacency_[fill[e.first]++] = e.second;
        adjacency_[fill[e.second]++] = e.first;
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }
}

Graph Graph::unlabelled(std::size_t n, std::vector<Edge> edges) {
    return Graph(n, std::move(edges), std::vector<LabelId>(n, 0));
}

std::span<const VertexId> Graph::neighbors(VertexId v) const {
    if (v >= num_vertices()) {
        throw std::out_of_range("vertex " + std::to_string(v) + " out of range [0, " +
                                std::to_string(num_vertices()) + ")");
    }
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::label_bound() const noexcept {
    if (labels_.empty()) return 0;
    return static_cast<std::size_t>(*std::max_element(labels_.begin(), labels_.end())) + 1;
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t d = 0;
    for (std::size_t v = 0; v + 1 < offsets_.size(); ++v) d = std::max(d, offsets_[v + 1] - offsets_[v]);
    return d;
}

LabelId LabelAlphabet::map(std::int64_t original) const {
    auto it = forward_map.find(original);
    if (it == forward_map.end()) {
        throw std::out_of_range("label " + std::to_string(original) + " is not in the alphabet");
    }
    return it->second;
}

Graph with_labels(const Graph& graph, std::span<const LabelId> relabel) {
    std::vector<LabelId> labels(graph.num_vertices());
    for (std::size_t v = 0; v < labels.size(); ++v) labels[v] = relabel[graph.label(static_cast<VertexId>(v))];
    return Graph(graph.num_vertices(), graph.edges(), std::move(labels));
}

Graph permute_vertices(const Graph& graph, std::span<const VertexId> perm) {
    const auto n = graph.num_vertices();
    if (perm.size() != n) throw GraphError("permutation size does not match vertex count");
    std::vector<VertexId> inverse(n, static_cast<VertexId>(n));
    for (std::size_t v = 0; v < n; ++v) {
        if (perm[v] >= n || inverse[perm[v]] != n) throw GraphError("not a permutation");
        inverse[perm[v]] = static_cast<VertexId>(v);
    }
    std::vector<Edge> edges;
    edges.reserve(graph.num_edges());
    for (const auto& e : graph.edges()) edges.push_back({inverse[e.first], inverse[e.second]});
    std::vector<LabelId> labels(n);
    for (std::size_t v = 0; v < n; ++v) labels[v] = graph.label(perm[v]);
    return Graph(n, std::move(edges), std::move(labels));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    const auto shift = static_cast<VertexId>(a.num_vertices());
    std::vector<Edge> edges = a.edges();
    for (const auto& e : b.edges()) edges.push_back({e.first + shift, e.second + shift});
    std::vector<LabelId> labels(a.labels().begin(), a.labels().end());
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    const auto n = labels.size();
    return Graph(n, std::move(edges), std::move(labels));
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph::unlabelled(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
    if (n < 3) throw GraphError("cycle graph needs at least 3 vertices");
    std::vector<Edge> edges;
    for (VertexId v = 0; v < n; ++v) edges.push_back({v, static_cast<VertexId>((v + 1) % n)});
    return Graph::unlabelled(n, std::move(edges));
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
    return Graph::unlabelled(n, std::move(edges));
}

Graph star_graph(std::size_t leaves) {
    std::vector<Edge> edges;
    for (VertexId v = 1; v <= leaves; ++v) edges.push_back({0, v});
    return Graph::unlabelled(leaves + 1, std::move(edges));
}

}  // namespace apc
