#include "apc/subgraph_enum.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "apc/detail/reverse_search.hpp"

namespace apc {
namespace {

void check_max_size(std::size_t max_size) {
    if (max_size == 0 || max_size > kMaxSubgraphSize) {
        throw std::invalid_argument("max_size must be in [1, " + std::to_string(kMaxSubgraphSize) + "], got " +
                                    std::to_string(max_size));
    }
}

struct CallbackVisitor {
    const SubgraphVisitor* visit;
    void operator()(const InducedSubgraph& h) const { (*visit)(h); }
};

}  // namespace

std::vector<VertexId> InducedSubgraph::sorted_vertices() const {
    std::vector<VertexId> out(vertices.begin(), vertices.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::size_t> InducedSubgraph::local_index(VertexId v) const {
    auto it = std::find(vertices.begin(), vertices.end(), v);
    if (it == vertices.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vertices.begin());
}

EnumerationStats enumerate_connected_induced_subgraphs(const Graph& graph, std::size_t max_size,
                                                       const SubgraphVisitor& visit) {
    check_max_size(max_size);
    const auto start = std::chrono::steady_clock::now();
    EnumerationStats stats;
    CallbackVisitor visitor{&visit};
    detail::ReverseSearch<CallbackVisitor> search(graph, max_size);
    for (VertexId root = 0; root < graph.num_vertices(); ++root) stats.visited += search.run_root(root, visitor);
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

EnumerationStats enumerate_connected_induced_subgraphs(const Graph& graph, std::size_t max_size,
                                                       const SubgraphVisitor& visit, int threads) {
    check_max_size(max_size);
    if (threads <= 1) return enumerate_connected_induced_subgraphs(graph, max_size, visit);
    const auto start = std::chrono::steady_clock::now();
    const auto n = static_cast<std::int64_t>(graph.num_vertices());
    std::uint64_t visited = 0;
#pragma omp parallel num_threads(threads) reduction(+ : visited)
    {
        CallbackVisitor visitor{&visit};
        detail::ReverseSearch<CallbackVisitor> search(graph, max_size);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t root = 0; root < n; ++root) {
            visited += search.run_root(static_cast<VertexId>(root), visitor);
        }
    }
    EnumerationStats stats;
    stats.visited = visited;
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

std::size_t boundary_size(const Graph& graph, std::span<const VertexId> vertices) {
    if (vertices.empty()) throw std::invalid_argument("boundary_size needs a nonempty vertex set");
    std::vector<char> inside(graph.num_vertices(), 0);
    for (auto v : vertices) {
        if (v >= graph.num_vertices()) {
            throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
        }
        inside[v] = 1;
    }
    std::vector<char> counted(graph.num_vertices(), 0);
    std::size_t size = 0;
    for (auto v : vertices) {
        for (auto w : graph.neighbors(v)) {
            if (inside[w] || counted[w]) continue;
            counted[w] = 1;
            ++size;
        }
    }
    return size;
}

}  // namespace apc
