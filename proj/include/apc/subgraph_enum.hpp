#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "apc/graph.hpp"

namespace apc {

/// Largest subgraph the enumerator will build; local adjacency is a 32-bit mask.
inline constexpr std::size_t kMaxSubgraphSize = 32;

/// View of one connected induced subgraph H during enumeration. Valid only
/// inside the visit callback.
///
/// Local index i refers to vertices[i]. Vertices appear in search order,
/// not sorted; sorted_vertices() gives the set in ascending order.
struct InducedSubgraph {
    std::span<const VertexId> vertices;
    /// Bit j of local_adjacency[i] is set iff vertices[i] and vertices[j] are adjacent.
    std::span<const std::uint32_t> local_adjacency;
    /// |N(H)|: vertices outside H adjacent to at least one vertex of H.
    std::size_t boundary_size = 0;

    std::size_t size() const noexcept { return vertices.size(); }
    std::vector<VertexId> sorted_vertices() const;
    std::optional<std::size_t> local_index(VertexId v) const;
};

struct EnumerationStats {
    std::uint64_t visited = 0;
    double seconds = 0.0;
};

using SubgraphVisitor = std::function<void(const InducedSubgraph&)>;

/// Calls `visit` exactly once for every vertex set S with 1 <= |S| <= max_size
/// whose induced subgraph is connected.
///
/// Reverse search: the parent of S is S minus its largest vertex whose
/// removal leaves S connected, so the search forest is rooted at the
/// singletons and no visited set is stored. Throws std::invalid_argument
/// when max_size is 0 or exceeds kMaxSubgraphSize.
EnumerationStats enumerate_connected_induced_subgraphs(const Graph& graph, std::size_t max_size,
                                                       const SubgraphVisitor& visit);

/// Same enumeration with the root singletons shared out among `threads`
/// OpenMP workers. `visit` is invoked concurrently and must be thread-safe.
EnumerationStats enumerate_connected_induced_subgraphs(const Graph& graph, std::size_t max_size,
                                                       const SubgraphVisitor& visit, int threads);

/// |{w not in H : w adjacent to some v in H}|. Throws std::out_of_range for
/// vertices outside the graph and std::invalid_argument for an empty set.
std::size_t boundary_size(const Graph& graph, std::span<const VertexId> vertices);

}  // namespace apc
