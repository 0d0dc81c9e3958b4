#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace apc {

using VertexId = std::uint32_t;
using LabelId = std::uint32_t;

/// Unordered edge, always stored with first < second.
struct Edge {
    VertexId first;
    VertexId second;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Immutable simple undirected graph with one compact label per vertex.
///
/// Adjacency is held in CSR form with every neighbour list sorted, so the
/// graph can be shared read-only between worker threads.
class Graph {
public:
    Graph() = default;

    /// Throws GraphError on self-loops, duplicate edges, endpoints outside
    /// [0, n) or a label sequence whose length differs from n.
    Graph(std::size_t n, std::vector<Edge> edges, std::vector<LabelId> labels);

    /// Unlabelled convenience: every vertex gets label 0.
    static Graph unlabelled(std::size_t n, std::vector<Edge> edges);

    std::size_t num_vertices() const noexcept { return labels_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    /// Sorted neighbour set of v. Throws std::out_of_range for v >= n.
    std::span<const VertexId> neighbors(VertexId v) const;
    std::size_t degree(VertexId v) const { return neighbors(v).size(); }
    bool has_edge(VertexId u, VertexId v) const;

    LabelId label(VertexId v) const { return labels_.at(v); }
    std::span<const LabelId> labels() const noexcept { return labels_; }

    /// Edges sorted lexicographically, each with first < second.
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// One past the largest label id present (0 for the empty graph).
    std::size_t label_bound() const noexcept;

    std::size_t max_degree() const noexcept;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.labels_ == b.labels_ && a.edges_ == b.edges_;
    }

private:
    std::vector<Edge> edges_;
    std::vector<LabelId> labels_;
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> adjacency_;
};

/// Compact label alphabet: original dataset label ids mapped onto [0, k).
struct LabelAlphabet {
    std::size_t k = 0;
    std::map<std::int64_t, LabelId> forward_map;
    std::vector<std::string> code_names;

    LabelId map(std::int64_t original) const;
};

struct Dataset {
    std::string name;
    std::vector<Graph> graphs;
    std::vector<int> class_labels;
};

/// Returns a copy of `graph` with every label replaced by `relabel[label]`.
Graph with_labels(const Graph& graph, std::span<const LabelId> relabel);

/// Vertex v of the result is vertex perm[v] of `graph`; perm must be a
/// permutation of [0, n).
Graph permute_vertices(const Graph& graph, std::span<const VertexId> perm);

/// Disjoint union; vertices of `b` are shifted by a.num_vertices().
Graph disjoint_union(const Graph& a, const Graph& b);

// Small named graphs used throughout the tests and the CLI bench.
Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph star_graph(std::size_t leaves);

}  // namespace apc
