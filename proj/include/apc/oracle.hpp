#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "apc/graph.hpp"
#include "apc/label_coding.hpp"

namespace apc {

class OracleBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleEntry {
    std::uint64_t count = 0;
    /// Internal vertices for paths, non-root vertices for cycles.
    std::map<Labelling, std::uint64_t> by_labelling;
    std::map<ClassValue, std::uint64_t> by_class;
};

/// Brute-force tallies: entry (u, v, l) with u != v counts simple paths of
/// length l from u to v; entry (u, u, l) counts rooted directed simple cycles
/// of length l through u (l >= 2, both directions counted).
class OracleTally {
public:
    OracleTally(std::size_t n, std::size_t max_length, std::size_t num_labels, bool labelled)
        : n_(n), max_length_(max_length), num_labels_(num_labels), labelled_(labelled),
          entries_(n * n * max_length) {}

    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t max_length() const noexcept { return max_length_; }
    std::size_t num_labels() const noexcept { return num_labels_; }
    bool labelled() const noexcept { return labelled_; }

    const OracleEntry& at(VertexId u, VertexId v, std::size_t length) const { return entries_.at(index(u, v, length)); }
    OracleEntry& at(VertexId u, VertexId v, std::size_t length) { return entries_.at(index(u, v, length)); }
    std::uint64_t count(VertexId u, VertexId v, std::size_t length) const { return at(u, v, length).count; }

    /// Undirected, unrooted simple cycles of the given length (>= 3):
    /// sum_u P_uu(l) / (2l).
    std::uint64_t geometric_cycles(std::size_t length) const;

private:
    std::size_t index(VertexId u, VertexId v, std::size_t length) const {
        if (u >= n_ || v >= n_ || length == 0 || length > max_length_) {
            throw std::out_of_range("oracle index out of range");
        }
        return ((length - 1) * n_ + u) * n_ + v;
    }

    std::size_t n_;
    std::size_t max_length_;
    std::size_t num_labels_;
    bool labelled_;
    std::vector<OracleEntry> entries_;
};

struct OracleOptions {
    /// Record per-labelling and per-class tallies as well as plain counts.
    bool tally_labels = false;
    /// Label alphabet size for labellings; 0 uses graph.label_bound().
    std::size_t num_labels = 0;
    /// Upper bound on DFS steps over the whole run.
    std::uint64_t node_budget = 500'000'000;
    int threads = 1;
};

/// Depth-first enumeration of every simple path and rooted directed simple
/// cycle with at most max_length edges. Shares no code with the counting
/// engine. Throws OracleBudgetExceeded when the step budget runs out.
OracleTally dfs_enumerate(const Graph& graph, std::size_t max_length, const OracleOptions& options = {});

}  // namespace apc
