#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "apc/graph.hpp"

namespace apc {

/// Seeded generator shared by tests, validation and bench. Draws are made
/// from raw 64-bit output so sequences do not depend on the standard
/// library's distribution implementations.
class GraphRng {
public:
    explicit GraphRng(std::uint64_t seed) : engine_(seed) {}

    bool bernoulli(double p);
    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// G(n, p) with labels drawn uniformly from [0, num_labels).
Graph erdos_renyi(std::size_t n, double p, std::size_t num_labels, GraphRng& rng);

/// Random graph with expected mean degree `mean_degree` (p = d / (n - 1)).
Graph erdos_renyi_mean_degree(std::size_t n, double mean_degree, std::size_t num_labels, GraphRng& rng);

/// Connected molecule-like graph: a random tree with maximum degree 4 plus
/// `extra_edges` ring-closing chords.
Graph random_molecule(std::size_t n, std::size_t extra_edges, std::size_t num_labels, GraphRng& rng);

std::vector<VertexId> random_permutation(std::size_t n, GraphRng& rng);

}  // namespace apc
