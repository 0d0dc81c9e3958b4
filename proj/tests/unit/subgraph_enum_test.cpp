#include <gtest/gtest.h>

#include <bit>
#include <map>
#include <mutex>
#include <set>

#include "apc/generators.hpp"
#include "apc/subgraph_enum.hpp"

namespace apc {
namespace {

using VertexSet = std::vector<VertexId>;

bool connected_subset(const Graph& g, std::uint32_t mask) {
    const auto start = static_cast<VertexId>(std::countr_zero(mask));
    std::uint32_t seen = 1u << start;
    std::vector<VertexId> stack{start};
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (auto w : g.neighbors(v)) {
            const auto bit = 1u << w;
            if ((mask & bit) && !(seen & bit)) {
                seen |= bit;
                stack.push_back(w);
            }
        }
    }
    return seen == mask;
}

// Every connected vertex subset of size <= max_size, with its boundary size.
std::map<VertexSet, std::size_t> brute_force(const Graph& g, std::size_t max_size) {
    std::map<VertexSet, std::size_t> out;
    const auto n = g.num_vertices();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > max_size || !connected_subset(g, mask)) continue;
        VertexSet s;
        std::uint32_t border = 0;
        for (VertexId v = 0; v < n; ++v) {
            if (!(mask >> v & 1u)) continue;
            s.push_back(v);
            for (auto w : g.neighbors(v))
                if (!(mask >> w & 1u)) border |= 1u << w;
        }
        out[s] = static_cast<std::size_t>(std::popcount(border));
    }
    return out;
}

std::map<VertexSet, std::size_t> enumerate(const Graph& g, std::size_t max_size, int threads = 1) {
    std::map<VertexSet, std::size_t> out;
    std::mutex mu;
    std::size_t duplicates = 0;
    const auto stats = enumerate_connected_induced_subgraphs(
        g, max_size,
        [&](const InducedSubgraph& h) {
            auto s = h.sorted_vertices();
            std::lock_guard lock(mu);
            if (!out.emplace(std::move(s), h.boundary_size).second) ++duplicates;
        },
        threads);
    EXPECT_EQ(duplicates, 0u);
    EXPECT_EQ(stats.visited, out.size());
    return out;
}

TEST(SubgraphEnum, PathOfThree) {
    const auto got = enumerate(path_graph(3), 3);
    const std::map<VertexSet, std::size_t> expected{
        {{0}, 1}, {{1}, 2}, {{2}, 1}, {{0, 1}, 1}, {{1, 2}, 1}, {{0, 1, 2}, 0}};
    EXPECT_EQ(got, expected);
}

TEST(SubgraphEnum, TriangleSizeTwo) {
    const auto got = enumerate(complete_graph(3), 2);
    EXPECT_EQ(got.size(), 6u);
    EXPECT_EQ(got.at({0, 1}), 1u);
}

TEST(SubgraphEnum, StarHasNoLeafPairs) {
    const auto got = enumerate(star_graph(3), 2);
    EXPECT_EQ(got.size(), 7u);  // four singletons and three center-leaf edges
    EXPECT_FALSE(got.contains({1, 2}));
}

TEST(SubgraphEnum, EdgelessGraphYieldsSingletonsOnly) {
    const auto got = enumerate(Graph::unlabelled(4, {}), 3);
    EXPECT_EQ(got.size(), 4u);
    for (const auto& [s, b] : got) EXPECT_EQ(b, 0u);
}

TEST(SubgraphEnum, CompleteGraphCountsAllSubsets) {
    // Every nonempty subset of K_6 of size <= 4: 6 + 15 + 20 + 15.
    EXPECT_EQ(enumerate(complete_graph(6), 4).size(), 56u);
}

TEST(SubgraphEnum, MatchesBruteForceOnRandomGraphs) {
    GraphRng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const auto n = 2 + rng.below(11);
        const auto g = erdos_renyi(n, 0.15 + 0.1 * static_cast<double>(rng.below(6)), 1, rng);
        const auto max_size = 1 + rng.below(n);
        ASSERT_EQ(enumerate(g, max_size), brute_force(g, max_size)) << "trial " << trial;
    }
}

TEST(SubgraphEnum, ParallelMatchesSerial) {
    GraphRng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = erdos_renyi(12, 0.3, 1, rng);
        EXPECT_EQ(enumerate(g, 5, 4), enumerate(g, 5, 1));
    }
}

TEST(SubgraphEnum, LocalAdjacencyMatchesGraph) {
    GraphRng rng(3);
    const auto g = erdos_renyi(10, 0.4, 1, rng);
    std::size_t checked = 0;
    enumerate_connected_induced_subgraphs(g, 4, [&](const InducedSubgraph& h) {
        for (std::size_t i = 0; i < h.size(); ++i) {
            EXPECT_EQ(h.local_index(h.vertices[i]), i);
            for (std::size_t j = 0; j < h.size(); ++j) {
                EXPECT_EQ((h.local_adjacency[i] >> j & 1u) != 0, g.has_edge(h.vertices[i], h.vertices[j]));
            }
        }
        EXPECT_EQ(h.boundary_size, boundary_size(g, h.vertices));
        ++checked;
    });
    EXPECT_GT(checked, 10u);
}

TEST(SubgraphEnum, VisitedGrowsAboutLinearlyAtBoundedDegree) {
    GraphRng rng(11);
    std::vector<double> per_vertex;
    for (std::size_t n : {100u, 200u, 400u}) {
        const auto g = random_molecule(n, n / 10, 1, rng);
        const auto stats = enumerate_connected_induced_subgraphs(g, 5, [](const InducedSubgraph&) {});
        per_vertex.push_back(static_cast<double>(stats.visited) / static_cast<double>(n));
    }
    EXPECT_LT(per_vertex.back(), 2.0 * per_vertex.front());
}

TEST(SubgraphEnum, RejectsBadSizes) {
    const auto g = path_graph(3);
    const auto noop = [](const InducedSubgraph&) {};
    EXPECT_THROW(enumerate_connected_induced_subgraphs(g, 0, noop), std::invalid_argument);
    EXPECT_THROW(enumerate_connected_induced_subgraphs(g, kMaxSubgraphSize + 1, noop), std::invalid_argument);
    const std::vector<VertexId> none;
    EXPECT_THROW(static_cast<void>(boundary_size(g, none)), std::invalid_argument);
}

}  // namespace
}  // namespace apc
