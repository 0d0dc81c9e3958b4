#include <gtest/gtest.h>

#include "apc/generators.hpp"
#include "apc/graph.hpp"

namespace apc {
namespace {

TEST(Graph, NormalisesEdgeOrientationAndSortsAdjacency) {
    const Graph g(4, {{2, 0}, {1, 3}, {0, 1}}, {0, 1, 1, 2});
    EXPECT_EQ(g.num_vertices(), 4u);
    EXPECT_EQ(g.num_edges(), 3u);
    EXPECT_EQ(g.edges().front(), (Edge{0, 1}));
    const auto nb = g.neighbors(0);
    ASSERT_EQ(nb.size(), 2u);
    EXPECT_EQ(nb[0], 1u);
    EXPECT_EQ(nb[1], 2u);
    EXPECT_TRUE(g.has_edge(3, 1));
    EXPECT_FALSE(g.has_edge(0, 3));
    EXPECT_EQ(g.label_bound(), 3u);
    EXPECT_EQ(g.max_degree(), 2u);
}

TEST(Graph, RejectsMalformedInput) {
    EXPECT_THROW(Graph(3, {{1, 1}}, {0, 0, 0}), GraphError);
    EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}, {0, 0, 0}), GraphError);
    EXPECT_THROW(Graph(3, {{0, 3}}, {0, 0, 0}), GraphError);
    EXPECT_THROW(Graph(3, {}, {0, 0}), GraphError);
}

TEST(Graph, NeighborsOutOfRangeThrows) {
    const auto g = path_graph(3);
    EXPECT_THROW(static_cast<void>(g.neighbors(3)), std::out_of_range);
}

TEST(Graph, EmptyAndEdgeless) {
    const Graph empty;
    EXPECT_EQ(empty.num_vertices(), 0u);
    EXPECT_EQ(empty.label_bound(), 0u);
    const auto isolated = Graph::unlabelled(5, {});
    EXPECT_EQ(isolated.max_degree(), 0u);
    EXPECT_TRUE(isolated.neighbors(4).empty());
}

TEST(Graph, NamedGraphs) {
    EXPECT_EQ(complete_graph(5).num_edges(), 10u);
    EXPECT_EQ(cycle_graph(6).num_edges(), 6u);
    EXPECT_EQ(path_graph(6).num_edges(), 5u);
    const auto star = star_graph(3);
    EXPECT_EQ(star.num_vertices(), 4u);
    EXPECT_EQ(star.degree(0), 3u);
}

TEST(Graph, PermuteVerticesPreservesStructure) {
    GraphRng rng(5);
    const auto g = erdos_renyi(9, 0.4, 3, rng);
    const auto perm = random_permutation(g.num_vertices(), rng);
    const auto h = permute_vertices(g, perm);
    ASSERT_EQ(h.num_edges(), g.num_edges());
    for (VertexId a = 0; a < h.num_vertices(); ++a) {
        EXPECT_EQ(h.label(a), g.label(perm[a]));
        for (VertexId b = 0; b < h.num_vertices(); ++b) EXPECT_EQ(h.has_edge(a, b), g.has_edge(perm[a], perm[b]));
    }
}

TEST(Graph, DisjointUnionShiftsSecondOperand) {
    const auto u = disjoint_union(path_graph(2), cycle_graph(3));
    EXPECT_EQ(u.num_vertices(), 5u);
    EXPECT_EQ(u.num_edges(), 4u);
    EXPECT_TRUE(u.has_edge(2, 4));
    EXPECT_FALSE(u.has_edge(1, 2));
}

TEST(Graph, WithLabels) {
    const Graph g(3, {{0, 1}}, {0, 1, 2});
    const std::vector<LabelId> relabel{2, 2, 0};
    const auto h = with_labels(g, relabel);
    EXPECT_EQ(h.label(0), 2u);
    EXPECT_EQ(h.label(2), 0u);
    EXPECT_EQ(h.edges(), g.edges());
}

TEST(Generators, SeededDrawsAreReproducible) {
    GraphRng a(42);
    GraphRng b(42);
    EXPECT_EQ(erdos_renyi(12, 0.3, 2, a), erdos_renyi(12, 0.3, 2, b));
    EXPECT_EQ(random_molecule(20, 2, 3, a), random_molecule(20, 2, 3, b));
}

TEST(Generators, MoleculeIsConnectedWithBoundedTreeDegree) {
    GraphRng rng(1);
    const auto g = random_molecule(30, 0, 3, rng);
    EXPECT_EQ(g.num_edges(), 29u);
    EXPECT_LE(g.max_degree(), 4u);
}

}  // namespace
}  // namespace apc
