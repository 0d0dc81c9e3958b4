#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "apc/graph.hpp"
#include "apc/tu_format.hpp"

namespace apc {
namespace {

namespace fs = std::filesystem;

class TuFormat : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("apc_tu_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    void write(const std::string& suffix, const std::string& text) {
        std::ofstream(dir_ / ("TOY_" + suffix + ".txt"), std::ios::binary) << text;
    }

    void write_toy() {
        // Graph 1: triangle on vertices 1..3; graph 2: edge 4-5.
        write("A", "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n4, 5\n5, 4\n");
        write("graph_indicator", "1\n1\n1\n2\n2\n");
        write("node_labels", "7\n3\n7\n3\n0\n");
        write("graph_labels", "1\n-1\n");
    }

    fs::path dir_;
};

TEST_F(TuFormat, ParsesGraphsLabelsAndClasses) {
    write_toy();
    const auto ds = parse_tu_dataset(dir_, "TOY");
    ASSERT_EQ(ds.graphs.size(), 2u);
    EXPECT_EQ(ds.graphs[0].num_vertices(), 3u);
    EXPECT_EQ(ds.graphs[0].num_edges(), 3u);
    EXPECT_EQ(ds.graphs[1].num_edges(), 1u);
    EXPECT_EQ(ds.graphs[0].label(0), 7u);
    EXPECT_EQ(ds.class_labels, (std::vector<int>{1, -1}));
}

TEST_F(TuFormat, AcceptsCrlfAndMissingGraphLabels) {
    write("A", "1 ,2\r\n2, 1\r\n");
    write("graph_indicator", "1\r\n1\r\n");
    write("node_labels", "0\r\n1\r\n");
    const auto ds = parse_tu_dataset(dir_, "TOY");
    ASSERT_EQ(ds.graphs.size(), 1u);
    EXPECT_EQ(ds.graphs[0].num_edges(), 1u);
    EXPECT_EQ(ds.class_labels, std::vector<int>{0});
}

TEST_F(TuFormat, ReportsFileAndLine) {
    write_toy();
    write("A", "1, 2\n1, 4\n");
    try {
        static_cast<void>(parse_tu_dataset(dir_, "TOY"));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("TOY_A.txt:2"), std::string::npos) << what;
    }
}

TEST_F(TuFormat, RejectsSelfLoopsAndBadVertices) {
    write_toy();
    write("A", "2, 2\n");
    EXPECT_THROW(static_cast<void>(parse_tu_dataset(dir_, "TOY")), ParseError);
    write("A", "1, 9\n");
    EXPECT_THROW(static_cast<void>(parse_tu_dataset(dir_, "TOY")), ParseError);
}

TEST_F(TuFormat, MissingFileIsAParseError) {
    EXPECT_THROW(static_cast<void>(parse_tu_dataset(dir_, "NOPE")), ParseError);
}

TEST_F(TuFormat, WriteThenParseRoundTrips) {
    write_toy();
    const auto ds = parse_tu_dataset(dir_, "TOY");
    const auto out = dir_ / "copy";
    fs::create_directories(out);
    auto copy = ds;
    copy.name = "COPY";
    write_tu_dataset(copy, out);
    const auto back = parse_tu_dataset(out, "COPY");
    EXPECT_EQ(back.graphs, ds.graphs);
    EXPECT_EQ(back.class_labels, ds.class_labels);
}

TEST_F(TuFormat, CompactLabels) {
    write_toy();
    const auto [ds, alphabet] = compact_labels(parse_tu_dataset(dir_, "TOY"));
    EXPECT_EQ(alphabet.k, 3u);
    EXPECT_EQ(alphabet.map(0), 0u);
    EXPECT_EQ(alphabet.map(3), 1u);
    EXPECT_EQ(alphabet.map(7), 2u);
    EXPECT_EQ(ds.graphs[0].label(0), 2u);
}

TEST_F(TuFormat, TopKRemapSendsRareLabelsToSharedBucket) {
    write_toy();
    // Frequencies: 7 -> 2, 3 -> 2, 0 -> 1. Tie between 3 and 7 goes to 3.
    const auto [ds, alphabet] = remap_labels_topk(parse_tu_dataset(dir_, "TOY"), 2);
    EXPECT_EQ(alphabet.k, 2u);
    EXPECT_EQ(alphabet.map(3), 0u);
    EXPECT_EQ(alphabet.map(7), 1u);
    EXPECT_EQ(alphabet.map(0), 1u);
    EXPECT_EQ(ds.graphs[1].label(0), 0u);
}

TEST(TuJson, GraphRoundTrip) {
    const Graph g(4, {{0, 1}, {1, 2}, {2, 3}}, {0, 2, 1, 0});
    EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
}

}  // namespace
}  // namespace apc
