#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "apc/generators.hpp"
#include "apc/tu_format.hpp"
#include "cli.hpp"

namespace apc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = fs::temp_directory_path() /
                ("apc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(root_);
        fs::create_directories(root_);
        Dataset toy{"TOY", {}, {}};
        GraphRng rng(11);
        for (int i = 0; i < 12; ++i) {
            toy.graphs.push_back(erdos_renyi(4 + rng.below(4), 0.5, 3, rng));
            toy.class_labels.push_back(i % 2 ? 1 : -1);
        }
        write_tu_dataset(toy, root_ / "TOY");
    }
    void TearDown() override { fs::remove_all(root_); }

    int run(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return cli::run(args, out_, err_);
    }

    std::string dataset() const { return (root_ / "TOY").string(); }
    std::string out_dir(const std::string& name) const { return (root_ / name).string(); }

    void write_single(const std::string& name, const Graph& g) {
        write_tu_dataset(Dataset{name, {g}, {0}}, root_ / name);
    }

    fs::path root_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}), cli::kUsage);
    EXPECT_EQ(run({"frobnicate"}), cli::kUsage);
    EXPECT_EQ(run({"count", "--dataset", dataset()}), cli::kUsage);  // --out missing
    EXPECT_EQ(run({"count", "--dataset", dataset(), "--out", out_dir("o"), "--scheme", "exact", "--arithmetic",
                   "bigint"}),
              cli::kUsage);
    EXPECT_EQ(run({"count", "--dataset", dataset(), "--out", out_dir("o"), "--scheme", "power", "--arithmetic",
                   "exactint"}),
              cli::kUsage);
    EXPECT_EQ(run({"count", "--dataset", dataset(), "--out", out_dir("o"), "--arithmetic", "bigint"}), cli::kUsage);
    EXPECT_EQ(run({"count", "--dataset", (root_ / "MISSING").string(), "--out", out_dir("o")}), cli::kUsage);
    EXPECT_EQ(run({"--help"}), cli::kSuccess);
}

TEST_F(Cli, CountWritesTablesSummaryAndManifest) {
    ASSERT_EQ(run({"count", "--dataset", dataset(), "--max-length", "3", "--out", out_dir("c"), "--threads", "2"}),
              cli::kSuccess)
        << err_.str();
    const auto summary = json::parse(slurp(root_ / "c" / "summary.json"));
    EXPECT_EQ(summary["graphs"], 12);
    EXPECT_EQ(summary["totals"].size(), 3u);
    EXPECT_EQ(summary["totals"][0]["cycles"], "0");

    const auto manifest = json::parse(slurp(root_ / "c" / "manifest.json"));
    EXPECT_EQ(manifest["command"], "count");
    ASSERT_EQ(manifest["files"].size(), 2u);
    for (const auto& f : manifest["files"]) {
        const auto bytes = slurp(root_ / "c" / f["name"].get<std::string>());
        EXPECT_EQ(f["bytes"], bytes.size());
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(cli::fnv1a(bytes)));
        EXPECT_EQ(f["fnv1a"], hex);
    }
    EXPECT_EQ(slurp(root_ / "c" / "counts.csv").rfind("graph_id,u,v,length,value\n", 0), 0u);
}

TEST_F(Cli, CountEdgelessGraphIsAllZero) {
    write_single("EMPTY", Graph(4, {}, {0, 0, 0, 0}));
    ASSERT_EQ(run({"count", "--dataset", (root_ / "EMPTY").string(), "--out", out_dir("e")}), cli::kSuccess)
        << err_.str();
    EXPECT_EQ(slurp(root_ / "e" / "counts.csv"), "graph_id,u,v,length,value\n");
    const auto summary = json::parse(slurp(root_ / "e" / "summary.json"));
    for (const auto& t : summary["totals"]) {
        EXPECT_EQ(t["paths"], "0");
        EXPECT_EQ(t["cycles"], "0");
    }
}

TEST_F(Cli, LengthOneIsTheEdgeIndicator) {
    const Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {0, 1, 0, 1});
    write_single("SQUARE", g);
    ASSERT_EQ(run({"count", "--dataset", (root_ / "SQUARE").string(), "--max-length", "1", "--out", out_dir("s")}),
              cli::kSuccess);
    std::istringstream rows(slurp(root_ / "s" / "counts.csv"));
    std::string line;
    std::getline(rows, line);
    std::size_t n = 0;
    while (std::getline(rows, line)) {
        unsigned graph, u, v, l, value;
        ASSERT_EQ(std::sscanf(line.c_str(), "%u,%u,%u,%u,%u", &graph, &u, &v, &l, &value), 5);
        EXPECT_EQ(l, 1u);
        EXPECT_EQ(value, 1u);
        EXPECT_TRUE(g.has_edge(u, v));
        ++n;
    }
    EXPECT_EQ(n, 8u);
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
    const std::vector<std::string> base{"gram", "--dataset", dataset(), "--scheme", "power", "--max-length", "4",
                                        "--kernel", "rbf", "--standardize", "--seed", "5"};
    auto a = base;
    a.insert(a.end(), {"--out", out_dir("a"), "--threads", "1"});
    auto b = base;
    b.insert(b.end(), {"--out", out_dir("b"), "--threads", "3"});
    ASSERT_EQ(run(a), cli::kSuccess) << err_.str();
    ASSERT_EQ(run(b), cli::kSuccess) << err_.str();
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(root_ / "a")) {
        const auto name = entry.path().filename();
        EXPECT_EQ(slurp(entry.path()), slurp(root_ / "b" / name)) << name;
        ++compared;
    }
    EXPECT_EQ(compared, 4u);  // features, gram, meta, manifest
}

TEST_F(Cli, EmbedWithExactSchemeReportsDecodeStatistics) {
    ASSERT_EQ(run({"embed", "--dataset", dataset(), "--scheme", "exact", "--max-length", "3", "--out", out_dir("x"),
                   "--format", "json"}),
              cli::kSuccess)
        << err_.str();
    const auto report = json::parse(slurp(root_ / "x" / "embed_report.json"));
    EXPECT_GT(report["decode"]["decoded_entries"].get<int>(), 0);
    EXPECT_EQ(json::parse(slurp(root_ / "x" / "embedding.json")).size(), 12u);
}

TEST_F(Cli, PresetFillsUnsetFlagsOnly) {
    ASSERT_EQ(run({"gram", "--preset", "mutag-paper", "--dataset", dataset(), "--max-length", "3", "--out",
                   out_dir("p")}),
              cli::kSuccess)
        << err_.str();
    const auto meta = json::parse(slurp(root_ / "p" / "gram_meta.json"));
    EXPECT_EQ(meta["kernel"], "rbf");
    EXPECT_EQ(meta["max_length"], 3);
    EXPECT_EQ(meta["standardize"], true);
    EXPECT_DOUBLE_EQ(meta["cut"].get<double>(), 1e-5);
    EXPECT_EQ(meta["scheme"].get<std::string>().rfind("power", 0), 0u);
    EXPECT_TRUE(meta.contains("knn_accuracy"));
}

TEST_F(Cli, FloatPrecisionBudgetNeedsForce) {
    const std::vector<std::string> args{"embed", "--dataset", dataset(), "--scheme", "power", "--arithmetic",
                                        "float", "--base", "32", "--max-length", "7", "--out", out_dir("f")};
    EXPECT_EQ(run(args), cli::kBudget);
    EXPECT_NE(err_.str().find("--force"), std::string::npos);
    EXPECT_FALSE(fs::exists(root_ / "f"));
    auto forced = args;
    forced.push_back("--force");
    EXPECT_EQ(run(forced), cli::kSuccess) << err_.str();
    EXPECT_NE(err_.str().find("warning"), std::string::npos);
}

TEST_F(Cli, PowerDigitOverflowIsABudgetError) {
    write_single("K6", complete_graph(6));
    EXPECT_EQ(run({"embed", "--dataset", (root_ / "K6").string(), "--scheme", "power", "--arithmetic", "bigint",
                   "--base", "2", "--max-length", "3", "--out", out_dir("k")}),
              cli::kBudget);
}

TEST_F(Cli, ValidatePassesAndLocatesInjectedFault) {
    ASSERT_EQ(run({"validate", "--graphs", "12", "--max-n", "7", "--out", out_dir("v")}), cli::kSuccess)
        << out_.str() << err_.str();
    EXPECT_EQ(json::parse(slurp(root_ / "v" / "validate_report.json"))["status"], "PASS");

    EXPECT_EQ(run({"validate", "--graphs", "12", "--max-n", "7", "--inject-fault"}), cli::kMismatch);
    EXPECT_NE(out_.str().find("FAIL"), std::string::npos);
    EXPECT_NE(out_.str().find("u="), std::string::npos);

    EXPECT_EQ(run({"validate", "--dataset", dataset(), "--max-length", "4"}), cli::kSuccess) << out_.str();
}

TEST_F(Cli, BenchQuickEmitsTablesAndPlots) {
    ASSERT_EQ(run({"bench", "--quick", "--threads", "2", "--out", out_dir("b")}), cli::kSuccess) << err_.str();
    for (const char* f : {"bench_size.csv", "bench_length.csv", "bench_decode.csv", "bench_parallel.csv",
                          "bench_size.svg", "bench_summary.json"}) {
        EXPECT_TRUE(fs::exists(root_ / "b" / f)) << f;
    }
    EXPECT_EQ(slurp(root_ / "b" / "bench_size.svg").rfind("<svg", 0), 0u);
}

TEST(Fnv1a, KnownVectors) {
    EXPECT_EQ(cli::fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(cli::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

}  // namespace
}  // namespace apc
