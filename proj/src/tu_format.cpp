#include "apc/tu_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace apc {
namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::int64_t parse_int(const std::string& token, const fs::path& file, std::size_t line) {
    std::int64_t value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(file.string() + ":" + std::to_string(line) + ": expected an integer, got '" +
                         token + "'");
    }
    return value;
}

// Returns one entry per non-blank line.
std::vector<std::int64_t> read_int_column(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("missing file " + file.string());
    std::vector<std::int64_t> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty()) continue;
        values.push_back(parse_int(t, file, line_no));
    }
    return values;
}

struct RawEdge {
    std::int64_t a;
    std::int64_t b;
    std::size_t line;
};

std::vector<RawEdge> read_edge_list(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("missing file " + file.string());
    std::vector<RawEdge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty()) continue;
        const auto comma = t.find(',');
        if (comma == std::string::npos) {
            throw ParseError(file.string() + ":" + std::to_string(line_no) + ": expected 'i, j'");
        }
        edges.push_back({parse_int(trim(t.substr(0, comma)), file, line_no),
                         parse_int(trim(t.substr(comma + 1)), file, line_no), line_no});
    }
    return edges;
}

std::pair<Dataset, LabelAlphabet> apply_alphabet(const Dataset& dataset, LabelAlphabet alphabet) {
    Dataset out{dataset.name, {}, dataset.class_labels};
    out.graphs.reserve(dataset.graphs.size());
    for (const auto& g : dataset.graphs) {
        std::vector<LabelId> labels(g.num_vertices());
        for (std::size_t v = 0; v < labels.size(); ++v) {
            labels[v] = alphabet.map(g.label(static_cast<VertexId>(v)));
        }
        out.graphs.emplace_back(g.num_vertices(), g.edges(), std::move(labels));
    }
    return {std::move(out), std::move(alphabet)};
}

}  // namespace

Dataset parse_tu_dataset(const fs::path& directory, const std::string& name) {
    const auto file = [&](const char* suffix) { return directory / (name + suffix); };

    const auto indicator = read_int_column(file("_graph_indicator.txt"));
    const auto node_labels = read_int_column(file("_node_labels.txt"));
    const auto raw_edges = read_edge_list(file("_A.txt"));
    if (node_labels.size() != indicator.size()) {
        throw ParseError(file("_node_labels.txt").string() + ": " + std::to_string(node_labels.size()) +
                         " labels for " + std::to_string(indicator.size()) + " vertices");
    }

    // Graph ids may in principle be interleaved; vertices are numbered locally
    // in order of appearance within each graph.
    std::map<std::int64_t, std::size_t> graph_slot;
    for (auto id : indicator) graph_slot.emplace(id, 0);
    std::size_t next = 0;
    for (auto& [id, slot] : graph_slot) slot = next++;
    const std::size_t num_graphs = graph_slot.size();

    std::vector<std::size_t> graph_of(indicator.size());
    std::vector<VertexId> local_id(indicator.size());
    std::vector<std::vector<LabelId>> labels(num_graphs);
    for (std::size_t v = 0; v < indicator.size(); ++v) {
        const auto g = graph_slot[indicator[v]];
        graph_of[v] = g;
        local_id[v] = static_cast<VertexId>(labels[g].size());
        if (node_labels[v] < 0 || node_labels[v] > std::numeric_limits<LabelId>::max()) {
            throw ParseError(file("_node_labels.txt").string() + ":" + std::to_string(v + 1) +
                             ": label " + std::to_string(node_labels[v]) + " is not a nonnegative id");
        }
        labels[g].push_back(static_cast<LabelId>(node_labels[v]));
    }

    std::vector<std::set<Edge>> edges(num_graphs);
    const auto a_file = file("_A.txt");
    for (const auto& e : raw_edges) {
        const auto where = a_file.string() + ":" + std::to_string(e.line) + ": ";
        const auto n = static_cast<std::int64_t>(indicator.size());
        if (e.a < 1 || e.a > n || e.b < 1 || e.b > n) {
            throw ParseError(where + "vertex index out of range [1, " + std::to_string(n) + "]");
        }
        if (e.a == e.b) throw ParseError(where + "self-loop at vertex " + std::to_string(e.a));
        const auto u = static_cast<std::size_t>(e.a - 1);
        const auto v = static_cast<std::size_t>(e.b - 1);
        if (graph_of[u] != graph_of[v]) {
            throw ParseError(where + "edge crosses graph boundary (graphs " +
                             std::to_string(indicator[u]) + " and " + std::to_string(indicator[v]) + ")");
        }
        auto lu = local_id[u];
        auto lv = local_id[v];
        if (lu > lv) std::swap(lu, lv);
        edges[graph_of[u]].insert({lu, lv});
    }

    Dataset ds;
    ds.name = name;
    ds.graphs.reserve(num_graphs);
    for (std::size_t g = 0; g < num_graphs; ++g) {
        const auto n = labels[g].size();
        ds.graphs.emplace_back(n, std::vector<Edge>(edges[g].begin(), edges[g].end()), std::move(labels[g]));
    }

    const auto class_file = file("_graph_labels.txt");
    if (fs::exists(class_file)) {
        const auto classes = read_int_column(class_file);
        if (classes.size() != num_graphs) {
            throw ParseError(class_file.string() + ": " + std::to_string(classes.size()) +
                             " class labels for " + std::to_string(num_graphs) + " graphs");
        }
        ds.class_labels.assign(classes.begin(), classes.end());
    } else {
        ds.class_labels.assign(num_graphs, 0);
    }
    return ds;
}

void write_tu_dataset(const Dataset& dataset, const fs::path& directory) {
    fs::create_directories(directory);
    const auto open = [&](const char* suffix) {
        std::ofstream out(directory / (dataset.name + suffix));
        if (!out) throw std::runtime_error("cannot write " + (directory / (dataset.name + suffix)).string());
        return out;
    };
    auto a = open("_A.txt");
    auto indicator = open("_graph_indicator.txt");
    auto node_labels = open("_node_labels.txt");
    auto graph_labels = open("_graph_labels.txt");

    std::size_t base = 1;
    for (std::size_t g = 0; g < dataset.graphs.size(); ++g) {
        const auto& graph = dataset.graphs[g];
        for (const auto& e : graph.edges()) {
            a << base + e.first << ", " << base + e.second << '\n';
            a << base + e.second << ", " << base + e.first << '\n';
        }
        for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
            indicator << g + 1 << '\n';
            node_labels << graph.label(static_cast<VertexId>(v)) << '\n';
        }
        graph_labels << (g < dataset.class_labels.size() ? dataset.class_labels[g] : 0) << '\n';
        base += graph.num_vertices();
    }
}

std::pair<Dataset, LabelAlphabet> compact_labels(const Dataset& dataset) {
    std::set<LabelId> seen;
    for (const auto& g : dataset.graphs) seen.insert(g.labels().begin(), g.labels().end());
    LabelAlphabet alphabet;
    for (auto id : seen) {
        alphabet.forward_map.emplace(id, static_cast<LabelId>(alphabet.k++));
        alphabet.code_names.push_back(std::to_string(id));
    }
    return apply_alphabet(dataset, std::move(alphabet));
}

std::pair<Dataset, LabelAlphabet> remap_labels_topk(const Dataset& dataset, std::size_t k) {
    if (k < 2) throw std::invalid_argument("top-k remapping needs k >= 2");
    std::map<LabelId, std::size_t> frequency;
    for (const auto& g : dataset.graphs)
        for (auto l : g.labels()) ++frequency[l];
    if (frequency.empty()) throw std::invalid_argument("dataset has no vertex labels to remap");

    std::vector<std::pair<LabelId, std::size_t>> ranked(frequency.begin(), frequency.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });

    LabelAlphabet alphabet;
    alphabet.k = k;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto compact = static_cast<LabelId>(std::min(i, k - 1));
        alphabet.forward_map.emplace(ranked[i].first, compact);
        if (i < k - 1) alphabet.code_names.push_back(std::to_string(ranked[i].first));
    }
    while (alphabet.code_names.size() < k - 1) alphabet.code_names.push_back("unused");
    alphabet.code_names.push_back("other");
    return apply_alphabet(dataset, std::move(alphabet));
}

nlohmann::json graph_to_json(const Graph& graph) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : graph.edges()) edges.push_back({e.first, e.second});
    return {{"n", graph.num_vertices()},
            {"edges", std::move(edges)},
            {"labels", std::vector<LabelId>(graph.labels().begin(), graph.labels().end())}};
}

Graph graph_from_json(const nlohmann::json& j) {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<VertexId>(), e.at(1).get<VertexId>()});
    return Graph(j.at("n").get<std::size_t>(), std::move(edges), j.at("labels").get<std::vector<LabelId>>());
}

}  // namespace apc
