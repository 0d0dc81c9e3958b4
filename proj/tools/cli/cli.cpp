#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "apc/count.hpp"
#include "apc/embedding.hpp"
#include "apc/export.hpp"
#include "apc/generators.hpp"
#include "apc/label_coding.hpp"
#include "apc/oracle.hpp"
#include "apc/tu_format.hpp"
#include "bench.hpp"

namespace apc::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Preset {
    const char* name;
    const char* dataset;
    std::size_t max_length;
    std::size_t remap;
    double cut;
};

// Published parameter rows: power scheme, rbf with auto
// scale, standardized features.
constexpr Preset kPresets[] = {
    {"mutag-paper", "MUTAG", 4, 3, 1e-5},   {"ptc-mr-paper", "PTC_MR", 5, 3, 1e-5},
    {"nci1-paper", "NCI1", 3, 3, 1e-5},     {"nci109-paper", "NCI109", 3, 3, 1e-5},
    {"enzymes-paper", "ENZYMES", 3, 0, 1e-6},
};

struct RunConfig {
    std::string command;
    std::string preset;
    std::string dataset;
    std::string root;
    std::size_t max_length = 4;
    std::string scheme = "none";
    std::uint64_t base = 0;  // 0: chosen from the precision budget
    std::string arithmetic;  // empty: default for the scheme
    std::size_t remap = 0;   // 0: keep every label
    std::optional<double> cut;
    std::string kernel = "linear";
    std::string gamma = "auto";
    bool standardize = false;
    bool normalize = false;
    bool include_l2_cycles = false;
    int threads = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    bool force = false;
    double tolerance = 1e-6;
    std::size_t folds = 10;
    // validate
    std::size_t graphs = 200;
    std::size_t max_n = 10;
    bool inject_fault = false;
    // bench
    bool quick = false;

    json to_json() const {
        json j{{"command", command},       {"preset", preset},
               {"dataset", dataset},       {"max_length", max_length},
               {"scheme", scheme},         {"base", base},
               {"arithmetic", arithmetic}, {"remap", remap},
               {"kernel", kernel},         {"gamma", gamma},
               {"standardize", standardize}, {"normalize", normalize},
               {"include_l2_cycles", include_l2_cycles}, {"seed", seed},
               {"format", format},         {"force", force},
               {"tolerance", tolerance},   {"folds", folds}};
        j["cut"] = cut ? json(*cut) : json(nullptr);
        if (command == "validate") {
            j["graphs"] = graphs;
            j["max_n"] = max_n;
            j["inject_fault"] = inject_fault;
        }
        if (command == "bench") j["quick"] = quick;
        return j;
    }
};

class Failure : public std::runtime_error {
public:
    Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

std::string hex64(std::uint64_t x) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << x;
    return out.str();
}

double elapsed(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

// Collects outputs in memory; written once the command has finished.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    std::ostringstream& file(const std::string& name) {
        for (auto& [n, s] : files_)
            if (n == name) return s;
        files_.emplace_back(name, std::ostringstream{});
        return files_.back().second;
    }

    void commit(const RunConfig& config) {
        fs::create_directories(dir_);
        json listing = json::array();
        for (auto& [name, stream] : files_) {
            const auto bytes = stream.str();
            std::ofstream f(dir_ / name, std::ios::binary);
            f << bytes;
            if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
            listing.push_back({{"name", name}, {"bytes", bytes.size()}, {"fnv1a", hex64(fnv1a(bytes))}});
        }
        const auto cfg = config.to_json();
        const json manifest{{"command", config.command},
                            {"config", cfg},
                            {"config_hash", hex64(fnv1a(cfg.dump()))},
                            {"files", std::move(listing)}};
        std::ofstream(dir_ / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::ostringstream>> files_;
};

struct LoadedDataset {
    Dataset data;
    LabelAlphabet alphabet;
};

LoadedDataset load_dataset(const RunConfig& config) {
    if (config.dataset.empty()) throw Failure(kUsage, "--dataset is required");
    fs::path dir = config.dataset;
    std::string name = dir.filename().string();
    if (!fs::is_directory(dir)) {
        fs::path root = config.root;
        if (root.empty()) {
            const char* env = std::getenv("APC_DATA_ROOT");
            root = env ? env : "data";
        }
        dir = root / config.dataset;
        name = config.dataset;
        if (!fs::is_directory(dir)) throw Failure(kUsage, "dataset directory not found: " + dir.string());
    }
    auto raw = parse_tu_dataset(dir, name);
    auto [data, alphabet] = config.remap ? remap_labels_topk(raw, config.remap) : compact_labels(raw);
    if (alphabet.k == 0) alphabet.k = 1;
    return {std::move(data), std::move(alphabet)};
}

// Scheme, arithmetic and base after defaults and compatibility checks.
struct Coding {
    std::optional<CodeScheme> scheme;
    NumericDomain domain = NumericDomain::exact_int;
};

Coding resolve_coding(const RunConfig& config, std::size_t k, std::ostream& err) {
    Coding c;
    const auto& a = config.arithmetic;
    if (config.scheme == "none") {
        if (a.empty() || a == "exactint") return c;
        if (a == "float") {
            c.domain = NumericDomain::float64;
            return c;
        }
        throw Failure(kUsage, "--scheme none takes --arithmetic exactint or float");
    }
    if (config.scheme == "exact") {
        if (!a.empty() && a != "float") throw Failure(kUsage, "--scheme exact requires --arithmetic float");
        c.scheme = CodeScheme::exact(k);
        c.domain = NumericDomain::float64;
        return c;
    }
    if (a == "exactint") throw Failure(kUsage, "--scheme power takes --arithmetic float or bigint");
    c.domain = a == "bigint" ? NumericDomain::bigint_coded : NumericDomain::float64;
    const auto coded_length = config.max_length - 1;
    std::uint64_t base = config.base;
    if (base == 0) {
        const auto chosen = default_power_base(k, coded_length, c.domain);
        if (!chosen) {
            throw Failure(kBudget, "no power base fits the 52-bit float budget for k=" + std::to_string(k) +
                                       " and coded length " + std::to_string(coded_length) +
                                       "; use --arithmetic bigint");
        }
        base = *chosen;
    }
    const auto budget = precision_budget(k, coded_length, base, c.domain);
    if (!budget.fits) {
        const std::string msg = "power base " + std::to_string(base) + " with k=" + std::to_string(k) +
                                " and coded length " + std::to_string(coded_length) + " needs " +
                                std::to_string(budget.code_bits) + " bits, above the 52-bit float budget";
        if (!config.force) throw Failure(kBudget, msg + " (pass --force to run anyway)");
        err << "warning: " << msg << '\n';
    }
    c.scheme = CodeScheme::power(k, base);
    return c;
}

EmbedOptions embed_options(const RunConfig& config, const Coding& coding) {
    EmbedOptions o;
    o.scheme = coding.scheme;
    o.domain = coding.domain;
    o.include_l2_cycles = config.include_l2_cycles;
    o.tolerance = config.tolerance;
    return o;
}

std::string kind_name(FeatureKind kind) { return kind == FeatureKind::path ? "path" : "cycle"; }

json report_json(const EmbedReport& r) {
    return {{"decoded_entries", r.decoded_entries}, {"ambiguous", r.ambiguous},         {"no_solution", r.no_solution},
            {"budget_exceeded", r.budget_exceeded}, {"skipped", r.skipped()},           {"warnings", r.warnings}};
}

// ---- count ------------------------------------------------------------------

template <class T>
void count_dataset(const RunConfig& config, const Dataset& ds, OutputSet& out, std::ostream& err) {
    CountOptions options;
    options.threads = config.threads;
    const auto domain = std::is_same_v<T, double> ? NumericDomain::float64 : NumericDomain::exact_int;
    LengthTotals<T> totals{std::vector<T>(config.max_length, T(0)), std::vector<T>(config.max_length, T(0))};
    auto& csv = out.file(config.format == "json" ? "counts.json" : "counts.csv");
    json all = json::array();
    if (config.format != "json") csv << kCountCsvHeader << '\n';
    for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
        const auto start = Clock::now();
        const auto table = count_all(ds.graphs[g], WeightAssignment<T>{}, config.max_length, options);
        err << "graph " << g << ": n=" << ds.graphs[g].num_vertices() << " counted in " << elapsed(start) << " s\n";
        const auto t = length_totals(table);
        for (std::size_t l = 0; l < config.max_length; ++l) {
            totals.paths[l] += t.paths[l];
            totals.cycles[l] += t.cycles[l];
        }
        if (config.format == "json") {
            all.push_back(counts_to_json(g, table));
        } else {
            write_counts_csv(csv, g, table);
        }
    }
    if (config.format == "json") csv << all.dump() << '\n';
    json per_length = json::array();
    for (std::size_t l = 0; l < config.max_length; ++l) {
        per_length.push_back(
            {{"length", l + 1}, {"paths", format_value(totals.paths[l])}, {"cycles", format_value(totals.cycles[l])}});
    }
    out.file("summary.json") << json{{"graphs", ds.graphs.size()},
                                      {"domain", std::string(to_string(domain))},
                                      {"totals", std::move(per_length)}}
                                    .dump(2)
                             << '\n';
}

int cmd_count(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto loaded = load_dataset(config);
    const auto coding = resolve_coding(config, loaded.alphabet.k, err);
    OutputSet files(config.out);
    const auto start = Clock::now();
    if (coding.domain == NumericDomain::float64 && !coding.scheme) {
        count_dataset<double>(config, loaded.data, files, err);
    } else {
        count_dataset<BigInt>(config, loaded.data, files, err);
    }
    if (coding.scheme) {
        auto options = embed_options(config, coding);
        options.include_l2_cycles = true;
        options.threads = config.threads;
        EmbedReport report;
        auto& decoded = files.file("decoded.csv");
        decoded << kDecodedCsvHeader << '\n';
        for (std::size_t g = 0; g < loaded.data.graphs.size(); ++g) {
            for_each_decoded(
                loaded.data.graphs[g], config.max_length, options,
                [&](VertexId u, VertexId v, std::size_t l, const FeatureKey& key, std::uint64_t count) {
                    write_decoded_row(decoded, g, u, v, l, kind_name(key.kind), key.code_string(), count);
                },
                &report);
        }
        files.file("decode_report.json") << report_json(report).dump(2) << '\n';
    }
    files.commit(config);
    out << "counted " << loaded.data.graphs.size() << " graphs up to length " << config.max_length << " in "
        << elapsed(start) << " s -> " << config.out << '\n';
    return kSuccess;
}

// ---- embed / gram -----------------------------------------------------------

struct Embedded {
    LoadedDataset loaded;
    Coding coding;
    std::vector<Embedding> embeddings;
    EmbedReport report;
};

Embedded embed_all(const RunConfig& config, std::ostream& err) {
    Embedded e{load_dataset(config), {}, {}, {}};
    e.coding = resolve_coding(config, e.loaded.alphabet.k, err);
    const auto start = Clock::now();
    e.embeddings = embed_dataset(e.loaded.data.graphs, config.max_length, embed_options(config, e.coding),
                                 config.threads, &e.report);
    err << "embedded " << e.embeddings.size() << " graphs in " << elapsed(start) << " s\n";
    if (e.report.skipped()) err << "warning: " << e.report.skipped() << " entries skipped by the exact decoder\n";
    return e;
}

FeatureIndex retained_features(const RunConfig& config, const std::vector<Embedding>& embeddings) {
    return config.cut ? feature_cut(embeddings, *config.cut) : all_features(embeddings);
}

void write_embeddings(const RunConfig& config, const std::vector<Embedding>& embeddings, OutputSet& files) {
    if (config.format == "json") {
        json all = json::array();
        for (std::size_t g = 0; g < embeddings.size(); ++g) all.push_back(embedding_to_json(g, embeddings[g]));
        files.file("embedding.json") << all.dump() << '\n';
    } else {
        auto& csv = files.file("embedding.csv");
        csv << kEmbeddingCsvHeader << '\n';
        for (std::size_t g = 0; g < embeddings.size(); ++g) write_embedding_csv(csv, g, embeddings[g]);
    }
}

int cmd_embed(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto e = embed_all(config, err);
    OutputSet files(config.out);
    write_embeddings(config, e.embeddings, files);
    const auto index = retained_features(config, e.embeddings);
    write_dense_embedding_csv(files.file("features.csv"), e.embeddings, index);
    files.file("embed_report.json") << json{{"graphs", e.embeddings.size()},
                                            {"features", index.size()},
                                            {"scheme", e.coding.scheme ? e.coding.scheme->describe() : "none"},
                                            {"decode", report_json(e.report)}}
                                           .dump(2)
                                    << '\n';
    files.commit(config);
    out << "embedded " << e.embeddings.size() << " graphs, " << index.size() << " features -> " << config.out << '\n';
    return kSuccess;
}

int cmd_gram(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto e = embed_all(config, err);
    const auto index = retained_features(config, e.embeddings);
    GramOptions options;
    options.kernel = config.kernel == "rbf" ? KernelKind::rbf : KernelKind::linear;
    if (config.gamma != "auto") {
        try {
            options.gamma = std::stod(config.gamma);
        } catch (const std::exception&) {
            throw Failure(kUsage, "--gamma must be 'auto' or a number");
        }
    }
    options.standardize = config.standardize;
    options.normalize = config.normalize;
    options.threads = config.threads;
    const auto g = gram(e.embeddings, index, options);

    OutputSet files(config.out);
    write_dense_embedding_csv(files.file("features.csv"), e.embeddings, index);
    write_gram_csv(files.file("gram.csv"), g);
    json meta{{"kernel", config.kernel},
              {"kernel_evaluated", std::string(to_string(g.kernel))},
              {"gamma", g.gamma},
              {"gamma_mode", config.gamma},
              {"standardize", g.standardized},
              {"normalize", g.normalized},
              {"scheme", e.coding.scheme ? e.coding.scheme->describe() : "none"},
              {"arithmetic", std::string(to_string(e.coding.domain))},
              {"max_length", config.max_length},
              {"seed", config.seed},
              {"graphs", g.size},
              {"features_retained", index.size()},
              {"features_used", g.num_features},
              {"warnings", g.warnings},
              {"decode", report_json(e.report)}};
    meta["cut"] = config.cut ? json(*config.cut) : json(nullptr);
    const auto& labels = e.loaded.data.class_labels;
    if (g.size >= config.folds && labels.size() == g.size) {
        const double acc = knn_classify(g, labels, config.folds, config.seed);
        meta["knn_folds"] = config.folds;
        meta["knn_accuracy"] = acc;
        out << config.folds << "-fold 1-NN accuracy: " << acc << "%\n";
    }
    files.file("gram_meta.json") << meta.dump(2) << '\n';
    files.commit(config);
    out << "gram " << g.size << "x" << g.size << " over " << g.num_features << " features -> " << config.out << '\n';
    return kSuccess;
}

// ---- validate ---------------------------------------------------------------

struct Mismatch {
    std::string where;
};

std::optional<Mismatch> compare_counts(const Graph& graph, std::size_t L, const CountOptions& options,
                                       const OracleOptions& oracle_options) {
    const auto table = count_all(graph, WeightAssignment<BigInt>{}, L, options);
    const auto tally = dfs_enumerate(graph, L, oracle_options);
    const auto n = graph.num_vertices();
    for (std::size_t l = 1; l <= L; ++l)
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = 0; v < n; ++v) {
                const BigInt expected(static_cast<unsigned long>(tally.count(u, v, l)));
                if (table.at(u, v, l) != expected) {
                    return Mismatch{"u=" + std::to_string(u) + " v=" + std::to_string(v) + " length=" +
                                    std::to_string(l) + ": engine " + table.at(u, v, l).get_str() + ", oracle " +
                                    std::to_string(tally.count(u, v, l))};
                }
            }
    return std::nullopt;
}

// Power classes against oracle classes, exact labellings against oracle
// labellings, and exact labellings coarsened against power classes.
std::optional<Mismatch> compare_labelled(const Graph& graph, std::size_t L, std::size_t k,
                                         const OracleOptions& oracle_options, std::uint64_t& ambiguous) {
    OracleOptions o = oracle_options;
    o.tally_labels = true;
    o.num_labels = k;
    const auto tally = dfs_enumerate(graph, L, o);
    const auto power = CodeScheme::power(k, 1024);
    const auto exact = CodeScheme::exact(k);
    const auto classes = count_all(graph, make_weight_assignment<BigInt>(k, power, NumericDomain::bigint_coded), L);
    const auto coded = count_all(graph, make_weight_assignment<double>(k, exact, NumericDomain::float64), L);
    const auto n = graph.num_vertices();
    const auto where = [](VertexId u, VertexId v, std::size_t l, const std::string& what) {
        return Mismatch{"u=" + std::to_string(u) + " v=" + std::to_string(v) + " length=" + std::to_string(l) + ": " +
                        what};
    };
    for (std::size_t l = 2; l <= L; ++l)
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = 0; v < n; ++v) {
                const auto& entry = tally.at(u, v, l);
                const auto max_class = static_cast<ClassValue>((k - 1) * (l - 1));
                const auto p = decode_power(strip_start_code(classes.at(u, v, l), graph.label(u), power), 1024,
                                            max_class);
                if (p.by_class != entry.by_class) return where(u, v, l, "power classes differ from oracle");
                if (entry.count == 0) continue;
                ExactDecodeOptions eo;
                eo.total_count = entry.count;
                const auto d = decode_exact(strip_start_code(coded.at(u, v, l), graph.label(u), exact), exact, l - 1, eo);
                if (d.status != DecodeStatus::ok) {
                    ++ambiguous;
                    continue;
                }
                if (d.by_labelling != entry.by_labelling) return where(u, v, l, "exact labellings differ from oracle");
                if (d.by_class != p.by_class) return where(u, v, l, "exact labellings do not coarsen to power classes");
            }
    return std::nullopt;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    CountOptions options;
    options.corrupt_coefficient = config.inject_fault;
    OracleOptions oracle_options;
    oracle_options.threads = config.threads;
    GraphRng rng(config.seed);
    json report{{"seed", config.seed}, {"max_length", config.max_length}};
    std::uint64_t checked = 0;
    std::uint64_t ambiguous = 0;
    std::optional<std::string> failure;
    const auto start = Clock::now();

    try {
        if (!config.dataset.empty()) {
            // The ten smallest graphs of the dataset.
            const auto loaded = load_dataset(config);
            std::vector<std::size_t> order(loaded.data.graphs.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return loaded.data.graphs[a].num_vertices() < loaded.data.graphs[b].num_vertices();
            });
            order.resize(std::min<std::size_t>(order.size(), 10));
            for (auto g : order) {
                if (auto m = compare_counts(loaded.data.graphs[g], config.max_length, options, oracle_options)) {
                    failure = "graph " + std::to_string(g) + " " + m->where;
                    break;
                }
                ++checked;
            }
        } else {
            static constexpr double kDensities[] = {0.2, 0.4, 0.6};
            for (std::size_t i = 0; i < config.graphs && !failure; ++i) {
                const auto n = 2 + rng.below(config.max_n - 1);
                const auto g = erdos_renyi(n, kDensities[i % 3], 3, rng);
                if (auto m = compare_counts(g, config.max_length, options, oracle_options)) {
                    failure = "random graph " + std::to_string(i) + " (n=" + std::to_string(n) + ") " + m->where;
                    break;
                }
                // Labelled cross-check on the smaller graphs.
                if (n <= 8 && !config.inject_fault) {
                    const auto L = std::min<std::size_t>(config.max_length, 4);
                    if (auto m = compare_labelled(g, L, 3, oracle_options, ambiguous)) {
                        failure = "random graph " + std::to_string(i) + " (n=" + std::to_string(n) + ") " + m->where;
                        break;
                    }
                }
                ++checked;
            }
        }
    } catch (const OracleBudgetExceeded& e) {
        throw Failure(kBudget, e.what());
    }

    report["graphs_checked"] = checked;
    report["exact_entries_skipped"] = ambiguous;
    report["status"] = failure ? "FAIL" : "PASS";
    report["first_mismatch"] = failure ? json(*failure) : json(nullptr);
    if (!config.out.empty()) {
        OutputSet files(config.out);
        files.file("validate_report.json") << report.dump(2) << '\n';
        files.commit(config);
    }
    if (failure) {
        out << "FAIL: " << *failure << '\n';
        return kMismatch;
    }
    out << "PASS: " << checked << " graphs agree with the oracle (" << elapsed(start) << " s)\n";
    err << ambiguous << " exact-decode entries skipped as ambiguous\n";
    return kSuccess;
}

// ---- bench ------------------------------------------------------------------

std::string scaling_csv(const bench::ScalingResult& r, const std::string& x_name) {
    std::ostringstream csv;
    csv << x_name << ",seconds,subgraphs\n";
    for (const auto& p : r.points) csv << p.x << ',' << format_double(p.seconds) << ',' << p.subgraphs << '\n';
    return csv.str();
}

bench::PlotSeries series_of(const bench::ScalingResult& r, const std::string& name) {
    bench::PlotSeries s{name, {}, {}};
    for (const auto& p : r.points) {
        s.x.push_back(p.x);
        s.y.push_back(p.seconds);
    }
    return s;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream&) {
    bench::TimingOptions timing;
    timing.threads = config.threads;
    timing.seed = config.seed;
    timing.min_seconds = config.quick ? 0.02 : 0.2;
    const std::vector<std::size_t> sizes = config.quick ? std::vector<std::size_t>{25, 50, 100}
                                                        : std::vector<std::size_t>{50, 100, 200, 400};
    const std::vector<std::size_t> lengths = config.quick ? std::vector<std::size_t>{3, 4, 5}
                                                          : std::vector<std::size_t>{3, 4, 5, 6, 7};
    const std::size_t size_length = config.quick ? 4 : 6;

    const auto by_size = bench::time_vs_size(sizes, 4.0, size_length, config.quick ? 100 : 2400, timing);
    const auto by_length = bench::time_vs_length(30, lengths, timing);
    const auto decode = bench::time_exact_decode(config.quick ? 3 : 5, config.quick ? 5 : 40, 6, config.seed);
    const auto parallel =
        bench::time_parallel(config.quick ? 60 : 100, config.quick ? 4 : 5, std::max(2, config.threads), timing);

    OutputSet files(config.out);
    files.file("bench_size.csv") << scaling_csv(by_size, "n");
    files.file("bench_length.csv") << scaling_csv(by_length, "max_length");
    auto& dcsv = files.file("bench_decode.csv");
    dcsv << "coded_length,candidates,seconds_per_decode,mean_nodes,ambiguous,samples\n";
    for (const auto& d : decode) {
        dcsv << d.coded_length << ',' << d.candidates << ',' << format_double(d.seconds) << ','
             << format_double(d.mean_nodes) << ',' << d.ambiguous << ',' << d.samples << '\n';
    }
    auto& pcsv = files.file("bench_parallel.csv");
    pcsv << "variant,threads,seconds\n";
    for (const auto& p : parallel) pcsv << p.variant << ',' << p.threads << ',' << format_double(p.seconds) << '\n';

    files.file("bench_size.svg") << bench::svg_plot("Runtime vs graph size (mean degree 4, L=" +
                                                        std::to_string(size_length) + ")",
                                                    "vertices", "seconds", {series_of(by_size, "count_all")}, true,
                                                    true);
    files.file("bench_length.svg") << bench::svg_plot("Runtime vs path length (30 vertices)", "L", "seconds",
                                                      {series_of(by_length, "count_all")}, false, true);
    bench::PlotSeries ds{"decode_exact", {}, {}};
    for (const auto& d : decode) {
        ds.x.push_back(static_cast<double>(d.coded_length));
        ds.y.push_back(d.seconds);
    }
    files.file("bench_decode.svg") << bench::svg_plot("Exact decode time vs coded length", "coded length",
                                                      "seconds per value", {ds}, false, true);
    const json summary{{"size_sweep", {{"sizes", sizes}, {"max_length", size_length}, {"loglog_slope", by_size.loglog_slope}}},
                       {"length_sweep",
                        {{"lengths", lengths}, {"ratios", by_length.ratios}, {"median_ratio", by_length.median_ratio}}},
                       {"threads", config.threads}};
    files.file("bench_summary.json") << summary.dump(2) << '\n';
    files.commit(config);
    out << "runtime vs n: log-log slope " << by_size.loglog_slope << '\n'
        << "runtime vs L: median successive ratio " << by_length.median_ratio << '\n'
        << "wrote bench tables and plots -> " << config.out << '\n';
    return kSuccess;
}

// ---- argument parsing -------------------------------------------------------

void add_dataset_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--dataset", c.dataset, "Dataset name under the root, or a directory of TU files");
    sub->add_option("--root", c.root, "Dataset root (default: $APC_DATA_ROOT, else ./data)");
    sub->add_option("--preset", c.preset, "Parameter preset")
        ->check(CLI::IsMember({"mutag-paper", "ptc-mr-paper", "nci1-paper", "nci109-paper", "enzymes-paper"}));
    sub->add_option("--max-length,-L", c.max_length, "Maximum path and cycle length")->check(CLI::Range(1, 31));
    sub->add_option("--scheme", c.scheme, "Label coding")->check(CLI::IsMember({"none", "exact", "power"}));
    sub->add_option("--base", c.base, "Power scheme base (default: largest fitting power of two)")
        ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 32));
    sub->add_option("--arithmetic", c.arithmetic, "Numeric domain")
        ->check(CLI::IsMember({"float", "bigint", "exactint"}));
    sub->add_option("--remap", c.remap, "Keep the K-1 most frequent labels and pool the rest (0: off)");
    sub->add_flag("--include-l2-cycles", c.include_l2_cycles, "Keep length-2 closed walks as cycle features");
    sub->add_option("--tolerance", c.tolerance, "Relative residual tolerance for float decoding");
    sub->add_flag("--force", c.force, "Run float power coding beyond the precision budget");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_common(CLI::App* sub, RunConfig& c, bool out_required) {
    sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Random seed");
    auto* o = sub->add_option("--out", c.out, "Output directory");
    if (out_required) o->required();
}

void apply_preset(RunConfig& c, CLI::App* sub) {
    if (c.preset.empty()) return;
    const auto* p = std::find_if(std::begin(kPresets), std::end(kPresets),
                                 [&](const Preset& x) { return c.preset == x.name; });
    const auto unset = [&](const char* flag) { return sub->count(flag) == 0; };
    if (unset("--dataset")) c.dataset = p->dataset;
    if (unset("--max-length")) c.max_length = p->max_length;
    if (unset("--scheme")) c.scheme = "power";
    if (unset("--remap")) c.remap = p->remap;
    if (unset("--cut")) c.cut = p->cut;
    if (unset("--kernel")) c.kernel = "rbf";
    if (unset("--gamma")) c.gamma = "auto";
    if (unset("--standardize")) c.standardize = true;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"All-paths-and-cycles graph counting, embedding and kernels", "apc"};
    app.require_subcommand(1);
    RunConfig c;
    c.threads = std::max(1, omp_get_max_threads());
    double cut = 0.0;

    auto* count = app.add_subcommand("count", "Path and cycle counts per graph");
    add_dataset_options(count, c);
    add_common(count, c, true);

    auto* embed = app.add_subcommand("embed", "Per-graph feature vectors");
    auto* gram_cmd = app.add_subcommand("gram", "Gram matrix over a dataset");
    for (auto* sub : {embed, gram_cmd}) {
        add_dataset_options(sub, c);
        add_common(sub, c, true);
        sub->add_option("--cut", cut, "Drop features below this fraction of the total variance")
            ->check(CLI::Range(0.0, 0.999999));
    }
    gram_cmd->add_option("--kernel", c.kernel, "Kernel on the feature vectors (none: raw dot product)")
        ->check(CLI::IsMember({"none", "linear", "rbf"}));
    gram_cmd->add_option("--gamma", c.gamma, "rbf scale: auto or a positive number");
    gram_cmd->add_flag("--standardize", c.standardize, "Zero mean, unit variance per feature");
    gram_cmd->add_flag("--normalize", c.normalize, "Unit-norm feature vectors");
    gram_cmd->add_option("--folds", c.folds, "Folds for the 1-NN baseline")->check(CLI::Range(2, 1000));

    auto* validate = app.add_subcommand("validate", "Check the counting engine against brute force");
    add_dataset_options(validate, c);
    add_common(validate, c, false);
    validate->add_option("--graphs", c.graphs, "Random graphs to check");
    validate->add_option("--max-n", c.max_n, "Largest random graph")->check(CLI::Range(2, 14));
    validate->add_flag("--inject-fault", c.inject_fault)->group("");

    auto* bench = app.add_subcommand("bench", "Runtime scaling tables and plots");
    add_common(bench, c, true);
    bench->add_flag("--quick", c.quick, "Small sweep for smoke testing");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        for (auto* sub : app.get_subcommands()) err << sub->help();
        return kUsage;
    }

    auto* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    if (validate == sub && validate->count("--max-length") == 0) c.max_length = 6;
    if (sub->get_option_no_throw("--cut") && sub->count("--cut")) c.cut = cut;
    apply_preset(c, sub);
    if (c.kernel == "none") c.kernel = "linear";
    if (c.command == "validate" && c.max_n < 2) throw Failure(kUsage, "--max-n must be at least 2");

    if (c.command == "count") return cmd_count(c, out, err);
    if (c.command == "embed") return cmd_embed(c, out, err);
    if (c.command == "gram") return cmd_gram(c, out, err);
    if (c.command == "validate") return cmd_validate(c, out, err);
    return cmd_bench(c, out, err);
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const Failure& e) {
        err << "error: " << e.what() << '\n';
        return e.code();
    } catch (const CodingError& e) {
        // Power digits overflowing or codes outside the alphabet.
        err << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const OracleBudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

int run_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace apc::cli
