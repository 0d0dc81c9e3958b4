#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "apc/count.hpp"
#include "apc/graph.hpp"
#include "apc/label_coding.hpp"

namespace apc {

enum class FeatureKind : std::uint8_t { path, cycle };

/// Equivalence class of a path or cycle: kind, length, endpoint labels and the
/// decoded code of the vertices in between. Cycles carry no end label.
struct FeatureKey {
    FeatureKind kind = FeatureKind::path;
    std::uint32_t length = 0;
    LabelId start_label = 0;
    std::variant<std::monostate, ClassValue, Labelling> code;
    std::optional<LabelId> end_label;

    friend auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
    friend bool operator==(const FeatureKey&, const FeatureKey&) = default;

    /// "" (unlabelled), a class value, or "c1-c2-...-ck".
    std::string code_string() const;
    /// Compact column name, e.g. "path:3:0:2:1" or "cycle:4:1:0-2-1".
    std::string to_string() const;
};

using Embedding = std::map<FeatureKey, std::uint64_t>;

struct EmbedOptions {
    /// nullopt: unlabelled counts keyed only by endpoint labels.
    std::optional<CodeScheme> scheme;
    /// exact_int for unlabelled, exact_int/bigint_coded/float64 for power,
    /// float64 for exact.
    NumericDomain domain = NumericDomain::exact_int;
    /// Length-2 closed walks u -> v -> u repeat the degree information of
    /// length-1 path features and are left out unless requested.
    bool include_l2_cycles = false;
    double tolerance = 1e-6;
    std::uint64_t decode_node_budget = 2'000'000;
    /// Workers inside one graph's count; embed_dataset parallelises across graphs instead.
    int threads = 1;
};

struct EmbedReport {
    std::uint64_t decoded_entries = 0;
    std::uint64_t ambiguous = 0;
    std::uint64_t no_solution = 0;
    std::uint64_t budget_exceeded = 0;
    std::vector<std::string> warnings;  // first few skipped entries, for the report file

    std::uint64_t skipped() const noexcept { return ambiguous + no_solution + budget_exceeded; }
    void merge(const EmbedReport& other);
};

using DecodedVisitor =
    std::function<void(VertexId u, VertexId v, std::size_t length, const FeatureKey& key, std::uint64_t count)>;

/// Counts, decodes and calls `emit` once per nonzero (entry, class or
/// labelling), entries ordered by (length, u, v). The key carries the entry's
/// endpoint labels. Same skipping and error rules as embed_graph.
void for_each_decoded(const Graph& graph, std::size_t max_length, const EmbedOptions& options,
                      const DecodedVisitor& emit, EmbedReport* report = nullptr);

/// v(G): for every ordered pair u != v and l <= max_length the decoded path
/// counts land under (path, l, L(u), class or labelling, L(v)); rooted cycle
/// counts under (cycle, l, L(u), class or labelling) for l >= 3 (l >= 2 with
/// include_l2_cycles). Entries whose exact decode is ambiguous or fails are
/// skipped and recorded in `report`. Under the power scheme a class count
/// that reaches the base throws CodingError.
Embedding embed_graph(const Graph& graph, std::size_t max_length, const EmbedOptions& options,
                      EmbedReport* report = nullptr);

/// Embeds every graph; graphs are processed by `threads` OpenMP workers.
std::vector<Embedding> embed_dataset(std::span<const Graph> graphs, std::size_t max_length,
                                     const EmbedOptions& options, int threads, EmbedReport* report = nullptr);

using FeatureIndex = std::vector<FeatureKey>;

/// Keys present in any embedding, sorted.
FeatureIndex all_features(std::span<const Embedding> embeddings);

/// Keeps features whose population variance across the dataset is nonzero
/// and at least cut * (sum of all feature variances). Throws
/// std::invalid_argument when nothing survives or cut is outside [0, 1).
FeatureIndex feature_cut(std::span<const Embedding> embeddings, double cut);

/// Row-major dense matrix: one row per embedding, one column per index key.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

FeatureMatrix dense_features(std::span<const Embedding> embeddings, const FeatureIndex& index);

enum class KernelKind { linear, rbf };
std::string_view to_string(KernelKind kind);

struct GramOptions {
    KernelKind kernel = KernelKind::linear;
    /// nullopt: 1 / (number of retained features).
    std::optional<double> gamma;
    bool standardize = false;
    /// Scale each feature vector to unit Euclidean norm (after standardizing).
    bool normalize = false;
    int threads = 1;
};

struct GramMatrix {
    std::size_t size = 0;
    std::vector<double> values;
    KernelKind kernel = KernelKind::linear;
    double gamma = 0.0;
    bool standardized = false;
    bool normalized = false;
    std::size_t num_features = 0;
    std::vector<std::string> warnings;

    double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
};

/// Linear kernel: <x, y>. rbf: exp(-gamma * ||x - y||^2). Standardization
/// rescales each retained feature to zero mean and unit variance; features
/// with zero variance are dropped with a warning.
GramMatrix gram(std::span<const Embedding> embeddings, const FeatureIndex& index, const GramOptions& options);

/// Cross-validated 1-nearest-neighbour accuracy (percent) under the kernel
/// distance d^2(x, y) = K(x, x) + K(y, y) - 2 K(x, y). Folds are a seeded
/// shuffle; ties go to the lower graph index.
double knn_classify(const GramMatrix& gram, std::span<const int> class_labels, std::size_t folds = 10,
                    std::uint64_t seed = 0);

}  // namespace apc
