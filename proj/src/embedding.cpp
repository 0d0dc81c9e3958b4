#include "apc/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "apc/generators.hpp"

namespace apc {
namespace {

constexpr std::size_t kMaxWarnings = 20;

std::uint64_t to_count(const BigInt& x) {
    if (x < 0 || mpz_sizeinbase(x.get_mpz_t(), 2) > 64) {
        throw std::overflow_error("path count " + x.get_str() + " is negative or exceeds 64 bits");
    }
    // get_ui is 64-bit on LP64 targets.
    return static_cast<std::uint64_t>(x.get_ui());
}

void add_count(Embedding& e, const FeatureKey& key, std::uint64_t count) {
    if (count == 0) return;
    auto& slot = e[key];
    if (__builtin_add_overflow(slot, count, &slot)) throw std::overflow_error("embedding count overflow");
}

FeatureKey make_key(VertexId u, VertexId v, std::size_t length, const Graph& graph) {
    FeatureKey key;
    key.length = static_cast<std::uint32_t>(length);
    key.start_label = graph.label(u);
    if (u == v) {
        key.kind = FeatureKind::cycle;
    } else {
        key.kind = FeatureKind::path;
        key.end_label = graph.label(v);
    }
    return key;
}

void note(EmbedReport* report, DecodeStatus status, VertexId u, VertexId v, std::size_t length) {
    if (report == nullptr) return;
    switch (status) {
        case DecodeStatus::ambiguous: ++report->ambiguous; break;
        case DecodeStatus::no_solution: ++report->no_solution; break;
        case DecodeStatus::budget_exceeded: ++report->budget_exceeded; break;
        case DecodeStatus::ok: return;
    }
    if (report->warnings.size() < kMaxWarnings) {
        report->warnings.push_back("skipped entry u=" + std::to_string(u) + " v=" + std::to_string(v) +
                                   " length=" + std::to_string(length) + ": " + std::string(to_string(status)));
    }
}

template <class Fn>
void for_each_entry(std::size_t n, std::size_t max_length, std::size_t first_cycle, Fn&& fn) {
    for (std::size_t l = 1; l <= max_length; ++l)
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = 0; v < n; ++v) {
                if (u == v && l < first_cycle) continue;
                fn(u, v, l);
            }
}

}  // namespace

std::string FeatureKey::code_string() const {
    if (std::holds_alternative<ClassValue>(code)) return std::to_string(std::get<ClassValue>(code));
    if (std::holds_alternative<Labelling>(code)) return apc::to_string(std::get<Labelling>(code));
    return {};
}

std::string FeatureKey::to_string() const {
    std::string out = kind == FeatureKind::path ? "path" : "cycle";
    out += ':' + std::to_string(length) + ':' + std::to_string(start_label) + ':' + code_string();
    if (end_label) out += ':' + std::to_string(*end_label);
    return out;
}

void EmbedReport::merge(const EmbedReport& other) {
    decoded_entries += other.decoded_entries;
    ambiguous += other.ambiguous;
    no_solution += other.no_solution;
    budget_exceeded += other.budget_exceeded;
    for (const auto& w : other.warnings) {
        if (warnings.size() >= kMaxWarnings) break;
        warnings.push_back(w);
    }
}

void for_each_decoded(const Graph& graph, std::size_t max_length, const EmbedOptions& options,
                      const DecodedVisitor& emit, EmbedReport* report) {
    if (max_length == 0) throw std::invalid_argument("max_length must be at least 1");
    const auto n = graph.num_vertices();
    const std::size_t first_cycle = options.include_l2_cycles ? 2 : 3;
    CountOptions count_options;
    count_options.threads = options.threads;

    if (!options.scheme) {
        if (options.domain == NumericDomain::float64) {
            const auto table = count_all(graph, WeightAssignment<double>{}, max_length, count_options);
            for_each_entry(n, max_length, first_cycle, [&](VertexId u, VertexId v, std::size_t l) {
                const double value = std::nearbyint(table.at(u, v, l));
                if (value > 0) emit(u, v, l, make_key(u, v, l, graph), static_cast<std::uint64_t>(value));
            });
        } else {
            const auto table = count_all(graph, WeightAssignment<BigInt>{}, max_length, count_options);
            for_each_entry(n, max_length, first_cycle, [&](VertexId u, VertexId v, std::size_t l) {
                const auto& value = table.at(u, v, l);
                if (value != 0) emit(u, v, l, make_key(u, v, l, graph), to_count(value));
            });
        }
        return;
    }

    const auto& scheme = *options.scheme;
    if (graph.label_bound() > scheme.k()) {
        throw CodingError("graph uses label " + std::to_string(graph.label_bound() - 1) + " but the scheme has " +
                          std::to_string(scheme.k()) + " codes");
    }
    const auto max_class = [&](std::size_t l) { return static_cast<ClassValue>((scheme.k() - 1) * (l - 1)); };
    const auto add_classes = [&](VertexId u, VertexId v, std::size_t l, const DecodedCounts& decoded) {
        for (const auto& [c, m] : decoded.by_class) {
            auto key = make_key(u, v, l, graph);
            key.code = c;
            emit(u, v, l, key, m);
        }
    };
    std::uint64_t decoded_entries = 0;

    if (scheme.kind() == SchemeKind::power) {
        // A class count that reaches the base carries into the next digit and
        // still decodes; the digit sum then falls short of the plain count.
        const auto totals = count_all(graph, WeightAssignment<BigInt>{}, max_length, count_options);
        const auto add_checked = [&](VertexId u, VertexId v, std::size_t l, const DecodedCounts& decoded) {
            std::uint64_t sum = 0;
            for (const auto& [c, m] : decoded.by_class) sum += m;
            if (sum != to_count(totals.at(u, v, l))) {
                throw CodingError("class count reached the power base " + std::to_string(scheme.base()) +
                                  " at u=" + std::to_string(u) + " v=" + std::to_string(v) +
                                  " length=" + std::to_string(l) + "; use a larger base");
            }
            add_classes(u, v, l, decoded);
            ++decoded_entries;
        };
        if (options.domain == NumericDomain::float64) {
            const auto weights = make_weight_assignment<double>(scheme.k(), scheme, options.domain);
            const auto table = count_all(graph, weights, max_length, count_options);
            for_each_entry(n, max_length, first_cycle, [&](VertexId u, VertexId v, std::size_t l) {
                const double value = table.at(u, v, l);
                if (value == 0.0 && totals.at(u, v, l) == 0) return;
                const double stripped = strip_start_code(value, graph.label(u), scheme);
                add_checked(u, v, l, decode_power(stripped, scheme.base(), max_class(l), options.tolerance));
            });
        } else {
            const auto weights = make_weight_assignment<BigInt>(scheme.k(), scheme, options.domain);
            const auto table = count_all(graph, weights, max_length, count_options);
            for_each_entry(n, max_length, first_cycle, [&](VertexId u, VertexId v, std::size_t l) {
                const auto& value = table.at(u, v, l);
                if (value == 0 && totals.at(u, v, l) == 0) return;
                const auto stripped = strip_start_code(value, graph.label(u), scheme);
                add_checked(u, v, l, decode_power(stripped, scheme.base(), max_class(l)));
            });
        }
    } else {
        const auto weights = make_weight_assignment<double>(scheme.k(), scheme, options.domain);
        const auto coded = count_all(graph, weights, max_length, count_options);
        // Plain counts bound the labelling search from both sides.
        const auto totals = count_all(graph, WeightAssignment<BigInt>{}, max_length, count_options);
        ExactDecodeOptions decode_options;
        decode_options.tolerance = options.tolerance;
        decode_options.node_budget = options.decode_node_budget;
        for_each_entry(n, max_length, first_cycle, [&](VertexId u, VertexId v, std::size_t l) {
            const auto& total = totals.at(u, v, l);
            if (total == 0) return;
            decode_options.total_count = to_count(total);
            const double stripped = strip_start_code(coded.at(u, v, l), graph.label(u), scheme);
            const auto decoded = decode_exact(stripped, scheme, l - 1, decode_options);
            ++decoded_entries;
            if (decoded.status != DecodeStatus::ok) {
                note(report, decoded.status, u, v, l);
                return;
            }
            for (const auto& [c, m] : decoded.by_labelling) {
                auto key = make_key(u, v, l, graph);
                key.code = c;
                emit(u, v, l, key, m);
            }
        });
    }
    if (report) report->decoded_entries += decoded_entries;
}

Embedding embed_graph(const Graph& graph, std::size_t max_length, const EmbedOptions& options, EmbedReport* report) {
    Embedding out;
    for_each_decoded(
        graph, max_length, options,
        [&](VertexId, VertexId, std::size_t, const FeatureKey& key, std::uint64_t count) { add_count(out, key, count); },
        report);
    return out;
}

std::vector<Embedding> embed_dataset(std::span<const Graph> graphs, std::size_t max_length,
                                     const EmbedOptions& options, int threads, EmbedReport* report) {
    std::vector<Embedding> out(graphs.size());
    std::vector<EmbedReport> reports(graphs.size());
    std::exception_ptr failure;
    const auto count = static_cast<std::int64_t>(graphs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, threads))
    for (std::int64_t g = 0; g < count; ++g) {
        try {
            const auto i = static_cast<std::size_t>(g);
            out[i] = embed_graph(graphs[i], max_length, options, &reports[i]);
        } catch (...) {
#pragma omp critical(apc_embed_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    if (report) {
        for (std::size_t g = 0; g < reports.size(); ++g) {
            for (auto& w : reports[g].warnings) w = "graph " + std::to_string(g) + ": " + w;
            report->merge(reports[g]);
        }
    }
    return out;
}

FeatureIndex all_features(std::span<const Embedding> embeddings) {
    std::map<FeatureKey, char> keys;
    for (const auto& e : embeddings)
        for (const auto& [key, count] : e) keys.emplace(key, 0);
    FeatureIndex index;
    index.reserve(keys.size());
    for (auto& [key, unused] : keys) index.push_back(key);
    return index;
}

FeatureIndex feature_cut(std::span<const Embedding> embeddings, double cut) {
    if (!(cut >= 0.0 && cut < 1.0)) throw std::invalid_argument("cut must lie in [0, 1)");
    if (embeddings.empty()) throw std::invalid_argument("feature cut needs at least one embedding");
    const auto candidates = all_features(embeddings);
    const auto dense = dense_features(embeddings, candidates);
    const auto rows = static_cast<double>(dense.rows);

    std::vector<double> variance(dense.cols, 0.0);
    for (std::size_t c = 0; c < dense.cols; ++c) {
        bool constant = true;
        double mean = 0.0;
        for (std::size_t r = 0; r < dense.rows; ++r) {
            mean += dense(r, c);
            constant = constant && dense(r, c) == dense(0, c);
        }
        if (constant) continue;
        mean /= rows;
        double ss = 0.0;
        for (std::size_t r = 0; r < dense.rows; ++r) ss += (dense(r, c) - mean) * (dense(r, c) - mean);
        variance[c] = ss / rows;
    }
    const double total = std::accumulate(variance.begin(), variance.end(), 0.0);
    FeatureIndex kept;
    for (std::size_t c = 0; c < dense.cols; ++c) {
        if (variance[c] > 0.0 && variance[c] >= cut * total) kept.push_back(candidates[c]);
    }
    if (kept.empty()) throw std::invalid_argument("feature cut removed every feature");
    return kept;
}

FeatureMatrix dense_features(std::span<const Embedding> embeddings, const FeatureIndex& index) {
    FeatureMatrix m{embeddings.size(), index.size(), std::vector<double>(embeddings.size() * index.size(), 0.0)};
    for (std::size_t r = 0; r < embeddings.size(); ++r) {
        // Both sides are sorted by key, so one merge pass fills the row.
        auto it = embeddings[r].begin();
        for (std::size_t c = 0; c < index.size() && it != embeddings[r].end(); ++c) {
            while (it != embeddings[r].end() && it->first < index[c]) ++it;
            if (it != embeddings[r].end() && it->first == index[c]) m(r, c) = static_cast<double>(it->second);
        }
    }
    return m;
}

std::string_view to_string(KernelKind kind) { return kind == KernelKind::linear ? "linear" : "rbf"; }

GramMatrix gram(std::span<const Embedding> embeddings, const FeatureIndex& index, const GramOptions& options) {
    auto x = dense_features(embeddings, index);
    GramMatrix g;
    g.size = x.rows;
    g.kernel = options.kernel;
    g.standardized = options.standardize;
    g.normalized = options.normalize;

    if (options.standardize && x.rows > 0) {
        std::vector<std::size_t> keep;
        std::vector<double> mean(x.cols, 0.0);
        std::vector<double> scale(x.cols, 0.0);
        for (std::size_t c = 0; c < x.cols; ++c) {
            for (std::size_t r = 0; r < x.rows; ++r) mean[c] += x(r, c);
            mean[c] /= static_cast<double>(x.rows);
            double ss = 0.0;
            for (std::size_t r = 0; r < x.rows; ++r) ss += (x(r, c) - mean[c]) * (x(r, c) - mean[c]);
            scale[c] = std::sqrt(ss / static_cast<double>(x.rows));
            if (scale[c] > 0.0) {
                keep.push_back(c);
            } else if (g.warnings.size() < kMaxWarnings) {
                g.warnings.push_back("feature " + index[c].to_string() + " has zero variance; dropped");
            }
        }
        FeatureMatrix s{x.rows, keep.size(), std::vector<double>(x.rows * keep.size())};
        for (std::size_t r = 0; r < x.rows; ++r)
            for (std::size_t k = 0; k < keep.size(); ++k) s(r, k) = (x(r, keep[k]) - mean[keep[k]]) / scale[keep[k]];
        x = std::move(s);
    }
    if (options.normalize) {
        for (std::size_t r = 0; r < x.rows; ++r) {
            double norm = 0.0;
            for (std::size_t c = 0; c < x.cols; ++c) norm += x(r, c) * x(r, c);
            norm = std::sqrt(norm);
            if (norm == 0.0) continue;
            for (std::size_t c = 0; c < x.cols; ++c) x(r, c) /= norm;
        }
    }
    g.num_features = x.cols;
    g.gamma = options.gamma.value_or(x.cols > 0 ? 1.0 / static_cast<double>(x.cols) : 1.0);
    g.values.assign(g.size * g.size, 0.0);

    const auto n = static_cast<std::int64_t>(g.size);
#pragma omp parallel for schedule(dynamic, 4) num_threads(std::max(1, options.threads))
    for (std::int64_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t j = i; j < g.size; ++j) {
            double k = 0.0;
            if (options.kernel == KernelKind::linear) {
                for (std::size_t c = 0; c < x.cols; ++c) k += x(i, c) * x(j, c);
            } else {
                double d2 = 0.0;
                for (std::size_t c = 0; c < x.cols; ++c) d2 += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
                k = std::exp(-g.gamma * d2);
            }
            g.values[i * g.size + j] = k;
            g.values[j * g.size + i] = k;
        }
    }
    return g;
}

double knn_classify(const GramMatrix& gram, std::span<const int> class_labels, std::size_t folds, std::uint64_t seed) {
    const auto n = gram.size;
    if (class_labels.size() != n) throw std::invalid_argument("class label count does not match the Gram matrix");
    if (folds < 2) throw std::invalid_argument("need at least two folds");
    if (n < folds) throw std::invalid_argument("fewer graphs than folds");

    GraphRng rng(seed);
    const auto order = random_permutation(n, rng);
    std::vector<std::size_t> fold(n);
    for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = pos % folds;

    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t nearest = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (fold[j] == fold[i]) continue;
            const double d2 = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
            if (d2 < best) {
                best = d2;
                nearest = j;
            }
        }
        if (nearest < n && class_labels[nearest] == class_labels[i]) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(n);
}

}  // namespace apc
