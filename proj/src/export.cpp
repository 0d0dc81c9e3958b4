#include "apc/export.hpp"

#include <charconv>

namespace apc {

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

template <class T>
void write_counts_csv(std::ostream& out, std::size_t graph_id, const CountTable<T>& table) {
    const auto n = table.num_vertices();
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v)
            for (std::size_t l = 1; l <= table.max_length(); ++l) {
                const auto& value = table.at(u, v, l);
                if (value == 0) continue;
                out << graph_id << ',' << u << ',' << v << ',' << l << ',' << format_value(value) << '\n';
            }
}

template <class T>
nlohmann::json counts_to_json(std::size_t graph_id, const CountTable<T>& table) {
    nlohmann::json entries = nlohmann::json::array();
    const auto n = table.num_vertices();
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v)
            for (std::size_t l = 1; l <= table.max_length(); ++l) {
                const auto& value = table.at(u, v, l);
                if (value == 0) continue;
                entries.push_back({{"u", u}, {"v", v}, {"length", l}, {"value", format_value(value)}});
            }
    return {{"graph_id", graph_id},
            {"max_length", table.max_length()},
            {"domain", std::string(to_string(table.domain()))},
            {"entries", std::move(entries)}};
}

template void write_counts_csv(std::ostream&, std::size_t, const CountTable<BigInt>&);
template void write_counts_csv(std::ostream&, std::size_t, const CountTable<double>&);
template nlohmann::json counts_to_json(std::size_t, const CountTable<BigInt>&);
template nlohmann::json counts_to_json(std::size_t, const CountTable<double>&);

void write_oracle_csv(std::ostream& out, std::size_t graph_id, const OracleTally& tally) {
    const auto n = tally.num_vertices();
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v)
            for (std::size_t l = 1; l <= tally.max_length(); ++l) {
                const auto c = tally.count(u, v, l);
                if (c == 0) continue;
                out << graph_id << ',' << u << ',' << v << ',' << l << ',' << c << ",oracle\n";
            }
}

void write_decoded_row(std::ostream& out, std::size_t graph_id, VertexId u, VertexId v, std::size_t length,
                       std::string_view kind, std::string_view code, std::uint64_t count) {
    out << graph_id << ',' << u << ',' << v << ',' << length << ',' << kind << ',' << code << ',' << count << '\n';
}

void write_embedding_csv(std::ostream& out, std::size_t graph_id, const Embedding& embedding) {
    for (const auto& [key, count] : embedding) {
        out << graph_id << ',' << (key.kind == FeatureKind::path ? "path" : "cycle") << ',' << key.length << ','
            << key.start_label << ',' << key.code_string() << ',';
        if (key.end_label) out << *key.end_label;
        out << ',' << count << '\n';
    }
}

nlohmann::json embedding_to_json(std::size_t graph_id, const Embedding& embedding) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& [key, count] : embedding) {
        nlohmann::json f{{"kind", key.kind == FeatureKind::path ? "path" : "cycle"},
                         {"length", key.length},
                         {"start_label", key.start_label},
                         {"class_or_labelling", key.code_string()},
                         {"count", count}};
        f["end_label"] = key.end_label ? nlohmann::json(*key.end_label) : nlohmann::json(nullptr);
        features.push_back(std::move(f));
    }
    return {{"graph_id", graph_id}, {"features", std::move(features)}};
}

void write_dense_embedding_csv(std::ostream& out, std::span<const Embedding> embeddings, const FeatureIndex& index) {
    out << "graph_id";
    for (const auto& key : index) out << ',' << key.to_string();
    out << '\n';
    const auto dense = dense_features(embeddings, index);
    for (std::size_t r = 0; r < dense.rows; ++r) {
        out << r;
        for (std::size_t c = 0; c < dense.cols; ++c) out << ',' << format_double(dense(r, c));
        out << '\n';
    }
}

void write_gram_csv(std::ostream& out, const GramMatrix& gram) {
    out << "graph_id";
    for (std::size_t j = 0; j < gram.size; ++j) out << ',' << j;
    out << '\n';
    for (std::size_t i = 0; i < gram.size; ++i) {
        out << i;
        for (std::size_t j = 0; j < gram.size; ++j) out << ',' << format_double(gram(i, j));
        out << '\n';
    }
}

}  // namespace apc
