#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "apc/count.hpp"
#include "apc/embedding.hpp"
#include "apc/label_coding.hpp"
#include "apc/oracle.hpp"

namespace apc {

/// Shortest round-tripping text for a double.
std::string format_double(double x);
inline std::string format_value(const BigInt& x) { return x.get_str(); }
inline std::string format_value(double x) { return format_double(x); }

inline constexpr std::string_view kCountCsvHeader = "graph_id,u,v,length,value";
inline constexpr std::string_view kOracleCsvHeader = "graph_id,u,v,length,value,source";
inline constexpr std::string_view kDecodedCsvHeader = "graph_id,u,v,length,kind,class_or_labelling,count";
inline constexpr std::string_view kEmbeddingCsvHeader =
    "graph_id,kind,length,start_label,class_or_labelling,end_label,count";

/// Nonzero entries only, ordered by (u, v, length).
template <class T>
void write_counts_csv(std::ostream& out, std::size_t graph_id, const CountTable<T>& table);

/// {"graph_id", "max_length", "domain", "entries": [{u, v, length, value}]};
/// exact values are decimal strings.
template <class T>
nlohmann::json counts_to_json(std::size_t graph_id, const CountTable<T>& table);

void write_oracle_csv(std::ostream& out, std::size_t graph_id, const OracleTally& tally);

void write_decoded_row(std::ostream& out, std::size_t graph_id, VertexId u, VertexId v, std::size_t length,
                       std::string_view kind, std::string_view code, std::uint64_t count);

void write_embedding_csv(std::ostream& out, std::size_t graph_id, const Embedding& embedding);
nlohmann::json embedding_to_json(std::size_t graph_id, const Embedding& embedding);

/// Header row of serialized keys, then one row per graph.
void write_dense_embedding_csv(std::ostream& out, std::span<const Embedding> embeddings, const FeatureIndex& index);

/// Header "graph_id,<id>..." then one row per graph, first column its id.
void write_gram_csv(std::ostream& out, const GramMatrix& gram);

}  // namespace apc
