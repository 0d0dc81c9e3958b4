#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "apc/graph.hpp"

namespace apc {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a dataset in the TU Dortmund text layout:
///   <name>_A.txt               "i, j" per line, 1-indexed global vertex ids
///   <name>_graph_indicator.txt  graph id (1-indexed) of each vertex
///   <name>_node_labels.txt      integer label of each vertex
///   <name>_graph_labels.txt     optional, class label of each graph
/// Both edge directions may be present; duplicates collapse. Label ids are
/// kept as read. CRLF line endings and blanks around commas are accepted.
/// Throws ParseError with a file:line diagnostic.
Dataset parse_tu_dataset(const std::filesystem::path& directory, const std::string& name);

/// Writes the four TU files for `dataset` under `directory`, listing every
/// edge in both directions as the public distribution does.
void write_tu_dataset(const Dataset& dataset, const std::filesystem::path& directory);

/// Keeps every observed label, mapping the sorted distinct ids onto [0, k).
std::pair<Dataset, LabelAlphabet> compact_labels(const Dataset& dataset);

/// The k-1 most frequent labels (ties to the smaller id) become 0..k-2 in
/// descending frequency; everything else shares bucket k-1.
std::pair<Dataset, LabelAlphabet> remap_labels_topk(const Dataset& dataset, std::size_t k);

nlohmann::json graph_to_json(const Graph& graph);
Graph graph_from_json(const nlohmann::json& j);

}  // namespace apc
