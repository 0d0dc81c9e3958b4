#include "apc/oracle.hpp"

#include <algorithm>
#include <atomic>

#include <omp.h>

namespace apc {
namespace {

class PathWalker {
public:
    PathWalker(const Graph& graph, std::size_t max_length, const OracleOptions& options, std::size_t num_labels,
               std::atomic<std::uint64_t>& steps, OracleTally& tally)
        : graph_(graph),
          max_length_(max_length),
          options_(options),
          steps_(steps),
          tally_(tally),
          on_path_(graph.num_vertices(), 0),
          labels_(num_labels, 0) {}

    void walk_from(VertexId root) {
        root_ = root;
        on_path_[root] = 1;
        extend(root, 0);
        on_path_[root] = 0;
    }

private:
    void record(VertexId end, std::size_t length) {
        auto& entry = tally_.at(root_, end, length);
        ++entry.count;
        if (!options_.tally_labels) return;
        ++entry.by_labelling[labels_];
        ++entry.by_class[class_value(labels_)];
    }

    void extend(VertexId tip, std::size_t length) {
        if (++local_steps_ % 4096 == 0) {
            if (steps_.fetch_add(4096) + 4096 > options_.node_budget) {
                throw OracleBudgetExceeded("oracle node budget of " + std::to_string(options_.node_budget) +
                                           " exceeded");
            }
        }
        const auto next = length + 1;
        if (next > max_length_) return;
        for (auto w : graph_.neighbors(tip)) {
            if (w == root_) {
                record(root_, next);  // closes a cycle; length 2 is u -> w -> u
                continue;
            }
            if (on_path_[w]) continue;
            record(w, next);
            // w becomes an internal (or non-root) vertex of every extension.
            on_path_[w] = 1;
            ++labels_[graph_.label(w)];
            extend(w, next);
            --labels_[graph_.label(w)];
            on_path_[w] = 0;
        }
    }

    const Graph& graph_;
    std::size_t max_length_;
    const OracleOptions& options_;
    std::atomic<std::uint64_t>& steps_;
    OracleTally& tally_;
    std::vector<char> on_path_;
    Labelling labels_;
    VertexId root_ = 0;
    std::uint64_t local_steps_ = 0;
};

}  // namespace

std::uint64_t OracleTally::geometric_cycles(std::size_t length) const {
    if (length < 3) throw std::invalid_argument("geometric cycles need length >= 3");
    std::uint64_t rooted = 0;
    for (VertexId u = 0; u < n_; ++u) rooted += count(u, u, length);
    return rooted / (2 * length);
}

OracleTally dfs_enumerate(const Graph& graph, std::size_t max_length, const OracleOptions& options) {
    if (max_length == 0) throw std::invalid_argument("max_length must be at least 1");
    const auto num_labels = options.num_labels ? options.num_labels : std::max<std::size_t>(graph.label_bound(), 1);
    if (graph.label_bound() > num_labels) throw std::invalid_argument("graph labels exceed the oracle alphabet");
    OracleTally tally(graph.num_vertices(), max_length, num_labels, options.tally_labels);
    std::atomic<std::uint64_t> steps{0};
    const auto n = static_cast<std::int64_t>(graph.num_vertices());

    if (options.threads <= 1) {
        PathWalker walker(graph, max_length, options, num_labels, steps, tally);
        for (std::int64_t u = 0; u < n; ++u) walker.walk_from(static_cast<VertexId>(u));
        return tally;
    }

    // Each root writes only its own rows of the tally.
    std::atomic<bool> exceeded{false};
#pragma omp parallel num_threads(options.threads)
    {
        PathWalker walker(graph, max_length, options, num_labels, steps, tally);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t u = 0; u < n; ++u) {
            if (exceeded.load()) continue;
            try {
                walker.walk_from(static_cast<VertexId>(u));
            } catch (const OracleBudgetExceeded&) {
                exceeded = true;
            }
        }
    }
    if (exceeded) {
        throw OracleBudgetExceeded("oracle node budget of " + std::to_string(options.node_budget) + " exceeded");
    }
    return tally;
}

}  // namespace apc
