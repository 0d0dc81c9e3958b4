#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "apc/graph.hpp"
#include "apc/subgraph_enum.hpp"

namespace apc::detail {

// One worker's reverse-search state. The frontier bookkeeping (touch counts
// and boundary size) is updated incrementally on push/pop so every visited
// subgraph carries |N(H)| without a rescan.
template <class Visitor>
class ReverseSearch {
public:
    ReverseSearch(const Graph& graph, std::size_t max_size)
        : graph_(graph),
          max_size_(max_size),
          position_(graph.num_vertices(), -1),
          touch_(graph.num_vertices(), 0),
          seen_(graph.num_vertices(), 0),
          candidates_(max_size + 1) {
        members_.reserve(max_size);
        masks_.reserve(max_size);
    }

    // Explores the subtree rooted at the singleton {root}; returns the
    // number of subgraphs visited.
    std::uint64_t run_root(VertexId root, Visitor& visit) {
        visited_ = 0;
        push(root, 0);
        extend(visit);
        pop();
        return visited_;
    }

private:
    void push(VertexId w, std::uint32_t mask) {
        const auto bit = std::uint32_t{1} << members_.size();
        for (auto m = mask; m != 0; m &= m - 1) masks_[static_cast<std::size_t>(std::countr_zero(m))] |= bit;
        position_[w] = static_cast<int>(members_.size());
        members_.push_back(w);
        masks_.push_back(mask);
        if (members_.size() > 1) --boundary_;
        for (auto y : graph_.neighbors(w)) {
            if (position_[y] >= 0) continue;
            if (touch_[y]++ == 0) ++boundary_;
        }
    }

    void pop() {
        const auto w = members_.back();
        members_.pop_back();
        const auto mask = masks_.back();
        masks_.pop_back();
        const auto keep = ~(std::uint32_t{1} << members_.size());
        for (auto m = mask; m != 0; m &= m - 1) masks_[static_cast<std::size_t>(std::countr_zero(m))] &= keep;
        position_[w] = -1;
        for (auto y : graph_.neighbors(w)) {
            if (position_[y] >= 0) continue;
            if (--touch_[y] == 0) --boundary_;
        }
        if (!members_.empty()) ++boundary_;
    }

    // True iff the vertex set `keep` (local bits) is connected, where vertex
    // `extra` (local index d) has adjacency `extra_mask` and is not yet pushed.
    bool connected(std::uint32_t keep, std::size_t extra, std::uint32_t extra_mask) const {
        auto seen = keep & (~keep + 1);
        auto frontier = seen;
        while (frontier != 0) {
            const auto j = static_cast<std::size_t>(std::countr_zero(frontier));
            frontier &= frontier - 1;
            std::uint32_t adj = j == extra ? extra_mask
                                           : masks_[j] | (((extra_mask >> j) & 1u) << extra);
            adj &= keep & ~seen;
            seen |= adj;
            frontier |= adj;
        }
        return seen == keep;
    }

    // w is a valid child iff no member larger than w can be removed from
    // S + w without disconnecting it.
    bool is_child(VertexId w, std::uint32_t mask) const {
        const auto d = members_.size();
        const std::uint32_t full = d + 1 == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << (d + 1)) - 1;
        for (std::size_t i = 0; i < d; ++i) {
            if (members_[i] < w) continue;
            if (connected(full & ~(std::uint32_t{1} << i), d, mask)) return false;
        }
        return true;
    }

    void extend(Visitor& visit) {
        ++visited_;
        visit(InducedSubgraph{members_, masks_, boundary_});
        const auto depth = members_.size();
        if (depth == max_size_) return;

        auto& cand = candidates_[depth];
        cand.clear();
        ++stamp_;
        for (auto x : members_) {
            for (auto w : graph_.neighbors(x)) {
                if (position_[w] >= 0 || seen_[w] == stamp_) continue;
                seen_[w] = stamp_;
                cand.push_back(w);
            }
        }
        for (std::size_t c = 0; c < cand.size(); ++c) {
            const auto w = cand[c];
            std::uint32_t mask = 0;
            for (auto y : graph_.neighbors(w)) {
                if (position_[y] >= 0) mask |= std::uint32_t{1} << position_[y];
            }
            if (!is_child(w, mask)) continue;
            push(w, mask);
            extend(visit);
            pop();
        }
    }

    const Graph& graph_;
    std::size_t max_size_;
    std::vector<VertexId> members_;
    std::vector<std::uint32_t> masks_;
    std::vector<int> position_;
    std::vector<std::uint32_t> touch_;
    std::vector<std::uint64_t> seen_;
    std::uint64_t stamp_ = 0;
    std::vector<std::vector<VertexId>> candidates_;
    std::size_t boundary_ = 0;
    std::uint64_t visited_ = 0;
};

}  // namespace apc::detail
