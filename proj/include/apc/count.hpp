#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <type_traits>
#include <vector>

#include "apc/bigint.hpp"
#include "apc/graph.hpp"
#include "apc/subgraph_enum.hpp"

namespace apc {

/// Arithmetic used for counting. exact_int and bigint_coded both compute with
/// BigInt; the tag records whether values are plain counts or power codes.
enum class NumericDomain { exact_int, float64, bigint_coded };

std::string_view to_string(NumericDomain domain);

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, BigInt>;

/// Per-label vertex weight under forward encoding: every edge leaving v
/// carries s_{label(v)}. An empty weight list means unweighted counting.
template <class T>
struct WeightAssignment {
    std::vector<T> label_weights;

    bool unweighted() const noexcept { return label_weights.empty(); }
    T weight(LabelId label) const { return unweighted() ? T(1) : label_weights.at(label); }
};

/// P_uv(l) for all ordered pairs and 1 <= l <= max_length. Diagonal entries
/// hold rooted directed simple-cycle values P_uu(l). Absent paths read as 0.
template <class T>
class CountTable {
public:
    CountTable() = default;
    CountTable(std::size_t n, std::size_t max_length, NumericDomain domain)
        : n_(n), max_length_(max_length), domain_(domain), values_(n * n * max_length, T(0)) {}

    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t max_length() const noexcept { return max_length_; }
    NumericDomain domain() const noexcept { return domain_; }

    const T& at(VertexId u, VertexId v, std::size_t length) const { return values_[index(u, v, length)]; }
    T& at(VertexId u, VertexId v, std::size_t length) { return values_[index(u, v, length)]; }

    std::span<const T> values() const noexcept { return values_; }
    std::span<T> values() noexcept { return values_; }

    CountTable& operator+=(const CountTable& other);

private:
    std::size_t index(VertexId u, VertexId v, std::size_t length) const {
        if (u >= n_ || v >= n_ || length == 0 || length > max_length_) {
            throw std::out_of_range("count table index out of range");
        }
        return ((length - 1) * n_ + u) * n_ + v;
    }

    std::size_t n_ = 0;
    std::size_t max_length_ = 0;
    NumericDomain domain_ = NumericDomain::exact_int;
    std::vector<T> values_;
};

/// C(n, r); 0 when r < 0 or r > n.
BigInt binomial(std::uint64_t n, std::int64_t r);

/// Dense row-major square matrix used for the local subgraph powers.
template <class T>
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t size = 0) : size_(size), data_(size * size, T(0)) {}

    std::size_t size() const noexcept { return size_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix out(a.size_);
        for (std::size_t i = 0; i < a.size_; ++i)
            for (std::size_t k = 0; k < a.size_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < a.size_; ++j) out(i, j) += a(i, k) * b(k, j);
            }
        return out;
    }
    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t size_;
    std::vector<T> data_;
};

/// A_H^1 .. A_H^max_power for the forward-encoded adjacency of H:
/// entry (i, j) of A_H is s_{label(vertices[i])} when the two are adjacent.
template <class T>
std::vector<SquareMatrix<T>> local_matrix_powers(const Graph& graph, const InducedSubgraph& subgraph,
                                                 const WeightAssignment<T>& weights, std::size_t max_power);

/// How the Float64 domain evaluates local matrix powers and sums.
/// compensated carries double-double intermediates (about 106 bits) and
/// rounds once at the end; plain is straight IEEE double throughout.
enum class FloatEvaluation { compensated, plain };

struct CountOptions {
    bool include_cycles = true;
    FloatEvaluation float_evaluation = FloatEvaluation::compensated;
    /// 1 runs the kernel on the calling thread; larger values fan the
    /// enumeration roots out over OpenMP workers.
    int threads = 1;
    /// Fault-injection hook for validation: perturbs the binomial coefficient
    /// of two-vertex subgraphs so the engine disagrees with the oracle.
    bool corrupt_coefficient = false;
};

/// Evaluates, for u != v,
///   P_uv(l) = (-1)^(l+1) sum_H C(|N(H)|, l+1-|H|) (-1)^|H| (A_H^l)_uv
/// over connected induced H containing u and v with |H| <= l+1, and for u = v
///   P_uu(l) = (-1)^l sum_H C(|N(H)|, l-|H|) (-1)^|H| (A_H^l)_uu
/// over H containing u with |H| <= l. A single enumeration at size
/// max_length + 1 fills every length at once.
///
/// Exact domains use 64- or 128-bit arithmetic when the walk bound allows it
/// and fall back to BigInt otherwise; results are always exact. The float64
/// domain evaluates per options.float_evaluation and rounds to double once.
template <class T>
CountTable<T> count_all(const Graph& graph, const WeightAssignment<T>& weights, std::size_t max_length,
                        const CountOptions& options = {});

template <>
CountTable<BigInt> count_all(const Graph&, const WeightAssignment<BigInt>&, std::size_t, const CountOptions&);
template <>
CountTable<double> count_all(const Graph&, const WeightAssignment<double>&, std::size_t, const CountOptions&);

/// Straightforward single-threaded evaluation of the same formulas through the
/// public enumeration callback, local_matrix_powers and BigInt binomials.
/// Kept as the reference the optimized kernel is tested and benchmarked against.
template <class T>
CountTable<T> count_all_serial(const Graph& graph, const WeightAssignment<T>& weights, std::size_t max_length,
                               const CountOptions& options = {});

/// Sum over u != v of P_uv(l) and over u of P_uu(l), per length.
template <class T>
struct LengthTotals {
    std::vector<T> paths;
    std::vector<T> cycles;
};

template <class T>
LengthTotals<T> length_totals(const CountTable<T>& table);

}  // namespace apc
