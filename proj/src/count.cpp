#include "apc/count.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <omp.h>

#include "apc/detail/reverse_search.hpp"

namespace apc {
namespace {

void check_length(std::size_t max_length) {
    if (max_length == 0) throw std::invalid_argument("max_length must be at least 1");
    if (max_length + 1 > kMaxSubgraphSize) {
        throw std::invalid_argument("max_length must be at most " + std::to_string(kMaxSubgraphSize - 1));
    }
}

template <class T>
T from_bigint(const BigInt& x) {
    if constexpr (std::is_same_v<T, double>) {
        return x.get_d();
    } else {
        return x;
    }
}

// Unevaluated sum hi + lo carrying about 106 significant bits. Local walk
// values of coded runs outgrow 53 bits long before the final counts do.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    DoubleDouble() = default;
    DoubleDouble(double x) : hi(x) {}  // NOLINT(google-explicit-constructor)
    DoubleDouble(double h, double l) : hi(h), lo(l) {}

    static DoubleDouble from(const BigInt& x) {
        const double h = x.get_d();
        const BigInt rest = x - BigInt(h);
        return {h, rest.get_d()};
    }

    static DoubleDouble normalized(double s, double e) {
        const double t = s + e;
        return {t, e - (t - s)};
    }

    friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
        const double s = a.hi + b.hi;
        const double bb = s - a.hi;
        double e = (a.hi - (s - bb)) + (b.hi - bb);
        e += a.lo + b.lo;
        return normalized(s, e);
    }
    friend DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }
    friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
        const double p = a.hi * b.hi;
        double e = std::fma(a.hi, b.hi, -p);
        e += a.hi * b.lo + a.lo * b.hi;
        return normalized(p, e);
    }
    DoubleDouble& operator+=(const DoubleDouble& b) { return *this = *this + b; }
    friend bool operator==(const DoubleDouble& a, double b) { return a.hi == b && a.lo == 0.0; }
};

class DoubleDoubleAccumulator {
public:
    explicit DoubleDoubleAccumulator(std::size_t size = 0) : values_(size) {}

    void add(std::size_t at, const DoubleDouble& x) { values_[at] += x; }

    void merge(const DoubleDoubleAccumulator& other) {
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    }

    void finalize(std::span<double> out) const {
        for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i].hi + values_[i].lo;
    }

private:
    std::vector<DoubleDouble> values_;
};

// C(b, r) for b <= max_b and r <= max_r, in every representation the kernels use.
class BinomialCache {
public:
    BinomialCache(std::size_t max_b, std::size_t max_r) : width_(max_r + 1) {
        big_.resize((max_b + 1) * width_);
        wide_.resize(big_.size());
        small_.resize(big_.size());
        fits_.resize(big_.size());
        real_.resize(big_.size());
        for (std::size_t b = 0; b <= max_b; ++b) {
            for (std::size_t r = 0; r <= max_r; ++r) {
                auto& c = big_[b * width_ + r];
                if (r == 0) {
                    c = 1;
                } else if (b == 0) {
                    c = 0;
                } else {
                    c = big_[(b - 1) * width_ + r - 1] + big_[(b - 1) * width_ + r];
                }
                const auto at = b * width_ + r;
                fits_[at] = fits_int128(c);
                small_[at] = fits_[at] ? to_int128(c) : 0;
                real_[at] = c.get_d();
                wide_[at] = DoubleDouble::from(c);
            }
        }
    }

    std::size_t index(std::size_t b, std::size_t r) const { return b * width_ + r; }
    const BigInt& big(std::size_t at) const { return big_[at]; }
    int128 small(std::size_t at) const { return small_[at]; }
    bool fits(std::size_t at) const { return fits_[at] != 0; }
    double real(std::size_t at) const { return real_[at]; }
    const DoubleDouble& wide(std::size_t at) const { return wide_[at]; }

private:
    std::size_t width_;
    std::vector<BigInt> big_;
    std::vector<int128> small_;
    std::vector<char> fits_;
    std::vector<double> real_;
    std::vector<DoubleDouble> wide_;
};

// Dense 128-bit accumulator; entries that overflow spill into BigInt.
class ExactAccumulator {
public:
    explicit ExactAccumulator(std::size_t size = 0) : fast_(size, 0) {}

    void add(std::size_t at, int128 x) {
        int128 sum = 0;
        if (__builtin_add_overflow(fast_[at], x, &sum)) {
            auto& s = spill_[at];
            s += to_bigint(fast_[at]);
            s += to_bigint(x);
            fast_[at] = 0;
        } else {
            fast_[at] = sum;
        }
    }
    void add_big(std::size_t at, const BigInt& x) { spill_[at] += x; }
    void sub_big(std::size_t at, const BigInt& x) { spill_[at] -= x; }

    void merge(const ExactAccumulator& other) {
        for (std::size_t i = 0; i < fast_.size(); ++i) {
            if (other.fast_[i] != 0) add(i, other.fast_[i]);
        }
        for (const auto& [at, x] : other.spill_) spill_[at] += x;
    }

    void finalize(std::span<BigInt> out) const {
        for (std::size_t i = 0; i < fast_.size(); ++i) {
            if (fast_[i] != 0) out[i] = to_bigint(fast_[i]);
        }
        for (const auto& [at, x] : spill_) out[at] += x;
    }

private:
    std::vector<int128> fast_;
    std::unordered_map<std::size_t, BigInt> spill_;
};

// Neumaier-compensated double accumulator.
class FloatAccumulator {
public:
    explicit FloatAccumulator(std::size_t size = 0) : sum_(size, 0.0), comp_(size, 0.0) {}

    void add(std::size_t at, double x) {
        const double s = sum_[at];
        const double t = s + x;
        comp_[at] += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        sum_[at] = t;
    }

    void merge(const FloatAccumulator& other) {
        for (std::size_t i = 0; i < sum_.size(); ++i) {
            if (other.sum_[i] != 0.0) add(i, other.sum_[i]);
            if (other.comp_[i] != 0.0) add(i, other.comp_[i]);
        }
    }

    void finalize(std::span<double> out) const {
        for (std::size_t i = 0; i < sum_.size(); ++i) out[i] = sum_[i] + comp_[i];
    }

private:
    std::vector<double> sum_;
    std::vector<double> comp_;
};

template <class Local, class Acc>
class CountKernel {
public:
    CountKernel(const Graph& graph, std::span<const Local> vertex_weights, bool unit, const BinomialCache& binomials,
                std::size_t max_length, const CountOptions& options, Acc& acc)
        : vertex_weights_(vertex_weights),
          unit_(unit),
          binomials_(binomials),
          n_(graph.num_vertices()),
          max_length_(max_length),
          cycles_(options.include_cycles),
          corrupt_(options.corrupt_coefficient),
          acc_(acc) {
        const auto cap = std::min(max_length + 1, std::max<std::size_t>(n_, 1));
        p_.resize(cap * cap);
        r_.resize(cap * cap);
        w_.resize(cap);
    }

    void operator()(const InducedSubgraph& h) {
        const auto m = h.size();
        if (m < 2) return;  // singletons carry no path and no cycle
        const auto b = h.boundary_size;
        const auto first = m - 1;
        const auto last = std::min(max_length_, cycles_ ? m + b : m - 1 + b);
        if (first > last) return;

        for (std::size_t i = 0; i < m; ++i) w_[i] = vertex_weights_[h.vertices[i]];
        for (std::size_t i = 0; i < m * m; ++i) p_[i] = 0;
        for (std::size_t i = 0; i < m; ++i) {
            for (auto mask = h.local_adjacency[i]; mask != 0; mask &= mask - 1) {
                p_[i * m + static_cast<std::size_t>(std::countr_zero(mask))] = w_[i];
            }
        }
        for (std::size_t l = 1; l <= last; ++l) {
            if (l >= first) accumulate(h, m, b, l);
            if (l < last) multiply(h, m);
        }
    }

private:
    // p <- p * A, where A(k, j) = w_k for adjacent k, j.
    void multiply(const InducedSubgraph& h, std::size_t m) {
        for (std::size_t i = 0; i < m; ++i) {
            const Local* row = &p_[i * m];
            for (std::size_t j = 0; j < m; ++j) {
                Local& s = r_[i * m + j];
                s = 0;
                for (auto mask = h.local_adjacency[j]; mask != 0; mask &= mask - 1) {
                    const auto k = static_cast<std::size_t>(std::countr_zero(mask));
                    if (unit_) {
                        s += row[k];
                    } else {
                        s += row[k] * w_[k];
                    }
                }
            }
        }
        std::swap(p_, r_);
    }

    void accumulate(const InducedSubgraph& h, std::size_t m, std::size_t b, std::size_t l) {
        const auto plane = (l - 1) * n_ * n_;
        const auto r_path = l + 1 - m;
        if (r_path <= b) {
            const auto boundary = corrupt_ && m == 2 ? b + 1 : b;
            const auto at = binomials_.index(boundary, r_path);
            const bool negative = (l + 1 + m) % 2 == 1;
            for (std::size_t i = 0; i < m; ++i) {
                const auto base = plane + static_cast<std::size_t>(h.vertices[i]) * n_;
                for (std::size_t j = 0; j < m; ++j) {
                    if (i == j) continue;
                    const Local& entry = p_[i * m + j];
                    if (entry == 0) continue;
                    contribute(base + h.vertices[j], at, negative, entry);
                }
            }
        }
        if (cycles_ && l >= m && l - m <= b) {
            const auto at = binomials_.index(b, l - m);
            const bool negative = (l + m) % 2 == 1;
            for (std::size_t i = 0; i < m; ++i) {
                const Local& entry = p_[i * m + i];
                if (entry == 0) continue;
                const auto v = static_cast<std::size_t>(h.vertices[i]);
                contribute(plane + v * n_ + v, at, negative, entry);
            }
        }
    }

    void contribute(std::size_t cell, std::size_t at, bool negative, const Local& entry) {
        if constexpr (std::is_same_v<Local, DoubleDouble>) {
            const auto& c = binomials_.wide(at);
            acc_.add(cell, (negative ? -c : c) * entry);
        } else if constexpr (std::is_same_v<Local, double>) {
            const double c = binomials_.real(at);
            acc_.add(cell, (negative ? -c : c) * entry);
        } else if constexpr (std::is_same_v<Local, BigInt>) {
            tmp_ = entry * binomials_.big(at);
            if (negative) {
                acc_.sub_big(cell, tmp_);
            } else {
                acc_.add_big(cell, tmp_);
            }
        } else {
            int128 product = 0;
            if (binomials_.fits(at) &&
                !__builtin_mul_overflow(binomials_.small(at), static_cast<int128>(entry), &product)) {
                acc_.add(cell, negative ? -product : product);
                return;
            }
            tmp_ = to_bigint(static_cast<int128>(entry)) * binomials_.big(at);
            if (negative) {
                acc_.sub_big(cell, tmp_);
            } else {
                acc_.add_big(cell, tmp_);
            }
        }
    }

    std::span<const Local> vertex_weights_;
    bool unit_;
    const BinomialCache& binomials_;
    std::size_t n_;
    std::size_t max_length_;
    bool cycles_;
    bool corrupt_;
    Acc& acc_;
    std::vector<Local> p_;
    std::vector<Local> r_;
    std::vector<Local> w_;
    BigInt tmp_;
};

template <class Local, class Acc>
Acc run_kernel(const Graph& graph, std::span<const Local> vertex_weights, bool unit, std::size_t max_length,
               const CountOptions& options) {
    const auto n = graph.num_vertices();
    const auto cells = n * n * max_length;
    const auto max_size = std::min(max_length + 1, n);
    const BinomialCache binomials(n + 1, max_length + 1);
    const int threads = std::max(1, options.threads);

    if (threads == 1) {
        Acc acc(cells);
        CountKernel<Local, Acc> kernel(graph, vertex_weights, unit, binomials, max_length, options, acc);
        detail::ReverseSearch<CountKernel<Local, Acc>> search(graph, max_size);
        for (VertexId root = 0; root < n; ++root) search.run_root(root, kernel);
        return acc;
    }

    std::vector<Acc> partial(static_cast<std::size_t>(threads));
    const auto roots = static_cast<std::int64_t>(n);
#pragma omp parallel num_threads(threads)
    {
        auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
        acc = Acc(cells);
        CountKernel<Local, Acc> kernel(graph, vertex_weights, unit, binomials, max_length, options, acc);
        detail::ReverseSearch<CountKernel<Local, Acc>> search(graph, max_size);
        // Static round-robin keeps the per-worker partition, and therefore the
        // floating-point summation order, fixed for a given thread count.
#pragma omp for schedule(static, 1)
        for (std::int64_t root = 0; root < roots; ++root) search.run_root(static_cast<VertexId>(root), kernel);
    }
    for (std::size_t t = 1; t < partial.size(); ++t) partial[0].merge(partial[t]);
    return std::move(partial[0]);
}

// Bit length of the largest possible entry of A_H^l, l <= max_length.
std::size_t walk_bound_bits(const Graph& graph, const WeightAssignment<BigInt>& weights, std::size_t max_length) {
    BigInt wmax = 1;
    for (const auto& w : weights.label_weights) wmax = std::max<BigInt>(wmax, abs(w));
    const auto m = std::min(max_length + 1, graph.num_vertices());
    BigInt base = wmax * static_cast<unsigned long>(std::max<std::size_t>(m, 2) - 1);
    BigInt bound;
    mpz_pow_ui(bound.get_mpz_t(), base.get_mpz_t(), max_length);
    return mpz_sizeinbase(bound.get_mpz_t(), 2);
}

template <class Local>
void count_exact(const Graph& graph, const WeightAssignment<BigInt>& weights, std::size_t max_length,
                 const CountOptions& options, CountTable<BigInt>& table) {
    std::vector<Local> vertex_weights(graph.num_vertices());
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
        const auto w = weights.weight(graph.label(v));
        if constexpr (std::is_same_v<Local, BigInt>) {
            vertex_weights[v] = w;
        } else {
            vertex_weights[v] = static_cast<Local>(to_int128(w));
        }
    }
    const auto acc = run_kernel<Local, ExactAccumulator>(graph, vertex_weights, weights.unweighted(), max_length,
                                                         options);
    acc.finalize(table.values());
}

}  // namespace

std::string_view to_string(NumericDomain domain) {
    switch (domain) {
        case NumericDomain::exact_int: return "exactint";
        case NumericDomain::float64: return "float";
        case NumericDomain::bigint_coded: return "bigint";
    }
    return "unknown";
}

template <class T>
CountTable<T>& CountTable<T>::operator+=(const CountTable& other) {
    if (other.n_ != n_ || other.max_length_ != max_length_) {
        throw std::invalid_argument("count tables have different shapes");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

BigInt binomial(std::uint64_t n, std::int64_t r) {
    if (r < 0 || static_cast<std::uint64_t>(r) > n) return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, static_cast<unsigned long>(r));
    return out;
}

template <class T>
std::vector<SquareMatrix<T>> local_matrix_powers(const Graph& graph, const InducedSubgraph& subgraph,
                                                 const WeightAssignment<T>& weights, std::size_t max_power) {
    if (max_power == 0) throw std::invalid_argument("max_power must be at least 1");
    const auto m = subgraph.size();
    SquareMatrix<T> a(m);
    for (std::size_t i = 0; i < m; ++i) {
        const T w = weights.weight(graph.label(subgraph.vertices[i]));
        for (std::size_t j = 0; j < m; ++j) {
            if ((subgraph.local_adjacency[i] >> j) & 1u) a(i, j) = w;
        }
    }
    std::vector<SquareMatrix<T>> powers;
    powers.reserve(max_power);
    powers.push_back(a);
    for (std::size_t l = 2; l <= max_power; ++l) powers.push_back(powers.back() * a);
    return powers;
}

template <>
CountTable<BigInt> count_all(const Graph& graph, const WeightAssignment<BigInt>& weights, std::size_t max_length,
                             const CountOptions& options) {
    check_length(max_length);
    const auto domain = weights.unweighted() ? NumericDomain::exact_int : NumericDomain::bigint_coded;
    CountTable<BigInt> table(graph.num_vertices(), max_length, domain);
    if (graph.num_vertices() == 0) return table;
    const auto bits = walk_bound_bits(graph, weights, max_length);
    if (bits <= 62) {
        count_exact<std::int64_t>(graph, weights, max_length, options, table);
    } else if (bits <= 125) {
        count_exact<int128>(graph, weights, max_length, options, table);
    } else {
        count_exact<BigInt>(graph, weights, max_length, options, table);
    }
    return table;
}

template <>
CountTable<double> count_all(const Graph& graph, const WeightAssignment<double>& weights, std::size_t max_length,
                             const CountOptions& options) {
    check_length(max_length);
    CountTable<double> table(graph.num_vertices(), max_length, NumericDomain::float64);
    if (graph.num_vertices() == 0) return table;
    if (options.float_evaluation == FloatEvaluation::plain) {
        std::vector<double> vertex_weights(graph.num_vertices());
        for (VertexId v = 0; v < graph.num_vertices(); ++v) vertex_weights[v] = weights.weight(graph.label(v));
        run_kernel<double, FloatAccumulator>(graph, vertex_weights, weights.unweighted(), max_length, options)
            .finalize(table.values());
    } else {
        std::vector<DoubleDouble> vertex_weights(graph.num_vertices());
        for (VertexId v = 0; v < graph.num_vertices(); ++v) vertex_weights[v] = weights.weight(graph.label(v));
        run_kernel<DoubleDouble, DoubleDoubleAccumulator>(graph, vertex_weights, weights.unweighted(), max_length,
                                                          options)
            .finalize(table.values());
    }
    return table;
}

template <class T>
CountTable<T> count_all_serial(const Graph& graph, const WeightAssignment<T>& weights, std::size_t max_length,
                               const CountOptions& options) {
    check_length(max_length);
    NumericDomain domain = NumericDomain::float64;
    if constexpr (is_exact_v<T>) {
        domain = weights.unweighted() ? NumericDomain::exact_int : NumericDomain::bigint_coded;
    }
    CountTable<T> table(graph.num_vertices(), max_length, domain);
    if (graph.num_vertices() == 0) return table;

    enumerate_connected_induced_subgraphs(
        graph, std::min(max_length + 1, graph.num_vertices()), [&](const InducedSubgraph& h) {
            const auto m = h.size();
            if (m < 2) return;
            const auto b = h.boundary_size;
            const auto last = std::min(max_length, options.include_cycles ? m + b : m - 1 + b);
            if (m - 1 > last) return;
            const auto powers = local_matrix_powers(graph, h, weights, last);
            for (std::size_t l = m - 1; l <= last; ++l) {
                const auto& a = powers[l - 1];
                const auto boundary = options.corrupt_coefficient && m == 2 ? b + 1 : b;
                BigInt c = binomial(boundary, static_cast<std::int64_t>(l + 1 - m));
                if ((l + 1 + m) % 2 == 1) c = -c;
                const T coef = from_bigint<T>(c);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < m; ++j)
                        if (i != j) table.at(h.vertices[i], h.vertices[j], l) += coef * a(i, j);
                if (!options.include_cycles || l < m) continue;
                BigInt cc = binomial(b, static_cast<std::int64_t>(l - m));
                if ((l + m) % 2 == 1) cc = -cc;
                const T cycle_coef = from_bigint<T>(cc);
                for (std::size_t i = 0; i < m; ++i) table.at(h.vertices[i], h.vertices[i], l) += cycle_coef * a(i, i);
            }
        });
    return table;
}

template <class T>
LengthTotals<T> length_totals(const CountTable<T>& table) {
    LengthTotals<T> totals{std::vector<T>(table.max_length(), T(0)), std::vector<T>(table.max_length(), T(0))};
    const auto n = table.num_vertices();
    for (std::size_t l = 1; l <= table.max_length(); ++l)
        for (VertexId u = 0; u < n; ++u)
            for (VertexId v = 0; v < n; ++v) (u == v ? totals.cycles : totals.paths)[l - 1] += table.at(u, v, l);
    return totals;
}

template class CountTable<BigInt>;
template class CountTable<double>;
template std::vector<SquareMatrix<BigInt>> local_matrix_powers(const Graph&, const InducedSubgraph&,
                                                               const WeightAssignment<BigInt>&, std::size_t);
template std::vector<SquareMatrix<double>> local_matrix_powers(const Graph&, const InducedSubgraph&,
                                                               const WeightAssignment<double>&, std::size_t);
template CountTable<BigInt> count_all_serial(const Graph&, const WeightAssignment<BigInt>&, std::size_t,
                                             const CountOptions&);
template CountTable<double> count_all_serial(const Graph&, const WeightAssignment<double>&, std::size_t,
                                             const CountOptions&);
template LengthTotals<BigInt> length_totals(const CountTable<BigInt>&);
template LengthTotals<double> length_totals(const CountTable<double>&);

}  // namespace apc
