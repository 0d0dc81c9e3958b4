#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apc/bigint.hpp"
#include "apc/count.hpp"
#include "apc/graph.hpp"

namespace apc {

/// c_i = number of coded vertices carrying label i.
using Labelling = std::vector<std::uint32_t>;
/// sum_i i * c_i: the equivalence class a labelling falls into under the power scheme.
using ClassValue = std::uint32_t;

ClassValue class_value(const Labelling& c);
/// "c1-c2-...-ck"
std::string to_string(const Labelling& c);
Labelling parse_labelling(const std::string& text);

/// Every labelling of k labels with total length `length`, in lexicographic order.
std::vector<Labelling> labellings_of_length(std::size_t k, std::size_t length);

class CodingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SchemeKind { exact, power };

/// Numeric label codes. The exact scheme uses pairwise irrational-ratio reals
/// so that a coded value determines the labelling multiset; the power scheme
/// uses s_i = a^i so a coded value is a base-a numeral over class values.
class CodeScheme {
public:
    /// Defaults: 1, e, pi, then e^sqrt(2), e^sqrt(3), e^sqrt(5), ... for k > 3.
    static CodeScheme exact(std::size_t k);
    static CodeScheme exact(std::vector<double> codes);
    static CodeScheme power(std::size_t k, std::uint64_t base);

    SchemeKind kind() const noexcept { return kind_; }
    std::size_t k() const noexcept { return k_; }
    std::uint64_t base() const noexcept { return base_; }
    const std::vector<double>& codes() const noexcept { return codes_; }

    double real_code(LabelId label) const;
    BigInt integer_code(LabelId label) const;
    /// prod_i s_i^{c_i} for an exact-scheme labelling.
    double labelling_code(const Labelling& c) const;

    std::string describe() const;

private:
    SchemeKind kind_ = SchemeKind::power;
    std::size_t k_ = 0;
    std::uint64_t base_ = 0;
    std::vector<double> codes_;
};

/// Vertex weights s_{label(v)} for forward encoding. Power pairs with the
/// exact_int/bigint_coded domains (T = BigInt) or float64 (T = double); the
/// exact scheme pairs with float64 only. Throws CodingError on a mismatch.
template <class T>
WeightAssignment<T> make_weight_assignment(const LabelAlphabet& alphabet, const CodeScheme& scheme,
                                           NumericDomain domain);
template <class T>
WeightAssignment<T> make_weight_assignment(std::size_t k, const CodeScheme& scheme, NumericDomain domain);

/// Divides out s_{start_label}, leaving the code of the vertices after the
/// first one (internal vertices of a path, non-root vertices of a cycle).
BigInt strip_start_code(const BigInt& value, LabelId start_label, const CodeScheme& scheme);
double strip_start_code(double value, LabelId start_label, const CodeScheme& scheme);

enum class DecodeStatus { ok, ambiguous, no_solution, budget_exceeded };
std::string_view to_string(DecodeStatus status);

struct DecodedCounts {
    DecodeStatus status = DecodeStatus::ok;
    std::map<Labelling, std::uint64_t> by_labelling;  // exact scheme only
    std::map<ClassValue, std::uint64_t> by_class;
    double residual = 0.0;
    std::uint64_t nodes = 0;  // search nodes expanded by decode_exact
};

/// Base-a digits of `value` as class multiplicities. Throws CodingError for a
/// negative value or a nonzero digit above max_class.
DecodedCounts decode_power(const BigInt& value, std::uint64_t base, ClassValue max_class);

/// Float64 variant: rounds to the nearest integer first. Throws CodingError
/// when |value - round(value)| exceeds tolerance * max(1, |value|), or when
/// the value lies beyond the 53-bit exactly representable range.
DecodedCounts decode_power(double value, std::uint64_t base, ClassValue max_class, double tolerance = 1e-6);

struct ExactDecodeOptions {
    /// Relative: a solution must satisfy |sum - value| <= tolerance * max(1, |value|).
    double tolerance = 1e-6;
    /// Known number of paths behind the value (from an unweighted count).
    /// Bounds the search from both sides when present.
    std::optional<std::uint64_t> total_count;
    std::uint64_t node_budget = 20'000'000;
    /// Keep searching after the first solution to detect coding collisions.
    bool detect_ambiguity = true;
};

/// Solves value = sum_c m(c) prod_i s_i^{c_i} over labellings with
/// l(c) = coded_length by branch and bound: candidate codes in descending
/// order, each multiplicity tried from floor(remaining / code) down. The first
/// solution in that order is returned; a second one marks the result ambiguous.
DecodedCounts decode_exact(double value, const CodeScheme& scheme, std::size_t coded_length,
                           const ExactDecodeOptions& options = {});

struct PrecisionReport {
    double code_bits = 0.0;  // (k-1) * coded_length * log2(a)
    bool fits = true;
    std::uint64_t max_per_class = 0;  // a - 1
    bool always_feasible = false;     // BigInt domains
};

/// Float64 coded values carry 52 bits: feasible iff (k-1) * coded_length * log2(a) <= 52.
PrecisionReport precision_budget(std::size_t k, std::size_t coded_length, std::uint64_t base,
                                 NumericDomain domain = NumericDomain::float64);

/// Largest power of two a (capped at 2^20) with a^((k-1) * coded_length + 1)
/// <= 2^53, so coded values with any per-class count below a stay exact;
/// nullopt when even a = 2 does not fit. BigInt domains default to 64.
std::optional<std::uint64_t> default_power_base(std::size_t k, std::size_t coded_length, NumericDomain domain);

}  // namespace apc
