#include "apc/label_coding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace apc {
namespace {

std::vector<std::size_t> small_primes(std::size_t count) {
    std::vector<std::size_t> primes;
    for (std::size_t p = 2; primes.size() < count; ++p) {
        if (std::all_of(primes.begin(), primes.end(), [p](std::size_t q) { return p % q != 0; })) {
            primes.push_back(p);
        }
    }
    return primes;
}

void append_labellings(std::size_t k, std::size_t remaining, Labelling& current, std::vector<Labelling>& out) {
    const auto i = current.size();
    if (i + 1 == k) {
        current.push_back(static_cast<std::uint32_t>(remaining));
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
        current.push_back(static_cast<std::uint32_t>(c));
        append_labellings(k, remaining - c, current, out);
        current.pop_back();
    }
}

double tolerance_for(double value, double relative) { return relative * std::max(1.0, std::abs(value)); }

class ExactSearch {
public:
    ExactSearch(std::vector<std::pair<Labelling, double>> candidates, double tol, const ExactDecodeOptions& options)
        : candidates_(std::move(candidates)), tol_(tol), options_(options), m_(candidates_.size(), 0) {}

    void run(double value) { search(0, value, options_.total_count); }

    std::size_t solutions() const noexcept { return solutions_; }
    bool exhausted_budget() const noexcept { return over_budget_; }
    std::uint64_t nodes() const noexcept { return nodes_; }
    const std::vector<std::uint64_t>& first() const noexcept { return first_; }
    double residual() const noexcept { return residual_; }
    const std::vector<std::pair<Labelling, double>>& candidates() const noexcept { return candidates_; }

private:
    bool done() const {
        return over_budget_ || solutions_ >= (options_.detect_ambiguity ? 2u : 1u);
    }

    void record(double residual) {
        if (solutions_++ == 0) {
            first_ = m_;
            residual_ = residual;
        }
    }

    void search(std::size_t idx, double remaining, std::optional<std::uint64_t> count) {
        if (done()) return;
        if (++nodes_ > options_.node_budget) {
            over_budget_ = true;
            return;
        }
        if (remaining < -tol_) return;
        const double code = candidates_[idx].second;
        const auto last = candidates_.size() - 1;

        if (idx == last) {
            double m = 0.0;
            if (count) {
                m = static_cast<double>(*count);
            } else {
                m = std::nearbyint(remaining / code);
                if (m < 0.0) return;
            }
            const double residual = std::abs(remaining - m * code);
            if (residual > tol_) return;
            m_[idx] = static_cast<std::uint64_t>(m);
            record(residual);
            m_[idx] = 0;
            return;
        }

        double hi = std::floor((remaining + tol_) / code);
        double lo = 0.0;
        if (count) {
            const auto total = static_cast<double>(*count);
            hi = std::min(hi, total);
            const double next = candidates_[idx + 1].second;
            const double smallest = candidates_[last].second;
            // The rest must fit between count * smallest and count * next code.
            if (code > next) lo = std::max(lo, std::ceil((remaining - total * next - tol_) / (code - next)));
            if (code > smallest) hi = std::min(hi, std::floor((remaining - total * smallest + tol_) / (code - smallest)));
        }
        for (double m = hi; m >= lo; m -= 1.0) {
            m_[idx] = static_cast<std::uint64_t>(m);
            std::optional<std::uint64_t> rest;
            if (count) rest = *count - m_[idx];
            search(idx + 1, remaining - m * code, rest);
            if (done()) break;
        }
        m_[idx] = 0;
    }

    std::vector<std::pair<Labelling, double>> candidates_;
    double tol_;
    const ExactDecodeOptions& options_;
    std::vector<std::uint64_t> m_;
    std::vector<std::uint64_t> first_;
    double residual_ = 0.0;
    std::size_t solutions_ = 0;
    std::uint64_t nodes_ = 0;
    bool over_budget_ = false;
};

}  // namespace

ClassValue class_value(const Labelling& c) {
    ClassValue v = 0;
    for (std::size_t i = 0; i < c.size(); ++i) v += static_cast<ClassValue>(i) * c[i];
    return v;
}

std::string to_string(const Labelling& c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(c[i]);
    }
    return out;
}

Labelling parse_labelling(const std::string& text) {
    Labelling c;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, '-')) {
        std::uint32_t x = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
            throw CodingError("malformed labelling '" + text + "'");
        }
        c.push_back(x);
    }
    if (c.empty()) throw CodingError("empty labelling");
    return c;
}

std::vector<Labelling> labellings_of_length(std::size_t k, std::size_t length) {
    std::vector<Labelling> out;
    if (k == 0) return out;
    Labelling current;
    append_labellings(k, length, current, out);
    return out;
}

CodeScheme CodeScheme::exact(std::size_t k) {
    if (k == 0) throw CodingError("code scheme needs at least one label");
    std::vector<double> codes{1.0, std::numbers::e, std::numbers::pi};
    codes.resize(std::min<std::size_t>(k, 3));
    for (auto p : small_primes(k > 3 ? k - 3 : 0)) codes.push_back(std::exp(std::sqrt(static_cast<double>(p))));
    return exact(std::move(codes));
}

CodeScheme CodeScheme::exact(std::vector<double> codes) {
    if (codes.empty()) throw CodingError("code scheme needs at least one label");
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (!(codes[i] > 0.0)) throw CodingError("exact codes must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (codes[i] == codes[j]) throw CodingError("exact codes must be pairwise distinct");
    }
    CodeScheme s;
    s.kind_ = SchemeKind::exact;
    s.k_ = codes.size();
    s.codes_ = std::move(codes);
    return s;
}

CodeScheme CodeScheme::power(std::size_t k, std::uint64_t base) {
    if (k == 0) throw CodingError("code scheme needs at least one label");
    if (base < 2) throw CodingError("power base must be at least 2");
    CodeScheme s;
    s.kind_ = SchemeKind::power;
    s.k_ = k;
    s.base_ = base;
    return s;
}

double CodeScheme::real_code(LabelId label) const {
    if (label >= k_) throw CodingError("label " + std::to_string(label) + " outside scheme alphabet");
    if (kind_ == SchemeKind::exact) return codes_[label];
    return std::pow(static_cast<double>(base_), static_cast<double>(label));
}

BigInt CodeScheme::integer_code(LabelId label) const {
    if (kind_ != SchemeKind::power) throw CodingError("exact-scheme codes are not integers");
    if (label >= k_) throw CodingError("label " + std::to_string(label) + " outside scheme alphabet");
    BigInt out;
    mpz_ui_pow_ui(out.get_mpz_t(), base_, label);
    return out;
}

double CodeScheme::labelling_code(const Labelling& c) const {
    double code = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) code *= std::pow(real_code(static_cast<LabelId>(i)), c[i]);
    return code;
}

std::string CodeScheme::describe() const {
    if (kind_ == SchemeKind::power) return "power(k=" + std::to_string(k_) + ",a=" + std::to_string(base_) + ")";
    return "exact(k=" + std::to_string(k_) + ")";
}

template <class T>
WeightAssignment<T> make_weight_assignment(std::size_t k, const CodeScheme& scheme, NumericDomain domain) {
    if (scheme.k() != k) {
        throw CodingError("scheme has " + std::to_string(scheme.k()) + " codes but alphabet has " +
                          std::to_string(k) + " labels");
    }
    WeightAssignment<T> weights;
    weights.label_weights.reserve(k);
    if constexpr (std::is_same_v<T, double>) {
        if (domain != NumericDomain::float64) throw CodingError("double weights need the float64 domain");
        for (LabelId l = 0; l < k; ++l) weights.label_weights.push_back(scheme.real_code(l));
    } else {
        if (domain == NumericDomain::float64) throw CodingError("BigInt weights cannot use the float64 domain");
        if (scheme.kind() != SchemeKind::power) {
            throw CodingError("the exact scheme requires the float64 domain");
        }
        for (LabelId l = 0; l < k; ++l) weights.label_weights.push_back(scheme.integer_code(l));
    }
    return weights;
}

template <class T>
WeightAssignment<T> make_weight_assignment(const LabelAlphabet& alphabet, const CodeScheme& scheme,
                                           NumericDomain domain) {
    return make_weight_assignment<T>(alphabet.k, scheme, domain);
}

template WeightAssignment<BigInt> make_weight_assignment(std::size_t, const CodeScheme&, NumericDomain);
template WeightAssignment<double> make_weight_assignment(std::size_t, const CodeScheme&, NumericDomain);
template WeightAssignment<BigInt> make_weight_assignment(const LabelAlphabet&, const CodeScheme&, NumericDomain);
template WeightAssignment<double> make_weight_assignment(const LabelAlphabet&, const CodeScheme&, NumericDomain);

BigInt strip_start_code(const BigInt& value, LabelId start_label, const CodeScheme& scheme) {
    const auto code = scheme.integer_code(start_label);
    BigInt quotient;
    BigInt remainder;
    mpz_tdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), value.get_mpz_t(), code.get_mpz_t());
    if (remainder != 0) {
        throw CodingError("coded value " + value.get_str() + " is not divisible by start code " + code.get_str());
    }
    return quotient;
}

double strip_start_code(double value, LabelId start_label, const CodeScheme& scheme) {
    return value / scheme.real_code(start_label);
}

std::string_view to_string(DecodeStatus status) {
    switch (status) {
        case DecodeStatus::ok: return "ok";
        case DecodeStatus::ambiguous: return "ambiguous";
        case DecodeStatus::no_solution: return "no_solution";
        case DecodeStatus::budget_exceeded: return "budget_exceeded";
    }
    return "unknown";
}

DecodedCounts decode_power(const BigInt& value, std::uint64_t base, ClassValue max_class) {
    if (base < 2) throw CodingError("power base must be at least 2");
    if (value < 0) throw CodingError("negative coded value " + value.get_str());
    DecodedCounts out;
    BigInt q = value;
    for (ClassValue c = 0; q != 0; ++c) {
        const auto digit = mpz_tdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), base);
        if (digit == 0) continue;
        if (c > max_class) {
            throw CodingError("nonzero digit at class " + std::to_string(c) + " beyond maximum class " +
                              std::to_string(max_class));
        }
        out.by_class[c] = digit;
    }
    return out;
}

DecodedCounts decode_power(double value, std::uint64_t base, ClassValue max_class, double tolerance) {
    const double rounded = std::nearbyint(value);
    const double residual = std::abs(value - rounded);
    if (residual > tolerance_for(value, tolerance)) {
        throw CodingError("coded value " + std::to_string(value) + " is not integral (residual " +
                          std::to_string(residual) + "); some class count reached the base");
    }
    if (std::abs(rounded) >= 0x1.0p53) {
        throw CodingError("coded value exceeds the 53-bit range of exactly representable integers");
    }
    auto out = decode_power(bigint_from_integral_double(rounded), base, max_class);
    out.residual = residual;
    return out;
}

DecodedCounts decode_exact(double value, const CodeScheme& scheme, std::size_t coded_length,
                           const ExactDecodeOptions& options) {
    if (scheme.kind() != SchemeKind::exact) throw CodingError("decode_exact needs an exact code scheme");
    const double tol = tolerance_for(value, options.tolerance);
    DecodedCounts out;
    if (std::abs(value) <= tol && (!options.total_count || *options.total_count == 0)) {
        out.residual = std::abs(value);
        return out;
    }

    std::vector<std::pair<Labelling, double>> candidates;
    for (auto& c : labellings_of_length(scheme.k(), coded_length)) {
        const double code = scheme.labelling_code(c);
        candidates.emplace_back(std::move(c), code);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    ExactSearch search(std::move(candidates), tol, options);
    search.run(value);
    out.nodes = search.nodes();
    if (search.solutions() == 0) {
        out.status = search.exhausted_budget() ? DecodeStatus::budget_exceeded : DecodeStatus::no_solution;
        out.residual = std::abs(value);
        return out;
    }
    out.residual = search.residual();
    if (search.exhausted_budget()) {
        out.status = DecodeStatus::budget_exceeded;
    } else if (search.solutions() > 1) {
        out.status = DecodeStatus::ambiguous;
    }
    const auto& first = search.first();
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i] == 0) continue;
        const auto& c = search.candidates()[i].first;
        out.by_labelling[c] += first[i];
        out.by_class[class_value(c)] += first[i];
    }
    return out;
}

PrecisionReport precision_budget(std::size_t k, std::size_t coded_length, std::uint64_t base, NumericDomain domain) {
    if (k == 0) throw CodingError("precision budget needs k >= 1");
    if (base < 2) throw CodingError("power base must be at least 2");
    PrecisionReport report;
    report.code_bits = static_cast<double>(k - 1) * static_cast<double>(coded_length) *
                       std::log2(static_cast<double>(base));
    report.max_per_class = base - 1;
    if (domain != NumericDomain::float64) {
        report.always_feasible = true;
        report.fits = true;
    } else {
        report.fits = report.code_bits <= 52.0;
    }
    return report;
}

std::optional<std::uint64_t> default_power_base(std::size_t k, std::size_t coded_length, NumericDomain domain) {
    if (domain != NumericDomain::float64) return 64;
    constexpr unsigned kMaxExponent = 20;
    // Values stay below a^(max_class + 1), so every digit up to a - 1 fits in
    // the 53-bit integer range.
    const auto digits = (k > 0 ? k - 1 : 0) * coded_length + 1;
    const auto exponent = 53 / digits;
    if (exponent < 1) return std::nullopt;
    return std::uint64_t{1} << std::min<std::size_t>(exponent, kMaxExponent);
}

}  // namespace apc
