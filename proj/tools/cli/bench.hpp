#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace apc::bench {

struct TimingPoint {
    double x = 0.0;
    double seconds = 0.0;
    std::uint64_t subgraphs = 0;
};

struct ScalingResult {
    std::vector<TimingPoint> points;
    /// Least-squares slope of log(seconds) against log(x).
    double loglog_slope = 0.0;
    /// seconds[i + 1] / seconds[i].
    std::vector<double> ratios;
    double median_ratio = 0.0;
};

struct TimingOptions {
    int threads = 1;
    /// Short measurements repeat until this much time has passed (at least
    /// three runs after a warm-up) and keep the fastest; runs of 0.5 s or
    /// more are timed once.
    double min_seconds = 0.2;
    std::uint64_t seed = 0;
};

/// Unweighted count_all on vertex_budget / n random graphs of mean degree
/// `mean_degree` for each n; a point holds the mean time and subgraph count
/// per graph. Small random graphs vary widely in subgraph count, so the
/// budget keeps every size equally well sampled.
ScalingResult time_vs_size(const std::vector<std::size_t>& sizes, double mean_degree, std::size_t max_length,
                           std::size_t vertex_budget, const TimingOptions& options);

/// Unweighted count_all on one molecule-like graph of n vertices for each L.
ScalingResult time_vs_length(std::size_t n, const std::vector<std::size_t>& lengths, const TimingOptions& options);

struct DecodeTiming {
    std::size_t coded_length = 0;
    std::size_t candidates = 0;
    double seconds = 0.0;  // mean per decode
    double mean_nodes = 0.0;
    std::size_t ambiguous = 0;
    std::size_t samples = 0;
};

/// decode_exact on random labelling mixtures (k = 3, `paths` paths per value).
std::vector<DecodeTiming> time_exact_decode(std::size_t max_coded_length, std::size_t samples, std::size_t paths,
                                            std::uint64_t seed);

struct ParallelTiming {
    std::string variant;
    int threads = 1;
    double seconds = 0.0;
};

/// Serial reference, optimized kernel on one thread and on `threads`.
std::vector<ParallelTiming> time_parallel(std::size_t n, std::size_t max_length, int threads,
                                          const TimingOptions& options);

double loglog_slope(const std::vector<TimingPoint>& points);
double median(std::vector<double> values);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal standalone SVG line chart.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_x, bool log_y);

}  // namespace apc::bench
