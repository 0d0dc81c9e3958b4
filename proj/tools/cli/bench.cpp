#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "apc/count.hpp"
#include "apc/generators.hpp"
#include "apc/label_coding.hpp"
#include "apc/subgraph_enum.hpp"

namespace apc::bench {
namespace {

using Clock = std::chrono::steady_clock;

// Runs of half a second or more are timed once; shorter ones get a warm-up
// and the fastest of at least three repetitions.
template <class Fn>
double fastest_run(Fn&& fn, double min_seconds) {
    const auto first = Clock::now();
    fn();
    const double once = std::chrono::duration<double>(Clock::now() - first).count();
    if (once >= std::max(0.5, min_seconds)) return once;
    double best = std::numeric_limits<double>::infinity();
    double spent = 0.0;
    for (int runs = 0; runs < 3 || spent < min_seconds; ++runs) {
        const auto start = Clock::now();
        fn();
        const double s = std::chrono::duration<double>(Clock::now() - start).count();
        best = std::min(best, s);
        spent += s;
    }
    return best;
}

std::uint64_t subgraph_count(const Graph& g, std::size_t max_size) {
    return enumerate_connected_induced_subgraphs(g, std::min(max_size, g.num_vertices()),
                                                 [](const InducedSubgraph&) {})
        .visited;
}

ScalingResult finish(std::vector<TimingPoint> points) {
    ScalingResult r;
    r.points = std::move(points);
    r.loglog_slope = loglog_slope(r.points);
    for (std::size_t i = 1; i < r.points.size(); ++i) r.ratios.push_back(r.points[i].seconds / r.points[i - 1].seconds);
    r.median_ratio = r.ratios.empty() ? 0.0 : median(r.ratios);
    return r;
}

std::string fmt(double x) {
    std::ostringstream out;
    out << std::setprecision(4) << x;
    return out.str();
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double loglog_slope(const std::vector<TimingPoint>& points) {
    if (points.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : points) {
        const double x = std::log(p.x);
        const double y = std::log(p.seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingResult time_vs_size(const std::vector<std::size_t>& sizes, double mean_degree, std::size_t max_length,
                           std::size_t vertex_budget, const TimingOptions& options) {
    GraphRng rng(options.seed);
    CountOptions count_options;
    count_options.threads = options.threads;
    std::vector<TimingPoint> points;
    for (auto n : sizes) {
        TimingPoint p;
        p.x = static_cast<double>(n);
        const auto graphs = std::max<std::size_t>(1, vertex_budget / n);
        for (std::size_t i = 0; i < graphs; ++i) {
            const auto g = erdos_renyi_mean_degree(n, mean_degree, 1, rng);
            p.seconds += fastest_run(
                [&] { static_cast<void>(count_all(g, WeightAssignment<BigInt>{}, max_length, count_options)); },
                options.min_seconds);
            p.subgraphs += subgraph_count(g, max_length + 1);
        }
        p.seconds /= static_cast<double>(graphs);
        p.subgraphs /= graphs;
        points.push_back(p);
    }
    return finish(std::move(points));
}

ScalingResult time_vs_length(std::size_t n, const std::vector<std::size_t>& lengths, const TimingOptions& options) {
    GraphRng rng(options.seed);
    const auto g = random_molecule(n, n / 10, 1, rng);
    CountOptions count_options;
    count_options.threads = options.threads;
    std::vector<TimingPoint> points;
    for (auto l : lengths) {
        TimingPoint p;
        p.x = static_cast<double>(l);
        p.seconds = fastest_run(
            [&] { static_cast<void>(count_all(g, WeightAssignment<BigInt>{}, l, count_options)); },
            options.min_seconds);
        p.subgraphs = subgraph_count(g, l + 1);
        points.push_back(p);
    }
    return finish(std::move(points));
}

std::vector<DecodeTiming> time_exact_decode(std::size_t max_coded_length, std::size_t samples, std::size_t paths,
                                            std::uint64_t seed) {
    GraphRng rng(seed);
    const auto scheme = CodeScheme::exact(3);
    std::vector<DecodeTiming> out;
    for (std::size_t len = 1; len <= max_coded_length; ++len) {
        const auto candidates = labellings_of_length(3, len);
        DecodeTiming t;
        t.coded_length = len;
        t.candidates = candidates.size();
        t.samples = samples;
        double nodes = 0.0;
        const auto start = Clock::now();
        for (std::size_t s = 0; s < samples; ++s) {
            double value = 0.0;
            for (std::size_t p = 0; p < paths; ++p) value += scheme.labelling_code(candidates[rng.below(candidates.size())]);
            ExactDecodeOptions o;
            o.total_count = paths;
            const auto d = decode_exact(value, scheme, len, o);
            nodes += static_cast<double>(d.nodes);
            if (d.status != DecodeStatus::ok) ++t.ambiguous;
        }
        t.seconds = std::chrono::duration<double>(Clock::now() - start).count() / static_cast<double>(samples);
        t.mean_nodes = nodes / static_cast<double>(samples);
        out.push_back(t);
    }
    return out;
}

std::vector<ParallelTiming> time_parallel(std::size_t n, std::size_t max_length, int threads,
                                          const TimingOptions& options) {
    GraphRng rng(options.seed);
    const auto g = erdos_renyi_mean_degree(n, 4.0, 1, rng);
    const WeightAssignment<BigInt> w;
    CountOptions one;
    CountOptions many;
    many.threads = threads;
    return {
        {"serial_reference", 1,
         fastest_run([&] { static_cast<void>(count_all_serial(g, w, max_length)); }, options.min_seconds)},
        {"kernel", 1, fastest_run([&] { static_cast<void>(count_all(g, w, max_length, one)); }, options.min_seconds)},
        {"kernel", threads,
         fastest_run([&] { static_cast<void>(count_all(g, w, max_length, many)); }, options.min_seconds)},
    };
}

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_x, bool log_y) {
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 55;
    const auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    const auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
    const auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
        << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n"
        << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (T + H - B) / 2 << ")\">" << y_label << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0;
        const double fy = y0 + (y1 - y0) * i / 4.0;
        const double vx = log_x ? std::pow(10.0, fx) : fx;
        const double vy = log_y ? std::pow(10.0, fy) : fy;
        svg << "<text x=\"" << px(vx) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << fmt(vx)
            << "</text>\n"
            << "<text x=\"" << L - 6 << "\" y=\"" << py(vy) + 4 << "\" text-anchor=\"end\">" << fmt(vy) << "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = colours[s % 4];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) svg << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
        svg << "\"/>\n";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            svg << "<circle cx=\"" << px(series[s].x[i]) << "\" cy=\"" << py(series[s].y[i]) << "\" r=\"3\" fill=\""
                << colour << "\"/>\n";
        svg << "<text x=\"" << L + 10 << "\" y=\"" << T + 14 * (s + 1) << "\" fill=\"" << colour << "\">"
            << series[s].name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace apc::bench
